#pragma once

namespace simulab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace simulab
