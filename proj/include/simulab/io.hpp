#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "simulab/linalg.hpp"
#include "simulab/measurements.hpp"
#include "simulab/peb.hpp"

namespace simulab::io {

using Json = nlohmann::json;

// Loader tolerance for positivity and completeness of POVMs read from disk.
inline constexpr double kLoadTol = 1e-8;

/// Complex matrices are row-major nested arrays of [re, im] pairs.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& where = "matrix");

/// { "dim": d, "settings": [ { "elements": [matrix, ...] }, ... ] }
Json assemblage_to_json(const Assemblage& a);
/// Rejects malformed or invalid assemblages, naming the first violation.
Assemblage assemblage_from_json(const Json& j, double tol = kLoadTol);

/// { "input_dim": d, "output_dim": D, "kraus": [matrix, ...] }
Json channel_to_json(const Channel& ch);
Channel channel_from_json(const Json& j);

/// { "bases": [matrix, ...] }, columns are basis vectors.
std::vector<Matrix> bases_from_json(const Json& j);

/// Reads a JSON document from a file, or from stdin when path is "-".
Json read_json(const std::string& path);

}  // namespace simulab::io
