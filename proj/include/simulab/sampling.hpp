#pragma once

#include <cstdint>
#include <random>

#include "simulab/linalg.hpp"

namespace simulab {

using Engine = std::mt19937_64;

/// Identifies one reproducible random stream: the same (master_seed,
/// stream_index) pair always yields the same engine state, independent of
/// thread count or call order.
struct SeededStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  Engine engine() const;
  SeededStream substream(std::uint64_t index) const;
};

/// Haar-distributed unitary: Ginibre matrix, QR, and the phase fix
/// Q * diag(R_ii / |R_ii|).
Matrix haar_unitary(int d, Engine& rng);
Matrix haar_unitary(int d, const SeededStream& stream);

/// Uniformly distributed unit vector (first column of a Haar unitary).
Vector haar_state(int d, Engine& rng);
Vector haar_state(int d, const SeededStream& stream);

/// GUE-like random Hermitian matrix with unit-variance entries.
HermitianOp random_hermitian(int d, Engine& rng);

/// K_V = sqrt(d/n) * Pi_n * V, Pi_n keeping the first n coordinates.
Matrix covariant_kraus(const Matrix& v, int n);

}  // namespace simulab
