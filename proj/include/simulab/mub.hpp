#pragma once

#include <vector>

#include "simulab/linalg.hpp"
#include "simulab/measurements.hpp"

namespace simulab {

/// Mutually unbiased bases in prime dimension. Each basis is a unitary whose
/// columns are the basis vectors; bases[0] is the computational basis.
struct MubFamily {
  int dim = 0;
  std::vector<Matrix> bases;
};

bool is_prime(int d);

/// First m bases of the complete prime-dimension family.
///
/// For odd prime d basis k >= 1 has vectors with components
/// omega^((k-1) j^2 + a j) / sqrt(d), omega = exp(2 pi i / d); basis 1 is
/// therefore the Fourier basis. d = 2 uses the Pauli Z, X, Y eigenbases.
MubFamily mub_bases(int d, int m);

/// Each basis as a rank-1 PVM.
Assemblage to_assemblage(const MubFamily& family);

/// max over distinct bases and all vector pairs of | |<phi|psi>|^2 - 1/d |.
double unbiasedness_residual(const MubFamily& family);

}  // namespace simulab
