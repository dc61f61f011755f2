#pragma once

#include <cstddef>
#include <vector>

#include "simulab/conic.hpp"
#include "simulab/linalg.hpp"
#include "simulab/measurements.hpp"

namespace simulab {

using SdpStatus = conic::Status;

inline constexpr double kDefaultGapTol = 1e-8;
inline constexpr double kDefaultFeasTol = 1e-8;

/// Result of one of the semidefinite programs below, phrased as a
/// maximisation: dual_value >= primal_value - gap.
struct SdpReport {
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  SdpStatus status = SdpStatus::max_iterations;
  std::vector<HermitianOp> primal_variables;
  std::vector<HermitianOp> dual_certificate;

  bool optimal() const { return status == SdpStatus::optimal; }
};

/// Minimum-error discrimination: maximise sum_a Tr(rho_a N_a) over POVMs
/// {N_a} on C^n. States may be subnormalised and zero.
///
/// The returned POVM and dual operator Y (Y >= rho_a for all a) are both
/// exactly feasible up to rounding: the interior-point iterate is
/// renormalised (N_a -> T^-1/2 N_a T^-1/2 with T = sum N_a) and Y is shifted
/// by the largest violation. The gap is then Tr Y - sum_a Tr(rho_a N_a).
SdpReport solve_discrimination(const std::vector<HermitianOp>& states,
                               double gap_tol = kDefaultGapTol,
                               double feas_tol = kDefaultFeasTol);

/// Solution of the compression-visibility program
///
///   max eta  s.t.  sum_j K_j^+ Nt_{a|x,j} K_j = eta M_{a|x} + (1 - eta) Tr(M_{a|x}) I/d,
///                  sum_a Nt_{a|x,j} = alpha_j I_n,  Nt >= 0,
///
/// where j runs over the supplied Kraus operators (n x d).
struct VisibilitySolution {
  SdpReport report;  // primal_value is eta
  double eta = 0.0;
  std::vector<double> alpha;  // per Kraus operator
  // n_tilde[x][j][a]
  std::vector<std::vector<std::vector<HermitianOp>>> n_tilde;
  // Lagrange multiplier Y_{a|x} of the reproduction constraint for (x, a):
  // d eta = sum_{a,x} Tr(Y_{a|x} d(sum_j K_j^+ Nt_{a|x,j} K_j)) to first order.
  std::vector<std::vector<HermitianOp>> multipliers;
};

VisibilitySolution solve_visibility(const Assemblage& assemblage, const std::vector<Matrix>& kraus,
                                    double gap_tol = kDefaultGapTol,
                                    double feas_tol = kDefaultFeasTol);

/// Kraus family Pi_lambda U_mu^+ for each basis U_mu (columns are basis
/// vectors) and every size-n coordinate subset lambda; ordered basis-major.
std::vector<Matrix> projective_kraus_family(const std::vector<Matrix>& bases, int n);

inline constexpr std::size_t kDefaultParentCap = 10000;

/// White-noise robustness of joint measurability: max eta such that the
/// noisy assemblage has a parent POVM {G_lambda} over all deterministic
/// response functions lambda = (a_0, a_1, ...).
struct JointMeasurabilitySolution {
  SdpReport report;  // primal_variables are the G_lambda
  double eta = 0.0;
  std::vector<std::vector<int>> responses;  // responses[lambda][x] = a
};

JointMeasurabilitySolution solve_jm_robustness(const Assemblage& assemblage,
                                               double gap_tol = kDefaultGapTol,
                                               double feas_tol = kDefaultFeasTol,
                                               std::size_t parent_cap = kDefaultParentCap);

}  // namespace simulab
