#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "simulab/linalg.hpp"
#include "simulab/sampling.hpp"

namespace simulab {

inline constexpr int kDefaultThresholdSamples = 20000;
inline constexpr double kThresholdGapTol = 1e-6;
// Thresholds above this dimension are refused as a runtime guard.
inline constexpr int kMaxThresholdDim = 8;

/// Monte Carlo estimate of the white-noise threshold for compressing all
/// projective measurements in dimension d down to n.
struct ThresholdEstimate {
  int d = 0;
  int n = 0;
  int samples = 0;
  double x_mean = 0.0;
  double x_stderr = 0.0;
  double eta = 0.0;
  double eta_stderr = 0.0;
  std::pair<double, double> ci95{0.0, 0.0};
  std::uint64_t master_seed = 0;
  double max_gap = 0.0;  // largest certified duality gap over all samples
};

/// Stream used for the (d, n) cell, shared by the CLI commands so that a
/// table entry can be recomputed on its own.
inline SeededStream threshold_stream(std::uint64_t seed, int d, int n) {
  return SeededStream{seed, static_cast<std::uint64_t>(d) * 64 + static_cast<std::uint64_t>(n)};
}

/// x = (1/n) E_V max_{POVM on C^n} sum_a <a|V^+ Nt_a V|a>, one discrimination
/// SDP per Haar sample V (sample i uses stream.substream(i)). The subspace
/// is always the first n coordinates. n == d is answered exactly (x = 1).
ThresholdEstimate estimate_x(int d, int n, int samples, const SeededStream& stream,
                             double gap_tol = kThresholdGapTol, int jobs = 1);

double eta_from_x(int d, double x);

/// Known threshold for joint measurability of all noisy PVMs.
double eta_d_to_1(int d);

/// Cauchy-Schwarz upper bound on eta_{d->n}.
double upper_bound(int d, int n);

/// Lower bound on eta_{d->d-1} and the underlying bound on x.
double lower_bound_dminus1(int d);
double lower_bound_x_dminus1(int d);

/// Theta(d, n) = E_psi <psi|Pi_n|psi>^2 = n(n+1) / (d(d+1)).
double theta(int d, int n);

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  int samples = 0;
};

MonteCarloEstimate theta_mc(int d, int n, int samples, const SeededStream& stream, int jobs = 1);

/// Sample mean of K_V^+ N_{a|V} K_V with K_V = sqrt(d/n) Pi_n V and N_{a|V}
/// the optimal discrimination POVM, plus entrywise standard errors. x is the
/// same run's estimate of x, so the mean should approach
/// eta|a><a| + (1-eta) I/d with eta = eta_from_x(d, x).
struct CompressedPovmEstimate {
  int d = 0;
  int n = 0;
  int outcome = 0;
  int samples = 0;
  Matrix mean;
  RealMatrix stderr_re;
  RealMatrix stderr_im;
  double x = 0.0;
};

CompressedPovmEstimate estimate_compressed_povm(int d, int n, int outcome, int samples,
                                                const SeededStream& stream,
                                                double gap_tol = kThresholdGapTol, int jobs = 1);

}  // namespace simulab
