#include "simulab/thresholds.hpp"

#include <cmath>
#include <string>

#include "simulab/errors.hpp"
#include "simulab/parallel.hpp"
#include "simulab/sdp.hpp"

namespace simulab {

namespace {

void check_cell(const char* who, int d, int n, int samples) {
  if (d < 2) throw DomainError(std::string(who) + ": need d >= 2");
  if (n < 1 || n > d) throw DomainError(std::string(who) + ": need 1 <= n <= d");
  if (samples < 2) throw DomainError(std::string(who) + ": need at least 2 samples");
  if (d > kMaxThresholdDim) {
    throw ResourceError(std::string(who) + ": d = " + std::to_string(d) + " exceeds the runtime guard d <= " +
                        std::to_string(kMaxThresholdDim));
  }
}

double harmonic(int d) {
  double h = 0.0;
  for (int k = 1; k <= d; ++k) h += 1.0 / k;
  return h;
}

// Compressed states rho_a = Pi_n V|a><a|V^+ Pi_n as n x n operators.
std::vector<HermitianOp> compressed_states(const Matrix& v, int n) {
  std::vector<HermitianOp> out;
  out.reserve(static_cast<std::size_t>(v.cols()));
  for (Eigen::Index a = 0; a < v.cols(); ++a) out.push_back(HermitianOp::projector(v.col(a).head(n)));
  return out;
}

struct Moments {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
};

// Index-ordered two-pass mean and standard error.
Moments moments(const std::vector<double>& values) {
  const double count = static_cast<double>(values.size());
  Moments m;
  for (double v : values) m.mean += v;
  m.mean /= count;
  double ss = 0.0;
  for (double v : values) ss += (v - m.mean) * (v - m.mean);
  m.stderr_of_mean = std::sqrt(ss / (count - 1.0) / count);
  return m;
}

SdpReport solve_sample(int d, int n, std::size_t i, const SeededStream& stream, double gap_tol,
                       Matrix* v_out = nullptr) {
  const SeededStream sub = stream.substream(i);
  Matrix v = haar_unitary(d, sub);
  SdpReport rep = solve_discrimination(compressed_states(v, n), gap_tol, kDefaultFeasTol);
  if (!rep.optimal()) {
    throw SolverError("discrimination SDP not certified for sample " + std::to_string(i) + " (seed " +
                      std::to_string(stream.master_seed) + ", stream " + std::to_string(stream.stream_index) +
                      ", gap " + std::to_string(rep.gap) + ", status " + conic::to_string(rep.status) +
                      "); replay with the same seed and sample index");
  }
  if (v_out) *v_out = std::move(v);
  return rep;
}

}  // namespace

ThresholdEstimate estimate_x(int d, int n, int samples, const SeededStream& stream, double gap_tol, int jobs) {
  check_cell("estimate_x", d, n, samples);
  ThresholdEstimate out;
  out.d = d;
  out.n = n;
  out.samples = samples;
  out.master_seed = stream.master_seed;

  if (n == d) {
    // Nt_a = V|a><a|V^+ saturates the bound sum_a <a|V^+ Nt_a V|a> <= d.
    out.x_mean = 1.0;
  } else {
    std::vector<double> values(static_cast<std::size_t>(samples));
    std::vector<double> gaps(values.size());
    parallel_for(values.size(), jobs, [&](std::size_t i) {
      const SdpReport rep = solve_sample(d, n, i, stream, gap_tol);
      values[i] = rep.primal_value / n;
      gaps[i] = rep.gap;
    });
    const Moments m = moments(values);
    out.x_mean = m.mean;
    out.x_stderr = m.stderr_of_mean;
    for (double g : gaps) out.max_gap = std::max(out.max_gap, g);
  }
  out.eta = eta_from_x(d, out.x_mean);
  out.eta_stderr = static_cast<double>(d) / (d - 1) * out.x_stderr;
  out.ci95 = {out.eta - 1.96 * out.eta_stderr, out.eta + 1.96 * out.eta_stderr};
  return out;
}

double eta_from_x(int d, double x) {
  if (d < 2) throw DomainError("eta_from_x: need d >= 2");
  return (d * x - 1.0) / (d - 1.0);
}

double eta_d_to_1(int d) {
  if (d < 2) throw DomainError("eta_d_to_1: need d >= 2");
  return (harmonic(d) - 1.0) / (d - 1.0);
}

double upper_bound(int d, int n) {
  if (d < 2) throw DomainError("upper_bound: need d >= 2");
  if (n < 1 || n > d) throw DomainError("upper_bound: need 1 <= n <= d");
  return (d * std::sqrt((n + 1.0) / (d + 1.0)) - 1.0) / (d - 1.0);
}

double lower_bound_x_dminus1(int d) {
  if (d < 2) throw DomainError("lower_bound_x_dminus1: need d >= 2");
  return (d - harmonic(d)) / (d - 1.0);
}

double lower_bound_dminus1(int d) {
  if (d < 2) throw DomainError("lower_bound_dminus1: need d >= 2");
  const double dd = d;
  return (dd * dd - dd * (1.0 + harmonic(d)) + 1.0) / ((dd - 1.0) * (dd - 1.0));
}

double theta(int d, int n) {
  if (d < 1) throw DomainError("theta: need d >= 1");
  if (n < 1 || n > d) throw DomainError("theta: need 1 <= n <= d");
  return static_cast<double>(n) * (n + 1) / (static_cast<double>(d) * (d + 1));
}

MonteCarloEstimate theta_mc(int d, int n, int samples, const SeededStream& stream, int jobs) {
  if (d < 1) throw DomainError("theta_mc: need d >= 1");
  if (n < 1 || n > d) throw DomainError("theta_mc: need 1 <= n <= d");
  if (samples < 2) throw DomainError("theta_mc: need at least 2 samples");
  std::vector<double> values(static_cast<std::size_t>(samples));
  parallel_for(values.size(), jobs, [&](std::size_t i) {
    const Vector psi = haar_state(d, stream.substream(i));
    const double w = psi.head(n).squaredNorm();
    values[i] = w * w;
  });
  const Moments m = moments(values);
  return MonteCarloEstimate{m.mean, m.stderr_of_mean, samples};
}

CompressedPovmEstimate estimate_compressed_povm(int d, int n, int outcome, int samples,
                                                const SeededStream& stream, double gap_tol, int jobs) {
  check_cell("estimate_compressed_povm", d, n, samples);
  if (outcome < 0 || outcome >= d) throw DomainError("estimate_compressed_povm: outcome out of range");

  const auto count = static_cast<std::size_t>(samples);
  std::vector<Matrix> ops(count);
  std::vector<double> xs(count);
  parallel_for(count, jobs, [&](std::size_t i) {
    Matrix v;
    SdpReport rep;
    if (n == d) {
      // The optimum is Nt_a = V|a><a|V^+; no solve needed.
      v = haar_unitary(d, stream.substream(i));
      for (int a = 0; a < d; ++a) rep.primal_variables.push_back(HermitianOp::projector(v.col(a)));
      rep.primal_value = d;
    } else {
      rep = solve_sample(d, n, i, stream, gap_tol, &v);
    }
    const Matrix k = covariant_kraus(v, n);
    ops[i] = k.adjoint() * rep.primal_variables[static_cast<std::size_t>(outcome)].matrix() * k;
    xs[i] = rep.primal_value / n;
  });

  CompressedPovmEstimate out;
  out.d = d;
  out.n = n;
  out.outcome = outcome;
  out.samples = samples;
  out.mean = Matrix::Zero(d, d);
  out.stderr_re = RealMatrix::Zero(d, d);
  out.stderr_im = RealMatrix::Zero(d, d);
  for (const auto& m : ops) out.mean += m;
  out.mean /= static_cast<double>(samples);
  RealMatrix ss_re = RealMatrix::Zero(d, d);
  RealMatrix ss_im = RealMatrix::Zero(d, d);
  for (const auto& m : ops) {
    const Matrix dev = m - out.mean;
    ss_re += dev.real().cwiseAbs2();
    ss_im += dev.imag().cwiseAbs2();
  }
  const double denom = (samples - 1.0) * samples;
  out.stderr_re = (ss_re / denom).cwiseSqrt();
  out.stderr_im = (ss_im / denom).cwiseSqrt();
  out.x = moments(xs).mean;
  return out;
}

}  // namespace simulab
