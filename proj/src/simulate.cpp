#include "simulab/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>

#include "simulab/errors.hpp"
#include "simulab/mub.hpp"
#include "simulab/parallel.hpp"

namespace simulab {

Instrument::Instrument(int input_dim, int output_dim, std::vector<Matrix> kraus, std::vector<int> group,
                       double tol)
    : input_dim_(input_dim), output_dim_(output_dim), kraus_(std::move(kraus)), group_(std::move(group)) {
  if (input_dim_ < 1 || output_dim_ < 1) throw StructuralError("Instrument: dimensions must be positive");
  if (kraus_.empty()) throw StructuralError("Instrument: no Kraus operators");
  for (std::size_t l = 0; l < kraus_.size(); ++l) {
    if (kraus_[l].rows() != output_dim_ || kraus_[l].cols() != input_dim_) {
      throw StructuralError("Instrument: Kraus operator " + std::to_string(l) + " is not " +
                            std::to_string(output_dim_) + "x" + std::to_string(input_dim_));
    }
  }
  if (!group_.empty() && group_.size() != kraus_.size()) {
    throw StructuralError("Instrument: group labels must match the Kraus operators");
  }
  const double res = normalization_residual();
  if (res > tol) {
    throw DomainError("Instrument: sum K^+ K differs from identity by " + std::to_string(res));
  }
}

double Instrument::normalization_residual() const {
  Matrix sum = Matrix::Zero(input_dim_, input_dim_);
  for (const auto& k : kraus_) sum += k.adjoint() * k;
  return max_abs(sum - Matrix::Identity(input_dim_, input_dim_));
}

namespace {

void check_model_shape(const SimulationModel& model) {
  const auto& inst = model.instrument;
  for (std::size_t x = 0; x < model.measurements.size(); ++x) {
    const auto& row = model.measurements[x];
    if (static_cast<int>(row.size()) != inst.size()) {
      throw StructuralError("SimulationModel: setting " + std::to_string(x) +
                            " needs one measurement per instrument outcome");
    }
    for (const auto& p : row) {
      if (p.dim() != inst.output_dim()) {
        throw StructuralError("SimulationModel: measurement dimension differs from instrument output");
      }
      if (p.outcomes() != row.front().outcomes()) {
        throw StructuralError("SimulationModel: outcome count varies across lambda for setting " +
                              std::to_string(x));
      }
    }
  }
}

}  // namespace

Assemblage simulated_assemblage(const SimulationModel& model) {
  check_model_shape(model);
  const int d = model.instrument.input_dim();
  std::vector<Povm> settings;
  for (const auto& row : model.measurements) {
    const int outcomes = row.empty() ? 0 : row.front().outcomes();
    std::vector<Matrix> acc(static_cast<std::size_t>(outcomes), Matrix::Zero(d, d));
    for (std::size_t l = 0; l < row.size(); ++l) {
      const Matrix& k = model.instrument.kraus()[l];
      for (int a = 0; a < outcomes; ++a) acc[static_cast<std::size_t>(a)] += k.adjoint() * row[l][a].matrix() * k;
    }
    std::vector<HermitianOp> el;
    for (const auto& m : acc) el.push_back(HermitianOp::hermitian_part(m));
    settings.emplace_back(d, std::move(el));
  }
  return Assemblage(d, std::move(settings));
}

double verify_simulation(const SimulationModel& model, const Assemblage& target) {
  if (target.dim() != model.instrument.input_dim()) {
    throw StructuralError("verify_simulation: target dimension differs from instrument input");
  }
  if (target.settings() != static_cast<int>(model.measurements.size())) {
    throw StructuralError("verify_simulation: setting count mismatch");
  }
  const Assemblage sim = simulated_assemblage(model);
  double worst = 0.0;
  for (int x = 0; x < target.settings(); ++x) {
    if (sim[x].outcomes() != target[x].outcomes()) {
      throw StructuralError("verify_simulation: outcome count mismatch in setting " + std::to_string(x));
    }
    for (int a = 0; a < target[x].outcomes(); ++a) {
      worst = std::max(worst, max_abs(sim[x][a].matrix() - target[x][a].matrix()));
    }
  }
  return worst;
}

double claim1_threshold(int d, int n, int m) {
  if (d < 2) throw DomainError("claim1_threshold: need d >= 2");
  if (n < 1 || n > d) throw DomainError("claim1_threshold: need 1 <= n <= d");
  if (m < 1) throw DomainError("claim1_threshold: need m >= 1");
  return 1.0 - (static_cast<double>(m - 1) / m) * (static_cast<double>(d - n) / (d - 1));
}

Claim1Model claim1_construction(int d, int n, int m) {
  const double eta = claim1_threshold(d, n, m);
  const MubFamily family = mub_bases(d, m);
  const Assemblage sharp = to_assemblage(family);
  const auto subsets = combinations(d, n);
  const double weight = std::sqrt(static_cast<double>(d) / (static_cast<double>(n) * m * subsets.size()));

  std::vector<Matrix> kraus;
  std::vector<int> group;
  std::vector<std::vector<Povm>> meas(static_cast<std::size_t>(m));
  for (int y = 0; y < m; ++y) {
    const Matrix& basis = family.bases[static_cast<std::size_t>(y)];
    for (const auto& subset : subsets) {
      kraus.push_back(weight * coordinate_projector(d, subset) * basis.adjoint());
      group.push_back(y);
      for (int x = 0; x < m; ++x) {
        meas[static_cast<std::size_t>(x)].push_back(restrict(conjugate(sharp[x], basis), subset));
      }
    }
  }
  Claim1Model out{SimulationModel{Instrument(d, n, std::move(kraus), std::move(group)), std::move(meas)},
                  eta, sharp};
  return out;
}

std::vector<HermitianOp> compression_gradient(const std::vector<Matrix>& bases, int n,
                                              const VisibilitySolution& solution) {
  const auto kraus = projective_kraus_family(bases, n);
  const std::size_t per_basis = kraus.size() / bases.size();
  const Complex i(0.0, 1.0);
  std::vector<HermitianOp> grads;
  for (std::size_t mu = 0; mu < bases.size(); ++mu) {
    const auto d = bases[mu].rows();
    Matrix g = Matrix::Zero(d, d);
    for (std::size_t x = 0; x < solution.n_tilde.size(); ++x) {
      for (std::size_t j = mu * per_basis; j < (mu + 1) * per_basis; ++j) {
        const auto& nt = solution.n_tilde[x][j];
        for (std::size_t a = 0; a < nt.size(); ++a) {
          const Matrix p = kraus[j].adjoint() * nt[a].matrix() * kraus[j];
          const Matrix& y = solution.multipliers[x][a].matrix();
          g += i * (p * y - y * p);
        }
      }
    }
    grads.push_back(HermitianOp::hermitian_part(g));
  }
  return grads;
}

SimulationModel model_from_visibility(const Assemblage& assemblage, const std::vector<Matrix>& kraus,
                                      const VisibilitySolution& solution) {
  const int d = assemblage.dim();
  if (solution.alpha.size() != kraus.size()) {
    throw StructuralError("model_from_visibility: solution does not match the Kraus family");
  }
  const int n = static_cast<int>(kraus.front().rows());
  const double amax = *std::max_element(solution.alpha.begin(), solution.alpha.end());
  std::vector<std::size_t> used;
  for (std::size_t j = 0; j < kraus.size(); ++j) {
    if (solution.alpha[j] > 1e-12 * amax) used.push_back(j);
  }

  Matrix total = Matrix::Zero(d, d);
  for (std::size_t j : used) total += solution.alpha[j] * kraus[j].adjoint() * kraus[j];
  const Matrix fix = inverse_sqrt(HermitianOp::hermitian_part(total));

  std::vector<Matrix> ops;
  for (std::size_t j : used) ops.push_back(std::sqrt(solution.alpha[j]) * kraus[j] * fix);

  std::vector<std::vector<Povm>> meas(static_cast<std::size_t>(assemblage.settings()));
  for (int x = 0; x < assemblage.settings(); ++x) {
    for (std::size_t j : used) {
      const auto& nt = solution.n_tilde[static_cast<std::size_t>(x)][j];
      Matrix sum = Matrix::Zero(n, n);
      for (const auto& e : nt) sum += e.matrix();
      const Matrix norm = inverse_sqrt(HermitianOp::hermitian_part(sum));
      std::vector<HermitianOp> el;
      for (const auto& e : nt) el.push_back(HermitianOp::hermitian_part(norm * e.matrix() * norm));
      meas[static_cast<std::size_t>(x)].emplace_back(n, std::move(el));
    }
  }
  return SimulationModel{Instrument(d, n, std::move(ops)), std::move(meas)};
}

VisibilitySearchResult visibility_search(const Assemblage& assemblage, int n, int num_bases,
                                         const SeededStream& stream, const SearchOptions& options) {
  const int d = assemblage.dim();
  if (num_bases < 1) throw DomainError("visibility_search: need at least one basis");
  if (options.restarts < 1) throw DomainError("visibility_search: need at least one restart");
  if (n < 1 || n > d) throw DomainError("visibility_search: need 1 <= n <= d");
  if (!(options.step_shrink > 0 && options.step_shrink < 1) || !(options.step_end > 0)) {
    throw DomainError("visibility_search: invalid step schedule");
  }

  std::atomic<int> solves{0};
  auto solve_at = [&](const std::vector<Matrix>& bases) {
    ++solves;
    return solve_visibility(assemblage, projective_kraus_family(bases, n), options.search_gap_tol,
                            options.search_gap_tol);
  };
  const double minus_inf = -std::numeric_limits<double>::infinity();
  auto value_of = [&](const VisibilitySolution& sol) { return sol.report.optimal() ? sol.eta : minus_inf; };

  const auto restarts = static_cast<std::size_t>(options.restarts);
  std::vector<double> best_eta(restarts, minus_inf);
  std::vector<std::vector<Matrix>> best_bases(restarts);

  parallel_for(restarts, options.jobs, [&](std::size_t r) {
    Engine rng = stream.substream(r).engine();
    std::vector<Matrix> bases;
    for (int mu = 0; mu < num_bases; ++mu) bases.push_back(haar_unitary(d, rng));
    VisibilitySolution sol = solve_at(bases);
    double current = value_of(sol);
    std::uniform_int_distribution<int> pick(0, num_bases - 1);
    int failures = 0;
    for (double eps = options.step_start; eps >= options.step_end;) {
      // Ascend along the multiplier gradient first; fall back to a random
      // rotation of one basis when the gradient step does not help.
      std::vector<Matrix> candidate = bases;
      const bool use_gradient = failures == 0 && sol.report.optimal();
      if (use_gradient) {
        const auto grad = compression_gradient(bases, n, sol);
        double norm = 0.0;
        for (const auto& g : grad) norm += g.matrix().squaredNorm();
        norm = std::sqrt(norm);
        if (norm > 0.0) {
          for (std::size_t mu = 0; mu < candidate.size(); ++mu) {
            candidate[mu] = exp_i((eps / norm) * grad[mu]) * candidate[mu];
          }
        }
      } else {
        const auto mu = static_cast<std::size_t>(pick(rng));
        candidate[mu] = exp_i(eps * random_hermitian(d, rng)) * candidate[mu];
      }
      VisibilitySolution next = solve_at(candidate);
      const double value = value_of(next);
      if (value > current + 1e-9) {
        current = value;
        bases = std::move(candidate);
        sol = std::move(next);
        failures = 0;
        if (use_gradient) eps = std::min(options.step_start, eps * 1.25);
      } else if (++failures >= options.failures_per_step) {
        eps *= options.step_shrink;
        failures = 0;
      }
    }
    best_eta[r] = current;
    best_bases[r] = std::move(bases);
  });

  std::vector<std::size_t> order(restarts);
  for (std::size_t r = 0; r < restarts; ++r) order[r] = r;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return best_eta[a] > best_eta[b]; });

  VisibilitySearchResult out;
  out.restart_eta = best_eta;
  for (std::size_t r : order) {
    ++solves;
    VisibilitySolution sol = solve_visibility(assemblage, projective_kraus_family(best_bases[r], n),
                                              options.gap_tol, options.feas_tol);
    if (!sol.report.optimal()) continue;
    out.certified_feasible_eta = sol.eta;
    out.bases = best_bases[r];
    out.solution = std::move(sol);
    out.best_restart = static_cast<int>(r);
    break;
  }
  out.solves = solves;
  if (out.best_restart < 0) {
    throw SolverError("visibility_search: no restart produced a certified solution");
  }
  return out;
}

}  // namespace simulab
