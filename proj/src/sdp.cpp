#include "simulab/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "simulab/errors.hpp"

namespace simulab {

namespace {

// The discrimination integrand is pushed well past the caller's tolerance
// so that the cleaned-up certificate still meets it.
constexpr double kInnerTightening = 1e-4;
// Below this the equality residual stagnates in double precision.
constexpr double kInnerFeasFloor = 1e-10;

Matrix noise_offset(const HermitianOp& effect, int d) {
  // M^eta = eta (M - Tr(M) I/d) + Tr(M) I/d
  return effect.matrix() - (effect.trace() / d) * Matrix::Identity(d, d);
}

}  // namespace

SdpReport solve_discrimination(const std::vector<HermitianOp>& states, double gap_tol,
                               double feas_tol) {
  if (states.empty()) throw StructuralError("solve_discrimination: no states");
  const int n = states.front().dim();
  for (std::size_t a = 0; a < states.size(); ++a) {
    if (states[a].dim() != n) throw StructuralError("solve_discrimination: dimension mismatch");
    if (min_eigenvalue(states[a]) < -kPsdTol) {
      throw DomainError("solve_discrimination: state " + std::to_string(a) + " is not PSD");
    }
  }
  const int outcomes = static_cast<int>(states.size());

  conic::Problem prob;
  prob.block_dims.assign(static_cast<std::size_t>(outcomes), n);
  for (int a = 0; a < outcomes; ++a) {
    prob.objective.push_back({a, -states[static_cast<std::size_t>(a)].matrix()});
  }
  for (const Matrix& f : conic::hermitian_basis(n)) {
    conic::Constraint c;
    c.rhs = f.trace().real();
    for (int a = 0; a < outcomes; ++a) c.terms.push_back({a, f});
    prob.constraints.push_back(std::move(c));
  }
  conic::Settings settings;
  settings.gap_tol = gap_tol * kInnerTightening;
  settings.feas_tol = std::max(feas_tol * kInnerTightening, kInnerFeasFloor);
  settings.remove_dependent_rows = false;
  const conic::Solution sol = conic::solve(prob, settings);

  // Primal: clip, then renormalise to an exact POVM.
  std::vector<Matrix> povm;
  Matrix total = Matrix::Zero(n, n);
  for (const auto& x : sol.x) {
    const auto e = eig_hermitian(HermitianOp::hermitian_part(x));
    const Vector w = e.eigenvalues.cwiseMax(0.0).cast<Complex>();
    povm.push_back(e.eigenvectors * w.asDiagonal() * e.eigenvectors.adjoint());
    total += povm.back();
  }
  const HermitianOp t = HermitianOp::hermitian_part(total);
  if (min_eigenvalue(t) <= 0.5) {
    throw SolverError("solve_discrimination: interior-point iterate far from a POVM");
  }
  const Matrix t_isqrt = inverse_sqrt(t);

  SdpReport report;
  report.iterations = sol.iterations;
  double value = 0.0;
  Matrix sum = Matrix::Zero(n, n);
  double worst_psd = 0.0;
  for (int a = 0; a < outcomes; ++a) {
    HermitianOp na = HermitianOp::hermitian_part(t_isqrt * povm[static_cast<std::size_t>(a)] * t_isqrt);
    value += (states[static_cast<std::size_t>(a)].matrix() * na.matrix()).trace().real();
    sum += na.matrix();
    worst_psd = std::max(worst_psd, -min_eigenvalue(na));
    report.primal_variables.push_back(std::move(na));
  }

  // Dual: Y = -sum_s y_s F_s, shifted until Y >= rho_a for every a.
  Matrix y = Matrix::Zero(n, n);
  const auto basis = conic::hermitian_basis(n);
  for (std::size_t s = 0; s < basis.size(); ++s) y -= sol.y(static_cast<Eigen::Index>(s)) * basis[s];
  HermitianOp ycert = HermitianOp::hermitian_part(y);
  double shift = 0.0;
  for (const auto& rho : states) shift = std::max(shift, max_eigenvalue(rho - ycert));
  if (shift > 0) ycert = ycert + shift * HermitianOp::identity(n);

  report.primal_value = value;
  report.dual_value = ycert.trace();
  report.gap = std::abs(report.dual_value - report.primal_value);
  report.primal_residual = std::max(worst_psd, max_abs(sum - Matrix::Identity(n, n)));
  double dual_violation = 0.0;
  for (const auto& rho : states) dual_violation = std::max(dual_violation, max_eigenvalue(rho - ycert));
  report.dual_residual = std::max(0.0, dual_violation);
  report.dual_certificate.push_back(std::move(ycert));
  report.status = (report.gap <= gap_tol && report.primal_residual <= feas_tol &&
                   report.dual_residual <= feas_tol)
                      ? SdpStatus::optimal
                      : SdpStatus::max_iterations;
  return report;
}

std::vector<Matrix> projective_kraus_family(const std::vector<Matrix>& bases, int n) {
  std::vector<Matrix> out;
  for (const auto& u : bases) {
    const int d = static_cast<int>(u.rows());
    if (u.cols() != d) throw StructuralError("projective_kraus_family: basis not square");
    if (n < 1 || n > d) throw DomainError("projective_kraus_family: need 1 <= n <= d");
    for (const auto& subset : combinations(d, n)) {
      out.push_back(coordinate_projector(d, subset) * u.adjoint());
    }
  }
  return out;
}

VisibilitySolution solve_visibility(const Assemblage& assemblage, const std::vector<Matrix>& kraus,
                                    double gap_tol, double feas_tol) {
  const int d = assemblage.dim();
  if (kraus.empty()) throw StructuralError("solve_visibility: empty Kraus family");
  const int n = static_cast<int>(kraus.front().rows());
  for (const auto& k : kraus) {
    if (k.rows() != n || k.cols() != d) {
      throw StructuralError("solve_visibility: every Kraus operator must be n x d");
    }
  }
  const int nk = static_cast<int>(kraus.size());
  const int nx = assemblage.settings();

  VisibilitySolution out;

  // The family must be able to reproduce the identity: sum_j alpha_j K_j^+ K_j = I.
  {
    RealMatrix g(d * d, nk);
    for (int j = 0; j < nk; ++j) {
      g.col(j) = conic::hermitian_coordinates(kraus[static_cast<std::size_t>(j)].adjoint() *
                                              kraus[static_cast<std::size_t>(j)]);
    }
    const RealVector id = conic::hermitian_coordinates(Matrix::Identity(d, d));
    const RealVector coeff = g.colPivHouseholderQr().solve(id);
    if ((g * coeff - id).norm() > 1e-8) {
      out.report.status = SdpStatus::infeasible;
      return out;
    }
  }

  // Block layout: Nt[x][j][a] first, then alpha_j, then eta.
  std::vector<std::vector<std::vector<int>>> nt_block(static_cast<std::size_t>(nx));
  conic::Problem prob;
  for (int x = 0; x < nx; ++x) {
    nt_block[static_cast<std::size_t>(x)].resize(static_cast<std::size_t>(nk));
    for (int j = 0; j < nk; ++j) {
      for (int a = 0; a < assemblage[x].outcomes(); ++a) {
        nt_block[static_cast<std::size_t>(x)][static_cast<std::size_t>(j)].push_back(
            static_cast<int>(prob.block_dims.size()));
        prob.block_dims.push_back(n);
      }
    }
  }
  const int alpha0 = static_cast<int>(prob.block_dims.size());
  for (int j = 0; j < nk; ++j) prob.block_dims.push_back(1);
  const int eta_block = static_cast<int>(prob.block_dims.size());
  prob.block_dims.push_back(1);
  prob.objective.push_back({eta_block, -Matrix::Identity(1, 1)});

  const auto basis_d = conic::hermitian_basis(d);
  const auto basis_n = conic::hermitian_basis(n);
  std::vector<std::vector<std::size_t>> first_row(static_cast<std::size_t>(nx));
  for (int x = 0; x < nx; ++x) {
    for (int a = 0; a < assemblage[x].outcomes(); ++a) {
      first_row[static_cast<std::size_t>(x)].push_back(prob.constraints.size());
      const HermitianOp& effect = assemblage[x][a];
      const Matrix offset = noise_offset(effect, d);
      for (const Matrix& e : basis_d) {
        conic::Constraint c;
        for (int j = 0; j < nk; ++j) {
          const Matrix& k = kraus[static_cast<std::size_t>(j)];
          Matrix coeff = k * e * k.adjoint();
          coeff = 0.5 * (coeff + coeff.adjoint());
          if (max_abs(coeff) < 1e-15) continue;
          c.terms.push_back({nt_block[static_cast<std::size_t>(x)][static_cast<std::size_t>(j)]
                                     [static_cast<std::size_t>(a)],
                             coeff});
        }
        const double eta_coeff = -(e * offset).trace().real();
        if (eta_coeff != 0.0) c.terms.push_back({eta_block, Matrix::Constant(1, 1, eta_coeff)});
        c.rhs = e.trace().real() * effect.trace() / d;
        prob.constraints.push_back(std::move(c));
      }
    }
    for (int j = 0; j < nk; ++j) {
      for (const Matrix& f : basis_n) {
        conic::Constraint c;
        for (int a = 0; a < assemblage[x].outcomes(); ++a) {
          c.terms.push_back(
              {nt_block[static_cast<std::size_t>(x)][static_cast<std::size_t>(j)][static_cast<std::size_t>(a)], f});
        }
        const double tr = f.trace().real();
        if (tr != 0.0) c.terms.push_back({alpha0 + j, Matrix::Constant(1, 1, -tr)});
        c.rhs = 0.0;
        prob.constraints.push_back(std::move(c));
      }
    }
  }

  conic::Settings settings;
  settings.gap_tol = gap_tol;
  settings.feas_tol = feas_tol;
  const conic::Solution sol = conic::solve(prob, settings);

  out.report.status = sol.status;
  out.report.iterations = sol.iterations;
  out.report.gap = sol.gap;
  out.report.dual_residual = sol.dual_infeasibility;
  if (sol.x.empty()) return out;

  out.eta = sol.x[static_cast<std::size_t>(eta_block)](0, 0).real();
  out.report.primal_value = out.eta;
  out.report.dual_value = -sol.dual_objective;
  for (int j = 0; j < nk; ++j) out.alpha.push_back(sol.x[static_cast<std::size_t>(alpha0 + j)](0, 0).real());

  double residual = 0.0;
  out.n_tilde.resize(static_cast<std::size_t>(nx));
  for (int x = 0; x < nx; ++x) {
    const int outcomes = assemblage[x].outcomes();
    std::vector<Matrix> recon(static_cast<std::size_t>(outcomes), Matrix::Zero(d, d));
    out.n_tilde[static_cast<std::size_t>(x)].resize(static_cast<std::size_t>(nk));
    for (int j = 0; j < nk; ++j) {
      const Matrix& k = kraus[static_cast<std::size_t>(j)];
      Matrix sum = Matrix::Zero(n, n);
      for (int a = 0; a < outcomes; ++a) {
        HermitianOp nt = HermitianOp::hermitian_part(
            sol.x[static_cast<std::size_t>(nt_block[static_cast<std::size_t>(x)][static_cast<std::size_t>(j)]
                                                  [static_cast<std::size_t>(a)])]);
        recon[static_cast<std::size_t>(a)] += k.adjoint() * nt.matrix() * k;
        sum += nt.matrix();
        residual = std::max(residual, -min_eigenvalue(nt));
        out.report.primal_variables.push_back(nt);
        out.n_tilde[static_cast<std::size_t>(x)][static_cast<std::size_t>(j)].push_back(std::move(nt));
      }
      residual = std::max(residual, max_abs(sum - out.alpha[static_cast<std::size_t>(j)] * Matrix::Identity(n, n)));
    }
    for (int a = 0; a < outcomes; ++a) {
      const HermitianOp& effect = assemblage[x][a];
      const Matrix target = out.eta * effect.matrix() +
                            ((1.0 - out.eta) * effect.trace() / d) * Matrix::Identity(d, d);
      residual = std::max(residual, max_abs(recon[static_cast<std::size_t>(a)] - target));
    }
  }
  out.report.primal_residual = residual;
  for (const auto& s : sol.s) out.report.dual_certificate.push_back(HermitianOp::hermitian_part(s));
  out.multipliers.resize(static_cast<std::size_t>(nx));
  for (int x = 0; x < nx; ++x) {
    for (std::size_t row : first_row[static_cast<std::size_t>(x)]) {
      Matrix y = Matrix::Zero(d, d);
      for (std::size_t r = 0; r < basis_d.size(); ++r) y += sol.y(static_cast<Eigen::Index>(row + r)) * basis_d[r];
      out.multipliers[static_cast<std::size_t>(x)].push_back(HermitianOp::hermitian_part(y));
    }
  }
  if (out.report.status == SdpStatus::optimal && residual > feas_tol) {
    out.report.status = SdpStatus::max_iterations;
  }
  return out;
}

JointMeasurabilitySolution solve_jm_robustness(const Assemblage& assemblage, double gap_tol,
                                               double feas_tol, std::size_t parent_cap) {
  const int d = assemblage.dim();
  const int nx = assemblage.settings();
  if (nx == 0) throw StructuralError("solve_jm_robustness: empty assemblage");

  std::size_t count = 1;
  for (const auto& p : assemblage.povms()) {
    if (p.outcomes() < 1) throw StructuralError("solve_jm_robustness: setting without outcomes");
    count *= static_cast<std::size_t>(p.outcomes());
    if (count > parent_cap) {
      throw ResourceError("solve_jm_robustness: parent POVM would need more than " +
                          std::to_string(parent_cap) + " outcomes");
    }
  }

  JointMeasurabilitySolution out;
  out.responses.reserve(count);
  std::vector<int> digits(static_cast<std::size_t>(nx), 0);
  for (std::size_t l = 0; l < count; ++l) {
    out.responses.push_back(digits);
    for (int x = nx - 1; x >= 0; --x) {
      if (++digits[static_cast<std::size_t>(x)] < assemblage[x].outcomes()) break;
      digits[static_cast<std::size_t>(x)] = 0;
    }
  }

  conic::Problem prob;
  prob.block_dims.assign(count, d);
  const int eta_block = static_cast<int>(count);
  prob.block_dims.push_back(1);
  prob.objective.push_back({eta_block, -Matrix::Identity(1, 1)});

  const auto basis = conic::hermitian_basis(d);
  for (int x = 0; x < nx; ++x) {
    for (int a = 0; a < assemblage[x].outcomes(); ++a) {
      const HermitianOp& effect = assemblage[x][a];
      const Matrix offset = noise_offset(effect, d);
      for (const Matrix& e : basis) {
        conic::Constraint c;
        for (std::size_t l = 0; l < count; ++l) {
          if (out.responses[l][static_cast<std::size_t>(x)] == a) c.terms.push_back({static_cast<int>(l), e});
        }
        const double eta_coeff = -(e * offset).trace().real();
        if (eta_coeff != 0.0) c.terms.push_back({eta_block, Matrix::Constant(1, 1, eta_coeff)});
        c.rhs = e.trace().real() * effect.trace() / d;
        prob.constraints.push_back(std::move(c));
      }
    }
  }

  conic::Settings settings;
  settings.gap_tol = gap_tol;
  settings.feas_tol = feas_tol;
  const conic::Solution sol = conic::solve(prob, settings);

  out.report.status = sol.status;
  out.report.iterations = sol.iterations;
  out.report.gap = sol.gap;
  out.report.dual_residual = sol.dual_infeasibility;
  if (sol.x.empty()) return out;
  out.eta = sol.x[static_cast<std::size_t>(eta_block)](0, 0).real();
  out.report.primal_value = out.eta;
  out.report.dual_value = -sol.dual_objective;

  double residual = 0.0;
  for (std::size_t l = 0; l < count; ++l) {
    HermitianOp g = HermitianOp::hermitian_part(sol.x[l]);
    residual = std::max(residual, -min_eigenvalue(g));
    out.report.primal_variables.push_back(std::move(g));
  }
  for (int x = 0; x < nx; ++x) {
    for (int a = 0; a < assemblage[x].outcomes(); ++a) {
      Matrix sum = Matrix::Zero(d, d);
      for (std::size_t l = 0; l < count; ++l) {
        if (out.responses[l][static_cast<std::size_t>(x)] == a) sum += out.report.primal_variables[l].matrix();
      }
      const HermitianOp& effect = assemblage[x][a];
      const Matrix target = out.eta * effect.matrix() +
                            ((1.0 - out.eta) * effect.trace() / d) * Matrix::Identity(d, d);
      residual = std::max(residual, max_abs(sum - target));
    }
  }
  out.report.primal_residual = residual;
  for (const auto& s : sol.s) out.report.dual_certificate.push_back(HermitianOp::hermitian_part(s));
  if (out.report.status == SdpStatus::optimal && residual > feas_tol) {
    out.report.status = SdpStatus::max_iterations;
  }
  return out;
}

}  // namespace simulab
