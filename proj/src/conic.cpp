#include "simulab/conic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "simulab/errors.hpp"

namespace simulab::conic {

std::string to_string(Status s) {
  switch (s) {
    case Status::optimal:
      return "optimal";
    case Status::max_iterations:
      return "max-iterations";
    case Status::infeasible:
      return "infeasible";
  }
  return "unknown";
}

std::vector<Matrix> hermitian_basis(int n) {
  std::vector<Matrix> basis;
  basis.reserve(static_cast<std::size_t>(n * n));
  for (int p = 0; p < n; ++p) {
    Matrix e = Matrix::Zero(n, n);
    e(p, p) = 1.0;
    basis.push_back(std::move(e));
  }
  const double r = 1.0 / std::sqrt(2.0);
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      Matrix re = Matrix::Zero(n, n);
      re(p, q) = r;
      re(q, p) = r;
      basis.push_back(std::move(re));
      Matrix im = Matrix::Zero(n, n);
      im(p, q) = Complex(0.0, r);
      im(q, p) = Complex(0.0, -r);
      basis.push_back(std::move(im));
    }
  }
  return basis;
}

RealVector hermitian_coordinates(const Matrix& a) {
  const auto n = a.rows();
  RealVector c(n * n);
  Eigen::Index k = 0;
  for (Eigen::Index p = 0; p < n; ++p) c(k++) = a(p, p).real();
  const double s = std::sqrt(2.0);
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index q = p + 1; q < n; ++q) {
      c(k++) = s * a(p, q).real();
      c(k++) = s * a(p, q).imag();
    }
  }
  return c;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kPatience = 8;

struct SparseEntry {
  int r;
  int c;
  Complex v;
};

struct Term {
  int block;
  std::vector<SparseEntry> entries;
};

struct Row {
  std::vector<Term> terms;
  double rhs;
};

using Blocks = std::vector<Matrix>;

Term make_term(const BlockTerm& t) {
  Term out{t.block, {}};
  for (Eigen::Index c = 0; c < t.value.cols(); ++c) {
    for (Eigen::Index r = 0; r < t.value.rows(); ++r) {
      const Complex v = t.value(r, c);
      if (v != Complex(0.0)) out.entries.push_back({static_cast<int>(r), static_cast<int>(c), v});
    }
  }
  return out;
}

double row_norm(const Row& row) {
  double s = 0.0;
  for (const auto& t : row.terms) {
    for (const auto& e : t.entries) s += std::norm(e.v);
  }
  return std::sqrt(s);
}

// Re Tr(A Z) for a sparse Hermitian A.
double trace_product(const Term& t, const Matrix& z) {
  double s = 0.0;
  for (const auto& e : t.entries) s += (e.v * z(e.c, e.r)).real();
  return s;
}

RealVector apply_a(const std::vector<Row>& rows, const Blocks& z) {
  RealVector out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double s = 0.0;
    for (const auto& t : rows[i].terms) s += trace_product(t, z[static_cast<std::size_t>(t.block)]);
    out(static_cast<Eigen::Index>(i)) = s;
  }
  return out;
}

Blocks apply_at(const std::vector<Row>& rows, const RealVector& y, const std::vector<int>& dims) {
  Blocks out;
  out.reserve(dims.size());
  for (int n : dims) out.push_back(Matrix::Zero(n, n));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double yi = y(static_cast<Eigen::Index>(i));
    if (yi == 0.0) continue;
    for (const auto& t : rows[i].terms) {
      Matrix& m = out[static_cast<std::size_t>(t.block)];
      for (const auto& e : t.entries) m(e.r, e.c) += yi * e.v;
    }
  }
  return out;
}

double inner(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k].cwiseProduct(b[k].conjugate())).sum().real();
  return s;
}

Matrix herm(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

double frob(const Blocks& b) {
  double s = 0.0;
  for (const auto& x : b) s += x.squaredNorm();
  return std::sqrt(s);
}

// Largest alpha with x + alpha * dx still positive semidefinite.
double max_step(const Matrix& x, const Matrix& dx) {
  if (x.rows() == 1) {
    const double d = dx(0, 0).real();
    return d < 0 ? -x(0, 0).real() / d : kInf;
  }
  Eigen::LLT<Matrix> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const Matrix t = llt.matrixL().solve(dx);
  const Matrix b = llt.matrixL().solve(Matrix(t.adjoint()));
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm(b), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin >= 0 ? kInf : -1.0 / lmin;
}

double max_step(const Blocks& x, const Blocks& dx) {
  double a = kInf;
  for (std::size_t k = 0; k < x.size(); ++k) a = std::min(a, max_step(x[k], dx[k]));
  return a;
}

bool positive_definite(const Blocks& b) {
  for (const auto& x : b) {
    if (x.rows() == 1) {
      if (!(x(0, 0).real() > 0.0)) return false;
      continue;
    }
    Eigen::LLT<Matrix> llt(x);
    if (llt.info() != Eigen::Success) return false;
  }
  return true;
}

Matrix inverse_hpd(const Matrix& s) {
  if (s.rows() == 1) return Matrix::Constant(1, 1, 1.0 / s(0, 0).real());
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success) {
    throw SolverError("conic: dual slack lost positive definiteness");
  }
  return herm(llt.solve(Matrix::Identity(s.rows(), s.cols())));
}

// Indices of a maximal linearly independent subset of rows.
std::vector<int> independent_rows(const std::vector<Row>& rows, const std::vector<int>& dims) {
  std::vector<Eigen::Index> offset(dims.size() + 1, 0);
  for (std::size_t k = 0; k < dims.size(); ++k) offset[k + 1] = offset[k] + dims[k] * dims[k];
  RealMatrix at = RealMatrix::Zero(offset.back(), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& t : rows[i].terms) {
      const int n = dims[static_cast<std::size_t>(t.block)];
      Matrix dense = Matrix::Zero(n, n);
      for (const auto& e : t.entries) dense(e.r, e.c) += e.v;
      at.col(static_cast<Eigen::Index>(i)).segment(offset[static_cast<std::size_t>(t.block)], n * n) +=
          hermitian_coordinates(dense);
    }
  }
  Eigen::ColPivHouseholderQR<RealMatrix> qr(at);
  qr.setThreshold(1e-10);
  const auto rank = qr.rank();
  std::vector<int> keep;
  keep.reserve(static_cast<std::size_t>(rank));
  for (Eigen::Index j = 0; j < rank; ++j) keep.push_back(qr.colsPermutation().indices()(j));
  std::sort(keep.begin(), keep.end());
  return keep;
}

struct Iterate {
  Blocks x;
  Blocks s;
  RealVector y;
};

}  // namespace

Solution solve(const Problem& problem, const Settings& settings) {
  const auto& dims = problem.block_dims;
  const std::size_t nblocks = dims.size();
  for (int n : dims) {
    if (n < 1) throw StructuralError("conic: block dimensions must be positive");
  }
  auto check_term = [&](const BlockTerm& t) {
    if (t.block < 0 || static_cast<std::size_t>(t.block) >= nblocks) {
      throw StructuralError("conic: term refers to a missing block");
    }
    const int n = dims[static_cast<std::size_t>(t.block)];
    if (t.value.rows() != n || t.value.cols() != n) {
      throw StructuralError("conic: term shape does not match its block");
    }
    if (max_abs(t.value - t.value.adjoint()) > 1e-12 * std::max(1.0, max_abs(t.value))) {
      throw StructuralError("conic: coefficient matrix is not Hermitian");
    }
  };

  // Original data in sparse form; kept for residual reporting.
  std::vector<Row> original;
  original.reserve(problem.constraints.size());
  for (const auto& c : problem.constraints) {
    Row row{{}, c.rhs};
    for (const auto& t : c.terms) {
      check_term(t);
      row.terms.push_back(make_term(t));
    }
    original.push_back(std::move(row));
  }
  Blocks c_orig;
  c_orig.reserve(nblocks);
  for (int n : dims) c_orig.push_back(Matrix::Zero(n, n));
  for (const auto& t : problem.objective) {
    check_term(t);
    c_orig[static_cast<std::size_t>(t.block)] += herm(t.value);
  }

  // Presolve: drop dependent rows and empty rows.
  std::vector<int> kept;
  if (settings.remove_dependent_rows && !original.empty()) {
    kept = independent_rows(original, dims);
  } else {
    for (std::size_t i = 0; i < original.size(); ++i) kept.push_back(static_cast<int>(i));
  }
  kept.erase(std::remove_if(kept.begin(), kept.end(),
                            [&](int i) { return row_norm(original[static_cast<std::size_t>(i)]) == 0.0; }),
             kept.end());

  // Scaling: unit rows, then global scales for b and C.
  std::vector<Row> rows;
  std::vector<double> row_scale;
  rows.reserve(kept.size());
  for (int i : kept) {
    Row r = original[static_cast<std::size_t>(i)];
    const double s = row_norm(r);
    for (auto& t : r.terms) {
      for (auto& e : t.entries) e.v /= s;
    }
    r.rhs /= s;
    rows.push_back(std::move(r));
    row_scale.push_back(s);
  }
  const auto m = static_cast<Eigen::Index>(rows.size());
  RealVector b(m);
  for (Eigen::Index i = 0; i < m; ++i) b(i) = rows[static_cast<std::size_t>(i)].rhs;
  const double b_scale = std::max(1.0, b.norm());
  const double c_scale = std::max(1.0, frob(c_orig));
  b /= b_scale;
  Blocks c = c_orig;
  for (auto& ck : c) ck /= c_scale;

  // Which rows touch each block.
  struct Use {
    int row;
    const Term* term;
  };
  std::vector<std::vector<Use>> uses(nblocks);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& t : rows[i].terms) uses[static_cast<std::size_t>(t.block)].push_back({static_cast<int>(i), &t});
  }

  // Infeasible starting point.
  Iterate it;
  it.y = RealVector::Zero(m);
  for (std::size_t k = 0; k < nblocks; ++k) {
    const int n = dims[k];
    double amax = 0.0;
    double xi = std::max(10.0, std::sqrt(static_cast<double>(n)));
    for (const auto& u : uses[k]) {
      double fn = 0.0;
      for (const auto& e : u.term->entries) fn += std::norm(e.v);
      fn = std::sqrt(fn);
      amax = std::max(amax, fn);
      xi = std::max(xi, n * (1.0 + std::abs(b(u.row))) / (1.0 + fn));
    }
    const double eta = std::max({10.0, std::sqrt(static_cast<double>(n)),
                                 (1.0 + std::max(amax, c[k].norm())) / std::sqrt(static_cast<double>(n))});
    it.x.push_back(xi * Matrix::Identity(n, n));
    it.s.push_back(eta * Matrix::Identity(n, n));
  }
  double total_dim = 0.0;
  for (int n : dims) total_dim += n;

  Solution sol;
  sol.dropped_rows = static_cast<int>(original.size()) - static_cast<int>(rows.size());

  // Residuals of the unscaled problem at a scaled iterate.
  auto evaluate = [&](const Iterate& cur, Solution& out) {
    out.x.clear();
    out.s.clear();
    for (std::size_t k = 0; k < nblocks; ++k) {
      out.x.push_back(herm(cur.x[k] * b_scale));
      out.s.push_back(herm(cur.s[k] * c_scale));
    }
    out.y = RealVector::Zero(static_cast<Eigen::Index>(original.size()));
    for (std::size_t r = 0; r < kept.size(); ++r) {
      out.y(kept[r]) = c_scale * cur.y(static_cast<Eigen::Index>(r)) / row_scale[r];
    }
    out.primal_objective = inner(c_orig, out.x);
    double dobj = 0.0;
    for (std::size_t i = 0; i < original.size(); ++i) dobj += original[i].rhs * out.y(static_cast<Eigen::Index>(i));
    out.dual_objective = dobj;
    out.gap = std::abs(out.primal_objective - out.dual_objective);
    const RealVector ax = apply_a(original, out.x);
    double pinf = 0.0;
    for (std::size_t i = 0; i < original.size(); ++i) {
      pinf = std::max(pinf, std::abs(original[i].rhs - ax(static_cast<Eigen::Index>(i))));
    }
    out.primal_infeasibility = pinf;
    const Blocks aty = apply_at(original, out.y, dims);
    double dinf = 0.0;
    for (std::size_t k = 0; k < nblocks; ++k) dinf = std::max(dinf, max_abs(c_orig[k] - aty[k] - out.s[k]));
    out.dual_infeasibility = dinf;
  };
  auto merit = [&](const Solution& s) {
    return std::max({s.gap / settings.gap_tol, s.primal_infeasibility / settings.feas_tol,
                     s.dual_infeasibility / settings.feas_tol});
  };

  Solution best;
  double best_merit = kInf;
  double gamma = 0.9;
  int stalls = 0;
  int since_best = 0;

  for (int iter = 0;; ++iter) {
    Solution cur;
    evaluate(it, cur);
    cur.iterations = iter;
    const double mer = merit(cur);
    if (mer < best_merit) {
      best_merit = mer;
      best = cur;
      since_best = 0;
    } else {
      ++since_best;
    }
    if (mer <= 1.0) {
      best = cur;
      best.status = Status::optimal;
      break;
    }
    // Stop on tiny steps or when rounding keeps the merit from improving.
    if (iter >= settings.max_iterations || stalls >= 3 || since_best >= kPatience) break;

    const double dobj_scaled = b.dot(it.y);
    if (dobj_scaled > 1e8) {
      best = cur;
      best.status = Status::infeasible;
      break;
    }

    const RealVector rp = b - apply_a(rows, it.x);
    const Blocks aty = apply_at(rows, it.y, dims);
    Blocks rd(nblocks), sinv(nblocks);
    for (std::size_t k = 0; k < nblocks; ++k) {
      rd[k] = c[k] - aty[k] - it.s[k];
      sinv[k] = inverse_hpd(it.s[k]);
    }

    // Schur complement M_ij = Re Tr(A_i X A_j S^-1).
    RealMatrix schur = RealMatrix::Zero(m, m);
    for (std::size_t k = 0; k < nblocks; ++k) {
      const Matrix& xk = it.x[k];
      const Matrix& sk = sinv[k];
      const int n = dims[k];
      Matrix g(n, n);
      for (const auto& ui : uses[k]) {
        // G = S^-1 A_i X, so that Tr(A_j G) = Tr(A_i X A_j S^-1).
        g.setZero();
        for (const auto& e : ui.term->entries) g.noalias() += e.v * sk.col(e.r) * xk.row(e.c);
        for (const auto& uj : uses[k]) {
          schur(ui.row, uj.row) += trace_product(*uj.term, g);
        }
      }
    }
    schur = 0.5 * (schur + schur.transpose());
    Eigen::LLT<RealMatrix> chol(schur);
    Eigen::LDLT<RealMatrix> ldlt;
    bool use_ldlt = false;
    if (chol.info() != Eigen::Success) {
      RealMatrix reg = schur;
      reg.diagonal().array() += 1e-14 * std::max(1.0, schur.diagonal().maxCoeff());
      ldlt.compute(reg);
      use_ldlt = true;
    }
    auto solve_schur = [&](const RealVector& rhs) -> RealVector {
      return use_ldlt ? RealVector(ldlt.solve(rhs)) : RealVector(chol.solve(rhs));
    };

    Blocks xrds(nblocks);
    for (std::size_t k = 0; k < nblocks; ++k) xrds[k] = it.x[k] * rd[k] * sinv[k];
    const RealVector a_xrds = apply_a(rows, xrds);

    // Solves for a direction given the complementarity term Z.
    auto direction = [&](const Blocks& z, Blocks& dx, RealVector& dy, Blocks& ds) {
      dy = solve_schur(rp - apply_a(rows, z) + a_xrds);
      const Blocks atdy = apply_at(rows, dy, dims);
      ds.resize(nblocks);
      dx.resize(nblocks);
      for (std::size_t k = 0; k < nblocks; ++k) {
        ds[k] = rd[k] - atdy[k];
        dx[k] = herm(z[k] - it.x[k] * ds[k] * sinv[k]);
      }
    };

    const double mu = inner(it.x, it.s) / total_dim;

    Blocks z(nblocks);
    for (std::size_t k = 0; k < nblocks; ++k) z[k] = -it.x[k];
    Blocks dx_aff, ds_aff;
    RealVector dy_aff;
    direction(z, dx_aff, dy_aff, ds_aff);
    const double ap_aff = std::min(1.0, max_step(it.x, dx_aff));
    const double ad_aff = std::min(1.0, max_step(it.s, ds_aff));
    Blocks x_aff(nblocks), s_aff(nblocks);
    for (std::size_t k = 0; k < nblocks; ++k) {
      x_aff[k] = it.x[k] + ap_aff * dx_aff[k];
      s_aff[k] = it.s[k] + ad_aff * ds_aff[k];
    }
    const double mu_aff = inner(x_aff, s_aff) / total_dim;
    const double expon = std::max(1.0, 3.0 * std::pow(std::min(ap_aff, ad_aff), 2));
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, expon), 0.0, 1.0);

    for (std::size_t k = 0; k < nblocks; ++k) {
      z[k] = sigma * mu * sinv[k] - it.x[k] - dx_aff[k] * ds_aff[k] * sinv[k];
    }
    Blocks dx, ds;
    RealVector dy;
    direction(z, dx, dy, ds);

    double ap = std::min(1.0, gamma * max_step(it.x, dx));
    double ad = std::min(1.0, gamma * max_step(it.s, ds));
    // Near the boundary the step bound can be off by rounding; backtrack
    // until both iterates factor as positive definite.
    Blocks x_next(nblocks), s_next(nblocks);
    bool interior = false;
    for (int tries = 0; tries < 30 && !interior; ++tries) {
      for (std::size_t k = 0; k < nblocks; ++k) {
        x_next[k] = herm(it.x[k] + ap * dx[k]);
        s_next[k] = herm(it.s[k] + ad * ds[k]);
      }
      interior = positive_definite(x_next) && positive_definite(s_next);
      if (!interior) {
        ap *= 0.8;
        ad *= 0.8;
      }
    }
    if (!interior) break;
    it.x = std::move(x_next);
    it.s = std::move(s_next);
    it.y += ad * dy;
    gamma = 0.9 + 0.09 * std::min(ap, ad);
    stalls = std::min(ap, ad) < 1e-9 ? stalls + 1 : 0;
  }

  sol.status = best.status;
  sol.x = std::move(best.x);
  sol.s = std::move(best.s);
  sol.y = std::move(best.y);
  sol.primal_objective = best.primal_objective;
  sol.dual_objective = best.dual_objective;
  sol.gap = best.gap;
  sol.primal_infeasibility = best.primal_infeasibility;
  sol.dual_infeasibility = best.dual_infeasibility;
  sol.iterations = best.iterations;
  return sol;
}

}  // namespace simulab::conic
