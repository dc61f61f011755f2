#include "simulab/linalg.hpp"

#include <cmath>
#include <limits>

#include "simulab/errors.hpp"

namespace simulab {

double max_abs(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

bool all_finite(const Matrix& a) {
  return a.allFinite();
}

HermitianOp::HermitianOp(const Matrix& a, double tol) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw StructuralError("HermitianOp needs a non-empty square matrix, got " +
                          std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  if (!a.allFinite()) throw DomainError("HermitianOp: non-finite entry");
  const double asym = max_abs(a - a.adjoint());
  if (asym > tol) {
    throw DomainError("HermitianOp: matrix is not Hermitian (max |A - A^+| = " +
                      std::to_string(asym) + ")");
  }
  m_ = 0.5 * (a + a.adjoint());
}

HermitianOp HermitianOp::hermitian_part(const Matrix& a) {
  if (a.rows() != a.cols()) throw StructuralError("hermitian_part: matrix not square");
  return HermitianOp(Matrix(0.5 * (a + a.adjoint())), Unchecked{});
}

HermitianOp HermitianOp::zero(int dim) { return HermitianOp(Matrix::Zero(dim, dim), Unchecked{}); }

HermitianOp HermitianOp::identity(int dim) {
  return HermitianOp(Matrix::Identity(dim, dim), Unchecked{});
}

HermitianOp HermitianOp::projector(const Vector& v) {
  return HermitianOp(Matrix(v * v.adjoint()), Unchecked{});
}

HermitianOp operator+(const HermitianOp& a, const HermitianOp& b) {
  return HermitianOp(Matrix(a.m_ + b.m_), HermitianOp::Unchecked{});
}

HermitianOp operator-(const HermitianOp& a, const HermitianOp& b) {
  return HermitianOp(Matrix(a.m_ - b.m_), HermitianOp::Unchecked{});
}

HermitianOp operator*(double s, const HermitianOp& a) {
  return HermitianOp(Matrix(s * a.m_), HermitianOp::Unchecked{});
}

EigenDecomposition eig_hermitian(const HermitianOp& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw SolverError("eig_hermitian: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

SingularValueDecomposition svd(const Matrix& a) {
  if (!a.allFinite()) throw DomainError("svd: non-finite entry");
  Eigen::JacobiSVD<Matrix> solver(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (solver.info() != Eigen::Success) throw SolverError("svd: did not converge");
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

int numerical_rank(const Matrix& a, double tol) {
  if (!(tol > 0)) throw DomainError("numerical_rank: tol must be positive");
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> solver(a);
  const RealVector& s = solver.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol * s(0)) ++rank;
  }
  return rank;
}

double min_eigenvalue(const HermitianOp& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw SolverError("min_eigenvalue: no convergence");
  return solver.eigenvalues()(0);
}

double max_eigenvalue(const HermitianOp& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw SolverError("max_eigenvalue: no convergence");
  return solver.eigenvalues()(solver.eigenvalues().size() - 1);
}

double unitarity_residual(const Matrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()));
}

bool is_unitary(const Matrix& u, double tol) { return unitarity_residual(u) <= tol; }

Matrix exp_i(const HermitianOp& h) {
  const auto e = eig_hermitian(h);
  Vector phases(e.eigenvalues.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::polar(1.0, e.eigenvalues(i));
  }
  return e.eigenvectors * phases.asDiagonal() * e.eigenvectors.adjoint();
}

Matrix inverse_sqrt(const HermitianOp& a) {
  const auto e = eig_hermitian(a);
  if (e.eigenvalues(0) <= 0) throw DomainError("inverse_sqrt: operator not positive definite");
  const Vector w = e.eigenvalues.cwiseSqrt().cwiseInverse().cast<Complex>();
  return e.eigenvectors * w.asDiagonal() * e.eigenvectors.adjoint();
}

Matrix coordinate_projector(int dim, const std::vector<int>& subset) {
  Matrix p = Matrix::Zero(static_cast<Eigen::Index>(subset.size()), dim);
  for (std::size_t r = 0; r < subset.size(); ++r) {
    if (subset[r] < 0 || subset[r] >= dim) {
      throw DomainError("coordinate_projector: index out of range");
    }
    p(static_cast<Eigen::Index>(r), subset[r]) = 1.0;
  }
  return p;
}

std::vector<std::vector<int>> combinations(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace simulab
