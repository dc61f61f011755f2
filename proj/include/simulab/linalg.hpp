#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace simulab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kDerivedTol = 1e-9;

/// Largest absolute entry, the "infinity norm" used for all residuals here.
double max_abs(const Matrix& a);

bool all_finite(const Matrix& a);

/// Square complex matrix that is Hermitian within kHermitianTol.
///
/// The stored matrix is exactly Hermitian: construction checks the input and
/// then replaces it by (A + A^dagger)/2.
class HermitianOp {
 public:
  HermitianOp() = default;
  explicit HermitianOp(const Matrix& a, double tol = kHermitianTol);

  /// Hermitian part of an arbitrary square matrix; no tolerance check.
  static HermitianOp hermitian_part(const Matrix& a);
  static HermitianOp zero(int dim);
  static HermitianOp identity(int dim);
  /// |v><v|
  static HermitianOp projector(const Vector& v);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }

  double trace() const { return m_.diagonal().real().sum(); }

  friend HermitianOp operator+(const HermitianOp& a, const HermitianOp& b);
  friend HermitianOp operator-(const HermitianOp& a, const HermitianOp& b);
  friend HermitianOp operator*(double s, const HermitianOp& a);

 private:
  struct Unchecked {};
  HermitianOp(Matrix a, Unchecked) : m_(std::move(a)) {}
  Matrix m_;
};

struct EigenDecomposition {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // unitary, columns match eigenvalues
};

struct SingularValueDecomposition {
  Matrix u;                     // rows x rows, unitary
  RealVector singular_values;   // min(rows, cols), nonincreasing
  Matrix v;                     // cols x cols, unitary; a = u * Sigma * v^dagger
};

EigenDecomposition eig_hermitian(const HermitianOp& a);
SingularValueDecomposition svd(const Matrix& a);

/// Number of singular values strictly greater than tol * (largest one).
int numerical_rank(const Matrix& a, double tol);

double min_eigenvalue(const HermitianOp& a);
double max_eigenvalue(const HermitianOp& a);

/// max |(U^dagger U - I)_ij|
double unitarity_residual(const Matrix& u);
bool is_unitary(const Matrix& u, double tol);

/// exp(i H) for Hermitian H.
Matrix exp_i(const HermitianOp& h);

/// Inverse square root of a positive definite operator.
Matrix inverse_sqrt(const HermitianOp& a);

/// Matrix whose rows are the computational basis vectors listed in `subset`
/// (an n x d partial isometry projecting onto their span).
Matrix coordinate_projector(int dim, const std::vector<int>& subset);

/// All size-k subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> combinations(int n, int k);

long long binomial(int n, int k);

}  // namespace simulab
