#include "simulab/measurements.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "simulab/errors.hpp"

namespace simulab {

namespace {

void check_eta(double eta, const char* who) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw DomainError(std::string(who) + ": eta must lie in [0, 1], got " + std::to_string(eta));
  }
}

}  // namespace

Povm::Povm(int dim, std::vector<HermitianOp> elements) : dim_(dim), elements_(std::move(elements)) {
  if (dim_ < 1) throw StructuralError("Povm: dimension must be positive");
  for (std::size_t a = 0; a < elements_.size(); ++a) {
    if (elements_[a].dim() != dim_) {
      throw StructuralError("Povm: element " + std::to_string(a) + " has dimension " +
                            std::to_string(elements_[a].dim()) + ", expected " +
                            std::to_string(dim_));
    }
  }
}

Povm::Povm(std::vector<HermitianOp> elements)
    : Povm(elements.empty() ? 0 : elements.front().dim(), std::move(elements)) {}

Assemblage::Assemblage(int dim, std::vector<Povm> settings)
    : dim_(dim), settings_(std::move(settings)) {
  if (dim_ < 1) throw StructuralError("Assemblage: dimension must be positive");
  for (std::size_t x = 0; x < settings_.size(); ++x) {
    if (settings_[x].dim() != dim_) {
      throw StructuralError("Assemblage: setting " + std::to_string(x) + " has dimension " +
                            std::to_string(settings_[x].dim()) + ", expected " +
                            std::to_string(dim_));
    }
  }
}

PovmReport validate_povm(const Povm& p, double tol) {
  PovmReport r;
  Matrix sum = Matrix::Zero(p.dim(), p.dim());
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& e : p.elements()) {
    if (e.dim() != p.dim()) throw StructuralError("validate_povm: dimension mismatch");
    worst = std::min(worst, min_eigenvalue(e));
    sum += e.matrix();
  }
  r.min_eigenvalue = p.outcomes() == 0 ? 0.0 : worst;
  r.completeness_residual = max_abs(sum - Matrix::Identity(p.dim(), p.dim()));
  r.passed = r.min_eigenvalue >= -tol && r.completeness_residual <= tol;
  return r;
}

PovmReport validate_assemblage(const Assemblage& a, double tol) {
  PovmReport worst{0.0, 0.0, true};
  for (const auto& p : a.povms()) {
    const PovmReport r = validate_povm(p, tol);
    worst.min_eigenvalue = std::min(worst.min_eigenvalue, r.min_eigenvalue);
    worst.completeness_residual = std::max(worst.completeness_residual, r.completeness_residual);
    worst.passed = worst.passed && r.passed;
  }
  return worst;
}

Povm basis_pvm(const Matrix& basis) {
  if (basis.rows() != basis.cols()) throw StructuralError("basis_pvm: basis must be square");
  std::vector<HermitianOp> el;
  el.reserve(static_cast<std::size_t>(basis.cols()));
  for (Eigen::Index i = 0; i < basis.cols(); ++i) el.push_back(HermitianOp::projector(basis.col(i)));
  return Povm(static_cast<int>(basis.rows()), std::move(el));
}

Povm white_noise(const Povm& m, double eta) {
  check_eta(eta, "white_noise");
  const int d = m.dim();
  std::vector<HermitianOp> el;
  el.reserve(m.elements().size());
  for (const auto& e : m.elements()) {
    el.push_back(eta * e + ((1.0 - eta) * e.trace() / d) * HermitianOp::identity(d));
  }
  return Povm(d, std::move(el));
}

Assemblage white_noise(const Assemblage& m, double eta) {
  std::vector<Povm> out;
  out.reserve(m.povms().size());
  for (const auto& p : m.povms()) out.push_back(white_noise(p, eta));
  return Assemblage(m.dim(), std::move(out));
}

Povm lossy(const Povm& m, double eta) {
  check_eta(eta, "lossy");
  std::vector<HermitianOp> el;
  el.reserve(m.elements().size() + 1);
  for (const auto& e : m.elements()) el.push_back(eta * e);
  el.push_back((1.0 - eta) * HermitianOp::identity(m.dim()));
  return Povm(m.dim(), std::move(el));
}

HermitianOp twirl(const HermitianOp& a, const Matrix& basis) {
  if (basis.rows() != a.dim() || basis.cols() != a.dim()) {
    throw StructuralError("twirl: basis dimension does not match operator");
  }
  if (!is_unitary(basis, kDerivedTol)) throw DomainError("twirl: basis is not unitary");
  // Diagonal of A in the new basis, rotated back.
  const Matrix rotated = basis.adjoint() * a.matrix() * basis;
  const Vector diag = rotated.diagonal();
  return HermitianOp::hermitian_part(basis * diag.asDiagonal() * basis.adjoint());
}

Povm restrict(const Povm& p, const std::vector<int>& subset, bool embed) {
  const int d = p.dim();
  if (subset.empty() || static_cast<int>(subset.size()) > d) {
    throw DomainError("restrict: subset size must lie in [1, d]");
  }
  std::set<int> seen;
  for (int i : subset) {
    if (i < 0 || i >= d) throw DomainError("restrict: index " + std::to_string(i) + " out of range");
    if (!seen.insert(i).second) throw DomainError("restrict: repeated index " + std::to_string(i));
  }
  const Matrix proj = coordinate_projector(d, subset);
  std::vector<HermitianOp> el;
  el.reserve(p.elements().size());
  for (const auto& e : p.elements()) {
    Matrix c = proj * e.matrix() * proj.adjoint();
    if (embed) c = proj.adjoint() * c * proj;
    el.push_back(HermitianOp::hermitian_part(c));
  }
  return Povm(embed ? d : static_cast<int>(subset.size()), std::move(el));
}

Povm conjugate(const Povm& p, const Matrix& u) {
  if (u.rows() != p.dim() || u.cols() != p.dim()) throw StructuralError("conjugate: shape mismatch");
  std::vector<HermitianOp> el;
  el.reserve(p.elements().size());
  for (const auto& e : p.elements()) {
    el.push_back(HermitianOp::hermitian_part(u.adjoint() * e.matrix() * u));
  }
  return Povm(p.dim(), std::move(el));
}

}  // namespace simulab
