#pragma once

#include <vector>

#include "simulab/linalg.hpp"

namespace simulab {

inline constexpr double kPsdTol = 1e-9;

/// Outcome-indexed list of effects on C^dim (outcomes are 0-based).
///
/// Construction only checks shapes; use validate_povm for positivity and
/// completeness.
class Povm {
 public:
  Povm() = default;
  Povm(int dim, std::vector<HermitianOp> elements);
  explicit Povm(std::vector<HermitianOp> elements);

  int dim() const { return dim_; }
  int outcomes() const { return static_cast<int>(elements_.size()); }
  const std::vector<HermitianOp>& elements() const { return elements_; }
  const HermitianOp& operator[](int a) const { return elements_[static_cast<std::size_t>(a)]; }

 private:
  int dim_ = 0;
  std::vector<HermitianOp> elements_;
};

/// Measurements indexed by setting x; outcome counts may differ per setting.
class Assemblage {
 public:
  Assemblage() = default;
  Assemblage(int dim, std::vector<Povm> settings);

  int dim() const { return dim_; }
  int settings() const { return static_cast<int>(settings_.size()); }
  const std::vector<Povm>& povms() const { return settings_; }
  const Povm& operator[](int x) const { return settings_[static_cast<std::size_t>(x)]; }

 private:
  int dim_ = 0;
  std::vector<Povm> settings_;
};

struct PovmReport {
  double min_eigenvalue = 0.0;         // smallest eigenvalue over all effects
  double completeness_residual = 0.0;  // max |(sum_a P_a - I)_ij|
  bool passed = false;
};

PovmReport validate_povm(const Povm& p, double tol = kPsdTol);

/// Worst report over all settings, passing iff every setting passes.
PovmReport validate_assemblage(const Assemblage& a, double tol = kPsdTol);

/// Projective measurement onto the columns of a unitary.
Povm basis_pvm(const Matrix& basis);

/// eta * M_a + (1 - eta) * Tr(M_a) * I/d
Povm white_noise(const Povm& m, double eta);
Assemblage white_noise(const Assemblage& m, double eta);

/// {eta * M_a} plus a trailing no-click effect (1 - eta) * I.
Povm lossy(const Povm& m, double eta);

/// sum_i |psi_i><psi_i| A |psi_i><psi_i| over the columns psi_i of `basis`.
HermitianOp twirl(const HermitianOp& a, const Matrix& basis);

/// Restriction Pi P_a Pi onto span{|i> : i in subset}, either compressed to
/// an n x n POVM or kept embedded in the original d x d space.
Povm restrict(const Povm& p, const std::vector<int>& subset, bool embed = false);

/// U^dagger P_a U for every effect.
Povm conjugate(const Povm& p, const Matrix& u);

}  // namespace simulab
