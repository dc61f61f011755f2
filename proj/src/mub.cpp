#include "simulab/mub.hpp"

#include <cmath>
#include <numbers>

#include "simulab/errors.hpp"

namespace simulab {

bool is_prime(int d) {
  if (d < 2) return false;
  for (int k = 2; k * k <= d; ++k) {
    if (d % k == 0) return false;
  }
  return true;
}

MubFamily mub_bases(int d, int m) {
  if (!is_prime(d)) {
    throw UnsupportedDimensionError(
        "mub_bases: dimension " + std::to_string(d) +
        " is not prime; prime-power (Galois field) constructions are out of scope");
  }
  if (m < 1 || m > d + 1) {
    throw DomainError("mub_bases: need 1 <= m <= d+1 = " + std::to_string(d + 1) + ", got " +
                      std::to_string(m));
  }
  MubFamily family{d, {}};
  family.bases.reserve(static_cast<std::size_t>(m));
  family.bases.push_back(Matrix::Identity(d, d));

  if (d == 2) {
    const double s = 1.0 / std::sqrt(2.0);
    const Complex i(0.0, 1.0);
    Matrix x(2, 2), y(2, 2);
    x << s, s, s, -s;
    y << s, s, s * i, -s * i;
    if (m >= 2) family.bases.push_back(x);
    if (m >= 3) family.bases.push_back(y);
    return family;
  }

  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int k = 1; k < m; ++k) {
    Matrix b(d, d);
    for (int a = 0; a < d; ++a) {
      for (int j = 0; j < d; ++j) {
        // Exponent reduced mod d keeps the phases exact for larger d.
        const long e = (static_cast<long>(k - 1) * j * j + static_cast<long>(a) * j) % d;
        b(j, a) = std::polar(norm, 2.0 * std::numbers::pi * static_cast<double>(e) / d);
      }
    }
    family.bases.push_back(std::move(b));
  }
  return family;
}

Assemblage to_assemblage(const MubFamily& family) {
  std::vector<Povm> pvms;
  pvms.reserve(family.bases.size());
  for (const auto& b : family.bases) pvms.push_back(basis_pvm(b));
  return Assemblage(family.dim, std::move(pvms));
}

double unbiasedness_residual(const MubFamily& family) {
  double worst = 0.0;
  const double target = 1.0 / family.dim;
  for (std::size_t x = 0; x < family.bases.size(); ++x) {
    for (std::size_t y = x + 1; y < family.bases.size(); ++y) {
      const Matrix overlaps = family.bases[x].adjoint() * family.bases[y];
      worst = std::max(worst, (overlaps.cwiseAbs2().array() - target).abs().maxCoeff());
    }
  }
  return worst;
}

}  // namespace simulab
