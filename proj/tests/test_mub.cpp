#include <doctest.h>

#include <cmath>
#include <string>

#include "simulab/errors.hpp"
#include "simulab/mub.hpp"

using namespace simulab;

TEST_CASE("qubit Pauli bases") {
  const auto fam = mub_bases(2, 3);
  REQUIRE(fam.bases.size() == 3);
  CHECK(max_abs(fam.bases[0] - Matrix::Identity(2, 2)) == 0.0);
  const double s = 1.0 / std::sqrt(2.0);
  // Columns (|0> + |1>)/sqrt2 and (|0> + i|1>)/sqrt2 up to ordering and phase.
  CHECK(std::abs(std::abs(fam.bases[1](0, 0)) - s) < 1e-15);
  CHECK(std::abs(std::abs(fam.bases[2](1, 0)) - s) < 1e-15);
  CHECK(std::abs((fam.bases[2](1, 0) / fam.bases[2](0, 0)).real()) < 1e-15);
  CHECK(unbiasedness_residual(fam) < 1e-12);
}

TEST_CASE("complete families in odd prime dimension") {
  for (int d : {3, 5, 7}) {
    const auto fam = mub_bases(d, d + 1);
    CHECK(fam.bases.size() == static_cast<std::size_t>(d + 1));
    CHECK(max_abs(fam.bases[0] - Matrix::Identity(d, d)) == 0.0);
    for (const auto& u : fam.bases) CHECK(unitarity_residual(u) <= 1e-12);
    // Exhaustive overlap check, independent of the residual helper.
    double worst = 0.0;
    for (std::size_t x = 0; x < fam.bases.size(); ++x) {
      for (std::size_t y = x + 1; y < fam.bases.size(); ++y) {
        const Matrix g = fam.bases[x].adjoint() * fam.bases[y];
        worst = std::max(worst, (g.cwiseAbs2().array() - 1.0 / d).abs().maxCoeff());
      }
    }
    CHECK(worst <= 1e-10);
    CHECK(unbiasedness_residual(fam) <= 1e-10);
  }
}

TEST_CASE("noisy MUB measurement has the expected form") {
  const auto fam = mub_bases(3, 2);
  const Assemblage a = white_noise(to_assemblage(fam), 0.6);
  for (int i = 0; i < 3; ++i) {
    const Vector v = fam.bases[1].col(i);
    const Matrix expected = 0.6 * v * v.adjoint() + 0.4 / 3 * Matrix::Identity(3, 3);
    CHECK(max_abs(a[1][i].matrix() - expected) < 1e-15);
  }
}

TEST_CASE("dimension errors") {
  CHECK_THROWS_AS(mub_bases(4, 2), UnsupportedDimensionError);
  try {
    mub_bases(6, 2);
  } catch (const UnsupportedDimensionError& e) {
    CHECK(std::string(e.what()).find("prime-power") != std::string::npos);
  }
  CHECK_THROWS_AS(mub_bases(3, 5), DomainError);
  CHECK_THROWS_AS(mub_bases(3, 0), DomainError);
  CHECK(is_prime(7));
  CHECK_FALSE(is_prime(9));
}
