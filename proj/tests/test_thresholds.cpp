#include <doctest.h>

#include <cmath>

#include "simulab/errors.hpp"
#include "simulab/thresholds.hpp"

using namespace simulab;

TEST_CASE("closed forms") {
  CHECK(eta_from_x(3, 1.0) == doctest::Approx(1.0));
  CHECK(eta_from_x(4, 0.25) == doctest::Approx(0.0));
  CHECK(eta_from_x(2, 0.75) == doctest::Approx(0.5));
  CHECK_THROWS_AS(eta_from_x(1, 0.5), DomainError);

  CHECK(eta_d_to_1(2) == doctest::Approx(0.5));
  CHECK(eta_d_to_1(3) == doctest::Approx(5.0 / 12.0));
  CHECK(std::abs(eta_d_to_1(6) - 0.29) < 0.005);

  CHECK(upper_bound(4, 4) == doctest::Approx(1.0));
  CHECK(upper_bound(3, 2) == doctest::Approx((3 * std::sqrt(0.75) - 1) / 2));
  CHECK(upper_bound(3, 2) == doctest::Approx(0.7990).epsilon(1e-4));
  CHECK(upper_bound(2, 1) == doctest::Approx(2 * std::sqrt(2.0 / 3.0) - 1));

  CHECK(lower_bound_dminus1(2) == doctest::Approx(0.0));
  CHECK(lower_bound_dminus1(3) == doctest::Approx(0.375));
  CHECK(lower_bound_x_dminus1(3) == doctest::Approx((3 - 11.0 / 6) / 2));
  CHECK(eta_from_x(3, lower_bound_x_dminus1(3)) == doctest::Approx(lower_bound_dminus1(3)));
  CHECK(lower_bound_dminus1(3) <= 0.70);
  CHECK(0.70 <= upper_bound(3, 2));

  CHECK(theta(5, 5) == doctest::Approx(1.0));
  CHECK(theta(3, 2) == doctest::Approx(0.5));
}

TEST_CASE("no compression gives x = 1") {
  const auto e = estimate_x(4, 4, 10, SeededStream{1, 0});
  CHECK(e.x_mean == 1.0);
  CHECK(e.eta == 1.0);
  CHECK(e.x_stderr == 0.0);
}

TEST_CASE("qubit threshold matches the harmonic formula") {
  const auto e = estimate_x(2, 1, 20000, threshold_stream(7, 2, 1));
  CHECK(std::abs(e.x_mean - 0.75) <= 3 * e.x_stderr);
  CHECK(std::abs(e.eta - 0.5) <= 3 * e.eta_stderr);
  CHECK(e.eta_stderr == doctest::Approx(2.0 * e.x_stderr));
  CHECK(e.ci95.first == doctest::Approx(e.eta - 1.96 * e.eta_stderr));
  CHECK(e.max_gap <= kThresholdGapTol);
}

TEST_CASE("estimates are independent of the worker count") {
  const auto a = estimate_x(3, 2, 300, SeededStream{99, 1}, kThresholdGapTol, 1);
  const auto b = estimate_x(3, 2, 300, SeededStream{99, 1}, kThresholdGapTol, 4);
  CHECK(a.x_mean == b.x_mean);
  CHECK(a.x_stderr == b.x_stderr);
  CHECK(a.eta == b.eta);
}

TEST_CASE("estimates respect the closed-form bounds") {
  const auto e = estimate_x(3, 2, 2000, threshold_stream(0, 3, 2));
  CHECK(e.eta <= upper_bound(3, 2) + 3 * e.eta_stderr);
  CHECK(e.eta >= lower_bound_dminus1(3) - 3 * e.eta_stderr);
  CHECK(std::abs(e.eta - 0.70) < 0.03);
  const auto e1 = estimate_x(3, 1, 2000, threshold_stream(0, 3, 1));
  CHECK(e1.eta < e.eta);
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(estimate_x(3, 4, 10, SeededStream{}), DomainError);
  CHECK_THROWS_AS(estimate_x(3, 2, 1, SeededStream{}), DomainError);
  CHECK_THROWS_AS(estimate_x(9, 2, 10, SeededStream{}), ResourceError);
  CHECK_THROWS_AS(theta(3, 0), DomainError);
}

TEST_CASE("theta by Monte Carlo") {
  const auto t = theta_mc(3, 2, 100000, SeededStream{3, 0});
  CHECK(std::abs(t.mean - 0.5) <= 3 * t.standard_error);
}

TEST_CASE("compressed POVM has the diagonal noisy form") {
  const auto trivial = estimate_compressed_povm(3, 3, 1, 50, SeededStream{4, 0});
  Matrix expected = Matrix::Zero(3, 3);
  expected(1, 1) = 1.0;
  CHECK(max_abs(trivial.mean - expected) < 1e-12);

  const auto est = estimate_compressed_povm(2, 1, 0, 5000, SeededStream{4, 1});
  const double eta = eta_from_x(2, est.x);
  CHECK(std::abs(eta - 0.5) < 0.05);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      const double target = (r == c) ? ((r == 0 ? eta : 0.0) + (1 - eta) / 2) : 0.0;
      CHECK(std::abs(est.mean(r, c).real() - target) <= 3 * est.stderr_re(r, c) + 1e-12);
      CHECK(std::abs(est.mean(r, c).imag()) <= 3 * est.stderr_im(r, c) + 1e-12);
    }
  }
}
