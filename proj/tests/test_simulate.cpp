#include <doctest.h>

#include <cmath>

#include "simulab/errors.hpp"
#include "simulab/mub.hpp"
#include "simulab/sampling.hpp"
#include "simulab/sdp.hpp"
#include "simulab/simulate.hpp"

using namespace simulab;

TEST_CASE("analytic threshold") {
  CHECK(claim1_threshold(3, 2, 2) == doctest::Approx(0.75));
  CHECK(claim1_threshold(3, 2, 4) == doctest::Approx(0.625));
  for (int d : {2, 3, 5}) CHECK(claim1_threshold(d, d, 3) == 1.0);
  CHECK_THROWS_AS(claim1_threshold(1, 1, 2), DomainError);
  CHECK_THROWS_AS(claim1_threshold(3, 4, 2), DomainError);
  CHECK_THROWS_AS(claim1_threshold(3, 2, 0), DomainError);
}

TEST_CASE("analytic construction reproduces noisy MUBs exactly") {
  struct Case {
    int d, n, m;
    int kraus;
  };
  for (const Case c : {Case{3, 2, 2, 6}, Case{3, 2, 4, 12}, Case{5, 3, 3, 30}, Case{7, 4, 2, 70}, Case{2, 1, 3, 6}}) {
    const Claim1Model cm = claim1_construction(c.d, c.n, c.m);
    CHECK(cm.model.instrument.size() == c.kraus);
    CHECK(cm.model.instrument.normalization_residual() <= 1e-10);
    CHECK(cm.eta == claim1_threshold(c.d, c.n, c.m));
    CHECK(verify_simulation(cm.model, white_noise(cm.sharp, cm.eta)) <= 1e-10);
    for (const auto& row : cm.model.measurements) {
      for (const auto& p : row) CHECK(validate_povm(p).passed);
    }
  }
}

TEST_CASE("wrong visibility is detected with the exact deviation") {
  const Claim1Model cm = claim1_construction(3, 2, 2);
  // M^0.8 - M^0.75 = 0.05 (P - I/3) for rank-one P; its largest entry is 0.05 * 2/3.
  const double res = verify_simulation(cm.model, white_noise(cm.sharp, 0.8));
  CHECK(res == doctest::Approx(0.05 * 2.0 / 3.0).epsilon(1e-9));
  CHECK(res > 1e-3);
}

TEST_CASE("no compression reproduces the sharp measurements") {
  const Claim1Model cm = claim1_construction(3, 3, 2);
  CHECK(cm.eta == 1.0);
  CHECK(verify_simulation(cm.model, cm.sharp) <= 1e-12);

  const Assemblage a = to_assemblage(mub_bases(3, 2));
  const SimulationModel trivial{Instrument(3, 3, {Matrix::Identity(3, 3)}), {{a[0]}, {a[1]}}};
  CHECK(verify_simulation(trivial, a) == 0.0);
}

TEST_CASE("instrument validation") {
  CHECK_THROWS_AS(Instrument(3, 2, {coordinate_projector(3, {0, 1})}), DomainError);
  CHECK_THROWS_AS(Instrument(3, 2, {Matrix::Identity(3, 3)}), StructuralError);
  CHECK_THROWS_AS(Instrument(3, 3, {}), StructuralError);

  const Assemblage a = to_assemblage(mub_bases(3, 2));
  const SimulationModel bad{Instrument(3, 3, {Matrix::Identity(3, 3)}), {{a[0], a[1]}, {a[1]}}};
  CHECK_THROWS_AS(verify_simulation(bad, a), StructuralError);
}

TEST_CASE("a single basis measurement needs no noise") {
  const Assemblage z(3, {basis_pvm(Matrix::Identity(3, 3))});
  const auto sol = solve_visibility(z, projective_kraus_family({Matrix::Identity(3, 3)}, 2));
  CHECK(sol.report.optimal());
  CHECK(sol.eta == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("multiplier gradient agrees with finite differences") {
  const Assemblage a = to_assemblage(mub_bases(3, 2));
  Engine rng = SeededStream{5, 0}.engine();
  const std::vector<Matrix> bases{haar_unitary(3, rng), haar_unitary(3, rng)};
  const auto sol = solve_visibility(a, projective_kraus_family(bases, 2), 1e-10, 1e-10);
  REQUIRE(sol.report.optimal());
  const auto grad = compression_gradient(bases, 2, sol);
  for (std::size_t mu = 0; mu < bases.size(); ++mu) {
    const HermitianOp h = random_hermitian(3, rng);
    const double eps = 1e-4;
    auto plus = bases, minus = bases;
    plus[mu] = exp_i(eps * h) * plus[mu];
    minus[mu] = exp_i(-eps * h) * minus[mu];
    const double ep = solve_visibility(a, projective_kraus_family(plus, 2), 1e-11, 1e-11).eta;
    const double em = solve_visibility(a, projective_kraus_family(minus, 2), 1e-11, 1e-11).eta;
    const double fd = (ep - em) / (2 * eps);
    const double analytic = (h.matrix() * grad[mu].matrix()).trace().real();
    CHECK(std::abs(fd - analytic) <= 1e-4 * std::max(1.0, std::abs(analytic)));
  }
}

TEST_CASE("visibility search") {
  const Assemblage a = to_assemblage(mub_bases(3, 2));
  SearchOptions quick;
  quick.restarts = 2;
  quick.step_end = 1e-2;

  const auto full = visibility_search(a, 3, 1, SeededStream{1, 0}, quick);
  CHECK(full.certified_feasible_eta == doctest::Approx(1.0).epsilon(1e-7));

  const auto res = visibility_search(a, 2, 2, SeededStream{1, 0}, quick);
  CHECK(res.solution.report.optimal());
  CHECK(res.solution.report.gap <= 1e-8);
  CHECK(res.certified_feasible_eta > 0.6);
  const auto model = model_from_visibility(a, projective_kraus_family(res.bases, 2), res.solution);
  CHECK(verify_simulation(model, white_noise(a, res.certified_feasible_eta)) <= 1e-7);

  // Best-so-far: more restarts on the same seed never lose ground.
  SearchOptions more = quick;
  more.restarts = 3;
  const auto res3 = visibility_search(a, 2, 2, SeededStream{1, 0}, more);
  CHECK(res3.certified_feasible_eta >= res.certified_feasible_eta - 1e-6);

  // Worker count does not change the outcome.
  more.jobs = 3;
  const auto par = visibility_search(a, 2, 2, SeededStream{1, 0}, more);
  CHECK(par.certified_feasible_eta == res3.certified_feasible_eta);
  CHECK(par.restart_eta == res3.restart_eta);

  CHECK_THROWS_AS(visibility_search(a, 4, 1, SeededStream{}, quick), DomainError);
}
