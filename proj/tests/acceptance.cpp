// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "simulab/mub.hpp"
#include "simulab/peb.hpp"
#include "simulab/sdp.hpp"
#include "simulab/simulate.hpp"
#include "simulab/thresholds.hpp"

using namespace simulab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s -- %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Published two-decimal values of eta_{d->n}.
const std::map<std::pair<int, int>, double> kTable = {
    {{2, 1}, 0.5},  {{3, 1}, 0.42}, {{3, 2}, 0.70}, {{4, 1}, 0.36}, {{4, 2}, 0.56},
    {{4, 3}, 0.77}, {{5, 1}, 0.32}, {{5, 2}, 0.48}, {{5, 3}, 0.64}, {{5, 4}, 0.81},
    {{6, 1}, 0.29}, {{6, 2}, 0.42}, {{6, 3}, 0.55}, {{6, 4}, 0.70}, {{6, 5}, 0.84}};

constexpr std::uint64_t kSeed = 0;
constexpr int kTableSamples = 20000;

}  // namespace

int main() {
  const int jobs = std::max(1u, std::thread::hardware_concurrency());
  std::printf("acceptance run: seed %llu, %d worker thread(s)\n", static_cast<unsigned long long>(kSeed), jobs);

  // Table cells are shared by criteria 1, 2 and 6.
  std::map<std::pair<int, int>, ThresholdEstimate> cells;
  const auto t_table = Clock::now();
  for (const auto& [cell, published] : kTable) {
    const auto [d, n] = cell;
    const auto t0 = Clock::now();
    cells[cell] = estimate_x(d, n, kTableSamples, threshold_stream(kSeed, d, n), kThresholdGapTol, jobs);
    const auto& e = cells[cell];
    std::printf("  cell d=%d n=%d: eta %.4f +- %.4f (published %.2f), max gap %.1e, %.1f s\n", d, n, e.eta,
                e.eta_stderr, published, e.max_gap, seconds_since(t0));
    std::fflush(stdout);
  }
  const double table_time = seconds_since(t_table);

  {
    bool ok = true;
    double worst = 0.0;
    for (const auto& [cell, published] : kTable) {
      const double dev = std::abs(cells[cell].eta - published);
      worst = std::max(worst, dev);
      ok = ok && dev <= 0.01 && cells[cell].max_gap <= kThresholdGapTol;
    }
    report(1, "threshold table", ok,
           "15 cells at 2e4 samples, worst |eta - published| = " + fmt("%.4f", worst) + " (tol 0.01), " +
               fmt("%.0f s", table_time) + " with " + std::to_string(jobs) + " thread(s)");
  }

  {
    bool ok = true;
    std::string detail;
    for (int d = 2; d <= 6; ++d) {
      const auto& e = cells[{d, 1}];
      const double exact = eta_d_to_1(d);
      const bool in = e.ci95.first <= exact && exact <= e.ci95.second;
      ok = ok && in;
      detail += "d=" + std::to_string(d) + ": " + fmt("%.4f", exact) + (in ? " in " : " NOT in ") + "[" +
                fmt("%.4f", e.ci95.first) + ", " + fmt("%.4f", e.ci95.second) + "]; ";
    }
    report(2, "n=1 estimates against the harmonic closed form", ok, detail);
  }

  {
    struct Case {
      int d, n, m;
    };
    bool ok = true;
    std::string detail;
    for (const Case c : {Case{3, 2, 2}, Case{3, 2, 4}, Case{5, 3, 3}, Case{7, 4, 2}}) {
      const auto t0 = Clock::now();
      const Claim1Model cm = claim1_construction(c.d, c.n, c.m);
      const double res = verify_simulation(cm.model, white_noise(cm.sharp, cm.eta));
      const double dt = seconds_since(t0);
      ok = ok && res <= 1e-10 && dt < 1.0;
      detail += "(" + std::to_string(c.d) + "," + std::to_string(c.n) + "," + std::to_string(c.m) + ") eta " +
                fmt("%.4f", cm.eta) + " residual " + fmt("%.1e", res) + " in " + fmt("%.3f s", dt) + "; ";
    }
    ok = ok && claim1_threshold(3, 2, 2) == 0.75 && claim1_threshold(3, 2, 4) == 0.625;
    report(3, "analytic MUB construction", ok, detail);
  }

  {
    const Assemblage pair = to_assemblage(mub_bases(3, 2));
    const auto t0 = Clock::now();
    bool ok = true;
    std::string detail;
    for (const auto& [nb, target] : std::vector<std::pair<int, double>>{{2, 0.775}, {3, 0.82}}) {
      const auto t1 = Clock::now();
      SearchOptions opt;
      opt.restarts = 20;
      opt.jobs = jobs;
      const auto res = visibility_search(pair, 2, nb, SeededStream{kSeed, static_cast<std::uint64_t>(nb)}, opt);
      const auto& rep = res.solution.report;
      const auto model = model_from_visibility(pair, projective_kraus_family(res.bases, 2), res.solution);
      const double model_res = verify_simulation(model, white_noise(pair, res.certified_feasible_eta));
      ok = ok && res.certified_feasible_eta >= target && rep.primal_residual <= 1e-7 && rep.gap <= 1e-8 &&
           model_res <= 1e-7;
      detail += "|mu|=" + std::to_string(nb) + ": eta " + fmt("%.4f", res.certified_feasible_eta) + " (need " +
                fmt("%.3f", target) + "), residual " + fmt("%.1e", rep.primal_residual) + ", gap " +
                fmt("%.1e", rep.gap) + ", model residual " + fmt("%.1e", model_res) + ", " +
                fmt("%.0f s", seconds_since(t1)) + "; ";
    }
    const double dt = seconds_since(t0);
    ok = ok && dt <= 600.0;
    report(4, "compression visibility search", ok, detail + "total " + fmt("%.0f s", dt));
  }

  {
    const auto two = solve_jm_robustness(to_assemblage(mub_bases(3, 2)));
    const auto four = solve_jm_robustness(to_assemblage(mub_bases(3, 4)));
    const double exact = 0.5 * (1.0 + 1.0 / (1.0 + std::sqrt(3.0)));
    const bool ok = two.report.optimal() && four.report.optimal() && std::abs(two.eta - exact) <= 1e-4 &&
                    std::abs(four.eta - 0.4818) <= 1e-3;
    report(5, "joint measurability robustness", ok,
           "pair " + fmt("%.6f", two.eta) + " (closed form " + fmt("%.6f", exact) + "), four MUBs " +
               fmt("%.6f", four.eta) + " (published 0.4818)");
  }

  {
    bool ok = true;
    std::string detail;
    for (const auto& [cell, published] : kTable) {
      const auto [d, n] = cell;
      const auto& e = cells[cell];
      const double sigma = e.eta_stderr;
      bool cell_ok = e.eta <= upper_bound(d, n) + 3 * sigma;
      if (n == d - 1) cell_ok = cell_ok && lower_bound_dminus1(d) - 3 * sigma <= e.eta;
      ok = ok && cell_ok;
      if (!cell_ok) detail += "violated at (" + std::to_string(d) + "," + std::to_string(n) + "); ";
    }
    const auto& spot = cells[{3, 2}];
    detail += "spot (3,2): " + fmt("%.3f", lower_bound_dminus1(3)) + " <= " + fmt("%.3f", spot.eta) +
              " <= " + fmt("%.3f", upper_bound(3, 2));
    report(6, "closed-form bound sandwich", ok, detail);
  }

  {
    bool ok = true;
    std::string detail;
    for (const auto& [d, n] : std::vector<std::pair<int, int>>{{3, 2}, {4, 2}, {6, 3}}) {
      const auto t = theta_mc(d, n, 100000, SeededStream{kSeed + 7, static_cast<std::uint64_t>(d * 64 + n)}, jobs);
      const double exact = theta(d, n);
      const double z = std::abs(t.mean - exact) / t.standard_error;
      ok = ok && z <= 3.0;
      detail += "(" + std::to_string(d) + "," + std::to_string(n) + ") " + fmt("%.5f", t.mean) + " vs " +
                fmt("%.5f", exact) + " (" + fmt("%.2f sigma", z) + "); ";
    }
    report(7, "symmetric-subspace moment", ok, detail);
  }

  {
    bool ok = true;
    std::string detail;
    for (const auto& [d, n] : std::vector<std::pair<int, int>>{{2, 1}, {3, 2}}) {
      const auto est = estimate_compressed_povm(d, n, 0, 10000,
                                                SeededStream{kSeed + 8, static_cast<std::uint64_t>(d * 64 + n)},
                                                kThresholdGapTol, jobs);
      const double eta = eta_from_x(d, est.x);
      double worst_z = 0.0;
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
          const double target = r == c ? (r == 0 ? eta : 0.0) + (1.0 - eta) / d : 0.0;
          const double zr = std::abs(est.mean(r, c).real() - target) / std::max(est.stderr_re(r, c), 1e-300);
          const double zi = std::abs(est.mean(r, c).imag()) / std::max(est.stderr_im(r, c), 1e-300);
          // Entries that are exactly zero in every sample have no spread.
          if (est.stderr_re(r, c) > 0) worst_z = std::max(worst_z, zr);
          if (est.stderr_im(r, c) > 0) worst_z = std::max(worst_z, zi);
        }
      }
      ok = ok && worst_z <= 3.0;
      detail += "(" + std::to_string(d) + "," + std::to_string(n) + ") eta " + fmt("%.4f", eta) +
                ", worst entry " + fmt("%.2f sigma", worst_z) + "; ";
    }
    report(8, "averaged compressed POVM is diagonal noisy form", ok, detail);
  }

  {
    Engine rng = SeededStream{kSeed + 9, 0}.engine();
    std::uniform_int_distribution<int> pick(2, 5);
    double worst = 0.0;
    bool ranks_ok = true;
    for (int t = 0; t < 100; ++t) {
      const int d = pick(rng);
      const int n = std::uniform_int_distribution<int>(1, d)(rng);
      // Channel -> instrument.
      const int out = pick(rng) + 1;
      const int nn = std::min(n, out);
      const Channel ch = random_peb_channel(d, out, nn, (d + nn - 1) / nn + t % 3, rng);
      const Assemblage target(out, {random_povm(out, 3, rng), random_povm(out, 2, rng)});
      const SimulationModel m = channel_to_instrument(ch, nn, target);
      worst = std::max(worst, verify_simulation(m, channel_adjoint(ch, target)));
      ranks_ok = ranks_ok && kraus_rank_bound(ch).n_bound <= nn && m.instrument.output_dim() == nn &&
                 m.instrument.normalization_residual() <= 1e-10;
      // Instrument -> channel -> instrument.
      const Channel source = random_peb_channel(d, n, n, (d + n - 1) / n + t % 2, rng);
      const Instrument inst(d, n, source.kraus());
      std::vector<std::vector<Povm>> meas(2);
      for (int l = 0; l < inst.size(); ++l) {
        meas[0].push_back(random_povm(n, 2, rng));
        meas[1].push_back(random_povm(n, 3, rng));
      }
      const SimulationModel model{inst, meas};
      const Channel lifted = instrument_to_channel(inst);
      const Assemblage nprime = lift_measurements(model);
      const Assemblage original = simulated_assemblage(model);
      worst = std::max(worst, verify_simulation(model, channel_adjoint(lifted, nprime)));
      const SimulationModel back = channel_to_instrument(lifted, n, nprime);
      worst = std::max(worst, verify_simulation(back, original));
      ranks_ok = ranks_ok && kraus_rank_bound(lifted).n_bound <= n && lifted.normalization_residual() <= 1e-10;
    }
    report(9, "channel and instrument round trips", worst <= 1e-10 && ranks_ok,
           "100 instances each way, worst residual " + fmt("%.1e", worst) + (ranks_ok ? ", ranks preserved" : ", RANK VIOLATION"));
  }

  {
    Engine rng = SeededStream{kSeed + 10, 0}.engine();
    std::uniform_int_distribution<int> pick_d(2, 6);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    int optimal = 0, gap_ok = 0, n1 = 0;
    double worst_gap = 0.0, worst_n1 = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const int d = pick_d(rng);
      const int n = std::uniform_int_distribution<int>(1, std::min(d, 5))(rng);
      std::vector<HermitianOp> states;
      if (t % 2 == 0) {
        // The threshold integrand: compressed Haar basis.
        const Matrix v = haar_unitary(d, rng);
        for (int a = 0; a < d; ++a) states.push_back(HermitianOp::projector(v.col(a).head(n)));
      } else {
        // Mixed states with random priors.
        const Povm p = random_povm(n, d, rng);
        for (int a = 0; a < d; ++a) states.push_back((unif(rng) / p[a].trace()) * p[a]);
      }
      const SdpReport r = solve_discrimination(states, 1e-8, 1e-8);
      optimal += r.optimal();
      gap_ok += r.gap <= 1e-8;
      worst_gap = std::max(worst_gap, r.gap);
      if (n == 1) {
        ++n1;
        double best = 0.0;
        for (const auto& s : states) best = std::max(best, s.trace());
        worst_n1 = std::max(worst_n1, std::abs(r.primal_value - best));
      }
    }
    report(10, "discrimination solver certification", optimal == 1000 && gap_ok == 1000 && worst_n1 <= 1e-12,
           std::to_string(optimal) + "/1000 optimal, worst gap " + fmt("%.1e", worst_gap) + ", " +
               std::to_string(n1) + " one-dimensional instances, worst |value - max p| " + fmt("%.1e", worst_n1));
  }

  std::printf("%s: %d criterion/criteria failed\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
