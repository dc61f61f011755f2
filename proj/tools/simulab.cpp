// Command-line front end. Every JSON result carries the version, the seed and
// the parameters it was computed from; exit codes are 0 (ok), 2 (invalid
// input) and 3 (solver failure).
#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "simulab/errors.hpp"
#include "simulab/io.hpp"
#include "simulab/mub.hpp"
#include "simulab/peb.hpp"
#include "simulab/sdp.hpp"
#include "simulab/simulate.hpp"
#include "simulab/thresholds.hpp"
#include "simulab/version.hpp"

using namespace simulab;
using io::Json;

namespace {

struct Common {
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string format = "json";
};

Json envelope(const Common& c, Json parameters) {
  return {{"version", kVersion}, {"seed", c.seed}, {"parameters", std::move(parameters)}};
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

void require_json(const Common& c, const char* cmd) {
  if (c.format != "json") throw DomainError(std::string(cmd) + ": only --format json is supported");
}

Json report_json(const SdpReport& r) {
  return {{"gap", r.gap},
          {"primal_value", r.primal_value},
          {"dual_value", r.dual_value},
          {"primal_residual", r.primal_residual},
          {"dual_residual", r.dual_residual},
          {"iterations", r.iterations},
          {"status", conic::to_string(r.status)}};
}

Json model_json(const SimulationModel& m) {
  Json kraus = Json::array();
  for (const auto& k : m.instrument.kraus()) kraus.push_back(io::matrix_to_json(k));
  Json meas = Json::array();
  for (const auto& row : m.measurements) {
    Json r = Json::array();
    for (const auto& p : row) {
      Json el = Json::array();
      for (const auto& e : p.elements()) el.push_back(io::matrix_to_json(e.matrix()));
      r.push_back({{"elements", std::move(el)}});
    }
    meas.push_back(std::move(r));
  }
  return {{"kraus", std::move(kraus)}, {"measurements", std::move(meas)}};
}

Json estimate_json(const ThresholdEstimate& e) {
  return {{"d", e.d},
          {"n", e.n},
          {"samples", e.samples},
          {"x_mean", e.x_mean},
          {"x_stderr", e.x_stderr},
          {"eta", e.eta},
          {"eta_stderr", e.eta_stderr},
          {"ci95", {e.ci95.first, e.ci95.second}},
          {"master_seed", e.master_seed},
          {"max_gap", e.max_gap}};
}

std::string sig6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Quick invariant checks, well under a minute on one core.
int run_selftest(const Common& c) {
  Json checks = Json::array();
  bool all = true;
  auto check = [&](const std::string& name, bool ok, double value) {
    checks.push_back({{"name", name}, {"passed", ok}, {"value", value}});
    all = all && ok;
  };

  {
    const auto cm = claim1_construction(3, 2, 2);
    const double res = verify_simulation(cm.model, white_noise(cm.sharp, cm.eta));
    check("claim1 (3,2,2) reproduces eta = 0.75", res <= 1e-10 && std::abs(cm.eta - 0.75) < 1e-15, res);
  }
  {
    const auto jm = solve_jm_robustness(to_assemblage(mub_bases(3, 2)));
    const double target = 0.5 * (1.0 + 1.0 / (1.0 + std::sqrt(3.0)));
    check("jm robustness of the d=3 MUB pair", jm.report.optimal() && std::abs(jm.eta - target) < 1e-4, jm.eta);
  }
  {
    const auto fixed = solve_visibility(to_assemblage(mub_bases(3, 2)),
                                        projective_kraus_family(mub_bases(3, 2).bases, 2));
    check("visibility with the MUB compression family", fixed.report.optimal() && std::abs(fixed.eta - 0.75) < 1e-6,
          fixed.eta);
  }
  {
    double worst = 0.0;
    bool ok = true;
    for (std::uint64_t i = 0; i < 50; ++i) {
      const Matrix v = haar_unitary(4, SeededStream{c.seed, i});
      std::vector<HermitianOp> states;
      double best = 0.0;
      for (int a = 0; a < 4; ++a) {
        states.push_back(HermitianOp::projector(v.col(a).head(1)));
        best = std::max(best, states.back().trace());
      }
      const auto rep = solve_discrimination(states);
      ok = ok && rep.optimal();
      worst = std::max(worst, std::abs(rep.primal_value - best));
    }
    check("n=1 discrimination equals max_a p_a", ok && worst <= 1e-12, worst);
  }
  {
    const auto e = estimate_x(2, 1, 4000, SeededStream{c.seed, 0}, kThresholdGapTol, c.jobs);
    check("eta_{2->1} estimate within 4 sigma of 0.5", std::abs(e.eta - 0.5) <= 4 * e.eta_stderr + 1e-12, e.eta);
  }
  {
    const auto t = theta_mc(3, 2, 20000, SeededStream{c.seed, 1}, c.jobs);
    check("theta_mc(3,2) within 3 sigma of 1/2", std::abs(t.mean - 0.5) <= 3 * t.standard_error, t.mean);
  }
  {
    Engine rng = SeededStream{c.seed, 2}.engine();
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const Channel ch = random_peb_channel(3, 3, 2, 3, rng);
      const Assemblage target(3, {random_povm(3, 3, rng), random_povm(3, 2, rng)});
      const SimulationModel m = channel_to_instrument(ch, 2, target);
      worst = std::max(worst, verify_simulation(m, channel_adjoint(ch, target)));
    }
    check("channel to instrument round trip", worst <= 1e-10, worst);
  }
  {
    const double u = upper_bound(3, 2);
    const double l = lower_bound_dminus1(3);
    check("bounds at (3,2)", std::abs(l - 0.375) < 1e-12 && std::abs(u - (0.75 * std::sqrt(3.0) - 0.5)) < 1e-12, u);
  }

  Json out = envelope(c, Json::object());
  out["checks"] = std::move(checks);
  out["passed"] = all;
  emit(out);
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compression of quantum measurements: simulation models, SDP certificates and thresholds"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common common;
  auto add_common = [&](CLI::App* sub, bool jobs) {
    sub->add_option("--seed", common.seed, "Master seed (falls back to SIMULAB_SEED, then 0)")
        ->envname("SIMULAB_SEED");
    sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    if (jobs) sub->add_option("--jobs", common.jobs, "Worker threads")->check(CLI::Range(1, 1024));
  };

  std::function<int()> action;

  // mub
  int d = 0, n = 0, m = 0, samples = kDefaultThresholdSamples, bases = 1, restarts = 20, dmax = 6;
  double gap_tol = -1.0;
  bool verify = false, with_model = false;
  std::string input, bases_file, channel_file;

  auto* mub = app.add_subcommand("mub", "Emit the first m mutually unbiased bases as an assemblage");
  mub->add_option("--d", d, "Prime dimension")->required()->check(CLI::PositiveNumber);
  mub->add_option("--m", m, "Number of bases")->required()->check(CLI::PositiveNumber);
  add_common(mub, false);
  mub->callback([&] {
    action = [&] {
      require_json(common, "mub");
      const MubFamily fam = mub_bases(d, m);
      Json out = envelope(common, {{"d", d}, {"m", m}});
      out.update(io::assemblage_to_json(to_assemblage(fam)));
      out["unbiasedness_residual"] = unbiasedness_residual(fam);
      emit(out);
      return 0;
    };
  });

  auto* claim1 = app.add_subcommand("claim1", "Analytic MUB compression model");
  claim1->add_option("--d", d)->required()->check(CLI::PositiveNumber);
  claim1->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  claim1->add_option("--m", m)->required()->check(CLI::PositiveNumber);
  claim1->add_flag("--verify", verify, "Check the operator identity");
  claim1->add_flag("--model", with_model, "Include the instrument and measurements");
  add_common(claim1, false);
  claim1->callback([&] {
    action = [&] {
      require_json(common, "claim1");
      const Claim1Model cm = claim1_construction(d, n, m);
      Json out = envelope(common, {{"d", d}, {"n", n}, {"m", m}});
      out["eta"] = cm.eta;
      out["kraus_count"] = cm.model.instrument.size();
      out["normalization_residual"] = cm.model.instrument.normalization_residual();
      if (verify) out["residual"] = verify_simulation(cm.model, white_noise(cm.sharp, cm.eta));
      if (with_model) out["model"] = model_json(cm.model);
      emit(out);
      return 0;
    };
  });

  auto* vis = app.add_subcommand("visibility", "Search compression bases for the largest simulable visibility");
  vis->add_option("--input", input, "Assemblage JSON ('-' for stdin)")->required();
  vis->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  vis->add_option("--bases", bases, "Number of compression bases")->check(CLI::PositiveNumber);
  vis->add_option("--restarts", restarts)->check(CLI::PositiveNumber);
  vis->add_flag("--model", with_model, "Include the certified model");
  add_common(vis, true);
  vis->callback([&] {
    action = [&] {
      require_json(common, "visibility");
      const Assemblage a = io::assemblage_from_json(io::read_json(input));
      SearchOptions opt;
      opt.restarts = restarts;
      opt.jobs = common.jobs;
      // The stream index is the number of bases, so different |mu| runs are independent.
      const auto res =
          visibility_search(a, n, bases, SeededStream{common.seed, static_cast<std::uint64_t>(bases)}, opt);
      Json out = envelope(common, {{"input", input},
                                   {"n", n},
                                   {"bases", bases},
                                   {"restarts", restarts},
                                   {"step_start", opt.step_start},
                                   {"step_end", opt.step_end},
                                   {"step_shrink", opt.step_shrink},
                                   {"failures_per_step", opt.failures_per_step},
                                   {"search_gap_tol", opt.search_gap_tol},
                                   {"gap_tol", opt.gap_tol}});
      out["eta"] = res.certified_feasible_eta;
      out.update(report_json(res.solution.report));
      out["restart_eta"] = res.restart_eta;
      out["best_restart"] = res.best_restart;
      out["solves"] = res.solves;
      Json b = Json::array();
      for (const auto& u : res.bases) b.push_back(io::matrix_to_json(u));
      out["bases"] = std::move(b);
      const auto kraus = projective_kraus_family(res.bases, n);
      const SimulationModel model = model_from_visibility(a, kraus, res.solution);
      out["model_residual"] = verify_simulation(model, white_noise(a, res.certified_feasible_eta));
      if (with_model) out["model"] = model_json(model);
      emit(out);
      return res.solution.report.optimal() ? 0 : 3;
    };
  });

  auto* svis = app.add_subcommand("sdp-visibility", "Visibility SDP for fixed compression bases");
  svis->add_option("--input", input, "Assemblage JSON ('-' for stdin)")->required();
  svis->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  svis->add_option("--bases-file", bases_file, "JSON {\"bases\": [...]}; default is the computational basis");
  add_common(svis, false);
  svis->callback([&] {
    action = [&] {
      require_json(common, "sdp-visibility");
      const Assemblage a = io::assemblage_from_json(io::read_json(input));
      std::vector<Matrix> us;
      if (bases_file.empty()) {
        us.push_back(Matrix::Identity(a.dim(), a.dim()));
      } else {
        us = io::bases_from_json(io::read_json(bases_file));
      }
      const auto sol = solve_visibility(a, projective_kraus_family(us, n));
      Json out = envelope(common, {{"input", input}, {"n", n}, {"bases_file", bases_file}});
      out["eta"] = sol.eta;
      out.update(report_json(sol.report));
      emit(out);
      return sol.report.status == SdpStatus::max_iterations ? 3 : 0;
    };
  });

  auto* jm = app.add_subcommand("jm", "White-noise robustness of joint measurability");
  jm->add_option("--input", input, "Assemblage JSON ('-' for stdin)")->required();
  add_common(jm, false);
  jm->callback([&] {
    action = [&] {
      require_json(common, "jm");
      const Assemblage a = io::assemblage_from_json(io::read_json(input));
      const auto sol = solve_jm_robustness(a);
      Json out = envelope(common, {{"input", input}});
      out["eta"] = sol.eta;
      out.update(report_json(sol.report));
      out["parent_outcomes"] = sol.responses.size();
      emit(out);
      return sol.report.optimal() ? 0 : 3;
    };
  });

  auto* thr = app.add_subcommand("threshold", "Monte Carlo estimate of eta_{d->n} for all noisy PVMs");
  thr->add_option("--d", d)->required()->check(CLI::PositiveNumber);
  thr->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  thr->add_option("--samples", samples)->check(CLI::Range(2, 100000000));
  thr->add_option("--gap-tol", gap_tol, "Per-sample duality gap tolerance")->check(CLI::PositiveNumber);
  add_common(thr, true);
  thr->callback([&] {
    action = [&] {
      require_json(common, "threshold");
      const double tol = gap_tol > 0 ? gap_tol : kThresholdGapTol;
      const auto e = estimate_x(d, n, samples, threshold_stream(common.seed, d, n), tol, common.jobs);
      Json out = envelope(common, {{"d", d}, {"n", n}, {"samples", samples}, {"gap_tol", tol}});
      out.update(estimate_json(e));
      emit(out);
      return 0;
    };
  });

  auto* table = app.add_subcommand("table1", "Thresholds eta_{d->n} for 2 <= d <= dmax and 1 <= n < d");
  table->add_option("--samples", samples)->check(CLI::Range(2, 100000000));
  table->add_option("--dmax", dmax)->check(CLI::Range(2, kMaxThresholdDim));
  add_common(table, true);
  table->callback([&] {
    action = [&] {
      std::vector<ThresholdEstimate> cells;
      for (int dd = 2; dd <= dmax; ++dd) {
        for (int nn = 1; nn < dd; ++nn) {
          cells.push_back(
              estimate_x(dd, nn, samples, threshold_stream(common.seed, dd, nn), kThresholdGapTol, common.jobs));
        }
      }
      if (common.format == "csv") {
        std::cout << "d,n,eta,stderr\n";
        for (const auto& e : cells) {
          std::cout << e.d << "," << e.n << "," << sig6(e.eta) << "," << sig6(e.eta_stderr) << "\n";
        }
      } else {
        Json out = envelope(common, {{"samples", samples}, {"dmax", dmax}});
        Json rows = Json::array();
        for (const auto& e : cells) rows.push_back(estimate_json(e));
        out["cells"] = std::move(rows);
        emit(out);
      }
      return 0;
    };
  });

  auto* bnd = app.add_subcommand("bounds", "Closed-form bounds on eta_{d->n}");
  bnd->add_option("--d", d)->required()->check(CLI::PositiveNumber);
  bnd->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  add_common(bnd, false);
  bnd->callback([&] {
    action = [&] {
      require_json(common, "bounds");
      Json out = envelope(common, {{"d", d}, {"n", n}});
      out["upper"] = upper_bound(d, n);
      if (n == 1) out["eta_d_to_1"] = eta_d_to_1(d);
      if (n == d - 1) {
        out["lower"] = lower_bound_dminus1(d);
        out["lower_x"] = lower_bound_x_dminus1(d);
      }
      out["theta"] = theta(d, n);
      emit(out);
      return 0;
    };
  });

  auto* peb = app.add_subcommand("peb-check", "Kraus-rank certificate for a channel");
  peb->add_option("--channel", channel_file, "Channel JSON ('-' for stdin)")->required();
  add_common(peb, false);
  peb->callback([&] {
    action = [&] {
      require_json(common, "peb-check");
      const Channel ch = io::channel_from_json(io::read_json(channel_file));
      const PebCertificate cert = kraus_rank_bound(ch);
      Json out = envelope(common, {{"channel", channel_file}, {"rank_tol", kRankTol}});
      out["n_bound"] = cert.n_bound;
      out["per_kraus_ranks"] = cert.per_kraus_ranks;
      out["normalization_residual"] = ch.normalization_residual();
      emit(out);
      return 0;
    };
  });

  auto* self = app.add_subcommand("selftest", "Fast invariant checks");
  add_common(self, true);
  self->callback([&] {
    action = [&] {
      require_json(common, "selftest");
      return run_selftest(common);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return action();
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
