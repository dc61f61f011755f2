#pragma once

#include <vector>

#include "simulab/linalg.hpp"
#include "simulab/measurements.hpp"
#include "simulab/sampling.hpp"
#include "simulab/sdp.hpp"

namespace simulab {

/// Quantum instrument given by Kraus operators C^d -> C^n, one per classical
/// outcome lambda (the index into `kraus`). `group` optionally records which
/// compression basis mu produced each operator.
class Instrument {
 public:
  Instrument() = default;
  Instrument(int input_dim, int output_dim, std::vector<Matrix> kraus, std::vector<int> group = {},
             double tol = kDerivedTol);

  int input_dim() const { return input_dim_; }
  int output_dim() const { return output_dim_; }
  int size() const { return static_cast<int>(kraus_.size()); }
  const std::vector<Matrix>& kraus() const { return kraus_; }
  const std::vector<int>& group() const { return group_; }

  /// max |(sum_l K_l^+ K_l - I)_ij|
  double normalization_residual() const;

 private:
  int input_dim_ = 0;
  int output_dim_ = 0;
  std::vector<Matrix> kraus_;
  std::vector<int> group_;
};

/// Instrument plus the measurement performed after each outcome:
/// measurements[x][lambda] is a POVM on C^n.
struct SimulationModel {
  Instrument instrument;
  std::vector<std::vector<Povm>> measurements;
};

/// sum_l K_l^+ N_{a|x,l} K_l for every (x, a).
Assemblage simulated_assemblage(const SimulationModel& model);

/// max over (a, x) of |sum_l K_l^+ N_{a|x,l} K_l - M_{a|x}|_max. The
/// operator identity is equivalent to reproducing the statistics on every
/// state.
double verify_simulation(const SimulationModel& model, const Assemblage& target);

/// Largest visibility reached by the analytic MUB construction:
/// 1 - ((m-1)/m) * ((d-n)/(d-1)).
double claim1_threshold(int d, int n, int m);

struct Claim1Model {
  SimulationModel model;
  double eta = 0.0;
  Assemblage sharp;  // the m MUB projective measurements
};

/// Random choice of one of the m MUBs, projection onto a uniformly chosen
/// n-subset of its vectors, then the restricted measurements.
Claim1Model claim1_construction(int d, int n, int m);

struct SearchOptions {
  int restarts = 20;
  double step_start = 0.3;
  double step_end = 1e-3;
  double step_shrink = 0.5;
  int failures_per_step = 4;
  double search_gap_tol = 1e-6;  // inner solves while climbing
  double gap_tol = kDefaultGapTol;  // final certified solve
  double feas_tol = kDefaultFeasTol;
  int jobs = 1;
};

struct VisibilitySearchResult {
  double certified_feasible_eta = 0.0;  // a lower bound on the true threshold
  std::vector<Matrix> bases;            // columns are the compression basis vectors
  VisibilitySolution solution;
  std::vector<double> restart_eta;      // best eta reached by each restart
  int best_restart = -1;
  int solves = 0;
};

/// Hill climbing over the compression bases U_mu from Haar-random starts.
/// Each step rotates all bases along the multiplier gradient
/// (compression_gradient); when that fails, random rotations exp(i eps H) of
/// a single basis are tried, and eps shrinks geometrically after repeated
/// failures. Candidates are scored by solve_visibility with the family
/// Pi_lambda U_mu^+. The winning bases are re-solved at the final
/// tolerance; an eta is only reported with a passing certificate.
VisibilitySearchResult visibility_search(const Assemblage& assemblage, int n, int num_bases,
                                         const SeededStream& stream, const SearchOptions& options = {});

/// Derivative of the optimal visibility along U_mu -> exp(i eps H) U_mu:
/// d eta / d eps = Tr(H G_mu) to first order, computed from the multipliers
/// of a solution for the family projective_kraus_family(bases, n).
std::vector<HermitianOp> compression_gradient(const std::vector<Matrix>& bases, int n,
                                              const VisibilitySolution& solution);

/// Turns a visibility solution into an explicit model: Kraus sqrt(alpha_j) K_j
/// and measurements Nt / alpha_j, each renormalised to an exact instrument and
/// exact POVMs. Operators with negligible alpha are dropped.
SimulationModel model_from_visibility(const Assemblage& assemblage, const std::vector<Matrix>& kraus,
                                      const VisibilitySolution& solution);

}  // namespace simulab
