#pragma once

#include <vector>

#include "simulab/linalg.hpp"
#include "simulab/measurements.hpp"
#include "simulab/sampling.hpp"
#include "simulab/simulate.hpp"

namespace simulab {

inline constexpr double kRankTol = 1e-9;

/// Quantum channel in Kraus form; each operator is output_dim x input_dim.
class Channel {
 public:
  Channel() = default;
  Channel(int input_dim, int output_dim, std::vector<Matrix> kraus, double tol = kDerivedTol);

  int input_dim() const { return input_dim_; }
  int output_dim() const { return output_dim_; }
  const std::vector<Matrix>& kraus() const { return kraus_; }

  double normalization_residual() const;

 private:
  int input_dim_ = 0;
  int output_dim_ = 0;
  std::vector<Matrix> kraus_;
};

struct PebCertificate {
  int n_bound = 0;
  std::vector<int> per_kraus_ranks;
};

/// Numerical ranks (relative tolerance) of the Kraus operators. A channel
/// whose Kraus operators all have rank <= n is n-partially entanglement
/// breaking.
PebCertificate kraus_rank_bound(const Channel& ch, double tol = kRankTol);

/// Heisenberg picture: sum_l K_l^+ op K_l.
HermitianOp channel_adjoint(const Channel& ch, const HermitianOp& op);
Assemblage channel_adjoint(const Channel& ch, const Assemblage& measurements);

/// Splits every Kraus operator as K = U D V^+ and keeps the instrument
/// E_l = D V^+ (padded to n rows) followed by N_{a|x,l} = U^+ N'_{a|x} U.
/// Requires every Kraus rank to be at most n.
SimulationModel channel_to_instrument(const Channel& ch, int n, const Assemblage& measurements,
                                      double tol = kRankTol);

/// Channel rho -> sum_l E_l[rho] (x) |l><l| into dimension n * |lambda|. The
/// classical label is the major index: output index = l * n + i.
Channel instrument_to_channel(const Instrument& inst);

/// Block-diagonal N'_{a|x} = (+)_l N_{a|x,l} matching instrument_to_channel.
Assemblage lift_measurements(const SimulationModel& model);

/// Random channel C^d -> C^out whose `count` Kraus operators have rank <= n.
/// Trace preservation needs count * n >= d.
Channel random_peb_channel(int d, int out, int n, int count, Engine& rng);

/// Random POVM with full-rank-ish Wishart elements, normalised exactly.
Povm random_povm(int dim, int outcomes, Engine& rng);

}  // namespace simulab
