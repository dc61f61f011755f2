#include "simulab/peb.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "simulab/errors.hpp"

namespace simulab {

namespace {

Matrix ginibre(int rows, int cols, Engine& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return m;
}

}  // namespace

Channel::Channel(int input_dim, int output_dim, std::vector<Matrix> kraus, double tol)
    : input_dim_(input_dim), output_dim_(output_dim), kraus_(std::move(kraus)) {
  if (input_dim_ < 1 || output_dim_ < 1) throw StructuralError("Channel: dimensions must be positive");
  if (kraus_.empty()) throw StructuralError("Channel: no Kraus operators");
  for (std::size_t l = 0; l < kraus_.size(); ++l) {
    if (kraus_[l].rows() != output_dim_ || kraus_[l].cols() != input_dim_) {
      throw StructuralError("Channel: Kraus operator " + std::to_string(l) + " is not " +
                            std::to_string(output_dim_) + "x" + std::to_string(input_dim_));
    }
    if (!all_finite(kraus_[l])) throw StructuralError("Channel: Kraus operator " + std::to_string(l) + " not finite");
  }
  const double res = normalization_residual();
  if (res > tol) {
    throw StructuralError("Channel: not trace preserving, sum K^+ K differs from identity by " +
                          std::to_string(res));
  }
}

double Channel::normalization_residual() const {
  Matrix sum = Matrix::Zero(input_dim_, input_dim_);
  for (const auto& k : kraus_) sum += k.adjoint() * k;
  return max_abs(sum - Matrix::Identity(input_dim_, input_dim_));
}

PebCertificate kraus_rank_bound(const Channel& ch, double tol) {
  PebCertificate cert;
  for (const auto& k : ch.kraus()) {
    cert.per_kraus_ranks.push_back(numerical_rank(k, tol));
    cert.n_bound = std::max(cert.n_bound, cert.per_kraus_ranks.back());
  }
  return cert;
}

HermitianOp channel_adjoint(const Channel& ch, const HermitianOp& op) {
  if (op.dim() != ch.output_dim()) throw StructuralError("channel_adjoint: operator lives on the wrong space");
  Matrix sum = Matrix::Zero(ch.input_dim(), ch.input_dim());
  for (const auto& k : ch.kraus()) sum += k.adjoint() * op.matrix() * k;
  return HermitianOp::hermitian_part(sum);
}

Assemblage channel_adjoint(const Channel& ch, const Assemblage& measurements) {
  std::vector<Povm> settings;
  for (int x = 0; x < measurements.settings(); ++x) {
    std::vector<HermitianOp> el;
    for (int a = 0; a < measurements[x].outcomes(); ++a) el.push_back(channel_adjoint(ch, measurements[x][a]));
    settings.emplace_back(ch.input_dim(), std::move(el));
  }
  return Assemblage(ch.input_dim(), std::move(settings));
}

SimulationModel channel_to_instrument(const Channel& ch, int n, const Assemblage& measurements, double tol) {
  if (n < 1) throw DomainError("channel_to_instrument: need n >= 1");
  if (measurements.dim() != ch.output_dim()) {
    throw StructuralError("channel_to_instrument: measurements must act on the channel output");
  }
  const int d = ch.input_dim();
  std::vector<Matrix> ops;
  std::vector<std::vector<Povm>> meas(static_cast<std::size_t>(measurements.settings()));
  for (std::size_t l = 0; l < ch.kraus().size(); ++l) {
    const Matrix& k = ch.kraus()[l];
    const int rank = numerical_rank(k, tol);
    if (rank > n) {
      throw PreconditionError("channel_to_instrument: Kraus operator " + std::to_string(l) + " has rank " +
                              std::to_string(rank) + " > n = " + std::to_string(n));
    }
    const auto dec = svd(k);
    const int keep = std::min({n, d, ch.output_dim()});
    // E_l = D V^+ on the leading singular triplets; the remaining rows are zero.
    Matrix e = Matrix::Zero(n, d);
    e.topRows(keep) = dec.singular_values.head(keep).cast<Complex>().asDiagonal() *
                      dec.v.leftCols(keep).adjoint();
    ops.push_back(std::move(e));
    const Matrix u = dec.u.leftCols(keep);
    for (int x = 0; x < measurements.settings(); ++x) {
      std::vector<HermitianOp> el;
      for (int a = 0; a < measurements[x].outcomes(); ++a) {
        Matrix m = Matrix::Zero(n, n);
        m.topLeftCorner(keep, keep) = u.adjoint() * measurements[x][a].matrix() * u;
        // The padded rows never receive weight; any completion works.
        if (a == 0 && keep < n) m.bottomRightCorner(n - keep, n - keep).setIdentity();
        el.push_back(HermitianOp::hermitian_part(m));
      }
      meas[static_cast<std::size_t>(x)].emplace_back(n, std::move(el));
    }
  }
  return SimulationModel{Instrument(d, n, std::move(ops)), std::move(meas)};
}

Channel instrument_to_channel(const Instrument& inst) {
  const int n = inst.output_dim();
  const int count = inst.size();
  std::vector<Matrix> ops;
  for (int l = 0; l < count; ++l) {
    Matrix k = Matrix::Zero(n * count, inst.input_dim());
    k.middleRows(l * n, n) = inst.kraus()[static_cast<std::size_t>(l)];
    ops.push_back(std::move(k));
  }
  return Channel(inst.input_dim(), n * count, std::move(ops));
}

Assemblage lift_measurements(const SimulationModel& model) {
  const int n = model.instrument.output_dim();
  const int count = model.instrument.size();
  std::vector<Povm> settings;
  for (std::size_t x = 0; x < model.measurements.size(); ++x) {
    const auto& row = model.measurements[x];
    if (static_cast<int>(row.size()) != count) {
      throw StructuralError("lift_measurements: need one measurement per instrument outcome");
    }
    const int outcomes = row.front().outcomes();
    std::vector<HermitianOp> el;
    for (int a = 0; a < outcomes; ++a) {
      Matrix m = Matrix::Zero(n * count, n * count);
      for (int l = 0; l < count; ++l) m.block(l * n, l * n, n, n) = row[static_cast<std::size_t>(l)][a].matrix();
      el.push_back(HermitianOp::hermitian_part(m));
    }
    settings.emplace_back(n * count, std::move(el));
  }
  return Assemblage(n * count, std::move(settings));
}

Channel random_peb_channel(int d, int out, int n, int count, Engine& rng) {
  if (d < 1 || out < 1 || count < 1) throw DomainError("random_peb_channel: dimensions must be positive");
  if (n < 1 || n > std::min(d, out)) throw DomainError("random_peb_channel: need 1 <= n <= min(d, out)");
  if (count * n < d) throw DomainError("random_peb_channel: count * n < d cannot be trace preserving");
  std::vector<Matrix> ops;
  Matrix total = Matrix::Zero(d, d);
  for (int l = 0; l < count; ++l) {
    ops.push_back(ginibre(out, n, rng) * ginibre(n, d, rng));
    total += ops.back().adjoint() * ops.back();
  }
  const Matrix fix = inverse_sqrt(HermitianOp::hermitian_part(total));
  for (auto& k : ops) k = k * fix;
  return Channel(d, out, std::move(ops));
}

Povm random_povm(int dim, int outcomes, Engine& rng) {
  if (dim < 1 || outcomes < 1) throw DomainError("random_povm: dimensions must be positive");
  std::vector<Matrix> raw;
  Matrix total = Matrix::Zero(dim, dim);
  for (int a = 0; a < outcomes; ++a) {
    const Matrix g = ginibre(dim, dim, rng);
    raw.push_back(g * g.adjoint());
    total += raw.back();
  }
  const Matrix fix = inverse_sqrt(HermitianOp::hermitian_part(total));
  std::vector<HermitianOp> el;
  for (const auto& r : raw) el.push_back(HermitianOp::hermitian_part(fix * r * fix));
  return Povm(dim, std::move(el));
}

}  // namespace simulab
