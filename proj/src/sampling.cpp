#include "simulab/sampling.hpp"

#include <cmath>

#include "simulab/errors.hpp"

namespace simulab {

namespace {

Matrix ginibre(int rows, int cols, Engine& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix g(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  }
  return g;
}

void check_dim(int d, const char* who) {
  if (d < 1) throw DomainError(std::string(who) + ": dimension must be >= 1");
}

}  // namespace

Engine SeededStream::engine() const {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream_index),
                    static_cast<std::uint32_t>(stream_index >> 32)};
  return Engine(seq);
}

SeededStream SeededStream::substream(std::uint64_t index) const {
  // Mix the parent index into a fresh master seed so that nested streams do
  // not collide with sibling stream indices.
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream_index),
                    static_cast<std::uint32_t>(stream_index >> 32), 0x5eedu};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  const std::uint64_t mixed = (static_cast<std::uint64_t>(words[1]) << 32) | words[0];
  return SeededStream{mixed, index};
}

Matrix haar_unitary(int d, Engine& rng) {
  check_dim(d, "haar_unitary");
  const Matrix g = ginibre(d, d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix& r = qr.matrixQR();
  for (int i = 0; i < d; ++i) {
    const Complex rii = r(i, i);
    const double mag = std::abs(rii);
    q.col(i) *= mag > 0 ? rii / mag : Complex(1.0);
  }
  return q;
}

Matrix haar_unitary(int d, const SeededStream& stream) {
  Engine rng = stream.engine();
  return haar_unitary(d, rng);
}

Vector haar_state(int d, Engine& rng) {
  check_dim(d, "haar_state");
  // A normalised complex Gaussian vector has the same law as the first
  // column of a Haar unitary.
  Vector v = ginibre(d, 1, rng).col(0);
  return v / v.norm();
}

Vector haar_state(int d, const SeededStream& stream) {
  Engine rng = stream.engine();
  return haar_state(d, rng);
}

HermitianOp random_hermitian(int d, Engine& rng) {
  check_dim(d, "random_hermitian");
  const Matrix g = ginibre(d, d, rng);
  return HermitianOp::hermitian_part(Matrix(g + g.adjoint()) * (1.0 / std::sqrt(2.0)));
}

Matrix covariant_kraus(const Matrix& v, int n) {
  const int d = static_cast<int>(v.rows());
  if (v.rows() != v.cols()) throw StructuralError("covariant_kraus: V must be square");
  if (n < 1 || n > d) throw DomainError("covariant_kraus: need 1 <= n <= d");
  return std::sqrt(static_cast<double>(d) / n) * v.topRows(n);
}

}  // namespace simulab
