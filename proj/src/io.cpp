#include "simulab/io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "simulab/errors.hpp"

namespace simulab::io {

namespace {

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw StructuralError(where + ": missing field \"" + key + "\"");
  return j.at(key);
}

int positive_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 1) {
    throw StructuralError(where + ": expected a positive integer");
  }
  return j.get<int>();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw StructuralError(where + ": expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) throw StructuralError(where + ": row 0 is not a non-empty array");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw StructuralError(where + ": row " + std::to_string(i) + " has the wrong length");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      const Json& e = row[static_cast<std::size_t>(k)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw StructuralError(where + ": entry (" + std::to_string(i) + "," + std::to_string(k) +
                              ") is not a [re, im] pair");
      }
      m(i, k) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  if (!all_finite(m)) throw StructuralError(where + ": non-finite entry");
  return m;
}

Json assemblage_to_json(const Assemblage& a) {
  Json settings = Json::array();
  for (const auto& p : a.povms()) {
    Json el = Json::array();
    for (const auto& e : p.elements()) el.push_back(matrix_to_json(e.matrix()));
    settings.push_back({{"elements", std::move(el)}});
  }
  return {{"dim", a.dim()}, {"settings", std::move(settings)}};
}

Assemblage assemblage_from_json(const Json& j, double tol) {
  const int d = positive_int(field(j, "dim", "assemblage"), "assemblage.dim");
  const Json& settings = field(j, "settings", "assemblage");
  if (!settings.is_array() || settings.empty()) throw StructuralError("assemblage.settings: expected a non-empty array");
  std::vector<Povm> povms;
  for (std::size_t x = 0; x < settings.size(); ++x) {
    const std::string where = "assemblage.settings[" + std::to_string(x) + "]";
    const Json& els = field(settings[x], "elements", where);
    if (!els.is_array() || els.empty()) throw StructuralError(where + ".elements: expected a non-empty array");
    std::vector<HermitianOp> ops;
    for (std::size_t a = 0; a < els.size(); ++a) {
      const std::string w = where + ".elements[" + std::to_string(a) + "]";
      const Matrix m = matrix_from_json(els[a], w);
      if (m.rows() != d || m.cols() != d) throw StructuralError(w + ": expected a " + std::to_string(d) + "x" + std::to_string(d) + " matrix");
      if (max_abs(m - m.adjoint()) > tol) throw DomainError(w + ": not Hermitian");
      ops.push_back(HermitianOp::hermitian_part(m));
      if (min_eigenvalue(ops.back()) < -tol) {
        throw DomainError(w + ": not positive semidefinite (min eigenvalue " + fmt(min_eigenvalue(ops.back())) + ")");
      }
    }
    Povm p(d, std::move(ops));
    const PovmReport r = validate_povm(p, tol);
    if (!r.passed) {
      throw DomainError(where + ": elements do not sum to identity (residual " + fmt(r.completeness_residual) + ")");
    }
    povms.push_back(std::move(p));
  }
  return Assemblage(d, std::move(povms));
}

Json channel_to_json(const Channel& ch) {
  Json ops = Json::array();
  for (const auto& k : ch.kraus()) ops.push_back(matrix_to_json(k));
  return {{"input_dim", ch.input_dim()}, {"output_dim", ch.output_dim()}, {"kraus", std::move(ops)}};
}

Channel channel_from_json(const Json& j) {
  const int din = positive_int(field(j, "input_dim", "channel"), "channel.input_dim");
  const int dout = positive_int(field(j, "output_dim", "channel"), "channel.output_dim");
  const Json& ops = field(j, "kraus", "channel");
  if (!ops.is_array() || ops.empty()) throw StructuralError("channel.kraus: expected a non-empty array");
  std::vector<Matrix> kraus;
  for (std::size_t l = 0; l < ops.size(); ++l) {
    kraus.push_back(matrix_from_json(ops[l], "channel.kraus[" + std::to_string(l) + "]"));
  }
  return Channel(din, dout, std::move(kraus));
}

std::vector<Matrix> bases_from_json(const Json& j) {
  const Json& arr = field(j, "bases", "bases");
  if (!arr.is_array() || arr.empty()) throw StructuralError("bases: expected a non-empty array");
  std::vector<Matrix> out;
  for (std::size_t mu = 0; mu < arr.size(); ++mu) {
    const std::string where = "bases[" + std::to_string(mu) + "]";
    Matrix u = matrix_from_json(arr[mu], where);
    if (u.rows() != u.cols()) throw StructuralError(where + ": basis must be square");
    if (!is_unitary(u, kLoadTol)) throw DomainError(where + ": columns are not orthonormal");
    out.push_back(std::move(u));
  }
  return out;
}

Json read_json(const std::string& path) {
  try {
    if (path == "-") return Json::parse(std::cin);
    std::ifstream in(path);
    if (!in) throw StructuralError("cannot open " + path);
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw StructuralError("malformed JSON in " + (path == "-" ? std::string("stdin") : path) + ": " + e.what());
  }
}

}  // namespace simulab::io
