#include "gmeact/json_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace gmeact {

namespace {

std::vector<double> number_array(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw std::invalid_argument(std::string("missing array field '") + key + "'");
  }
  std::vector<double> out;
  out.reserve(j.at(key).size());
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw std::invalid_argument(std::string("non-numeric entry in '") + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

Dims dims_field(const json& j) {
  if (!j.contains("dims") || !j.at("dims").is_array()) {
    throw std::invalid_argument("missing array field 'dims'");
  }
  return j.at("dims").get<Dims>();
}

}  // namespace

json matrix_to_json(const Matrix& m, const Dims& dims) {
  std::vector<double> re;
  std::vector<double> im;
  re.reserve(static_cast<std::size_t>(m.size()));
  im.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  }
  return json{{"dims", dims}, {"re", re}, {"im", im}};
}

Matrix matrix_from_json(const json& j, Dims* dims_out) {
  if (!j.is_object()) throw std::invalid_argument("matrix JSON must be an object");
  const Dims dims = dims_field(j);
  const auto re = number_array(j, "re");
  const auto im = number_array(j, "im");
  if (re.size() != im.size()) throw std::invalid_argument("'re' and 'im' differ in length");
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(re.size()))));
  if (static_cast<std::size_t>(n * n) != re.size()) {
    throw std::invalid_argument("matrix entry count is not a perfect square");
  }
  if (product(dims) != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("matrix dims do not match entry count");
  }
  Matrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto k = static_cast<std::size_t>(r * n + c);
      m(r, c) = cplx(re[k], im[k]);
    }
  }
  if (dims_out) *dims_out = dims;
  return m;
}

json ket_to_json(const Ket& ket) {
  std::vector<double> re;
  std::vector<double> im;
  for (Eigen::Index i = 0; i < ket.size(); ++i) {
    re.push_back(ket.amplitudes()(i).real());
    im.push_back(ket.amplitudes()(i).imag());
  }
  return json{{"dims", ket.dims()}, {"amps_re", re}, {"amps_im", im}};
}

Ket ket_from_json(const json& j) {
  const Dims dims = dims_field(j);
  const auto re = number_array(j, "amps_re");
  const auto im = number_array(j, "amps_im");
  if (re.size() != im.size()) throw std::invalid_argument("'amps_re' and 'amps_im' differ in length");
  Vector v(static_cast<Eigen::Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i) v(static_cast<Eigen::Index>(i)) = cplx(re[i], im[i]);
  return Ket(std::move(v), dims);
}

json density_to_json(const DensityMatrix& rho) { return matrix_to_json(rho.matrix(), rho.dims()); }

DensityMatrix density_from_json(const json& j) {
  Dims dims;
  Matrix m = matrix_from_json(j, &dims);
  return DensityMatrix(std::move(m), std::move(dims));
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(1) << '\n';
}

}  // namespace gmeact
