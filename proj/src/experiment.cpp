#include "gmeact/experiment.hpp"

#include <cmath>
#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "gmeact/rng.hpp"
#include "gmeact/witness.hpp"

namespace gmeact {

bool NoiseModel::ideal() const {
  return depolarizing == 0.0 && std::all_of(dephasing.begin(), dephasing.end(), [](double g) { return g == 0.0; });
}

void NoiseModel::validate() const {
  if (!(depolarizing >= 0.0 && depolarizing <= 1.0)) throw std::invalid_argument("depolarizing strength outside [0, 1]");
  if (!dephasing.empty() && dephasing.size() != 3) throw std::invalid_argument("dephasing needs one strength per qubit");
  for (double g : dephasing) {
    if (!(g >= 0.0 && g <= 1.0)) throw std::invalid_argument("dephasing strength outside [0, 1]");
  }
}

Matrix NoiseModel::apply(const Matrix& rho) const {
  if (rho.rows() != 8) throw std::invalid_argument("noise model acts on three-qubit constituents");
  Matrix out = (1.0 - depolarizing) * rho + depolarizing * Matrix::Identity(8, 8) / 8.0;
  for (std::size_t q = 0; q < dephasing.size(); ++q) {
    if (dephasing[q] == 0.0) continue;
    // Z on qubit q flips the sign of entries whose row and column bits differ.
    const int bit = 2 - static_cast<int>(q);
    for (int r = 0; r < 8; ++r) {
      for (int c = 0; c < 8; ++c) {
        if (((r >> bit) & 1) != ((c >> bit) & 1)) out(r, c) *= 1.0 - dephasing[q];
      }
    }
  }
  return out;
}

json NoiseModel::to_json() const { return {{"depolarizing", depolarizing}, {"dephasing", dephasing}}; }

NoiseModel NoiseModel::from_json(const json& j) {
  NoiseModel n;
  n.depolarizing = j.value("depolarizing", 0.0);
  if (j.contains("dephasing")) n.dephasing = j["dephasing"].get<std::vector<double>>();
  n.validate();
  return n;
}

NoiseModel NoiseModel::parse(const std::string& spec) {
  NoiseModel n;
  if (spec.empty() || spec == "none") return n;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("noise spec items look like depol=0.05");
    const std::string key = item.substr(0, eq);
    double value = 0.0;
    try {
      value = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("noise strength is not a number: " + item);
    }
    if (key == "depol") n.depolarizing = value;
    else if (key == "dephase") n.dephasing.assign(3, value);
    else throw std::invalid_argument("unknown noise component '" + key + "'");
  }
  n.validate();
  return n;
}

namespace {

Matrix rotation(char letter) {
  const double r = 1.0 / std::sqrt(2.0);
  Matrix u(2, 2);
  switch (letter) {
    case 'Z': u << 1.0, 0.0, 0.0, 1.0; break;
    case 'X': u << r, r, r, -r; break;
    // H S^dagger
    case 'Y': u << cplx(r, 0), cplx(0, -r), cplx(r, 0), cplx(0, r); break;
    default: throw std::invalid_argument(std::string("measurement basis letter must be X, Y or Z, got '") + letter + "'");
  }
  return u;
}

std::vector<double> diagonal_probabilities(const Matrix& u, const Matrix& rho) {
  const Matrix ur = u * rho;
  std::vector<double> p(static_cast<std::size_t>(rho.rows()));
  double total = 0.0;
  for (Eigen::Index l = 0; l < rho.rows(); ++l) {
    const double v = std::max(0.0, (ur.row(l) * u.row(l).adjoint())(0, 0).real());
    p[static_cast<std::size_t>(l)] = v;
    total += v;
  }
  for (auto& v : p) v /= total;
  return p;
}

Matrix noisy_pair(const std::vector<Matrix>& singles, int i, int j) {
  static const auto perm = party_major_permutation(2);
  return permute_subsystems(kron(singles[i], singles[j]), Dims(6, 2), perm);
}

}  // namespace

Matrix measurement_rotation(std::string_view basis) {
  Matrix u = Matrix::Identity(1, 1);
  for (char c : basis) u = kron(u, rotation(c));
  return u;
}

std::vector<double> born_distribution(const Matrix& rho, std::string_view basis) {
  if ((Eigen::Index{1} << basis.size()) != rho.rows()) {
    throw std::invalid_argument("measurement basis length does not match state dimension");
  }
  return diagonal_probabilities(measurement_rotation(basis), rho);
}

std::vector<double> born_distribution(const DensityMatrix& rho, std::string_view basis) {
  return born_distribution(rho.matrix(), basis);
}

std::vector<std::string> witness_setting_words(const std::vector<PauliString>& pauli) {
  std::vector<std::string> words;
  for (const auto& t : pauli) words.push_back(t.word);
  std::vector<std::string> out;
  for (const auto& s : group_settings(words)) out.push_back(s.basis);
  return out;
}

json ShotTable::to_json() const {
  json f_j = json::array();
  for (int i = 0; i < constituents; ++i) {
    json fi = json::array();
    for (int j = 0; j < constituents; ++j) {
      json fij = json::array();
      for (std::size_t k = 0; k < settings.size(); ++k) {
        const double* r = row(i, j, static_cast<int>(k));
        fij.push_back(std::vector<double>(r, r + outcomes));
      }
      fi.push_back(std::move(fij));
    }
    f_j.push_back(std::move(fi));
  }
  return {{"format", "gmeact-shots-v1"}, {"n", shots},          {"seed", seed},  {"q", q},
          {"exact", exact},              {"noise", noise.to_json()}, {"setting_words", settings}, {"f", f_j}};
}

ShotTable ShotTable::from_json(const json& j) {
  try {
    if (j.at("format") != "gmeact-shots-v1") throw std::invalid_argument("unsupported shot table format");
    ShotTable t;
    t.shots = j.at("n").get<long>();
    t.seed = j.at("seed").get<std::uint64_t>();
    t.q = j.at("q").get<double>();
    t.exact = j.value("exact", false);
    if (j.contains("noise")) t.noise = NoiseModel::from_json(j["noise"]);
    t.settings = j.at("setting_words").get<std::vector<std::string>>();
    const auto& f = j.at("f");
    t.constituents = static_cast<int>(f.size());
    if (t.shots < 1) throw std::invalid_argument("shot count must be >= 1");
    if (t.settings.empty()) throw std::invalid_argument("shot table has no settings");
    t.outcomes = 1 << t.settings.front().size();
    t.f.assign(t.cells() * static_cast<std::size_t>(t.outcomes), 0.0);
    for (int i = 0; i < t.constituents; ++i) {
      if (static_cast<int>(f[i].size()) != t.constituents) throw std::invalid_argument("shot table is not square in (i, j)");
      for (int k2 = 0; k2 < t.constituents; ++k2) {
        if (f[i][k2].size() != t.settings.size()) throw std::invalid_argument("shot table setting count mismatch");
        for (std::size_t k = 0; k < t.settings.size(); ++k) {
          const auto r = f[i][k2][k].get<std::vector<double>>();
          if (static_cast<int>(r.size()) != t.outcomes) throw std::invalid_argument("shot table outcome count mismatch");
          std::copy(r.begin(), r.end(), t.row(i, k2, static_cast<int>(k)));
        }
      }
    }
    return t;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed shot table: ") + e.what());
  }
}

ShotTable sample_shot_table(const SimulationOptions& opt) {
  if (opt.shots < 1) throw std::invalid_argument("shots per setting must be >= 1");
  opt.noise.validate();
  mixture_spec(opt.q);  // range check
  ShotTable t;
  t.shots = opt.shots;
  t.q = opt.q;
  t.exact = true;
  t.noise = opt.noise;
  t.settings = opt.settings.empty() ? witness_setting_words(load_reference_witness().pauli) : opt.settings;
  t.outcomes = 1 << t.settings.front().size();
  if (t.outcomes != 64) throw std::invalid_argument("settings must address six qubits");
  t.f.assign(t.cells() * static_cast<std::size_t>(t.outcomes), 0.0);

  std::vector<Matrix> singles;
  for (int i = 0; i < t.constituents; ++i) singles.push_back(opt.noise.apply(constituent_ket(i).projector()));
  std::vector<Matrix> rotations;
  for (const auto& s : t.settings) rotations.push_back(measurement_rotation(s));
  for (int i = 0; i < t.constituents; ++i) {
    for (int j = 0; j < t.constituents; ++j) {
      const Matrix pair = noisy_pair(singles, i, j);
      for (std::size_t k = 0; k < t.settings.size(); ++k) {
        const auto p = diagonal_probabilities(rotations[k], pair);
        std::copy(p.begin(), p.end(), t.row(i, j, static_cast<int>(k)));
      }
    }
  }
  return opt.exact ? t : draw_shots(t, opt.shots, opt.seed);
}

ShotTable draw_shots(const ShotTable& exact, long shots, std::uint64_t seed) {
  if (!exact.exact) throw std::invalid_argument("draw_shots needs an exact-probability table");
  if (shots < 1) throw std::invalid_argument("shots per setting must be >= 1");
  ShotTable t = exact;
  t.exact = false;
  t.shots = shots;
  t.seed = seed;
  std::vector<double> cdf(static_cast<std::size_t>(t.outcomes));
  for (int i = 0; i < t.constituents; ++i) {
    for (int j = 0; j < t.constituents; ++j) {
      for (std::size_t k = 0; k < t.settings.size(); ++k) {
        const double* p = exact.row(i, j, static_cast<int>(k));
        double* r = t.row(i, j, static_cast<int>(k));
        std::partial_sum(p, p + t.outcomes, cdf.begin());
        std::fill(r, r + t.outcomes, 0.0);
        auto g = derived_stream(seed, {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j), k});
        for (long s = 0; s < shots; ++s) r[sample_index(g, cdf)] += 1.0;
        for (int l = 0; l < t.outcomes; ++l) r[l] /= static_cast<double>(shots);
      }
    }
  }
  return t;
}

EstimatorWeights estimator_weights(const std::vector<PauliString>& pauli, const std::vector<std::string>& settings,
                                   const MixtureSpec& mixture) {
  if (settings.empty()) throw std::invalid_argument("no measurement settings");
  EstimatorWeights w;
  w.settings = settings;
  const std::size_t nq = settings.front().size();
  w.outcomes = 1 << nq;
  const double norm = 1.0 / static_cast<double>(w.outcomes);

  // Per-setting outcome weights sum_k m_k h_k / 2^n; each word is read from
  // the first setting that contains it.
  std::vector<std::vector<double>> per_setting(settings.size(), std::vector<double>(w.outcomes, 0.0));
  for (const auto& t : pauli) {
    if (t.word.size() != nq) throw std::invalid_argument("witness word length does not match settings");
    std::size_t k = 0;
    for (; k < settings.size(); ++k) {
      bool readable = true;
      for (std::size_t mu = 0; mu < nq && readable; ++mu) readable = t.word[mu] == 'I' || t.word[mu] == settings[k][mu];
      if (readable) break;
    }
    if (k == settings.size()) throw std::invalid_argument("witness word " + t.word + " is not readable from any setting");
    const auto h = parity_vector(t.word);
    for (int l = 0; l < w.outcomes; ++l) per_setting[k][l] += t.weight * h[l] * norm;
  }
  w.m.assign(static_cast<std::size_t>(w.constituents * w.constituents) * settings.size() * w.outcomes, 0.0);
  for (int i = 0; i < w.constituents; ++i) {
    for (int j = 0; j < w.constituents; ++j) {
      const double ww = mixture.weights[i] * mixture.weights[j];
      for (std::size_t k = 0; k < settings.size(); ++k) {
        double* out = w.m.data() + ((static_cast<std::size_t>(i * w.constituents + j) * settings.size() + k) * w.outcomes);
        for (int l = 0; l < w.outcomes; ++l) out[l] = ww * per_setting[k][l];
      }
    }
  }
  return w;
}

namespace {

void check_shapes(const ShotTable& t, const EstimatorWeights& w) {
  if (t.settings != w.settings || t.outcomes != w.outcomes || t.constituents != w.constituents || t.f.size() != w.m.size()) {
    throw std::invalid_argument("shot table and estimator weights have different shapes");
  }
}

double dot(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int l = 0; l < n; ++l) s += a[l] * b[l];
  return s;
}

}  // namespace

double estimate_witness(const ShotTable& t, const EstimatorWeights& w) {
  check_shapes(t, w);
  double s = 0.0;
  for (std::size_t c = 0; c < t.cells(); ++c) s += dot(t.f.data() + c * t.outcomes, w.m.data() + c * w.outcomes, t.outcomes);
  return s;
}

double propagate_variance(const ShotTable& t, const EstimatorWeights& w) {
  check_shapes(t, w);
  if (t.exact) return 0.0;
  const double n = static_cast<double>(t.shots);
  double var = 0.0;
  std::vector<double> sigma_m(static_cast<std::size_t>(t.outcomes));
  for (std::size_t c = 0; c < t.cells(); ++c) {
    const double* f = t.f.data() + c * t.outcomes;
    const double* m = w.m.data() + c * w.outcomes;
    const double s = dot(f, m, t.outcomes);
    for (int l = 0; l < t.outcomes; ++l) {
      const double diag = f[l] * (1.0 - f[l]) / n * m[l];
      const double zeta = -f[l] * (s - f[l] * m[l]) / n;
      sigma_m[l] = diag + zeta;
    }
    var += dot(m, sigma_m.data(), t.outcomes);
  }
  return std::max(var, 0.0);
}

Eigen::MatrixXd cell_covariance(const double* f, int outcomes, long shots) {
  Eigen::Map<const Eigen::VectorXd> v(f, outcomes);
  Eigen::MatrixXd s = -v * v.transpose();
  s.diagonal() += v;
  return s / static_cast<double>(shots);
}

std::vector<double> resample_witness(const ShotTable& t, const EstimatorWeights& w, int runs, std::uint64_t seed) {
  if (runs < 2) throw std::invalid_argument("resampling needs at least 2 runs");
  check_shapes(t, w);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(runs));
  std::vector<double> cdf(static_cast<std::size_t>(t.outcomes));
  std::vector<double> counts(static_cast<std::size_t>(t.outcomes));
  for (int r = 0; r < runs; ++r) {
    double est = 0.0;
    for (std::size_t c = 0; c < t.cells(); ++c) {
      const double* f = t.f.data() + c * t.outcomes;
      const double* m = w.m.data() + c * w.outcomes;
      std::partial_sum(f, f + t.outcomes, cdf.begin());
      std::fill(counts.begin(), counts.end(), 0.0);
      auto g = derived_stream(seed, {static_cast<std::uint64_t>(r), c});
      for (long s = 0; s < t.shots; ++s) counts[sample_index(g, cdf)] += 1.0;
      est += dot(counts.data(), m, t.outcomes) / static_cast<double>(t.shots);
    }
    out.push_back(est);
  }
  return out;
}

void write_histogram_csv(const std::filesystem::path& path, const std::vector<double>& estimates) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.precision(17);
  out << "estimate\n";
  for (double e : estimates) out << e << '\n';
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace gmeact
