#include "gmeact/bisep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gmeact/rng.hpp"

namespace gmeact {

std::string to_string(WeightStrategy s) { return s == WeightStrategy::Proportional ? "proportional" : "lp_vertex"; }

WeightStrategy weight_strategy_from_string(const std::string& s) {
  if (s == "proportional") return WeightStrategy::Proportional;
  if (s == "lp_vertex") return WeightStrategy::LpVertex;
  throw std::invalid_argument("unknown weight strategy '" + s + "' (expected proportional or lp_vertex)");
}

std::string to_string(Verdict v) { return v == Verdict::Biseparable ? "biseparable" : "inconclusive"; }

void CertifierConfig::validate() const {
  if (!(bias > 0.0 && bias < 1.0)) throw std::invalid_argument("bias b must lie in (0, 1)");
  if (j_max < 0) throw std::invalid_argument("j_max must be non-negative");
  if (!(purity_threshold > 0.0)) throw std::invalid_argument("purity threshold must be positive");
  if (seesaw_iters < 1) throw std::invalid_argument("seesaw_iters must be >= 1");
  if (!(seesaw_tol >= 0.0)) throw std::invalid_argument("seesaw_tol must be non-negative");
  if (restarts < 0) throw std::invalid_argument("restarts must be non-negative");
  if (stall_window < 1) throw std::invalid_argument("stall_window must be >= 1");
  if (!(epsilon_tol > 0.0 && golden_tol > 0.0)) throw std::invalid_argument("search tolerances must be positive");
}

namespace {

const Dims kQubit3{2, 2, 2};
const std::array<int, 3> kSwapAB{1, 0, 2};

Vector top_eigenvector(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
  return es.eigenvectors().col(m.rows() - 1);
}

double overlap(const Matrix& rho, const Vector& psi) { return (psi.adjoint() * rho * psi)(0, 0).real(); }

struct SeesawRun {
  Vector a, b;
  double value = 0.0;
  std::vector<double> history;
};

// rho over (2) x (4), split factor first.
SeesawRun seesaw(const Matrix& rho, Vector a, Vector b, const CertifierConfig& cfg) {
  SeesawRun run;
  double value = overlap(rho, kron(a, b));
  run.history.push_back(value);
  auto step_check = [&](double next) {
    if (next < value - 1e-12 * std::max(1.0, std::abs(value))) {
      throw std::logic_error("seesaw overlap decreased");
    }
    value = next;
    run.history.push_back(value);
  };
  for (int it = 0; it < cfg.seesaw_iters; ++it) {
    const double start = value;
    Matrix mb = Matrix::Zero(4, 4);
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < 2; ++k) mb += std::conj(a(i)) * a(k) * rho.block(4 * i, 4 * k, 4, 4);
    }
    b = top_eigenvector(mb);
    step_check(overlap(rho, kron(a, b)));
    Matrix ma(2, 2);
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < 2; ++k) ma(i, k) = (b.adjoint() * rho.block(4 * i, 4 * k, 4, 4) * b)(0, 0);
    }
    a = top_eigenvector(ma);
    step_check(overlap(rho, kron(a, b)));
    if (value - start < cfg.seesaw_tol) break;
  }
  run.a = std::move(a);
  run.b = std::move(b);
  run.value = value;
  return run;
}

}  // namespace

OverlapResult max_overlap_product(const Matrix& rho, Bipartition cut, const Ket& seed, const CertifierConfig& cfg,
                                  std::uint64_t stream) {
  if (cut == Bipartition::FullyProduct) throw std::invalid_argument("seesaw needs an A|BC or B|AC cut");
  if (rho.rows() != 8 || seed.size() != 8) throw std::invalid_argument("seesaw works on three-qubit operators");
  const bool swap = cut == Bipartition::B_AC;
  const Matrix r = swap ? permute_subsystems(rho, kQubit3, kSwapAB) : rho;
  const Vector s = swap ? permute_subsystems(seed.amplitudes(), kQubit3, kSwapAB) : seed.amplitudes();

  // Leading Schmidt pair of the seed: s = sum_k sv_k U_k (x) conj(V_k).
  Matrix m(2, 4);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 4; ++j) m(i, j) = s(4 * i + j);
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SeesawRun best = seesaw(r, svd.matrixU().col(0), svd.matrixV().col(0).conjugate(), cfg);
  int best_restart = -1;
  for (int k = 0; k < cfg.restarts; ++k) {
    auto g = derived_stream(cfg.seed, {stream, static_cast<std::uint64_t>(k)});
    Vector a = random_unit_vector(g, 2);
    Vector b = random_unit_vector(g, 4);
    SeesawRun run = seesaw(r, std::move(a), std::move(b), cfg);
    if (run.value > best.value) {
      best = std::move(run);
      best_restart = k;
    }
  }
  Vector psi = kron(best.a, best.b);
  if (swap) psi = permute_subsystems(psi, kQubit3, kSwapAB);
  psi /= psi.norm();
  OverlapResult out{Ket(std::move(psi), kQubit3), 0.0, best_restart, std::move(best.history)};
  out.overlap = overlap(rho, out.ket.amplitudes());
  return out;
}

Mixture find_mixture(const Matrix& rho_j, const ConstituentSet& constituents, const CertifierConfig& cfg,
                     std::uint64_t stream) {
  Mixture mix;
  for (std::size_t i = 0; i < constituents.kets.size(); ++i) {
    if (constituents.labels[i] == Bipartition::FullyProduct) continue;
    const Matrix biased = cfg.bias * constituents.kets[i].projector() + (1.0 - cfg.bias) * rho_j;
    auto best = max_overlap_product(biased, constituents.labels[i], constituents.kets[i], cfg,
                                    splitmix64(stream) ^ static_cast<std::uint64_t>(i));
    mix.overlaps.push_back(overlap(rho_j, best.ket.amplitudes()));
    mix.products.push_back(std::move(best.ket));
  }
  const std::size_t n = mix.products.size();
  if (n == 0) throw std::invalid_argument("constituent set has no entangled members");
  mix.p.assign(n, 0.0);
  if (cfg.strategy == WeightStrategy::LpVertex) {
    mix.p[static_cast<std::size_t>(std::max_element(mix.overlaps.begin(), mix.overlaps.end()) - mix.overlaps.begin())] = 1.0;
  } else {
    double total = 0.0;
    for (double o : mix.overlaps) total += std::max(o, 0.0);
    for (std::size_t i = 0; i < n; ++i) mix.p[i] = total > 0.0 ? std::max(mix.overlaps[i], 0.0) / total : 1.0 / n;
  }
  mix.eta = Matrix::Zero(8, 8);
  for (std::size_t i = 0; i < n; ++i) {
    if (mix.p[i] > 0.0) mix.eta += mix.p[i] * mix.products[i].projector();
  }
  return mix;
}

SubtractResult subtract(const Matrix& rho_j, const Matrix& eta, const CertifierConfig& cfg) {
  if (rho_j.rows() != eta.rows()) throw std::invalid_argument("subtract: dimension mismatch");
  SubtractResult out;
  out.remainder = rho_j;
  const double tr_eta = trace_real(eta);
  if (!(tr_eta > 0.0)) {
    out.stalled = true;
    return out;
  }
  auto admissible = [&](double e) { return min_eigenvalue(rho_j - e * eta) >= -1e-13; };
  double lo = 0.0;
  double hi = trace_real(rho_j) / tr_eta;
  if (admissible(hi)) {
    lo = hi;
  } else {
    while (hi - lo > cfg.epsilon_tol) {
      const double mid = 0.5 * (lo + hi);
      (admissible(mid) ? lo : hi) = mid;
    }
  }
  out.epsilon_max = lo;

  auto normalized_purity = [&](double e) {
    const Matrix r = rho_j - e * eta;
    const double t = trace_real(r);
    if (t <= 1e-12) return std::numeric_limits<double>::infinity();
    return purity(r) / (t * t);
  };
  const double f0 = normalized_purity(0.0);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = out.epsilon_max;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = normalized_purity(c), fd = normalized_purity(d);
  while (b - a > cfg.golden_tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = normalized_purity(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = normalized_purity(d);
    }
  }
  double eps = 0.5 * (a + b);
  double best = normalized_purity(eps);
  if (const double fe = normalized_purity(out.epsilon_max); fe < best) {
    eps = out.epsilon_max;
    best = fe;
  }
  // Gains at rounding level (e.g. rho_j == eta) count as no improvement.
  if (!(best < f0 * (1.0 - 1e-12)) || eps <= 0.0) {
    out.stalled = true;
    return out;
  }
  Matrix r = rho_j - eps * eta;
  r /= trace_real(r);
  out.remainder = 0.5 * (r + r.adjoint());
  out.epsilon = eps;
  return out;
}

json SubtractionTrace::to_json(bool include_matrices) const {
  json steps_j = json::array();
  for (std::size_t k = 0; k < steps.size(); ++k) {
    json s{{"iteration", k + 1}, {"purity", steps[k].purity}, {"epsilon", steps[k].epsilon}, {"p", steps[k].p}};
    if (include_matrices) {
      s["remainder"] = matrix_to_json(steps[k].remainder, kQubit3);
      s["eta"] = matrix_to_json(steps[k].eta, kQubit3);
    }
    steps_j.push_back(std::move(s));
  }
  return {{"verdict", to_string(verdict)},
          {"iterations", iterations},
          {"initial_purity", initial_purity},
          {"final_purity", final_purity},
          {"stop_reason", stop_reason},
          {"strategy", to_string(strategy)},
          {"steps", steps_j}};
}

SubtractionTrace certify(const DensityMatrix& rho, const CertifierConfig& cfg) {
  cfg.validate();
  if (rho.size() != 8) throw std::invalid_argument("certify expects a three-qubit density matrix");
  const ConstituentSet constituents = constituent_set();
  SubtractionTrace trace;
  trace.strategy = cfg.strategy;
  Matrix r = rho.matrix();
  double pur = purity(r);
  trace.initial_purity = pur;
  int j = 0;
  int small_steps = 0;
  trace.stop_reason = "purity threshold reached";
  while (pur > cfg.purity_threshold && j < cfg.j_max) {
    const Mixture mix = find_mixture(r, constituents, cfg, static_cast<std::uint64_t>(j));
    SubtractResult sub = subtract(r, mix.eta, cfg);
    if (sub.stalled) {
      trace.stop_reason = "stalled: no subtraction lowers the purity";
      break;
    }
    const double next = purity(sub.remainder);
    if (!(next < pur)) {
      trace.stop_reason = "stalled: purity did not decrease";
      break;
    }
    small_steps = pur - next < cfg.stall_tol ? small_steps + 1 : 0;
    r = std::move(sub.remainder);
    pur = next;
    ++j;
    trace.steps.push_back({r, mix.eta, mix.p, sub.epsilon, pur});
    if (small_steps >= cfg.stall_window) {
      trace.stop_reason = "stalled: purity decrease below tolerance";
      break;
    }
  }
  if (pur > cfg.purity_threshold && j >= cfg.j_max) trace.stop_reason = "iteration limit reached";
  trace.iterations = j;
  trace.final_purity = pur;
  trace.verdict = pur <= cfg.purity_threshold && j < cfg.j_max ? Verdict::Biseparable : Verdict::Inconclusive;
  return trace;
}

}  // namespace gmeact
