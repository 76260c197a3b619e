// Acceptance criteria A1-A10. Prints one PASS/FAIL line per criterion.
//
// Usage: acceptance [A1 A2 ...]   (default: all)
// The external solver command for A10 comes from GMEACT_EXTERNAL_SOLVER,
// falling back to the cvxpy adapter configured at build time.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>

#include "gmeact/bisep.hpp"
#include "gmeact/experiment.hpp"
#include "gmeact/external_solver.hpp"
#include "gmeact/rng.hpp"
#include "gmeact/states.hpp"
#include "gmeact/witness.hpp"

using namespace gmeact;

namespace {

constexpr double kOptimumQ0 = -1.042e-2;
constexpr double kValueQ006 = -0.887e-2;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::vector<int> range(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

double optimum_q0(ConicSolver* solver = nullptr) {
  static std::optional<double> embedded;
  if (!solver && embedded) return *embedded;
  SolverOptions opt;
  const double v = solve(build_problem(n_copy_state(0.0, 2)), opt, solver).value;
  if (!solver) embedded = v;
  return v;
}

Outcome a1() {
  const double v = optimum_q0();
  return {std::abs(v - kOptimumQ0) <= 5e-5, "value " + fmt(v) + " (target -1.042e-2 +/- 5e-5)"};
}

Outcome a2() {
  const double v = evaluate(load_reference_witness(), n_copy_state(0.06, 2));
  return {std::abs(v - kValueQ006) <= 1e-4, "value " + fmt(v) + " (target -0.887e-2 +/- 1e-4)"};
}

Outcome a3() {
  const auto w = load_reference_witness();
  const auto terms = pauli_coefficients(w.w);
  const bool match = pauli_tables_match(terms, reference_pauli_table(), 1e-9);
  std::vector<std::string> words;
  for (const auto& t : terms) words.push_back(t.word);
  const auto settings = group_settings(words);
  bool z_ok = !settings.empty() && settings[0].basis == "ZZZZZZ";
  if (z_ok) {
    std::vector<std::size_t> expect(16);
    std::iota(expect.begin(), expect.end(), std::size_t{0});
    z_ok = settings[0].members == expect;
  }
  return {match && settings.size() == 17 && z_ok, std::to_string(terms.size()) + " terms, table match " +
                                                     (match ? "yes" : "no") + ", " + std::to_string(settings.size()) +
                                                     " settings, all-Z covers k=0..15 " + (z_ok ? "yes" : "no")};
}

Outcome a4() {
  const auto w = load_reference_witness();
  CertificateTolerances tol;
  tol.trace = tol.psd = tol.decomposition = 1e-9;
  const auto rep = validate_certificate(w, tol);
  const auto structure = reference_structure_checks(w, 1e-9);
  double worst = 0.0;
  for (const auto& c : w.certificates) {
    worst = std::max(worst, (w.w - c.p - partial_transpose(c.q, w.dims, c.subsystems)).cwiseAbs().maxCoeff());
  }
  return {rep.all_passed() && structure.all_passed(),
          std::to_string(rep.checks.size() + structure.checks.size()) + " checks, max |W - P - Q^T| " + fmt(worst)};
}

// Three-qubit GME states: perturbed GHZ with up to 20% white noise, kept only
// if the fully decomposable witness program yields a valid negative certificate.
std::vector<DensityMatrix> sdp_validated_gme_states(int count, std::uint64_t seed) {
  std::vector<DensityMatrix> out;
  Vector ghz = Vector::Zero(8);
  ghz(0) = ghz(7) = 1.0 / std::sqrt(2.0);
  for (std::uint64_t k = 0; static_cast<int>(out.size()) < count; ++k) {
    auto g = derived_stream(seed, {k});
    Vector v = ghz + 0.3 * random_unit_vector(g, 8);
    v /= v.norm();
    const double p = 0.2 * uniform01(g);
    const Matrix rho = (1.0 - p) * v * v.adjoint() + p * Matrix::Identity(8, 8) / 8.0;
    const DensityMatrix dm(rho, {2, 2, 2});
    // The returned witness is exactly feasible, so a loose tolerance still
    // yields a valid certificate.
    SolverOptions opt;
    opt.tol = 1e-5;
    try {
      const auto sol = solve(build_problem(dm), opt);
      if (sol.value < -1e-6 && validate_certificate(sol.witness).all_passed()) out.push_back(dm);
    } catch (const SolverNonconvergence&) {
    }
  }
  return out;
}

Outcome a5() {
  CertifierConfig cfg;
  cfg.j_max = 1000;
  const auto exact = certify(single_copy_state(0.06), cfg);
  const bool part1 = exact.verdict == Verdict::Biseparable;

  int sound = 0;
  const auto gme = sdp_validated_gme_states(50, 501);
  for (std::size_t k = 0; k < gme.size(); ++k) {
    CertifierConfig c = cfg;
    c.seed = k;
    sound += certify(gme[k], c).verdict == Verdict::Inconclusive;
  }
  const bool part2 = sound == 50;

  int converged = 0;
  TomographyOptions tomo;
  tomo.shots = 200;
  for (std::uint64_t s = 0; s < 100; ++s) {
    CertifierConfig c = cfg;
    c.seed = s;
    converged += certify(reconstructed_mixture(0.06, tomo, 1000 + s), c).verdict == Verdict::Biseparable;
  }
  const bool part3 = converged >= 90;

  std::ostringstream os;
  os << "(i) rho(0.06): " << to_string(exact.verdict) << ", final purity " << fmt(exact.final_purity) << " after "
     << exact.iterations << " iterations [" << exact.stop_reason << "]; (ii) GME inconclusive " << sound
     << "/50; (iii) tomographic reconstructions biseparable " << converged << "/100 (need >= 90)";
  return {part1 && part2 && part3, os.str()};
}

Outcome a6() {
  double worst = -1.0;
  std::ostringstream os;
  for (double q : {0.0, 0.06}) {
    const auto rho = single_copy_state(q);
    for (int s = 0; s < 3; ++s) {
      const double m = min_eigenvalue(partial_transpose(rho, std::vector<int>{s}));
      worst = std::max(worst, m);
      os << "q=" << q << " T_" << "ABC"[s] << " " << fmt(m) << "; ";
    }
  }
  return {worst < -1e-4, os.str() + "max " + fmt(worst)};
}

ShotTable exact_table(double q) {
  SimulationOptions so;
  so.q = q;
  so.exact = true;
  return sample_shot_table(so);
}

Outcome a7() {
  const auto w = load_reference_witness();
  double worst = 0.0;
  for (double q : {0.0, 0.06}) {
    const auto t = exact_table(q);
    const auto weights = estimator_weights(w.pauli, t.settings, mixture_spec(q));
    worst = std::max(worst, std::abs(estimate_witness(t, weights) - evaluate(w, n_copy_state(q, 2))));
  }
  return {worst <= 1e-12, "max |estimate - trace| " + fmt(worst)};
}

double stddev(const std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

Outcome a8() {
  const auto w = load_reference_witness();
  const auto ex = exact_table(0.06);
  const auto weights = estimator_weights(w.pauli, ex.settings, mixture_spec(0.06));
  std::vector<double> est;
  for (std::uint64_t s = 0; s < 500; ++s) est.push_back(estimate_witness(draw_shots(ex, 50, s), weights));
  const double mean = std::accumulate(est.begin(), est.end(), 0.0) / 500.0;
  const double se = stddev(est) / std::sqrt(500.0);
  const bool part1 = std::abs(mean - kValueQ006) <= 3.0 * se;

  const auto table = draw_shots(ex, 50, 7);
  const double sigma = std::sqrt(propagate_variance(table, weights));
  const double boot = stddev(resample_witness(table, weights, 1000, 8));
  const double ratio = boot / sigma;
  const bool part2 = ratio >= 0.8 && ratio <= 1.2;
  const bool part3 = sigma >= 0.25e-3 && sigma <= 0.75e-3;

  std::ostringstream os;
  os << "(i) mean " << fmt(mean) << ", |mean - target| / SE = " << fmt(std::abs(mean - kValueQ006) / se)
     << "; (ii) bootstrap/propagated sigma " << fmt(ratio) << "; (iii) propagated sigma " << fmt(sigma);
  return {part1 && part2 && part3, os.str()};
}

// Haar-random pure product across (pair, rest), or a random mixture of
// mixed products spanning the three pair groupings.
Outcome a9() {
  const auto w = load_reference_witness();
  const auto parts = pair_partition();
  const Dims d6(6, 2);
  auto product = [&](std::mt19937_64& g, int grouping, bool pure_factors) {
    const auto& part = parts.parts[static_cast<std::size_t>(grouping)];
    Matrix a, b;
    if (pure_factors) {
      const Vector u = random_unit_vector(g, 4);
      const Vector v = random_unit_vector(g, 16);
      a = u * u.adjoint();
      b = v * v.adjoint();
    } else {
      Matrix x(4, 4), y(16, 16);
      for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index j = 0; j < 4; ++j) x(i, j) = cplx(standard_normal(g), standard_normal(g));
      for (Eigen::Index i = 0; i < 16; ++i)
        for (Eigen::Index j = 0; j < 16; ++j) y(i, j) = cplx(standard_normal(g), standard_normal(g));
      a = x * x.adjoint();
      b = y * y.adjoint();
      a /= a.trace().real();
      b /= b.trace().real();
    }
    std::vector<int> src(6);
    std::vector<int> rest;
    for (int q = 0; q < 6; ++q)
      if (q != part[0] && q != part[1]) rest.push_back(q);
    src[static_cast<std::size_t>(part[0])] = 0;
    src[static_cast<std::size_t>(part[1])] = 1;
    for (std::size_t r = 0; r < rest.size(); ++r) src[static_cast<std::size_t>(rest[r])] = static_cast<int>(r) + 2;
    return permute_subsystems(kron(a, b), d6, src);
  };

  double worst = 1.0;
  for (std::uint64_t k = 0; k < 10000; ++k) {
    auto g = derived_stream(909, {k});
    Matrix s;
    if (k % 2 == 0) {
      s = product(g, static_cast<int>(k / 2 % 3), true);
    } else {
      double total = 0.0;
      s = Matrix::Zero(64, 64);
      for (int grouping = 0; grouping < 3; ++grouping) {
        const double p = uniform01(g);
        s += p * product(g, grouping, uniform01(g) < 0.5);
        total += p;
      }
      s /= total;
    }
    worst = std::min(worst, evaluate(w, s));
  }
  return {worst >= -1e-9, "min over 10^4 biseparable samples " + fmt(worst)};
}

Outcome a10() {
  std::string cmd;
  if (const char* env = std::getenv("GMEACT_EXTERNAL_SOLVER")) cmd = env;
#ifdef GMEACT_DEFAULT_EXTERNAL_SOLVER
  if (cmd.empty()) cmd = GMEACT_DEFAULT_EXTERNAL_SOLVER;
#endif
  if (cmd.empty()) return {false, "no external solver command configured"};
  ExternalSolver ext(cmd);
  double other = 0.0;
  try {
    other = optimum_q0(&ext);
  } catch (const std::exception& e) {
    return {false, std::string("external solver failed: ") + e.what()};
  }
  const double mine = optimum_q0();
  return {std::abs(mine - other) <= 1e-5, "embedded " + fmt(mine) + ", external " + fmt(other) +
                                             ", difference " + fmt(std::abs(mine - other))};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> all{
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5},
      {"A6", a6}, {"A7", a7}, {"A8", a8}, {"A9", a9}, {"A10", a10}};
  std::vector<std::string> wanted(argv + 1, argv + argc);
  bool all_pass = true;
  for (const auto& [name, fn] : all) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), name) == wanted.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << " [" << fmt(secs) << " s]" << std::endl;
    all_pass = all_pass && o.pass;
  }
  return all_pass ? 0 : 1;
}
