#pragma once

// Biseparability certificate by iterative subtraction: remove mixtures of
// pure product states (across A|BC or B|AC) from the state until the
// normalized remainder lies in the separable purity ball Tr[rho^2] <= 1/7.

#include <cstdint>
#include <string>
#include <vector>

#include "gmeact/json_io.hpp"
#include "gmeact/linalg.hpp"
#include "gmeact/states.hpp"

namespace gmeact {

enum class WeightStrategy { Proportional, LpVertex };
std::string to_string(WeightStrategy s);
/// Throws std::invalid_argument for unknown names.
WeightStrategy weight_strategy_from_string(const std::string& s);

struct CertifierConfig {
  double bias = 1e-3;
  int j_max = 1000;
  double purity_threshold = 1.0 / 7.0;
  int seesaw_iters = 200;
  double seesaw_tol = 1e-12;
  int restarts = 8;  // random seesaw starts on top of the constituent seed
  std::uint64_t seed = 0;
  WeightStrategy strategy = WeightStrategy::Proportional;
  int stall_window = 5;
  double stall_tol = 1e-10;
  double epsilon_tol = 1e-10;  // bisection for the largest admissible step
  double golden_tol = 1e-8;    // step minimization

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

struct OverlapResult {
  Ket ket;
  double overlap = 0.0;
  int restart = -1;             // -1: seeded start won
  std::vector<double> history;  // overlap after every half step of the winning run
};

/// Seesaw maximization of <psi|rho|psi> over |psi> = |alpha> (x) |beta>
/// across the given cut (FullyProduct is rejected). Throws std::logic_error
/// if an update ever lowers the overlap.
OverlapResult max_overlap_product(const Matrix& rho, Bipartition cut, const Ket& seed, const CertifierConfig& cfg,
                                  std::uint64_t stream = 0);

struct Mixture {
  Matrix eta;
  std::vector<double> p;
  std::vector<Ket> products;
  std::vector<double> overlaps;  // <psi_i|rho_j|psi_i> against the unbiased rho_j
};

/// One product state per entangled constituent, steered by biasing rho_j
/// toward that constituent, then weighted by cfg.strategy.
Mixture find_mixture(const Matrix& rho_j, const ConstituentSet& constituents, const CertifierConfig& cfg,
                     std::uint64_t stream = 0);

struct SubtractResult {
  Matrix remainder;  // normalized; equals rho_j when stalled
  double epsilon = 0.0;
  double epsilon_max = 0.0;
  bool stalled = false;
};

/// Largest PSD-preserving step by bisection, then the purity of the
/// normalized remainder (rho_j - eps eta)/Tr[...] minimized over
/// [0, eps_max] by golden-section search.
SubtractResult subtract(const Matrix& rho_j, const Matrix& eta, const CertifierConfig& cfg = {});

enum class Verdict { Biseparable, Inconclusive };
std::string to_string(Verdict v);

struct SubtractionStep {
  Matrix remainder;
  Matrix eta;
  std::vector<double> p;
  double epsilon = 0.0;
  double purity = 0.0;
};

struct SubtractionTrace {
  double initial_purity = 0.0;
  double final_purity = 0.0;
  int iterations = 0;
  Verdict verdict = Verdict::Inconclusive;
  std::string stop_reason;
  WeightStrategy strategy = WeightStrategy::Proportional;
  std::vector<SubtractionStep> steps;

  json to_json(bool include_matrices = false) const;
};

/// Throws std::invalid_argument unless rho is a three-qubit state.
SubtractionTrace certify(const DensityMatrix& rho, const CertifierConfig& cfg = {});

}  // namespace gmeact
