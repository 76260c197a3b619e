#pragma once

// Fully decomposable GME witnesses.
//
//   minimize Tr[W rho]  s.t.  Tr W = 1,  W = P_k + Q_k^{T_k},  P_k, Q_k >= 0
//
// for every part k of a tripartition of the register. Lowered to the conic
// form with variables W, P_k and cones P_k >= 0, (W - P_k)^{T_k} >= 0.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmeact/json_io.hpp"
#include "gmeact/linalg.hpp"
#include "gmeact/pauli.hpp"
#include "gmeact/sdp_solver.hpp"

namespace gmeact {

/// Grouping of register subsystems into the three parties.
struct PartyPartition {
  std::vector<std::vector<int>> parts;
  std::vector<std::string> labels;
};

/// A1A2 | B1B2 | C1C2 over six qubits in party-major order.
PartyPartition pair_partition();
/// A | B | C over three qubits.
PartyPartition single_partition();
/// pair_partition() for 6 qubits, single_partition() for 3; throws otherwise.
PartyPartition default_partition(const Dims& dims);

struct SdpProblem {
  Matrix target;
  Dims dims;
  PartyPartition partition;
  ConicProgram program;  // blocks W, P_0..P_2; cones P_k then Q_k per part
};

/// Throws std::invalid_argument unless rho spans 3 or 6 qubits (or the
/// given partition matches its register).
SdpProblem build_problem(const DensityMatrix& rho);
SdpProblem build_problem(const DensityMatrix& rho, const PartyPartition& partition);

struct Certificate {
  std::string label;
  std::vector<int> subsystems;
  Matrix p;
  Matrix q;
};

struct Witness {
  Matrix w;
  Dims dims;
  std::vector<Certificate> certificates;
  std::vector<PauliString> pauli;
};

struct WitnessSolution {
  Witness witness;
  SolveReport report;
  double value = 0.0;  // Tr[W rho] of the returned, exactly feasible witness
  /// Certified lower bound on the optimum from the dual iterate (embedded
  /// solver only).
  std::optional<double> lower_bound;
};

class SolverNonconvergence : public std::runtime_error {
 public:
  SolverNonconvergence(const std::string& msg, SolveReport rep) : std::runtime_error(msg), report(std::move(rep)) {}
  SolveReport report;
};

class InfeasibleProblem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solves with the embedded ADMM solver, or `solver` when given. The raw
/// iterate is polished into an exactly feasible certificate (identity
/// shifts and renormalization), so the returned value is an upper bound.
WitnessSolution solve(const SdpProblem& problem, const SolverOptions& opt = {}, ConicSolver* solver = nullptr);

double evaluate(const Witness& w, const DensityMatrix& rho);
double evaluate(const Witness& w, const Matrix& rho);

struct CheckItem {
  std::string name;
  bool passed = false;
  double value = 0.0;      // measured quantity (residual, min eigenvalue, ...)
  double tolerance = 0.0;
};

struct ValidationReport {
  std::vector<CheckItem> checks;
  bool all_passed() const;
  json to_json() const;
};

struct CertificateTolerances {
  double trace = 1e-8;
  double psd = 1e-8;
  double decomposition = 1e-7;
  double hermitian = 1e-10;
};

/// Checks trace normalization, Hermiticity, P_k, Q_k >= 0 and
/// W = P_k + Q_k^{T_k}. Never throws on failed checks.
ValidationReport validate_certificate(const Witness& w, const CertificateTolerances& tol = {});

json witness_to_json(const Witness& w);
/// Throws std::invalid_argument on malformed input.
Witness witness_from_json(const json& j);

// ---- Tabulated two-copy witness -------------------------------------------

enum class WitnessVariant {
  GhzForm,   // compact GHZ-basis expression; diagonal at 010110 / 101001
  TableForm  // entry list as tabulated; diagonal at 010101
};

std::string to_string(WitnessVariant v);

/// Tabulated W (dims 2^6) with the tabulated P_k and the rank-2 Q_k
/// corrections attached. GhzForm is the canonical variant.
Witness load_reference_witness(WitnessVariant v = WitnessVariant::GhzForm);

/// The 32 tabulated Pauli words and coefficients, in table order.
std::vector<PauliString> reference_pauli_table();

/// Extra structural checks of the tabulated certificate: diagonal P_k,
/// P_C = |P_A - P_B|, and Q_k = P_k + two weighted difference projectors.
ValidationReport reference_structure_checks(const Witness& w, double tol = 1e-12);

struct VariantDiagnostics {
  WitnessVariant variant;
  std::size_t pauli_terms = 0;
  bool matches_pauli_table = false;
  bool certificate_valid = false;
  double max_decomposition_residual = 0.0;
  double value_q006 = 0.0;  // Tr[W rho(0.06)^(x)2]
};

struct VariantComparison {
  std::vector<VariantDiagnostics> variants;
  double max_elementwise_difference = 0.0;
  std::vector<std::pair<int, int>> differing_entries;
  json to_json() const;
};

VariantComparison compare_witness_variants();

/// Pauli table agreement: same word list in the same order, weights within tol.
bool pauli_tables_match(const std::vector<PauliString>& a, const std::vector<PauliString>& b, double tol = 1e-9);

}  // namespace gmeact
