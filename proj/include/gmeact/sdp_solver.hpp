#pragma once

// Small dense semidefinite programs over Hermitian matrix blocks.
//
//   minimize    sum_b <C_b, X_b>
//   subject to  sum_b <A_ib, X_b> = rhs_i                 (equalities)
//               sum_t coeff_t X_{b_t}^{T_M} + D_j  >= 0   (PSD cones)
//
// All terms of one cone share the partial-transpose set M, which makes the
// normal operator of the cone maps a small block-mixing matrix times the
// identity and keeps the ADMM subproblem closed-form.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gmeact/linalg.hpp"

namespace gmeact {

struct BlockSpec {
  std::string name;
  int dim = 0;
  Dims dims;  // subsystem dimensions, product == dim
};

struct ConeTerm {
  int block = 0;
  double coeff = 1.0;
  std::vector<int> transpose;  // subsystems transposed
};

struct ConeConstraint {
  std::string name;
  Dims dims;
  std::vector<ConeTerm> terms;
  std::optional<Matrix> offset;
};

struct EqualityTerm {
  int block = 0;
  Matrix a;
};

struct EqualityConstraint {
  std::vector<EqualityTerm> terms;
  double rhs = 0.0;
};

struct ObjectiveTerm {
  int block = 0;
  Matrix c;
};

struct ConicProgram {
  std::vector<BlockSpec> blocks;
  std::vector<ObjectiveTerm> objective;
  std::vector<EqualityConstraint> equalities;
  std::vector<ConeConstraint> cones;

  /// Throws std::invalid_argument when the program is not well formed.
  void validate() const;
};

/// Value of sum_t coeff_t X_{b_t}^{T_M} + D for one cone.
Matrix cone_value(const ConicProgram& p, std::size_t cone, const std::vector<Matrix>& blocks);
double objective_value(const ConicProgram& p, const std::vector<Matrix>& blocks);

enum class SolveStatus { Optimal, MaxIter, Infeasible };
std::string to_string(SolveStatus s);

struct SolveReport {
  SolveStatus status = SolveStatus::MaxIter;
  double objective = 0.0;
  double dual_objective = 0.0;
  long iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  std::string solver;
};

struct SolverOptions {
  double tol = 1e-7;
  long max_iter = 50000;
  std::uint64_t seed = 0;
  double rho = 1.0;           // ADMM penalty
  double relaxation = 1.6;    // over-relaxation factor in (0, 2)
  bool adaptive_rho = true;
  int check_every = 25;
  /// Residual sampling for convergence diagnostics; 0 disables.
  int history_every = 100;
};

struct SolveResult {
  std::vector<Matrix> blocks;
  /// Dual matrices Z_j >= 0 of the cone constraints (empty when unavailable).
  std::vector<Matrix> cone_duals;
  std::vector<double> equality_duals;
  SolveReport report;
  /// (iteration, max(primal, dual residual)) samples.
  std::vector<std::pair<long, double>> residual_history;
};

class ConicSolver {
 public:
  virtual ~ConicSolver() = default;
  virtual SolveResult solve(const ConicProgram& p, const SolverOptions& opt) = 0;
  virtual std::string name() const = 0;
};

/// Operator-splitting (ADMM) solver working natively on complex Hermitian
/// blocks; PSD projections by eigendecomposition.
class AdmmSolver final : public ConicSolver {
 public:
  SolveResult solve(const ConicProgram& p, const SolverOptions& opt) override;
  std::string name() const override { return "admm"; }
};

SolveResult solve_conic(const ConicProgram& p, const SolverOptions& opt = {});

/// Frobenius-nearest PSD matrix; the cone projection used by the solver.
Matrix min_eig_projection(const Matrix& h);

}  // namespace gmeact
