#pragma once

// Process-boundary solver adapter.
//
// The child command reads a gmeact-conic-v1 document on stdin and writes a
// gmeact-solution-v1 document on stdout; see tools/sdp_adapter_cvxpy.py.

#include <string>

#include "gmeact/json_io.hpp"
#include "gmeact/sdp_solver.hpp"

namespace gmeact {

json conic_program_to_json(const ConicProgram& p);
/// Throws std::invalid_argument on malformed documents.
ConicProgram conic_program_from_json(const json& j);

json solution_to_json(const SolveResult& r, const ConicProgram& p);
SolveResult solution_from_json(const json& j);

class ExternalSolver final : public ConicSolver {
 public:
  /// `command` is run through /bin/sh; tolerance and iteration options are
  /// the adapter's own business.
  explicit ExternalSolver(std::string command) : command_(std::move(command)) {}

  /// Throws std::runtime_error when the child fails or returns no solution.
  SolveResult solve(const ConicProgram& p, const SolverOptions& opt) override;
  std::string name() const override { return "external"; }

  const std::string& command() const { return command_; }

 private:
  std::string command_;
};

}  // namespace gmeact
