#pragma once

// End-to-end reproduction run and its configuration.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gmeact/bisep.hpp"
#include "gmeact/experiment.hpp"
#include "gmeact/json_io.hpp"

namespace gmeact {

struct RunConfig {
  double q = 0.06;
  int copies = 2;
  long shots = 50;
  std::uint64_t seed = 7;
  int resample_runs = 1000;

  Tolerances tolerances;
  double sdp_tol = 1e-7;
  long sdp_max_iter = 50000;

  int j_max = 1000;
  WeightStrategy strategy = WeightStrategy::Proportional;
  NoiseModel noise;

  std::string external_solver;  // empty: embedded solver only
  std::string report_path;      // empty: no file written

  json to_json() const;
  /// Missing keys keep their defaults; throws std::invalid_argument on bad
  /// values or unknown keys.
  static RunConfig from_json(const json& j);
};

/// Reads a config file; throws std::runtime_error if it cannot be opened.
RunConfig load_run_config(const std::string& path);

enum class StageStatus { Pass, Fail, SkippedAssert };
std::string to_string(StageStatus s);

struct StageResult {
  std::string name;
  StageStatus status = StageStatus::Fail;
  json details;
};

struct ReproduceReport {
  std::vector<StageResult> stages;
  bool passed() const;
  json to_json(const RunConfig& cfg) const;
};

/// Runs all six stages; a failing stage does not stop later ones.
ReproduceReport cmd_reproduce(const RunConfig& cfg);

}  // namespace gmeact
