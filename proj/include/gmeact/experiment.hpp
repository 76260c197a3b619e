#pragma once

// Shot-level simulation of the two-copy witness measurement.
//
// Every ordered pair (i, j) of constituents is prepared as |a_i>|a_j> in
// A1A2B1B2C1C2 order and read out in each measurement setting k' with n
// shots. The witness estimate is the weighted sum
//
//   <W> = sum_{i,j,k',l} f[i,j,k',l] M'[i,j,k',l]
//   M'[i,j,k',l] = w_i w_j / 2^6 * sum_{k in k'} m_k h_k[l]
//
// with h_k the outcome-parity vector of word k.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gmeact/json_io.hpp"
#include "gmeact/linalg.hpp"
#include "gmeact/pauli.hpp"
#include "gmeact/states.hpp"

namespace gmeact {

/// Depolarizing channel on each prepared constituent followed by local
/// dephasing rho -> (1 - g/2) rho + (g/2) Z rho Z on each qubit.
struct NoiseModel {
  double depolarizing = 0.0;
  std::vector<double> dephasing;  // empty, or one strength per qubit of a constituent

  bool ideal() const;
  /// Throws std::invalid_argument for strengths outside [0, 1].
  void validate() const;
  Matrix apply(const Matrix& rho) const;  // three-qubit input

  json to_json() const;
  static NoiseModel from_json(const json& j);
  /// "none" or "depol=<p>[,dephase=<g>]".
  static NoiseModel parse(const std::string& spec);
};

/// Product unitary taking each qubit's measurement eigenbasis to the
/// computational basis: H for X, H S^dagger for Y, identity for Z.
Matrix measurement_rotation(std::string_view basis);

/// Outcome distribution of measuring every qubit in `basis` (letters X, Y, Z;
/// outcome bit 0 = +1 eigenstate, qubit 0 most significant).
std::vector<double> born_distribution(const Matrix& rho, std::string_view basis);
std::vector<double> born_distribution(const DensityMatrix& rho, std::string_view basis);

/// Measurement bases of the two-copy witness: group_settings over its words.
std::vector<std::string> witness_setting_words(const std::vector<PauliString>& pauli);

struct ShotTable {
  int constituents = kNumConstituents;
  std::vector<std::string> settings;
  int outcomes = 64;
  long shots = 50;   // n per (i, j, k') cell
  std::uint64_t seed = 0;
  double q = 0.06;
  bool exact = false;  // frequencies replaced by Born probabilities
  NoiseModel noise;
  std::vector<double> f;  // [(i * constituents + j) * settings + k'] * outcomes + l

  std::size_t cell(int i, int j, int k) const {
    return (static_cast<std::size_t>(i * constituents + j) * settings.size() + static_cast<std::size_t>(k));
  }
  const double* row(int i, int j, int k) const { return f.data() + cell(i, j, k) * outcomes; }
  double* row(int i, int j, int k) { return f.data() + cell(i, j, k) * outcomes; }
  std::size_t cells() const { return static_cast<std::size_t>(constituents * constituents) * settings.size(); }

  json to_json() const;
  /// Throws std::invalid_argument on malformed or inconsistent input.
  static ShotTable from_json(const json& j);
};

struct SimulationOptions {
  double q = 0.06;
  long shots = 50;
  std::uint64_t seed = 0;
  NoiseModel noise;
  bool exact = false;
  std::vector<std::string> settings;  // empty: the canonical witness settings
};

/// Draws `shots` outcomes per cell from an independent stream derived from
/// (seed, i, j, k'), or stores exact probabilities when options.exact.
ShotTable sample_shot_table(const SimulationOptions& opt);

/// Shot sampling from an exact-probability table; sample_shot_table with
/// the same seed gives the identical table.
ShotTable draw_shots(const ShotTable& exact, long shots, std::uint64_t seed);

struct EstimatorWeights {
  int constituents = kNumConstituents;
  std::vector<std::string> settings;
  int outcomes = 64;
  std::vector<double> m;  // same layout as ShotTable::f
};

/// Throws std::invalid_argument if some witness word cannot be read from any
/// of the table settings.
EstimatorWeights estimator_weights(const std::vector<PauliString>& pauli, const std::vector<std::string>& settings,
                                   const MixtureSpec& mixture);

double estimate_witness(const ShotTable& t, const EstimatorWeights& w);

/// M^T Sigma M with Sigma the multinomial covariance of the frequencies,
/// evaluated cell by cell as diag(Sigma) M + zeta.
double propagate_variance(const ShotTable& t, const EstimatorWeights& w);

/// Dense multinomial covariance diag(f)/n - f f^T/n of one cell.
Eigen::MatrixXd cell_covariance(const double* f, int outcomes, long shots);

/// Multinomial redraw of every cell from its observed frequencies; one
/// estimate per run.
std::vector<double> resample_witness(const ShotTable& t, const EstimatorWeights& w, int runs, std::uint64_t seed);

void write_histogram_csv(const std::filesystem::path& path, const std::vector<double>& estimates);

// ---- Tomography ------------------------------------------------------------

struct TomographyOptions {
  long shots = 200;
  bool exact = false;
  int max_iter = 5000;
  double tol = 1e-10;  // stop when the log-likelihood gain drops below
};

struct TomographyResult {
  DensityMatrix rho;
  int iterations = 0;
  double log_likelihood = 0.0;
};

/// 27 Pauli settings on three qubits, RrhoR maximum-likelihood fixed point
/// started at I/8.
TomographyResult tomograph_constituent(const DensityMatrix& truth, const TomographyOptions& opt, std::uint64_t seed,
                                       std::uint64_t stream = 0);

/// sum_i w_i rho_hat_i with every constituent reconstructed independently.
DensityMatrix reconstructed_mixture(double q, const TomographyOptions& opt, std::uint64_t seed,
                                    const NoiseModel& noise = {});

}  // namespace gmeact
