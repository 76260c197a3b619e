#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gmeact/linalg.hpp"

namespace gmeact {

/// Word over {I, X, Y, Z} (qubit 0 first) with a real weight.
struct PauliString {
  std::string word;
  double weight = 1.0;

  bool operator==(const PauliString&) const = default;
};

/// Throws std::invalid_argument for letters outside IXYZ or an empty word.
void validate_word(std::string_view word);
bool is_diagonal_word(std::string_view word);

Matrix materialize(std::string_view word);
Matrix materialize(const PauliString& p);

/// Coefficients m_w = Tr[H M_w] of every word with |m_w| > cutoff, so that
/// H = 2^-n sum_w m_w M_w. Words are ordered diagonal-first, then
/// lexicographically with I < Z < X < Y.
std::vector<PauliString> pauli_coefficients(const Matrix& h, double cutoff = 1e-10);

/// 2^-n sum_w m_w M_w
Matrix reconstruct_from_pauli(const std::vector<PauliString>& terms, int qubits);

bool pauli_word_less(std::string_view a, std::string_view b);

/// Group of words read out by measuring every qubit in `basis`.
struct MeasurementSetting {
  std::string basis;                 // over {X, Y, Z}
  std::vector<std::size_t> members;  // indices into the grouped word list
};

/// Greedy grouping: words over {I, Z} share the all-Z setting (always
/// setting 0 when present); every other word joins the first compatible
/// setting or opens a new one.
std::vector<MeasurementSetting> group_settings(const std::vector<std::string>& words);

/// Tr[rho M_word]; the weight of p is ignored.
double expectation(const PauliString& p, const DensityMatrix& rho);
double expectation(std::string_view word, const Matrix& rho);

/// Outcome-parity vector h: h_l = prod over non-I positions mu of (-1)^bit_mu(l),
/// with position 0 the most significant outcome bit.
std::vector<double> parity_vector(std::string_view word);

}  // namespace gmeact
