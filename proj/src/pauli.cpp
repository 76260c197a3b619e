#include "gmeact/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gmeact {

namespace {

// Single-qubit action M|b> = phase(b) |b ^ flip>.
struct LetterAction {
  int flip;
  cplx phase0;
  cplx phase1;
};

LetterAction action_of(char c) {
  switch (c) {
    case 'I': return {0, 1.0, 1.0};
    case 'X': return {1, 1.0, 1.0};
    case 'Y': return {1, cplx(0.0, 1.0), cplx(0.0, -1.0)};
    case 'Z': return {0, 1.0, -1.0};
  }
  throw std::invalid_argument(std::string("invalid Pauli letter '") + c + "'");
}

int letter_rank(char c) {
  switch (c) {
    case 'I': return 0;
    case 'Z': return 1;
    case 'X': return 2;
    case 'Y': return 3;
  }
  return 4;
}

// Column permutation and phases of a Pauli word: M(row(c), c) = phase(c),
// with row(c) = c ^ flip_mask.
struct WordAction {
  std::size_t flip_mask = 0;
  std::vector<cplx> phase;
};

WordAction word_action(std::string_view word) {
  const std::size_t n = word.size();
  const std::size_t dim = std::size_t{1} << n;
  WordAction act;
  act.phase.assign(dim, cplx(1.0, 0.0));
  for (std::size_t q = 0; q < n; ++q) {
    const auto a = action_of(word[q]);
    const std::size_t bit = n - 1 - q;
    if (a.flip) act.flip_mask |= std::size_t{1} << bit;
    for (std::size_t c = 0; c < dim; ++c) {
      act.phase[c] *= ((c >> bit) & 1u) ? a.phase1 : a.phase0;
    }
  }
  return act;
}

}  // namespace

void validate_word(std::string_view word) {
  if (word.empty()) throw std::invalid_argument("empty Pauli word");
  if (word.size() > 12) throw std::invalid_argument("Pauli word longer than 12 qubits");
  for (char c : word) action_of(c);
}

bool is_diagonal_word(std::string_view word) {
  return std::all_of(word.begin(), word.end(), [](char c) { return c == 'I' || c == 'Z'; });
}

bool pauli_word_less(std::string_view a, std::string_view b) {
  const bool da = is_diagonal_word(a);
  const bool db = is_diagonal_word(b);
  if (da != db) return da;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](char x, char y) { return letter_rank(x) < letter_rank(y); });
}

Matrix materialize(std::string_view word) {
  validate_word(word);
  const auto act = word_action(word);
  const auto dim = static_cast<Eigen::Index>(act.phase.size());
  Matrix m = Matrix::Zero(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    const auto r = static_cast<Eigen::Index>(static_cast<std::size_t>(c) ^ act.flip_mask);
    m(r, c) = act.phase[c];
  }
  return m;
}

Matrix materialize(const PauliString& p) { return materialize(p.word); }

namespace {

// Tr[H M] = sum_c (H M)(c, c) = sum_c H(c, row(c)) phase(c)
cplx trace_with_word(const Matrix& h, const WordAction& act) {
  cplx acc{0.0, 0.0};
  for (std::size_t c = 0; c < act.phase.size(); ++c) {
    acc += h(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c ^ act.flip_mask)) * act.phase[c];
  }
  return acc;
}

int qubit_count(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) throw std::invalid_argument("matrix size is not a power of two");
  return n;
}

}  // namespace

std::vector<PauliString> pauli_coefficients(const Matrix& h, double cutoff) {
  if (!is_hermitian(h, tolerances().hermitian)) {
    throw std::invalid_argument("pauli_coefficients: matrix is not Hermitian");
  }
  const int n = qubit_count(h.rows());
  const std::size_t count = std::size_t{1} << (2 * n);
  static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
  std::vector<PauliString> terms;
  std::string word(static_cast<std::size_t>(n), 'I');
  for (std::size_t code = 0; code < count; ++code) {
    for (int q = 0; q < n; ++q) word[q] = kLetters[(code >> (2 * (n - 1 - q))) & 3u];
    const double m = trace_with_word(h, word_action(word)).real();
    if (std::abs(m) > cutoff) terms.push_back({word, m});
  }
  std::sort(terms.begin(), terms.end(),
            [](const PauliString& a, const PauliString& b) { return pauli_word_less(a.word, b.word); });
  return terms;
}

Matrix reconstruct_from_pauli(const std::vector<PauliString>& terms, int qubits) {
  const auto dim = Eigen::Index{1} << qubits;
  Matrix h = Matrix::Zero(dim, dim);
  for (const auto& t : terms) {
    if (static_cast<int>(t.word.size()) != qubits) {
      throw std::invalid_argument("Pauli word length does not match register size");
    }
    h += t.weight * materialize(t.word);
  }
  return h / static_cast<double>(dim);
}

std::vector<MeasurementSetting> group_settings(const std::vector<std::string>& words) {
  for (const auto& w : words) validate_word(w);
  std::vector<MeasurementSetting> settings;
  // Basis under construction; '?' marks positions no member has fixed yet.
  std::vector<std::string> partial;
  const bool has_diagonal =
      std::any_of(words.begin(), words.end(), [](const auto& w) { return is_diagonal_word(w); });
  if (has_diagonal) {
    settings.push_back({std::string(words.front().size(), 'Z'), {}});
    partial.push_back(settings.back().basis);
  }
  for (std::size_t k = 0; k < words.size(); ++k) {
    const auto& w = words[k];
    if (is_diagonal_word(w)) {
      settings.front().members.push_back(k);
      continue;
    }
    bool placed = false;
    for (std::size_t s = has_diagonal ? 1 : 0; s < settings.size() && !placed; ++s) {
      if (partial[s].size() != w.size()) continue;
      bool compatible = true;
      for (std::size_t p = 0; p < w.size() && compatible; ++p) {
        compatible = w[p] == 'I' || partial[s][p] == '?' || partial[s][p] == w[p];
      }
      if (!compatible) continue;
      for (std::size_t p = 0; p < w.size(); ++p) {
        if (w[p] != 'I') partial[s][p] = w[p];
      }
      settings[s].members.push_back(k);
      placed = true;
    }
    if (!placed) {
      std::string basis(w.size(), '?');
      for (std::size_t p = 0; p < w.size(); ++p) {
        if (w[p] != 'I') basis[p] = w[p];
      }
      partial.push_back(basis);
      settings.push_back({basis, {k}});
    }
  }
  for (std::size_t s = 0; s < settings.size(); ++s) {
    settings[s].basis = partial[s];
    std::replace(settings[s].basis.begin(), settings[s].basis.end(), '?', 'Z');
  }
  return settings;
}

double expectation(std::string_view word, const Matrix& rho) {
  validate_word(word);
  if ((Eigen::Index{1} << word.size()) != rho.rows()) {
    throw std::invalid_argument("expectation: Pauli word length does not match state dimension");
  }
  return trace_with_word(rho, word_action(word)).real();
}

double expectation(const PauliString& p, const DensityMatrix& rho) {
  return expectation(p.word, rho.matrix());
}

std::vector<double> parity_vector(std::string_view word) {
  validate_word(word);
  const std::size_t n = word.size();
  std::vector<double> h(std::size_t{1} << n, 1.0);
  for (std::size_t l = 0; l < h.size(); ++l) {
    for (std::size_t mu = 0; mu < n; ++mu) {
      if (word[mu] != 'I' && ((l >> (n - 1 - mu)) & 1u)) h[l] = -h[l];
    }
  }
  return h;
}

}  // namespace gmeact
