#include <cmath>

#include "gmeact/states.hpp"
#include "gmeact/witness.hpp"

namespace gmeact {

namespace {

const Dims kSix(6, 2);

int bits(const char* s) { return std::stoi(s, nullptr, 2); }

struct Entry {
  const char* row;
  const char* col;
  double value;
};

// Non-zero entries in the tabulated entry list, verbatim.
const Entry kTableEntries[] = {
    {"000000", "111111", -1.0 / 12}, {"000011", "000011", 1.0 / 12}, {"001100", "001100", 1.0 / 12},
    {"001111", "001111", 1.0 / 12},  {"110000", "110000", 1.0 / 12}, {"110011", "110011", 1.0 / 12},
    {"111100", "111100", 1.0 / 12},  {"111111", "000000", -1.0 / 12}, {"010101", "010101", 1.0 / 12},
    {"011001", "011001", 1.0 / 12},  {"010101", "101010", -1.0 / 12}, {"011010", "011010", 1.0 / 12},
    {"100101", "100101", 1.0 / 12},  {"101010", "010101", -1.0 / 12}, {"100110", "100110", 1.0 / 12},
    {"101001", "101001", 1.0 / 12},
};

Matrix table_form() {
  Matrix w = Matrix::Zero(64, 64);
  for (const auto& e : kTableEntries) w(bits(e.row), bits(e.col)) += e.value;
  return w;
}

// (1/12)[sum_{i in K} (|i><i| + |~i><~i|) + sum_{i=0,21} (|Gi-><Gi-| - |i><i| - |~i><~i|)]
Matrix ghz_form() {
  Matrix w = Matrix::Zero(64, 64);
  for (int i : {3, 12, 15, 22, 25, 26}) {
    w(i, i) += 1.0 / 12;
    w(63 - i, 63 - i) += 1.0 / 12;
  }
  for (int i : {0, 21}) {
    Vector g = Vector::Zero(64);
    g(i) = 1.0;
    g(63 - i) = -1.0;
    w += g * g.adjoint() / 12.0;
    w(i, i) -= 1.0 / 12;
    w(63 - i, 63 - i) -= 1.0 / 12;
  }
  return w;
}

const char* const kPA[] = {"000011", "001100", "010110", "011001", "100110", "101001", "110011", "111100"};
const char* const kPB[] = {"000011", "001111", "010110", "011010", "100101", "101001", "110000", "111100"};

Matrix diagonal_from(const char* const (&labels)[8]) {
  Matrix p = Matrix::Zero(64, 64);
  for (const char* l : labels) p(bits(l), bits(l)) = 1.0 / 24;
  return p;
}

struct DifferencePair {
  const char* a;
  const char* b;
};

// Per party: the two difference vectors |a> - |b> added to P_k with weight 1/12.
const DifferencePair kQTerms[3][2] = {
    {{"001111", "110000"}, {"011010", "100101"}},
    {{"001100", "110011"}, {"011001", "100110"}},
    {{"000011", "111100"}, {"010110", "101001"}},
};

Matrix difference_projector(const DifferencePair& d) {
  Vector v = Vector::Zero(64);
  v(bits(d.a)) = 1.0;
  v(bits(d.b)) = -1.0;
  return v * v.adjoint();
}

std::vector<Certificate> tabulated_certificates() {
  const auto part = pair_partition();
  const Matrix pa = diagonal_from(kPA);
  const Matrix pb = diagonal_from(kPB);
  const Matrix pc = (pa - pb).cwiseAbs().cast<cplx>();
  const Matrix ps[3] = {pa, pb, pc};
  std::vector<Certificate> certs;
  for (int k = 0; k < 3; ++k) {
    Matrix q = ps[k];
    for (const auto& d : kQTerms[k]) q += difference_projector(d) / 12.0;
    certs.push_back({part.labels[k], part.parts[k], ps[k], q});
  }
  return certs;
}

}  // namespace

std::string to_string(WitnessVariant v) { return v == WitnessVariant::GhzForm ? "ghz_form" : "table_form"; }

Witness load_reference_witness(WitnessVariant v) {
  Witness w;
  w.w = v == WitnessVariant::GhzForm ? ghz_form() : table_form();
  w.dims = kSix;
  w.certificates = tabulated_certificates();
  w.pauli = pauli_coefficients(w.w);
  return w;
}

std::vector<PauliString> reference_pauli_table() {
  const double t = 1.0 / 3.0;
  return {
      {"IIIIII", 1.0}, {"IIIZIZ", -t},  {"IIZIZI", -t},  {"IIZZZZ", 1.0}, {"IZIIIZ", -t},  {"IZIZII", -t},
      {"IZZIZZ", -t},  {"IZZZZI", -t},  {"ZIIIZI", -t},  {"ZIIZZZ", -t},  {"ZIZIII", -t},  {"ZIZZIZ", -t},
      {"ZZIIZZ", 1.0}, {"ZZIZZI", -t},  {"ZZZIIZ", -t},  {"ZZZZII", 1.0}, {"XXXXXX", -t},  {"XXXYXY", t},
      {"XXYXYX", t},   {"XXYYYY", -t},  {"XYXXXY", t},   {"XYXYXX", t},   {"XYYXYY", -t},  {"XYYYYX", -t},
      {"YXXXYX", t},   {"YXXYYY", -t},  {"YXYXXX", t},   {"YXYYXY", -t},  {"YYXXYY", -t},  {"YYXYYX", -t},
      {"YYYXXY", -t},  {"YYYYXX", -t},
  };
}

ValidationReport reference_structure_checks(const Witness& w, double tol) {
  ValidationReport rep;
  auto add = [&](std::string name, double value) { rep.checks.push_back({std::move(name), value <= tol, value, tol}); };
  if (w.certificates.size() != 3 || w.w.rows() != 64) {
    rep.checks.push_back({"three 64x64 certificates", false, static_cast<double>(w.certificates.size()), 0.0});
    return rep;
  }
  for (const auto& c : w.certificates) {
    if (c.p.rows() != 64 || c.q.rows() != 64) {
      rep.checks.push_back({c.label + ": block sizes", false, 0.0, 0.0});
      return rep;
    }
  }
  for (int k = 0; k < 2; ++k) {
    const Matrix& p = w.certificates[k].p;
    add(w.certificates[k].label + ": P diagonal", (p - Matrix(p.diagonal().asDiagonal())).cwiseAbs().maxCoeff());
  }
  const Matrix expect_pc = (w.certificates[0].p - w.certificates[1].p).cwiseAbs().cast<cplx>();
  add(w.certificates[2].label + ": P = |P_A - P_B|", (w.certificates[2].p - expect_pc).cwiseAbs().maxCoeff());
  for (int k = 0; k < 3; ++k) {
    Matrix expect_q = w.certificates[k].p;
    for (const auto& d : kQTerms[k]) expect_q += difference_projector(d) / 12.0;
    add(w.certificates[k].label + ": Q = P + difference projectors", (w.certificates[k].q - expect_q).cwiseAbs().maxCoeff());
  }
  return rep;
}

json VariantComparison::to_json() const {
  json vs = json::array();
  for (const auto& v : variants) {
    vs.push_back({{"variant", to_string(v.variant)},
                  {"pauli_terms", v.pauli_terms},
                  {"matches_pauli_table", v.matches_pauli_table},
                  {"certificate_valid", v.certificate_valid},
                  {"max_decomposition_residual", v.max_decomposition_residual},
                  {"value_q0.06", v.value_q006}});
  }
  json diffs = json::array();
  for (const auto& [r, c] : differing_entries) diffs.push_back({r, c});
  return {{"variants", vs}, {"max_elementwise_difference", max_elementwise_difference}, {"differing_entries", diffs}};
}

VariantComparison compare_witness_variants() {
  VariantComparison out;
  const Matrix rho2 = n_copy_state(0.06, 2).matrix();
  const auto table = reference_pauli_table();
  std::vector<Matrix> ws;
  for (auto v : {WitnessVariant::GhzForm, WitnessVariant::TableForm}) {
    const Witness w = load_reference_witness(v);
    VariantDiagnostics d;
    d.variant = v;
    d.pauli_terms = w.pauli.size();
    d.matches_pauli_table = pauli_tables_match(w.pauli, table);
    CertificateTolerances tol;
    tol.trace = tol.psd = tol.decomposition = 1e-9;
    const auto rep = validate_certificate(w, tol);
    d.certificate_valid = rep.all_passed();
    for (const auto& c : rep.checks) {
      if (c.name.find("W = P + Q^T") != std::string::npos) d.max_decomposition_residual = std::max(d.max_decomposition_residual, c.value);
    }
    d.value_q006 = evaluate(w, rho2);
    out.variants.push_back(d);
    ws.push_back(w.w);
  }
  const Matrix diff = ws[0] - ws[1];
  out.max_elementwise_difference = diff.cwiseAbs().maxCoeff();
  for (int r = 0; r < 64; ++r) {
    for (int c = 0; c < 64; ++c) {
      if (std::abs(diff(r, c)) > 1e-15) out.differing_entries.emplace_back(r, c);
    }
  }
  return out;
}

}  // namespace gmeact
