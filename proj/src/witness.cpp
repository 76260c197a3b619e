#include "gmeact/witness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gmeact {

PartyPartition pair_partition() { return {{{0, 1}, {2, 3}, {4, 5}}, {"A1A2", "B1B2", "C1C2"}}; }

PartyPartition single_partition() { return {{{0}, {1}, {2}}, {"A", "B", "C"}}; }

PartyPartition default_partition(const Dims& dims) {
  if (dims.size() == 6) return pair_partition();
  if (dims.size() == 3) return single_partition();
  throw std::invalid_argument("witness search supports 3- or 6-subsystem registers");
}

SdpProblem build_problem(const DensityMatrix& rho) { return build_problem(rho, default_partition(rho.dims())); }

SdpProblem build_problem(const DensityMatrix& rho, const PartyPartition& partition) {
  const Dims& dims = rho.dims();
  if (partition.parts.size() != 3 || partition.labels.size() != 3) {
    throw std::invalid_argument("partition must have exactly three parties");
  }
  std::vector<int> seen(dims.size(), 0);
  for (const auto& part : partition.parts) {
    for (int s : part) {
      if (s < 0 || static_cast<std::size_t>(s) >= dims.size()) {
        throw std::invalid_argument("partition refers to a subsystem outside the register");
      }
      ++seen[s];
    }
  }
  if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; })) {
    throw std::invalid_argument("partition must cover every subsystem exactly once");
  }

  SdpProblem sp;
  sp.target = rho.matrix();
  sp.dims = dims;
  sp.partition = partition;
  const auto d = static_cast<int>(rho.size());
  auto& p = sp.program;
  p.blocks.push_back({"W", d, dims});
  for (std::size_t k = 0; k < 3; ++k) p.blocks.push_back({"P_" + partition.labels[k], d, dims});
  p.objective.push_back({0, rho.matrix()});
  p.equalities.push_back({{{0, Matrix::Identity(d, d)}}, 1.0});
  for (std::size_t k = 0; k < 3; ++k) {
    const int pk = static_cast<int>(k) + 1;
    p.cones.push_back({"P_" + partition.labels[k], dims, {{pk, 1.0, {}}}, std::nullopt});
    p.cones.push_back({"Q_" + partition.labels[k], dims,
                       {{0, 1.0, partition.parts[k]}, {pk, -1.0, partition.parts[k]}}, std::nullopt});
  }
  return sp;
}

namespace {

std::vector<PauliString> pauli_if_qubits(const Matrix& w, const Dims& dims) {
  if (dims.size() > 8 || std::any_of(dims.begin(), dims.end(), [](int d) { return d != 2; })) return {};
  return pauli_coefficients(w);
}

// Dual bound: for Z_k with Z_k, Z_k^{T_k} >= 0 and D = rho - sum_k Z_k^{T_k},
// every feasible W has Tr[W rho] >= min(lmin(D), lmin(D^{T_k})) for each k.
double dual_lower_bound(const SdpProblem& sp, const SolveResult& r) {
  const auto d = sp.target.rows();
  Matrix s = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& part = sp.partition.parts[k];
    Matrix z = 0.5 * (r.cone_duals[2 * k + 1] + r.cone_duals[2 * k + 1].adjoint());
    const double shift = std::max({0.0, -min_eigenvalue(z), -min_eigenvalue(partial_transpose(z, sp.dims, part))});
    z += shift * Matrix::Identity(d, d);
    s += partial_transpose(z, sp.dims, part);
  }
  const Matrix dres = sp.target - s;
  const double base = min_eigenvalue(dres);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& part : sp.partition.parts) {
    best = std::max(best, std::min(base, min_eigenvalue(partial_transpose(dres, sp.dims, part))));
  }
  return best;
}

}  // namespace

WitnessSolution solve(const SdpProblem& sp, const SolverOptions& opt, ConicSolver* solver) {
  AdmmSolver embedded;
  ConicSolver& use = solver ? *solver : embedded;
  SolveResult r = use.solve(sp.program, opt);
  if (r.report.status == SolveStatus::Infeasible) {
    throw InfeasibleProblem("witness program reported infeasible by solver " + r.report.solver);
  }
  if (r.report.status != SolveStatus::Optimal) {
    std::ostringstream msg;
    msg << "witness solve did not converge in " << r.report.iterations << " iterations (primal residual "
        << r.report.primal_residual << ", dual residual " << r.report.dual_residual << ", gap " << r.report.gap << ")";
    throw SolverNonconvergence(msg.str(), r.report);
  }

  const auto d = sp.target.rows();
  const Matrix id = Matrix::Identity(d, d);
  Matrix w = 0.5 * (r.blocks[0] + r.blocks[0].adjoint());
  std::vector<Matrix> ps(3), qs(3);
  std::array<double, 3> e1{}, e2{};
  double delta = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    ps[k] = 0.5 * (r.blocks[k + 1] + r.blocks[k + 1].adjoint());
    qs[k] = partial_transpose(Matrix(w - ps[k]), sp.dims, sp.partition.parts[k]);
    e1[k] = std::max(0.0, -min_eigenvalue(ps[k]));
    e2[k] = std::max(0.0, -min_eigenvalue(qs[k]));
    delta = std::max(delta, e1[k] + e2[k]);
  }
  // Shift every block onto the cones, then restore Tr W = 1.
  w += delta * id;
  for (std::size_t k = 0; k < 3; ++k) {
    ps[k] += e1[k] * id;
    qs[k] += (delta - e1[k]) * id;
  }
  const double scale = 1.0 / trace_real(w);
  w *= scale;

  WitnessSolution out;
  out.witness.w = w;
  out.witness.dims = sp.dims;
  for (std::size_t k = 0; k < 3; ++k) {
    out.witness.certificates.push_back({sp.partition.labels[k], sp.partition.parts[k], ps[k] * scale, qs[k] * scale});
  }
  out.witness.pauli = pauli_if_qubits(w, sp.dims);
  out.report = r.report;
  out.value = hs_inner(w, sp.target);
  if (r.cone_duals.size() == sp.program.cones.size()) out.lower_bound = dual_lower_bound(sp, r);
  return out;
}

double evaluate(const Witness& w, const Matrix& rho) {
  if (rho.rows() != w.w.rows() || rho.cols() != w.w.cols()) {
    throw std::invalid_argument("evaluate: witness and state dimensions differ");
  }
  return hs_inner(w.w, rho);
}

double evaluate(const Witness& w, const DensityMatrix& rho) { return evaluate(w, rho.matrix()); }

bool ValidationReport::all_passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckItem& c) { return c.passed; });
}

json ValidationReport::to_json() const {
  json items = json::array();
  for (const auto& c : checks) {
    items.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"tolerance", c.tolerance}});
  }
  return {{"all_passed", all_passed()}, {"checks", items}};
}

ValidationReport validate_certificate(const Witness& w, const CertificateTolerances& tol) {
  ValidationReport rep;
  auto add = [&](std::string name, bool ok, double value, double t) { rep.checks.push_back({std::move(name), ok, value, t}); };

  const double herm = hermiticity_error(w.w);
  add("W hermitian", herm <= tol.hermitian, herm, tol.hermitian);
  const double tr_err = std::abs(trace_real(w.w) - 1.0);
  add("trace W = 1", tr_err <= tol.trace, tr_err, tol.trace);
  add("certificates present", !w.certificates.empty(), static_cast<double>(w.certificates.size()), 0.0);

  const auto d = w.w.rows();
  for (const auto& c : w.certificates) {
    const bool shapes = c.p.rows() == d && c.p.cols() == d && c.q.rows() == d && c.q.cols() == d;
    if (!shapes) {
      add(c.label + ": block sizes", false, 0.0, 0.0);
      continue;
    }
    for (const auto& [tag, m] : {std::pair<const char*, const Matrix*>{"P", &c.p}, {"Q", &c.q}}) {
      const double h = hermiticity_error(*m);
      const Matrix sym = 0.5 * (*m + m->adjoint());
      const double lmin = min_eigenvalue(sym);
      add(c.label + ": " + tag + " hermitian", h <= tol.hermitian, h, tol.hermitian);
      add(c.label + ": " + tag + " psd", lmin >= -tol.psd, lmin, tol.psd);
    }
    double resid = std::numeric_limits<double>::infinity();
    try {
      resid = (w.w - c.p - partial_transpose(c.q, w.dims, c.subsystems)).norm();
    } catch (const std::exception&) {
    }
    add(c.label + ": W = P + Q^T", resid <= tol.decomposition, resid, tol.decomposition);
  }
  return rep;
}

json witness_to_json(const Witness& w) {
  json j;
  j["W"] = matrix_to_json(w.w, w.dims);
  j["certificates"] = json::object();
  for (const auto& c : w.certificates) {
    j["certificates"][c.label] = {{"subsystems", c.subsystems}, {"P", matrix_to_json(c.p, w.dims)}, {"Q", matrix_to_json(c.q, w.dims)}};
  }
  j["pauli"] = json::array();
  for (const auto& t : w.pauli) j["pauli"].push_back({{"word", t.word}, {"m", t.weight}});
  return j;
}

Witness witness_from_json(const json& j) {
  try {
    Witness w;
    w.w = matrix_from_json(j.at("W"), &w.dims);
    if (j.contains("certificates")) {
      for (const auto& [label, c] : j["certificates"].items()) {
        Certificate cert;
        cert.label = label;
        if (c.contains("subsystems")) {
          cert.subsystems = c["subsystems"].get<std::vector<int>>();
        } else {
          const auto part = default_partition(w.dims);
          const auto it = std::find(part.labels.begin(), part.labels.end(), label);
          if (it == part.labels.end()) throw std::invalid_argument("unknown certificate label " + label);
          cert.subsystems = part.parts[static_cast<std::size_t>(it - part.labels.begin())];
        }
        cert.p = matrix_from_json(c.at("P"));
        cert.q = matrix_from_json(c.at("Q"));
        w.certificates.push_back(std::move(cert));
      }
    }
    if (j.contains("pauli")) {
      for (const auto& t : j["pauli"]) w.pauli.push_back({t.at("word").get<std::string>(), t.at("m").get<double>()});
    }
    return w;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed witness document: ") + e.what());
  }
}

bool pauli_tables_match(const std::vector<PauliString>& a, const std::vector<PauliString>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].word != b[k].word || std::abs(a[k].weight - b[k].weight) > tol) return false;
  }
  return true;
}

}  // namespace gmeact
