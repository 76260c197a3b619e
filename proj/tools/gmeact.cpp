// gmeact command-line interface.
//
// Exit codes: 0 success, 1 computation failure (JSON error on stderr),
// 2 usage error or unreadable input.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>

#include <CLI11.hpp>

#include "gmeact/bisep.hpp"
#include "gmeact/experiment.hpp"
#include "gmeact/external_solver.hpp"
#include "gmeact/pipeline.hpp"
#include "gmeact/states.hpp"
#include "gmeact/witness.hpp"

using namespace gmeact;

namespace {

// Input problems (missing or unparsable files) map to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json load_input(const std::string& path, const char* what) {
  if (path.empty()) throw UsageError(std::string("missing --") + what);
  if (!std::filesystem::exists(path)) throw UsageError(std::string(what) + " file not found: " + path);
  try {
    return read_json_file(path);
  } catch (const std::exception& e) {
    throw UsageError(std::string("cannot read ") + what + " file: " + e.what());
  }
}

void emit(const json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(1) << '\n';
  } else {
    write_json_file(out, j);
  }
}

double stddev(const std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

struct Common {
  std::uint64_t seed = 7;
  std::string json_log;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool with_out = true) {
  cmd->add_option("--seed", c.seed, "random seed")->capture_default_str();
  cmd->add_option("--json-log", c.json_log, "append a JSON line describing the run to this file");
  if (with_out) cmd->add_option("--out", c.out, "output file (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-copy GME activation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global options are also accepted after the subcommand
  std::string config_path;
  if (const char* env = std::getenv("GMEACT_CONFIG")) config_path = env;
  app.add_option("--config", config_path, "run configuration JSON (default: $GMEACT_CONFIG)");

  Common common;
  json summary = json::object();

  // build-state
  double q = 0.06;
  int copies = 1;
  auto* build = app.add_subcommand("build-state", "write rho(q) or its n-copy party-major state");
  build->add_option("--q", q, "noise fraction")->capture_default_str();
  build->add_option("--copies", copies, "number of copies (1..3)")->capture_default_str();
  add_common(build, common);

  // find-witness
  std::string state_path;
  double tol = 1e-7;
  long max_iter = 50000;
  std::string external;
  auto* find = app.add_subcommand("find-witness", "solve the fully decomposable witness program");
  find->add_option("--state", state_path, "state JSON")->required();
  find->add_option("--tol", tol, "solver tolerance")->capture_default_str();
  find->add_option("--max-iter", max_iter, "iteration budget")->capture_default_str();
  find->add_option("--external", external, "external adapter command, e.g. 'python3 tools/sdp_adapter_cvxpy.py'");
  std::string dump_path;
  find->add_option("--dump-program", dump_path, "also write the conic program sent to the solver");
  add_common(find, common);

  // validate-witness
  std::string witness_path;
  bool reference = false;
  std::string variant = "ghz";
  auto* validate = app.add_subcommand("validate-witness", "check a witness certificate");
  validate->add_option("--witness", witness_path, "witness JSON");
  validate->add_flag("--reference,--paper", reference, "validate the tabulated two-copy witness");
  validate->add_option("--variant", variant, "tabulated variant: ghz or table")->check(CLI::IsMember({"ghz", "table"}));
  add_common(validate, common);

  // certify-bisep
  int jmax = 1000;
  std::string strategy = "proportional";
  std::string trace_path;
  bool trace_matrices = false;
  auto* cert = app.add_subcommand("certify-bisep", "subtraction certificate of biseparability");
  cert->add_option("--state", state_path, "three-qubit state JSON")->required();
  cert->add_option("--jmax", jmax, "iteration limit")->capture_default_str();
  cert->add_option("--strategy", strategy, "proportional or lp_vertex")->check(CLI::IsMember({"proportional", "lp_vertex"}));
  cert->add_option("--trace", trace_path, "write the full subtraction trace here");
  cert->add_flag("--trace-matrices", trace_matrices, "include remainders and mixtures in the trace");
  add_common(cert, common);

  // simulate
  long shots = 50;
  std::string noise = "none";
  bool exact = false;
  auto* sim = app.add_subcommand("simulate", "sample the two-copy witness measurement");
  sim->add_option("--q", q, "noise fraction")->capture_default_str();
  sim->add_option("--shots", shots, "shots per pair and setting")->capture_default_str();
  sim->add_option("--noise", noise, "none or depol=<p>[,dephase=<g>]")->capture_default_str();
  sim->add_flag("--exact", exact, "store exact Born probabilities instead of samples");
  add_common(sim, common);

  // estimate
  std::string shots_path;
  int resample = 0;
  std::string hist_path;
  auto* est = app.add_subcommand("estimate", "witness estimate, propagated and bootstrap uncertainty");
  est->add_option("--shots", shots_path, "shot table JSON")->required();
  est->add_option("--witness", witness_path, "witness JSON (default: tabulated witness)");
  est->add_option("--resample", resample, "bootstrap runs (0 disables)")->capture_default_str();
  est->add_option("--hist", hist_path, "CSV of bootstrap estimates");
  add_common(est, common);

  // reproduce
  std::string report_path;
  auto* repro = app.add_subcommand("reproduce", "run every reproduction stage");
  repro->add_option("--report", report_path, "report JSON (default stdout)");
  repro->add_option("--q", q, "override q");
  repro->add_option("--external", external, "also cross-check with this external adapter command");
  repro->add_option("--seed", common.seed, "random seed");
  repro->add_option("--json-log", common.json_log, "append a JSON line describing the run to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  CLI::App* active = app.get_subcommands().front();
  const auto t0 = std::chrono::steady_clock::now();
  int rc = 0;
  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      try {
        cfg = load_run_config(config_path);
      } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("bad config: ") + e.what());
      } catch (const std::runtime_error& e) {
        throw UsageError(std::string("cannot read config: ") + e.what());
      }
      set_tolerances(cfg.tolerances);
    }

    if (active == build) {
      const auto rho = n_copy_state(q, copies);
      json j = density_to_json(rho);
      j["q"] = q;
      j["copies"] = copies;
      emit(j, common.out);
      summary = {{"dim", rho.size()}, {"purity", purity(rho)}};
    } else if (active == find) {
      DensityMatrix rho = [&] {
        const json j = load_input(state_path, "state");
        try {
          return density_from_json(j);
        } catch (const std::invalid_argument& e) {
          throw UsageError(std::string("invalid state: ") + e.what());
        }
      }();
      const auto problem = build_problem(rho);
      if (!dump_path.empty()) write_json_file(dump_path, conic_program_to_json(problem.program));
      SolverOptions opt;
      opt.tol = tol;
      opt.max_iter = max_iter;
      opt.seed = common.seed;
      std::unique_ptr<ConicSolver> solver;
      if (!external.empty()) solver = std::make_unique<ExternalSolver>(external);
      const auto sol = solve(problem, opt, solver.get());
      json j = witness_to_json(sol.witness);
      j["value"] = sol.value;
      j["solve"] = {{"solver", sol.report.solver},
                    {"status", to_string(sol.report.status)},
                    {"iterations", sol.report.iterations},
                    {"objective", sol.report.objective},
                    {"primal_residual", sol.report.primal_residual},
                    {"dual_residual", sol.report.dual_residual}};
      if (sol.lower_bound) j["solve"]["lower_bound"] = *sol.lower_bound;
      emit(j, common.out);
      summary = {{"value", sol.value}, {"iterations", sol.report.iterations}};
    } else if (active == validate) {
      if (reference == !witness_path.empty()) throw UsageError("give exactly one of --witness or --reference");
      json j;
      if (reference) {
        const auto w = load_reference_witness(variant == "ghz" ? WitnessVariant::GhzForm : WitnessVariant::TableForm);
        CertificateTolerances ct;
        ct.trace = ct.psd = ct.decomposition = 1e-12;
        const auto rep = validate_certificate(w, ct);
        const auto structure = reference_structure_checks(w);
        j = rep.to_json();
        j["structure"] = structure.to_json();
        j["all_passed"] = rep.all_passed() && structure.all_passed();
        j["pauli_table_match"] = pauli_tables_match(w.pauli, reference_pauli_table());
        j["variants"] = compare_witness_variants().to_json();
      } else {
        Witness w = [&] {
          const json wj = load_input(witness_path, "witness");
          try {
            return witness_from_json(wj);
          } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("invalid witness: ") + e.what());
          }
        }();
        j = validate_certificate(w).to_json();
      }
      emit(j, common.out);
      summary = {{"all_passed", j["all_passed"]}};
      if (!j["all_passed"].get<bool>()) rc = 1;
    } else if (active == cert) {
      const DensityMatrix rho = [&] {
        const json j = load_input(state_path, "state");
        try {
          return density_from_json(j);
        } catch (const std::invalid_argument& e) {
          throw UsageError(std::string("invalid state: ") + e.what());
        }
      }();
      CertifierConfig cc;
      cc.j_max = jmax;
      cc.strategy = weight_strategy_from_string(strategy);
      cc.seed = common.seed;
      const auto trace = certify(rho, cc);
      if (!trace_path.empty()) write_json_file(trace_path, trace.to_json(trace_matrices));
      json j = trace.to_json(false);
      j.erase("steps");
      emit(j, common.out);
      summary = {{"verdict", to_string(trace.verdict)}, {"iterations", trace.iterations}};
    } else if (active == sim) {
      SimulationOptions so;
      so.q = q;
      so.shots = shots;
      so.seed = common.seed;
      so.exact = exact;
      try {
        so.noise = NoiseModel::parse(noise);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const auto table = sample_shot_table(so);
      emit(table.to_json(), common.out);
      summary = {{"cells", table.cells()}, {"settings", table.settings.size()}};
    } else if (active == est) {
      const ShotTable table = [&] {
        const json j = load_input(shots_path, "shots");
        try {
          return ShotTable::from_json(j);
        } catch (const std::invalid_argument& e) {
          throw UsageError(std::string("invalid shot table: ") + e.what());
        }
      }();
      const Witness w = witness_path.empty() ? load_reference_witness() : [&] {
        const json wj = load_input(witness_path, "witness");
        try {
          return witness_from_json(wj);
        } catch (const std::invalid_argument& e) {
          throw UsageError(std::string("invalid witness: ") + e.what());
        }
      }();
      const auto pauli = w.pauli.empty() ? pauli_coefficients(w.w) : w.pauli;
      const auto weights = estimator_weights(pauli, table.settings, mixture_spec(table.q));
      const double value = estimate_witness(table, weights);
      const double sigma = std::sqrt(propagate_variance(table, weights));
      json j{{"estimate", value}, {"propagated_sigma", sigma}, {"shots", table.shots}, {"q", table.q}};
      if (resample > 0) {
        if (resample < 2) throw UsageError("--resample needs at least 2 runs");
        const auto boot = resample_witness(table, weights, resample, common.seed);
        j["resample_runs"] = resample;
        j["bootstrap_sigma"] = stddev(boot);
        j["bootstrap_mean"] = std::accumulate(boot.begin(), boot.end(), 0.0) / static_cast<double>(boot.size());
        if (!hist_path.empty()) write_histogram_csv(hist_path, boot);
      } else if (!hist_path.empty()) {
        throw UsageError("--hist requires --resample");
      }
      emit(j, common.out);
      summary = {{"estimate", value}, {"propagated_sigma", sigma}};
    } else if (active == repro) {
      if (repro->count("--q")) cfg.q = q;
      if (repro->count("--seed")) cfg.seed = common.seed;
      if (!external.empty()) cfg.external_solver = external;
      const auto rep = cmd_reproduce(cfg);
      const json j = rep.to_json(cfg);
      emit(j, report_path.empty() ? cfg.report_path : report_path);
      json stages = json::object();
      for (const auto& s : rep.stages) stages[s.name] = to_string(s.status);
      summary = {{"passed", rep.passed()}, {"stages", stages}};
      if (!rep.passed()) rc = 1;
    }
  } catch (const UsageError& e) {
    std::cerr << json{{"error", e.what()}, {"command", active->get_name()}, {"kind", "usage"}}.dump() << '\n';
    rc = 2;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}, {"command", active->get_name()}, {"kind", "computation"}}.dump() << '\n';
    rc = 1;
  }

  if (!common.json_log.empty()) {
    std::ofstream log(common.json_log, std::ios::app);
    log << json{{"command", active->get_name()},
                {"seed", common.seed},
                {"exit_code", rc},
                {"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
                {"summary", summary}}
               .dump()
        << '\n';
  }
  return rc;
}
