#include "gmeact/external_solver.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <unistd.h>

namespace gmeact {

namespace {

Dims square_dims(Eigen::Index n, const Dims& hint) {
  return hint.empty() ? Dims{static_cast<int>(n)} : hint;
}

}  // namespace

json conic_program_to_json(const ConicProgram& p) {
  p.validate();
  json j;
  j["format"] = "gmeact-conic-v1";
  j["blocks"] = json::array();
  for (const auto& b : p.blocks) {
    json jb{{"name", b.name}, {"dim", b.dim}};
    if (!b.dims.empty()) jb["dims"] = b.dims;
    j["blocks"].push_back(jb);
  }
  j["objective"] = json::array();
  for (const auto& t : p.objective) {
    j["objective"].push_back({{"block", t.block}, {"C", matrix_to_json(t.c, square_dims(t.c.rows(), p.blocks[t.block].dims))}});
  }
  j["equalities"] = json::array();
  for (const auto& eq : p.equalities) {
    json terms = json::array();
    for (const auto& t : eq.terms) {
      terms.push_back({{"block", t.block}, {"A", matrix_to_json(t.a, square_dims(t.a.rows(), p.blocks[t.block].dims))}});
    }
    j["equalities"].push_back({{"terms", terms}, {"rhs", eq.rhs}});
  }
  j["cones"] = json::array();
  for (const auto& c : p.cones) {
    json terms = json::array();
    for (const auto& t : c.terms) {
      terms.push_back({{"block", t.block}, {"coeff", t.coeff}, {"transpose", t.transpose}});
    }
    j["cones"].push_back({{"name", c.name},
                          {"dims", c.dims},
                          {"terms", terms},
                          {"offset", c.offset ? matrix_to_json(*c.offset, c.dims) : json(nullptr)}});
  }
  return j;
}

ConicProgram conic_program_from_json(const json& j) {
  try {
    if (j.at("format") != "gmeact-conic-v1") throw std::invalid_argument("unsupported conic program format");
    ConicProgram p;
    for (const auto& b : j.at("blocks")) {
      p.blocks.push_back({b.at("name").get<std::string>(), b.at("dim").get<int>(),
                          b.contains("dims") ? b["dims"].get<Dims>() : Dims{}});
    }
    for (const auto& t : j.at("objective")) p.objective.push_back({t.at("block").get<int>(), matrix_from_json(t.at("C"))});
    for (const auto& eq : j.at("equalities")) {
      EqualityConstraint e;
      e.rhs = eq.at("rhs").get<double>();
      for (const auto& t : eq.at("terms")) e.terms.push_back({t.at("block").get<int>(), matrix_from_json(t.at("A"))});
      p.equalities.push_back(std::move(e));
    }
    for (const auto& c : j.at("cones")) {
      ConeConstraint cone;
      cone.name = c.at("name").get<std::string>();
      cone.dims = c.at("dims").get<Dims>();
      for (const auto& t : c.at("terms")) {
        cone.terms.push_back({t.at("block").get<int>(), t.at("coeff").get<double>(), t.at("transpose").get<std::vector<int>>()});
      }
      if (c.contains("offset") && !c["offset"].is_null()) cone.offset = matrix_from_json(c["offset"]);
      p.cones.push_back(std::move(cone));
    }
    p.validate();
    return p;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed conic program: ") + e.what());
  }
}

json solution_to_json(const SolveResult& r, const ConicProgram& p) {
  json j{{"format", "gmeact-solution-v1"},
         {"solver", r.report.solver},
         {"status", to_string(r.report.status)},
         {"objective", r.report.objective},
         {"iterations", r.report.iterations}};
  j["blocks"] = json::array();
  for (std::size_t b = 0; b < r.blocks.size(); ++b) {
    j["blocks"].push_back(matrix_to_json(r.blocks[b], square_dims(r.blocks[b].rows(), p.blocks[b].dims)));
  }
  return j;
}

SolveResult solution_from_json(const json& j) {
  try {
    if (j.at("format") != "gmeact-solution-v1") throw std::invalid_argument("unsupported solution format");
    SolveResult r;
    const auto status = j.at("status").get<std::string>();
    if (status == "optimal") r.report.status = SolveStatus::Optimal;
    else if (status == "infeasible") r.report.status = SolveStatus::Infeasible;
    else if (status == "max_iter") r.report.status = SolveStatus::MaxIter;
    else throw std::runtime_error("external solver reported: " + j.value("message", status));
    r.report.solver = j.value("solver", std::string("external"));
    if (j.contains("objective") && !j["objective"].is_null()) r.report.objective = j["objective"].get<double>();
    r.report.iterations = j.value("iterations", 0L);
    for (const auto& b : j.at("blocks")) r.blocks.push_back(matrix_from_json(b));
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed solution document: ") + e.what());
  }
}

SolveResult ExternalSolver::solve(const ConicProgram& p, const SolverOptions&) {
  const json problem = conic_program_to_json(p);

  std::string tmpl = (std::filesystem::temp_directory_path() / "gmeact-conic-XXXXXX").string();
  const int fd = mkstemp(tmpl.data());
  if (fd < 0) throw std::runtime_error("cannot create temporary file for external solver");
  close(fd);
  const std::filesystem::path input(tmpl);
  struct Cleanup {
    std::filesystem::path path;
    ~Cleanup() { std::error_code ec; std::filesystem::remove(path, ec); }
  } cleanup{input};
  {
    std::ofstream out(input);
    out << problem.dump();
    if (!out) throw std::runtime_error("cannot write external solver input");
  }

  const std::string cmd = command_ + " < '" + input.string() + "'";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("cannot launch external solver: " + command_);
  std::string output;
  char buf[65536];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, n);
  const int rc = pclose(pipe);
  if (rc != 0) throw std::runtime_error("external solver exited with status " + std::to_string(rc));

  json reply;
  try {
    reply = json::parse(output);
  } catch (const json::exception&) {
    throw std::runtime_error("external solver produced no JSON solution");
  }
  SolveResult r = solution_from_json(reply);
  if (r.blocks.size() != p.blocks.size()) throw std::runtime_error("external solver returned wrong number of blocks");
  for (std::size_t b = 0; b < r.blocks.size(); ++b) {
    if (r.blocks[b].rows() != p.blocks[b].dim) throw std::runtime_error("external solver returned a mis-sized block");
  }
  r.report.objective = objective_value(p, r.blocks);
  double worst = 0.0;
  for (std::size_t c = 0; c < p.cones.size(); ++c) worst = std::max(worst, -min_eigenvalue(cone_value(p, c, r.blocks)));
  r.report.primal_residual = worst;
  return r;
}

}  // namespace gmeact
