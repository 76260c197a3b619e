#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "gmeact/pipeline.hpp"

using namespace gmeact;

TEST_SUITE("pipeline") {
  TEST_CASE("config round trip") {
    RunConfig c;
    c.q = 0.1;
    c.shots = 20;
    c.seed = 99;
    c.strategy = WeightStrategy::LpVertex;
    c.noise = NoiseModel::parse("depol=0.02");
    c.tolerances.psd = 1e-9;
    c.external_solver = "python3 adapter.py";
    const auto back = RunConfig::from_json(c.to_json());
    CHECK(back.to_json() == c.to_json());
  }

  TEST_CASE("missing keys keep defaults") {
    const auto c = RunConfig::from_json(json{{"q", 0.2}});
    CHECK(c.q == 0.2);
    CHECK(c.shots == RunConfig{}.shots);
    CHECK(c.seed == RunConfig{}.seed);
  }

  TEST_CASE("bad configs are rejected") {
    CHECK_THROWS_AS(RunConfig::from_json(json{{"unknown_key", 1}}), std::invalid_argument);
    CHECK_THROWS_AS(RunConfig::from_json(json{{"q", 1.5}}), std::invalid_argument);
    CHECK_THROWS_AS(RunConfig::from_json(json{{"shots", 0}}), std::invalid_argument);
    CHECK_THROWS_AS(RunConfig::from_json(json{{"strategy", "other"}}), std::invalid_argument);
    CHECK_THROWS_AS(load_run_config("/nonexistent/gmeact.json"), std::runtime_error);
  }

  TEST_CASE("config file loading") {
    const auto path = std::filesystem::temp_directory_path() / "gmeact_cfg_test.json";
    std::ofstream(path) << R"({"q": 0.03, "resample_runs": 10})";
    const auto c = load_run_config(path.string());
    CHECK(c.q == 0.03);
    CHECK(c.resample_runs == 10);
    std::filesystem::remove(path);
  }

  TEST_CASE("stage status names") {
    CHECK(to_string(StageStatus::SkippedAssert) == "skipped-assert");
    ReproduceReport r;
    r.stages.push_back({"a", StageStatus::Pass, json::object()});
    r.stages.push_back({"b", StageStatus::SkippedAssert, json::object()});
    CHECK(r.passed());
    r.stages.push_back({"c", StageStatus::Fail, json::object()});
    CHECK_FALSE(r.passed());
    CHECK(r.to_json(RunConfig{})["stages"].size() == 3);
  }
}
