#!/usr/bin/env python3
"""End-to-end CLI checks: exit codes, output files, and JSON schema conformance.

Usage: cli_test.py <gmeact binary> <schemas dir> <adapter script>
"""
import csv
import json
import os
import subprocess
import sys
import tempfile
import unittest

import jsonschema

GMEACT, SCHEMAS, ADAPTER = sys.argv[1:4]
del sys.argv[1:4]


def schema(name):
    with open(os.path.join(SCHEMAS, name)) as f:
        return json.load(f)


def load(path):
    with open(path) as f:
        return json.load(f)


class Cli(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.tmp = tempfile.TemporaryDirectory()
        cls.dir = cls.tmp.name

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def path(self, name):
        return os.path.join(self.dir, name)

    def run_cli(self, *args, env=None):
        full_env = dict(os.environ)
        full_env.pop("GMEACT_CONFIG", None)
        if env:
            full_env.update(env)
        return subprocess.run([GMEACT, *args], capture_output=True, text=True, env=full_env, timeout=1800)

    def validate(self, doc, name):
        jsonschema.validate(doc, schema(name))

    def assert_error(self, proc, code, kind):
        self.assertEqual(proc.returncode, code, proc.stderr)
        err = json.loads(proc.stderr.strip().splitlines()[-1])
        self.validate(err, "error.schema.json")
        self.assertEqual(err["kind"], kind)

    def ghz3(self):
        p = self.path("ghz3.json")
        re = [0.0] * 64
        for i in (0, 7):
            for j in (0, 7):
                re[i * 8 + j] = 0.5
        with open(p, "w") as f:
            json.dump({"dims": [2, 2, 2], "re": re, "im": [0.0] * 64}, f)
        return p

    def test_build_state_two_copy(self):
        out = self.path("state2.json")
        proc = self.run_cli("build-state", "--q", "0", "--copies", "2", "--out", out)
        self.assertEqual(proc.returncode, 0, proc.stderr)
        doc = load(out)
        self.validate(doc, "state.schema.json")
        self.assertEqual(doc["dims"], [2] * 6)
        self.assertEqual(len(doc["re"]), 64 * 64)

    def test_build_state_to_stdout(self):
        proc = self.run_cli("build-state", "--q", "0.06")
        self.assertEqual(proc.returncode, 0)
        self.validate(json.loads(proc.stdout), "state.schema.json")

    def test_validate_reference_witness(self):
        proc = self.run_cli("validate-witness", "--reference")
        self.assertEqual(proc.returncode, 0, proc.stderr)
        doc = json.loads(proc.stdout)
        self.assertEqual(self.run_cli("validate-witness", "--paper").stdout, proc.stdout)
        self.validate(doc, "validation_report.schema.json")
        self.assertTrue(doc["all_passed"])
        self.assertTrue(doc["pauli_table_match"])

    def test_find_and_validate_witness(self):
        state = self.ghz3()
        out, prog, log = self.path("w3.json"), self.path("prog.json"), self.path("log.jsonl")
        proc = self.run_cli("find-witness", "--state", state, "--out", out, "--dump-program", prog, "--json-log", log)
        self.assertEqual(proc.returncode, 0, proc.stderr)
        doc = load(out)
        self.validate(doc, "witness.schema.json")
        self.assertLess(doc["value"], -0.1)
        self.validate(load(prog), "conic_program.schema.json")
        with open(log) as f:
            for line in f:
                self.validate(json.loads(line), "json_log.schema.json")

        proc = self.run_cli("validate-witness", "--witness", out)
        self.assertEqual(proc.returncode, 0, proc.stderr)
        report = json.loads(proc.stdout)
        self.validate(report, "validation_report.schema.json")
        self.assertTrue(report["all_passed"])

        # Tampered certificate: validation fails with exit code 1.
        doc["W"]["re"][0] += 0.5
        bad = self.path("w3_bad.json")
        with open(bad, "w") as f:
            json.dump(doc, f)
        proc = self.run_cli("validate-witness", "--witness", bad)
        self.assertEqual(proc.returncode, 1)
        self.assertFalse(json.loads(proc.stdout)["all_passed"])

    def test_external_adapter_protocol(self):
        state = self.ghz3()
        prog = self.path("prog_ext.json")
        self.assertEqual(self.run_cli("find-witness", "--state", state, "--dump-program", prog,
                                      "--out", self.path("w_ext0.json")).returncode, 0)
        with open(prog) as f:
            reply = subprocess.run([sys.executable, ADAPTER, "--solver", "SCS", "--tol", "1e-9"], stdin=f,
                                   capture_output=True, text=True, timeout=600)
        self.assertEqual(reply.returncode, 0, reply.stderr)
        sol = json.loads(reply.stdout)
        self.validate(sol, "solution.schema.json")
        self.assertEqual(sol["status"], "optimal")

        cmd = f"{sys.executable} {ADAPTER} --solver SCS --tol 1e-9"
        out = self.path("w_ext.json")
        proc = self.run_cli("find-witness", "--state", state, "--external", cmd, "--out", out)
        self.assertEqual(proc.returncode, 0, proc.stderr)
        doc = load(out)
        self.validate(doc, "witness.schema.json")
        self.assertAlmostEqual(doc["value"], load(self.path("w_ext0.json"))["value"], delta=1e-5)

    def test_certify_bisep(self):
        state = self.path("mixed3.json")
        re = [0.0] * 64
        for i in range(8):
            re[i * 9] = 1 / 8
        with open(state, "w") as f:
            json.dump({"dims": [2, 2, 2], "re": re, "im": [0.0] * 64}, f)
        trace = self.path("trace.json")
        proc = self.run_cli("certify-bisep", "--state", state, "--trace", trace, "--trace-matrices")
        self.assertEqual(proc.returncode, 0, proc.stderr)
        summary = json.loads(proc.stdout)
        self.validate(summary, "bisep_trace.schema.json")
        self.assertEqual(summary["verdict"], "biseparable")
        self.validate(load(trace), "bisep_trace.schema.json")

        proc = self.run_cli("certify-bisep", "--state", self.ghz3(), "--jmax", "20", "--strategy", "lp_vertex",
                            "--trace", trace, "--trace-matrices")
        self.assertEqual(proc.returncode, 0, proc.stderr)
        self.assertEqual(json.loads(proc.stdout)["verdict"], "inconclusive")
        self.validate(load(trace), "bisep_trace.schema.json")

    def test_simulate_and_estimate(self):
        shots, hist = self.path("shots.json"), self.path("hist.csv")
        proc = self.run_cli("simulate", "--q", "0.06", "--shots", "50", "--seed", "7", "--out", shots)
        self.assertEqual(proc.returncode, 0, proc.stderr)
        table = load(shots)
        self.validate(table, "shots.schema.json")
        self.assertEqual(len(table["setting_words"]), 17)

        again = self.path("shots_again.json")
        self.run_cli("simulate", "--q", "0.06", "--shots", "50", "--seed", "7", "--out", again)
        self.assertEqual(load(again)["f"], table["f"])

        proc = self.run_cli("estimate", "--shots", shots, "--resample", "1000", "--hist", hist)
        self.assertEqual(proc.returncode, 0, proc.stderr)
        est = json.loads(proc.stdout)
        self.validate(est, "estimate.schema.json")
        ratio = est["bootstrap_sigma"] / est["propagated_sigma"]
        self.assertTrue(0.8 <= ratio <= 1.2, ratio)
        with open(hist) as f:
            rows = list(csv.reader(f))
        self.assertEqual(rows[0], ["estimate"])
        self.assertEqual(len(rows) - 1, 1000)

        noisy = self.path("shots_noisy.json")
        proc = self.run_cli("simulate", "--shots", "5", "--noise", "depol=0.02,dephase=0.01", "--out", noisy)
        self.assertEqual(proc.returncode, 0, proc.stderr)
        self.validate(load(noisy), "shots.schema.json")

        exact = self.path("shots_exact.json")
        self.run_cli("simulate", "--q", "0", "--exact", "--out", exact)
        est = json.loads(self.run_cli("estimate", "--shots", exact).stdout)
        self.assertAlmostEqual(est["estimate"], -1.042e-2, delta=5e-5)
        self.assertEqual(est["propagated_sigma"], 0.0)

    def test_usage_errors(self):
        self.assert_error(self.run_cli("estimate", "--shots", self.path("missing.json")), 2, "usage")
        shots = self.path("shots_small.json")
        self.run_cli("simulate", "--shots", "2", "--out", shots)
        self.assert_error(self.run_cli("estimate", "--shots", shots, "--witness", self.path("missing.json")), 2,
                          "usage")
        self.assert_error(self.run_cli("find-witness", "--state", self.path("missing.json")), 2, "usage")
        self.assert_error(self.run_cli("simulate", "--noise", "depol=7"), 2, "usage")
        self.assert_error(self.run_cli("validate-witness"), 2, "usage")
        self.assert_error(self.run_cli("reproduce", "--config", self.path("missing.json")), 2, "usage")
        garbage = self.path("garbage.json")
        with open(garbage, "w") as f:
            f.write("{not json")
        self.assert_error(self.run_cli("certify-bisep", "--state", garbage), 2, "usage")
        self.assertEqual(self.run_cli().returncode, 2)
        self.assertEqual(self.run_cli("no-such-command").returncode, 2)
        self.assertEqual(self.run_cli("build-state", "--q", "abc").returncode, 2)
        self.assertEqual(self.run_cli("--help").returncode, 0)

    def test_computation_error(self):
        self.assert_error(self.run_cli("build-state", "--q", "2"), 1, "computation")

    def test_config_validation(self):
        cfg = self.path("bad_cfg.json")
        with open(cfg, "w") as f:
            json.dump({"unknown": 1}, f)
        self.assert_error(self.run_cli("reproduce", env={"GMEACT_CONFIG": cfg}), 2, "usage")

    def test_reproduce_off_nominal(self):
        cfg, report = self.path("cfg.json"), self.path("report.json")
        config = {"q": 0.5, "resample_runs": 200, "j_max": 50}
        self.validate(config, "run_config.schema.json")
        with open(cfg, "w") as f:
            json.dump(config, f)
        proc = self.run_cli("reproduce", "--report", report, env={"GMEACT_CONFIG": cfg})
        self.assertIn(proc.returncode, (0, 1), proc.stderr)
        doc = load(report)
        self.validate(doc, "reproduce_report.schema.json")
        self.validate(doc["config"], "run_config.schema.json")
        stages = {s["name"]: s for s in doc["stages"]}
        self.assertEqual(stages["witness_value_two_copy"]["status"], "skipped-assert")
        self.assertGreater(abs(stages["witness_value_two_copy"]["details"]["value"] + 0.887e-2), 1e-4)
        self.assertEqual(stages["sdp_optimum_q0"]["status"], "pass")
        self.assertEqual(proc.returncode, 0 if doc["passed"] else 1)


if __name__ == "__main__":
    unittest.main(verbosity=2)
