#!/usr/bin/env python3
# Copyright 2026 The SubStrat Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Black-box tests of the substrat executable.

Usage: test_cli.py --cli PATH --data DIR --schemas DIR
"""

import argparse
import json
import os
import random
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

import jsonschema

ARGS = None


def substrat(*argv, env=None, stdin=None):
    full_env = dict(os.environ)
    full_env.pop("SUBSTRAT_ADAPTER", None)
    full_env.update(env or {})
    return subprocess.run([ARGS.cli, *map(str, argv)], capture_output=True, text=True, env=full_env,
                          input=stdin, timeout=240)


def write_synthetic(path, rows, cols, seed):
    """Categorical features f0..f{cols-2} plus a binary target y."""
    rng = random.Random(seed)
    with open(path, "w") as f:
        f.write(",".join([f"f{j}" for j in range(cols - 1)] + ["y"]) + "\n")
        for _ in range(rows):
            y = rng.randrange(2)
            feats = [str((y + j) % (2 + j) if rng.random() < 0.4 else rng.randrange(2 + j)) for j in range(cols - 1)]
            f.write(",".join(feats + [str(y)]) + "\n")


def schema(name):
    with open(Path(ARGS.schemas) / f"{name}.schema.json") as f:
        return json.load(f)


class CliTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.tmp = tempfile.TemporaryDirectory()
        cls.dir = Path(cls.tmp.name)
        cls.flights = Path(ARGS.data) / "flights.csv"
        cls.small = cls.dir / "small.csv"
        write_synthetic(cls.small, 1500, 10, 1)
        cls.wide = cls.dir / "wide.csv"
        write_synthetic(cls.wide, 10000, 20, 2)

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def ok(self, *argv, **kw):
        r = substrat(*argv, **kw)
        self.assertEqual(r.returncode, 0, r.stderr)
        return r.stdout

    def data(self, path=None):
        return ["--input", path or self.small, "--target", "y"]

    # entropy -------------------------------------------------------------

    def test_entropy_flights(self):
        out = self.ok("entropy", "--input", self.flights, "--target", "Satisfied").strip()
        self.assertEqual(out, "1.3948")
        self.assertLessEqual(abs(float(out) - 1.395), 0.005)

    def test_entropy_green_subset(self):
        out = self.ok("entropy", "--input", self.flights, "--target", "Satisfied",
                      "--row-indices", "0,1,2,5,7", "--col-indices", "0,3,4")
        self.assertEqual(out.strip(), "1.4213")

    def test_entropy_constant(self):
        path = self.dir / "constant.csv"
        path.write_text("a,y\n" + "k,1\n" * 5)
        self.assertEqual(self.ok("entropy", "--input", path, "--target", "y").strip(), "0.0000")

    def test_missing_target_exits_1(self):
        r = substrat("entropy", "--input", self.flights, "--target", "Nope")
        self.assertEqual(r.returncode, 1)
        self.assertIn("MissingTarget", r.stderr)

    def test_usage_errors_exit_1(self):
        self.assertEqual(substrat("entropy", "--target", "y").returncode, 1)
        self.assertEqual(substrat("subset", *self.data(), "--strategy", "annealing").returncode, 1)
        self.assertEqual(substrat("subset", *self.data(), "--rows", "lots").returncode, 1)
        self.assertEqual(substrat("subset", *self.data(), "--strategy", "mc24h", "--deterministic").returncode, 1)

    # subset --------------------------------------------------------------

    def test_subset_default_sizes(self):
        side = json.loads(self.ok("subset", *self.data(self.wide), "--deterministic"))
        jsonschema.validate(side, schema("sidecar"))
        self.assertEqual(len(side["rows"]), 100)
        self.assertEqual(len(side["cols"]), 5)
        self.assertIn(19, side["cols"])

    def test_subset_mc_budget(self):
        side = json.loads(self.ok("subset", *self.data(), "--strategy", "mc", "--iterations", "100"))
        self.assertEqual(side["evaluations"], 100)
        self.assertIsNotNone(side["wall_time_s"])
        jsonschema.validate(side, schema("sidecar"))

    def test_subset_writes_csv_and_sidecar(self):
        out = self.dir / "sub.csv"
        printed = json.loads(self.ok("subset", *self.data(), "--rows", "25", "--cols", "4", "--out", out,
                                     "--deterministic"))
        lines = out.read_text().strip().split("\n")
        self.assertEqual(len(lines), 26)
        self.assertEqual(len(lines[0].split(",")), 4)
        self.assertEqual(json.loads(out.with_suffix(".json").read_text()), printed)

    def test_subset_same_seed_same_sidecar(self):
        argv = ["subset", *self.data(), "--seed", "5", "--deterministic"]
        self.assertEqual(self.ok(*argv), self.ok(*argv))

    def test_every_strategy_runs(self):
        for name in ["gendst", "mc", "mc100", "mab", "greedy_seq", "greedy_mult", "km", "ig_rand", "ig_km"]:
            with self.subTest(strategy=name):
                side = json.loads(self.ok("subset", *self.data(), "--strategy", name, "--rows", "8",
                                          "--iterations", "50", "--generations", "5", "--deterministic"))
                self.assertEqual(side["strategy"], name)
                self.assertEqual(len(side["rows"]), 8)

    # run -----------------------------------------------------------------

    def test_run_with_full(self):
        report = json.loads(self.ok("run", *self.data(), "--budget-evals", "30", "--with-full"))
        jsonschema.validate(report, schema("report"))
        self.assertEqual(report["cost_unit"], "seconds")
        self.assertIsNotNone(report["full"])
        self.assertIsNotNone(report["metrics"]["time_reduction"])
        self.assertEqual(report["requests"][-1]["restrict_family"], report["intermediate"]["model"]["model_family"])

    def test_run_no_fine_tune(self):
        report = json.loads(self.ok("run", *self.data(), "--budget-evals", "30", "--no-fine-tune", "--deterministic"))
        jsonschema.validate(report, schema("report"))
        self.assertFalse(report["fine_tune"])
        self.assertEqual(report["final"]["model"]["model_family"], report["intermediate"]["model"]["model_family"])
        self.assertEqual(report["requests"][-1]["phase"], "rescore")

    def test_unreachable_adapter_exits_2(self):
        r = substrat("run", *self.data(), "--budget-evals", "5", "--adapter", "/nonexistent/automl")
        self.assertEqual(r.returncode, 2)
        self.assertIn("AdapterUnavailable", r.stderr)

    def test_process_adapter_matches_builtin(self):
        argv = ["run", *self.data(), "--budget-evals", "20", "--with-full", "--deterministic"]
        builtin = json.loads(self.ok(*argv))
        command = f"{ARGS.cli} toy-adapter"
        child = json.loads(self.ok(*argv, "--adapter", command))
        via_env = json.loads(self.ok(*argv, env={"SUBSTRAT_ADAPTER": command}))
        self.assertEqual(child["config"]["adapter"], command)
        self.assertEqual(via_env["config"]["adapter"], command)
        for report in (child, via_env):
            report["config"]["adapter"] = "builtin-toy"
            self.assertEqual(report, builtin)

    # benchmark -----------------------------------------------------------

    def test_benchmark_grid(self):
        argv = ["benchmark", *self.data(), "--budget-evals", "20", "--deterministic"]
        first = self.ok(*argv)
        report = json.loads(first)
        jsonschema.validate(report, schema("benchmark"))
        self.assertEqual(len(report["cells"]), 3)
        self.assertTrue(all(c["ok"] and c["relative_accuracy"] is not None for c in report["cells"]))
        self.assertEqual([c["cols_spec"] for c in report["cells"]], ["0.1", "0.25", "0.5"])
        self.assertEqual(first, self.ok(*argv))

    def test_benchmark_records_cell_errors(self):
        report = json.loads(self.ok("benchmark", *self.data(), "--budget-evals", "5", "--cols-grid", "0.5,50",
                                    "--deterministic"))
        jsonschema.validate(report, schema("benchmark"))
        self.assertEqual([c["ok"] for c in report["cells"]], [True, False])

    def test_benchmark_empty_strategies_exit_1(self):
        r = substrat("benchmark", *self.data(), "--strategies", "")
        self.assertEqual(r.returncode, 1)
        self.assertTrue(r.stderr)

    # toy-adapter ---------------------------------------------------------

    def test_toy_adapter_transcript(self):
        fit = {"op": "fit", "data_path": str(self.small), "target": "y", "time_budget_s": 30, "eval_budget": 10,
               "restrict_family": "naive_bayes", "seed": 1}
        lines = "\n".join([json.dumps(fit), "{oops", json.dumps({"op": "shutdown"})]) + "\n"
        out = self.ok("toy-adapter", "--deterministic", stdin=lines).strip().split("\n")
        replies = [json.loads(line) for line in out]
        self.assertEqual(replies[0]["model_family"], "naive_bayes")
        self.assertEqual(replies[0]["wall_time_s"], 0.0)
        self.assertEqual(replies[1], {"ok": False, "error": "protocol"})
        self.assertEqual(replies[2], {"ok": True})


def main():
    global ARGS
    parser = argparse.ArgumentParser()
    parser.add_argument("--cli", required=True)
    parser.add_argument("--data", required=True)
    parser.add_argument("--schemas", required=True)
    ARGS, rest = parser.parse_known_args()
    unittest.main(argv=[sys.argv[0], *rest], verbosity=2)


if __name__ == "__main__":
    main()
