"""End-to-end checks of the belllab command line.

Usage: cli_test.py <belllab executable> <schemas directory>
"""
import json
import math
import os
import pathlib
import subprocess
import sys
import tempfile
import unittest

import jsonschema
from referencing import Registry, Resource

EXE = None
SCHEMAS = None
REGISTRY = None


def run(*args, env=None, check_code=0):
    proc = subprocess.run([EXE, *map(str, args)], capture_output=True, text=True, env=env)
    if check_code is not None and proc.returncode != check_code:
        raise AssertionError(
            f"{args}: exit {proc.returncode}, expected {check_code}\n{proc.stdout}\n{proc.stderr}")
    return proc


def validate(document, schema_name):
    schema = json.loads((SCHEMAS / schema_name).read_text())
    jsonschema.Draft202012Validator(schema, registry=REGISTRY).validate(document)
    return document


def run_json(schema_name, *args):
    return validate(json.loads(run(*args).stdout), schema_name)


class Count(unittest.TestCase):
    def test_examples(self):
        self.assertEqual(run("count", "--lambda", 3, "--l", 2).stdout.strip(), "6")
        self.assertEqual(run("count", "--lambda", 1, "--l", 9).stdout.strip(), "1")
        self.assertEqual(run("count", "--lambda", 20, "--l", 100).stdout.strip(),
                         str(math.comb(119, 19)))

    def test_argument_errors(self):
        run("count", "--lambda", 0, "--l", 2, check_code=2)
        run("count", "--lambda", 2, check_code=2)
        run("count", "--lambda", "x", "--l", 2, check_code=2)
        run("frobnicate", check_code=2)
        run(check_code=2)


class Enumerate(unittest.TestCase):
    def test_rank_order(self):
        rows = run("enumerate", "--lambda", 3, "--l", 2).stdout.splitlines()
        self.assertEqual(rows, ["rank,n0,n1,n2", "0,2,0,0", "1,1,1,0", "2,1,0,1",
                                "3,0,2,0", "4,0,1,1", "5,0,0,2"])

    def test_window(self):
        rows = run("enumerate", "--lambda", 3, "--l", 2, "--first", 4, "--limit", 5).stdout.splitlines()
        self.assertEqual(rows[1:], ["4,0,1,1", "5,0,0,2"])

    def test_refuses_huge_listing(self):
        proc = run("enumerate", "--lambda", 12, "--l", 40, check_code=3)
        self.assertIn("estimated work", proc.stderr)


class Finetune(unittest.TestCase):
    def test_single_mechanism(self):
        r = run_json("finetune_report.schema.json", "finetune", "--mode", "constrained",
                     "--n", 1, "--lambda", 2, "--l", 2)
        self.assertEqual(r["F"], "0")
        self.assertEqual(r["log10_one_minus_F"], 0.0)

    def test_constrained_two_mechanisms(self):
        r = run_json("finetune_report.schema.json", "finetune", "--mode", "constrained",
                     "--n", 2, "--lambda", 2, "--l", 2)
        self.assertAlmostEqual(r["log10_one_minus_F"], -60 * math.log10(3), places=9)
        self.assertEqual(r["one_minus_F"], f"1/{3 ** 60}")
        self.assertEqual(r["n_f"], str(3 ** 4))

    def test_general_injective(self):
        r = run_json("finetune_report.schema.json", "finetune", "--mode", "general", "--kernel",
                     "injective", "--n", 2, "--lambda", 2, "--l", 1)
        self.assertAlmostEqual(r["log10_one_minus_F"], math.log10(16 / 2 ** 64), places=9)
        self.assertEqual(r["n_f"], "16")
        self.assertEqual(r["omega"], "64")

    def test_budget_refusal(self):
        proc = run("finetune", "--mode", "general", "--kernel", "random", "--lambda", 8, "--l", 30,
                   "--n", 2, check_code=3)
        self.assertIn("estimated work: ", proc.stderr)
        run("finetune", "--mode", "general", "--kernel", "injective", "--lambda", 2, "--l", 4,
            "--n", 2, "--budget", 1, check_code=3)

    def test_bad_arguments(self):
        run("finetune", "--mode", "sideways", "--n", 2, "--l", 2, check_code=2)
        run("finetune", "--mode", "general", "--kernel", "injective", "--n", 2, "--l", 2, check_code=2)
        run("finetune", "--mode", "general", "--kernel", "readout", "--lambda", 3, "--n", 2,
            "--l", 2, check_code=2)

    def test_atomic_output_file(self):
        with tempfile.TemporaryDirectory() as d:
            out = pathlib.Path(d) / "report.json"
            self.assertEqual(run("finetune", "--n", 2, "--lambda", 3, "--l", 2, "--out", out).stdout, "")
            validate(json.loads(out.read_text()), "finetune_report.schema.json")
            self.assertEqual(os.listdir(d), ["report.json"])


class Entropy(unittest.TestCase):
    def test_examples(self):
        r = run_json("entropy_report.schema.json", "entropy", "--n", 16, "--n0", 1)
        self.assertEqual(r["per_run_MI_bits"], 8.0)
        self.assertAlmostEqual(r["ratio_to_ref"], 100.0, delta=0.5)
        self.assertEqual(run_json("entropy_report.schema.json", "entropy", "--n", 1, "--n0", 5)
                         ["delta_S_bits"], 0.0)
        r = run_json("entropy_report.schema.json", "entropy", "--n", 2, "--n0", 3)
        self.assertEqual(r["delta_S_bits"], -6.0)
        self.assertEqual(r["W"], "64")

    def test_prior_files(self):
        with tempfile.TemporaryDirectory() as d:
            product = pathlib.Path(d) / "product.json"
            product.write_text(json.dumps({"family": "product", "per_run": [0.5, 0.5, 0, 0]}))
            r = run_json("entropy_report.schema.json", "entropy", "--n", 2, "--n0", 3, "--prior", product)
            self.assertAlmostEqual(r["S_bits"], 3.0, places=12)
            bad = pathlib.Path(d) / "bad.json"
            bad.write_text(json.dumps({"family": "product", "per_run": [0.5, 0.5, 0.5, 0]}))
            run("entropy", "--n", 2, "--n0", 3, "--prior", bad, check_code=4)


class ModelFiles(unittest.TestCase):
    def setUp(self):
        self.dir = tempfile.TemporaryDirectory()
        self.path = pathlib.Path(self.dir.name)

    def tearDown(self):
        self.dir.cleanup()

    def model(self, name, *args):
        out = self.path / f"{name}.json"
        run("model", *args, "--out", out)
        validate(json.loads(out.read_text()), "model.schema.json")
        return out

    def test_check_reports(self):
        constrained = self.model("c", "--kind", "constrained", "--n", 2, "--seed", 3)
        r = run_json("check_report.schema.json", "check", "--model", constrained)
        self.assertTrue(r["condition_ii"]["holds"])
        self.assertTrue(r["constraint_m"] and r["constraint_n"])
        violating = self.model("v", "--kind", "violating", "--n", 2)
        r = run_json("check_report.schema.json", "check", "--model", violating)
        self.assertFalse(r["condition_ii"]["holds"])
        self.assertEqual(r["condition_ii"]["max_gap"], "1")
        for kind in ("retrocausal", "nonlocal"):
            m = self.model(kind, "--kind", kind, "--lambda", 3, "--kernel", "random", "--seed", 5)
            r = run_json("check_report.schema.json", "check", "--model", m, "--n", 3)
            self.assertTrue(r["condition_ii"]["holds"], kind)
            self.assertIsNone(r["constraint_m"])

    def test_simulate_is_reproducible(self):
        constrained = self.model("c", "--kind", "constrained", "--n", 2, "--seed", 1)
        outputs = []
        for threads in ("1", "3"):
            csv = self.path / f"runs{threads}.csv"
            summary = self.path / f"summary{threads}.json"
            env = dict(os.environ, BELLLAB_THREADS=threads)
            run("simulate", "--model", constrained, "--n0", 20000, "--seed", 9, "--out", csv,
                "--summary", summary, env=env)
            outputs.append((csv.read_bytes(), json.loads(summary.read_text())))
        self.assertEqual(outputs[0][0], outputs[1][0])
        self.assertEqual(outputs[0][1]["sector_cells"], outputs[1][1]["sector_cells"])
        header, *rows = outputs[0][0].decode().splitlines()
        self.assertEqual(header, "run,alpha,beta,gA,gB,MA,MB,lambda,OA,OB")
        self.assertEqual(len(rows), 20000)
        summary = validate(outputs[0][1], "simulate_summary.schema.json")
        self.assertTrue(summary["condition_ii"]["holds"])
        self.assertIsNone(summary["dependence"])
        self.assertEqual(summary["coincidence"], {"defined": True, "consistent": True, "violations": 0})
        self.assertGreaterEqual(summary["fraction_within_4_sigma"], 0.75)

    def test_demo_reports_gap(self):
        violating = self.model("v", "--kind", "violating", "--n", 2)
        summary = validate(json.loads(run("simulate", "--model", violating, "--n0", 1000,
                                          "--seed", 2).stdout), "simulate_summary.schema.json")
        dep = summary["dependence"]
        self.assertEqual(dep["analytic_gap"], "1")
        self.assertTrue(dep["detected"])
        self.assertEqual(summary["coincidence"], {"defined": False})

    def test_model_file_errors(self):
        bad = self.path / "bad.json"
        bad.write_text("{not json")
        run("check", "--model", bad, check_code=4)
        run("simulate", "--model", bad, "--n0", 10, check_code=4)
        run("check", "--model", self.path / "missing.json", check_code=4)
        doc = json.loads(self.model("v", "--kind", "violating", "--n", 2).read_text())
        doc["tables"][0]["p"] = [1, 0, 0, 0]
        bad.write_text(json.dumps(doc))
        run("check", "--model", bad, check_code=4)
        doc["class"] = "astrological"
        bad.write_text(json.dumps(doc))
        run("check", "--model", bad, check_code=4)


def main():
    global EXE, SCHEMAS, REGISTRY
    EXE = os.path.abspath(sys.argv[1])
    SCHEMAS = pathlib.Path(sys.argv[2])
    resources = []
    for path in SCHEMAS.glob("*.schema.json"):
        contents = json.loads(path.read_text())
        resources.append((contents["$id"], Resource.from_contents(contents)))
    REGISTRY = Registry().with_resources(resources)
    unittest.main(argv=[sys.argv[0], "-v"])


if __name__ == "__main__":
    main()
