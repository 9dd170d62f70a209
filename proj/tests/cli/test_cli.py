"""Contract tests for the curvlab executable: schemas, exit codes, determinism, atomic output."""

import json
import pathlib
import subprocess
import sys
import tempfile
import unittest

import jsonschema

BINARY = None
SCHEMAS = None


def run(*args, expect=0):
    proc = subprocess.run([BINARY, *args], capture_output=True, text=True, timeout=600)
    if proc.returncode != expect:
        raise AssertionError(
            f"{' '.join(args)}: exit {proc.returncode}, expected {expect}\n{proc.stdout}\n{proc.stderr}")
    return proc


def schema(name):
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


def report(*args, expect=0):
    envelope = json.loads(run("--json", *args, expect=expect).stdout)
    jsonschema.validate(envelope, schema("envelope"))
    jsonschema.validate(envelope["result"], schema(envelope["command"]))
    return envelope


class Schemas(unittest.TestCase):
    def test_every_command_validates(self):
        cases = [
            ("families", "list"),
            ("families", "eval", "--id", "nitsche", "--alpha", "0.5", "--z", "0.1,0.2"),
            ("curvature", "--id", "hyperbolic-disk", "--z", "0.3,0.1"),
            ("solve", "--nr", "17", "--ntheta", "16", "--rmin", "0.01"),
            ("solve", "--radial", "--nr", "129"),
            ("classify", "--id", "nitsche", "--alpha", "0.3"),
            ("verify", "main-theorem", "--id", "nitsche", "--alpha", "0.75"),
            ("verify", "geometric", "--id", "nitsche", "--alpha", "1"),
            ("verify", "yau", "--id", "nitsche", "--alpha", "1"),
            ("verify", "wachstum", "--id", "nitsche", "--alpha", "1"),
            ("verify", "continuity", "--id", "nitsche", "--alpha", "1"),
            ("verify", "max-principle"),
            ("verify", "max-principle", "--pair", "maxprin-order-infty"),
            ("potential", "--alpha", "0.5", "--z", "0.3,0", "--deriv", "grad"),
            ("potential", "--weight", "log2", "--r", "0.5", "--z", "0.1,0"),
        ]
        for args in cases:
            with self.subTest(args=args):
                report(*args)

    def test_families_list_is_complete(self):
        entries = report("families", "list")["result"]
        self.assertGreaterEqual(len(entries), 12)

    def test_potential_values(self):
        self.assertAlmostEqual(report("potential")["result"]["value"], -0.25, places=9)
        grad = report("potential", "--alpha", "0.5", "--z", "0.3,0", "--deriv", "grad")["result"]
        self.assertAlmostEqual(grad["value"], 1.0, places=8)
        self.assertAlmostEqual(grad["finite_difference"], 1.0, places=6)


class ExitCodes(unittest.TestCase):
    def test_usage_errors(self):
        run("families", "eval", "--id", "no-such-entry", "--z", "0.1", expect=2)
        run("potential", "--weight", "log2", "--r", "1", expect=2)
        run("potential", "--z", "1.5,0", expect=2)
        run("solve", "--kappa", "const:0", expect=2)
        run("solve", "--tol", "0", expect=2)
        run("no-such-command", expect=2)

    def test_non_convergence(self):
        run("solve", "--nr", "17", "--ntheta", "16", "--max-iters", "1", expect=3)

    def test_claims_and_negative_controls(self):
        run("verify", "continuity", "--id", "nitsche", "--alpha", "1")
        run("verify", "continuity", "--id", "alpha1-bounded-kappa", expect=4)
        env = report("--expect-fail", "verify", "continuity", "--id", "alpha1-bounded-kappa")
        self.assertFalse(env["claim_passed"])
        self.assertTrue(env["expect_fail"])
        run("--expect-fail", "verify", "continuity", "--id", "nitsche", "--alpha", "1", expect=4)

    def test_counterexamples_break_the_expected_hypothesis(self):
        sh = report("verify", "max-principle", "--pair", "maxprin-superharmonic")["result"]
        self.assertLess(sh["min_gap"], 0)
        oi = report("verify", "max-principle", "--pair", "maxprin-order-infty")["result"]
        self.assertLess(oi["min_gap"], 0)
        pair = report("verify", "max-principle")["result"]
        self.assertGreaterEqual(pair["min_gap"], 0)


class Outputs(unittest.TestCase):
    def test_out_directory_and_trace(self):
        with tempfile.TemporaryDirectory() as tmp:
            run("--out", tmp, "solve", "--nr", "17", "--ntheta", "16", "--rmin", "0.01")
            out = pathlib.Path(tmp)
            names = sorted(p.name for p in out.iterdir())
            self.assertEqual(names, ["extrapolated.csv", "grid.json", "solution.csv", "solve.json", "trace.json"])
            trace = json.loads((out / "trace.json").read_text())
            jsonschema.validate(trace, schema("trace"))
            self.assertTrue(all(r["min_gap_to_subsolution"] >= -1e-9 for r in trace))
            envelope = json.loads((out / "solve.json").read_text())
            jsonschema.validate(envelope, schema("envelope"))
            self.assertEqual(len(envelope["manifest"]["outputs"]), 5)
            rows = (out / "solution.csv").read_text().splitlines()
            self.assertEqual(rows[0], "s,theta,value")
            self.assertEqual(len(rows) - 1, 17 * 16)

    def test_results_are_deterministic(self):
        args = ("verify", "main-theorem", "--id", "nitsche", "--alpha", "0.3")
        first = report(*args)
        second = report(*args)
        self.assertEqual(first["result"], second["result"])
        self.assertEqual(first["manifest"]["input_digests"], second["manifest"]["input_digests"])
        with tempfile.TemporaryDirectory() as a, tempfile.TemporaryDirectory() as b:
            run("--out", a, "solve", "--radial", "--nr", "65")
            run("--out", b, "solve", "--radial", "--nr", "65")
            self.assertEqual((pathlib.Path(a) / "profile.csv").read_bytes(),
                             (pathlib.Path(b) / "profile.csv").read_bytes())


if __name__ == "__main__":
    BINARY = sys.argv[1]
    SCHEMAS = pathlib.Path(sys.argv[2])
    unittest.main(argv=sys.argv[:1], verbosity=2)
