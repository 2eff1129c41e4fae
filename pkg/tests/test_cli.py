"""
Tests for the command-line front end.
"""

import io
import json
import os
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout

from v1di4 import cli


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = cli.main(list(argv))
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv, "--format", "json")
    return code, json.loads(text)


class TestSolveL(unittest.TestCase):
    def test_default_precision(self):
        code, data = run_json("solve-l")
        self.assertEqual(code, 0)
        self.assertEqual(data["values"]["L"], "90627")
        self.assertEqual(data["values"]["L_mod_2^10"], "515")
        self.assertEqual(data["values"]["L_mod_2^3"], "3")
        self.assertEqual(data["values"]["rhs_mod_16"], "9")
        self.assertTrue(all(c["pass"] for c in data["checks"]))

    def test_congruence_detail(self):
        code, text = run("solve-l", "--format", "md")
        self.assertEqual(code, 0)
        line = next(x for x in text.splitlines() if "congruence" in x)
        self.assertIn("3^(4L+2) = ", line)
        self.assertEqual(line.count("mod 2^21"), 1)

    def test_low_precision(self):
        code, data = run_json("solve-l", "--prec", "4")
        self.assertEqual(code, 0)
        self.assertEqual(data["values"]["L"], "0")
        self.assertEqual(data["values"]["rhs_mod_16"], "9")
        self.assertNotIn("L_mod_2^3", data["values"])

    def test_intermediate_precision(self):
        code, data = run_json("solve-l", "--prec", "14")
        self.assertEqual(code, 0)
        self.assertEqual(data["values"]["L"], str(90627 % 2**10))
        self.assertIn("skipped", data["values"]["lifting_trace"])

    def test_precision_out_of_range(self):
        self.assertEqual(run("solve-l", "--prec", "3")[0], 2)
        self.assertEqual(run("solve-l", "--prec", "41")[0], 2)


class TestAdamsVerify(unittest.TestCase):
    def test_passes(self):
        code, data = run_json("adams-verify")
        self.assertEqual(code, 0)
        self.assertEqual(
            [c["name"] for c in data["checks"]],
            ["thm2.1-alpha", "thm2.1-beta", "thm2.1-gamma", "commutation"],
        )
        self.assertEqual(data["values"]["psi3[3,1]"], {"num": "36", "den": "527"})
        self.assertEqual(data["values"]["psi3[3,2]"], {"num": "-9963", "den": "17"})

    def test_perturbed_entry_fails(self):
        code, data = run_json("adams-verify", "--perturb", "3,1")
        self.assertEqual(code, 1)
        failed = {c["name"] for c in data["checks"] if not c["pass"]}
        self.assertEqual(failed, {"thm2.1-beta", "commutation"})

    def test_perturb_outside_matrix(self):
        self.assertEqual(run("adams-verify", "--perturb", "4,1")[0], 2)


class TestTables(unittest.TestCase):
    def test_ko_phi1(self):
        code, data = run_json("ko-phi1")
        self.assertEqual(code, 0)
        groups = {row["dim"]: row["group"]["cyclic_2_exponents"] for row in data["tables"]}
        self.assertEqual(groups, {0: [], 1: [], 2: [], 3: [21], 4: [1], 5: [1, 1], 6: [1], 7: [21]})
        self.assertEqual(data["values"]["K^1"], "Z/2^21")
        self.assertEqual(data["values"]["classification"], "pseudosphere-like")
        self.assertEqual(data["values"]["coker_theta_generators"], "1, 8, 256")

    def test_homotopy_row(self):
        code, data = run_json("homotopy", "--min", "90627", "--max", "90627")
        self.assertEqual(code, 0)
        rows = {row["dim"] - 8 * 90627: row["group"] for row in data["tables"]}
        self.assertEqual(sorted(rows), list(range(1, 9)))
        self.assertEqual(rows[1]["cyclic_2_exponents"], [21, 1])
        self.assertEqual(rows[2]["cyclic_2_exponents"], [21])
        self.assertEqual(rows[4]["cyclic_2_exponents"], [])

    def test_homotopy_markdown_grid(self):
        code, text = run("homotopy", "--min", "90626", "--max", "90628")
        self.assertEqual(code, 0)
        self.assertIn("| 90627 | Z/2^21 + Z/2 | Z/2^21 |", text)

    def test_homotopy_bad_range(self):
        self.assertEqual(run("homotopy", "--min", "2", "--max", "1")[0], 2)

    def test_pseudosphere_pi(self):
        code, data = run_json("pseudosphere-pi")
        self.assertEqual(code, 0)
        names = [c["name"] for c in data["checks"]]
        self.assertEqual(names, ["split 4seq-d-2", "split 4seq-d3", "split 4seq-d4", "split 4seq-d5"])
        self.assertEqual(len(data["tables"]), 8)


class TestMatch(unittest.TestCase):
    def test_match_at_L(self):
        code, data = run_json("match")
        self.assertEqual(code, 0)
        self.assertEqual(len(data["checks"]), 10)
        self.assertNotIn("first_mismatch", data["values"])

    def test_mismatch(self):
        code, data = run_json("match", "--L", "90628")
        self.assertEqual(code, 1)
        self.assertIn("KO^3", data["values"]["first_mismatch"])
        failed = [c["name"] for c in data["checks"] if not c["pass"]]
        self.assertIn("KO3", failed)


class TestSelftestCommand(unittest.TestCase):
    def test_list(self):
        code, text = run("selftest", "--list")
        self.assertEqual(code, 0)
        names = text.split()
        self.assertIn("thm2.1-alpha", names)
        self.assertIn("pi-t-reconstruction", names)


class TestOutput(unittest.TestCase):
    def test_output_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "report.json")
            code, text = run("solve-l", "--format", "json", "--output", path)
            self.assertEqual(code, 0)
            self.assertEqual(text, "")
            with open(path, encoding="utf-8") as f:
                self.assertEqual(json.load(f)["values"]["L"], "90627")

    def test_json_is_stable(self):
        self.assertEqual(run("ko-phi1", "--format", "json"), run("ko-phi1", "--format", "json"))


if __name__ == "__main__":
    unittest.main()
