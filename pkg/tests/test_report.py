"""
Tests for report serialization and rendering.
"""

import json
import unittest

from v1di4.padic_core import OddRational
from v1di4.report import CheckResult, Report, TableRow, parse_report, render, render_markdown, serialize_report
from v1di4.types import ZERO, FinAbGroup2


def _sample() -> Report:
    report = Report("sample")
    report.check("first", True, "fine")
    report.check("second", False, "broken")
    report.tables.append(TableRow(3, FinAbGroup2.cyclic(21), OddRational(36, 527), label="KO^3"))
    report.tables.append(TableRow(0, ZERO))
    report.tables.append(TableRow(-1, FinAbGroup2.free()))
    report.values["L"] = "90627"
    report.values["psi"] = OddRational(-9963, 17).to_dict()
    return report


class TestSerialization(unittest.TestCase):
    def test_shape(self):
        data = json.loads(serialize_report(_sample()))
        self.assertEqual(sorted(data), ["checks", "command", "tables", "values"])
        self.assertEqual(data["checks"][1], {"name": "second", "pass": False})
        self.assertEqual(
            data["tables"][0],
            {"dim": 3, "group": {"cyclic_2_exponents": [21]}, "psi3": {"num": "36", "den": "527"}},
        )
        self.assertEqual(data["tables"][1]["group"], {"cyclic_2_exponents": []})
        self.assertIsNone(data["tables"][1]["psi3"])
        self.assertEqual(data["tables"][2]["group"]["free_rank"], 1)

    def test_byte_stable(self):
        text = serialize_report(_sample())
        self.assertTrue(text.endswith("}\n"))
        self.assertEqual(serialize_report(parse_report(text)), text)

    def test_parse_keeps_content(self):
        parsed = parse_report(serialize_report(_sample()))
        original = _sample()
        self.assertEqual(parsed.checks, original.checks)
        self.assertEqual(parsed.tables, original.tables)
        self.assertEqual(parsed.values, original.values)
        self.assertFalse(parsed.passed)

    def test_empty_values_omitted(self):
        self.assertNotIn("values", json.loads(serialize_report(Report("x"))))
        self.assertTrue(Report("x").passed)

    def test_details_not_serialized(self):
        self.assertEqual(CheckResult("a", True, "one", 1.0), CheckResult("a", True, "two"))
        self.assertNotIn("fine", serialize_report(_sample()))


class TestMarkdown(unittest.TestCase):
    def test_rows(self):
        text = render_markdown(_sample())
        self.assertIn("# sample", text)
        self.assertIn("- [PASS] first: fine", text)
        self.assertIn("- [FAIL] second: broken", text)
        self.assertIn("| KO^3 | Z/2^21 | 36/527 |", text)
        self.assertIn("| -1 | Zhat_2 |  |", text)
        self.assertIn("- psi: -9963/17", text)

    def test_grid(self):
        report = Report("grid", layout="grid8")
        for d in range(1, 9):
            report.tables.append(TableRow(8 * 5 + d, FinAbGroup2.cyclic(1) if d == 1 else ZERO))
        text = render_markdown(report)
        self.assertIn("| i | d=1 |", text)
        self.assertIn("| 5 | Z/2 | 0 |", text)

    def test_render_format(self):
        self.assertEqual(render(_sample(), "json"), serialize_report(_sample()))
        self.assertEqual(render(_sample(), "md"), render_markdown(_sample()))
        with self.assertRaises(ValueError):
            render(_sample(), "yaml")


if __name__ == "__main__":
    unittest.main()
