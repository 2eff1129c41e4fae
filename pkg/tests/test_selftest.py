"""
Tests for the named self-test checks.
"""

import unittest

from v1di4.adams_di4 import DI4_PSI2, AdamsFreeModule, di4_psi_matrices, rat_matrix
from v1di4.config import V1Config
from v1di4.selftest import list_checks, run_selftest

FAST_CHECKS = [
    "thm2.1-alpha",
    "thm2.1-beta",
    "thm2.1-gamma",
    "thm2.1-commutation",
    "coker-generator",
    "ko-phi1-table",
    "psi3-mod-16",
    "discriminator",
    "exponent-bound",
    "solve-l",
    "congruence",
    "lifting-stages",
    "lifting-trace",
    "ko2-order-counting",
    "splitting-oracles",
    "match-at-l",
]


def _corrupted_gamma() -> AdamsFreeModule:
    rows = [list(r) for r in di4_psi_matrices().psi3]
    rows[2][1] = rows[2][1] + 2
    return AdamsFreeModule(DI4_PSI2, rat_matrix(rows))


class TestSelftest(unittest.TestCase):
    def test_names(self):
        names = list_checks()
        self.assertEqual(len(names), len(set(names)))
        self.assertEqual(names[:3], ["thm2.1-alpha", "thm2.1-beta", "thm2.1-gamma"])
        for name in FAST_CHECKS:
            self.assertIn(name, names)

    def test_fast_checks_pass(self):
        report = run_selftest(only=FAST_CHECKS)
        self.assertEqual([c.name for c in report.checks], FAST_CHECKS)
        for c in report.checks:
            with self.subTest(check=c.name):
                self.assertTrue(c.passed, c.detail)
                self.assertIsNotNone(c.seconds)

    def test_default_run_passes(self):
        report = run_selftest()
        self.assertEqual([c.name for c in report.checks], list_checks())
        self.assertTrue(report.passed, [c.detail for c in report.checks if not c.passed])

    def test_randomized_checks_with_small_config(self):
        config = V1Config(random_trials=50, dual_route_range=16, reconstruct_window=4)
        report = run_selftest(config, only=["snf-random", "coker-brute-force", "dual-route", "dlog3-brute-force"])
        self.assertTrue(report.passed, [c.detail for c in report.checks if not c.passed])

    def test_corrupted_entry_named(self):
        report = run_selftest(module=_corrupted_gamma(), only=FAST_CHECKS)
        self.assertFalse(report.passed)
        self.assertEqual(report.checks[-1].name, "thm2.1-gamma")
        self.assertEqual(len(report.checks), 3)

    def test_keep_going(self):
        report = run_selftest(module=_corrupted_gamma(), only=FAST_CHECKS[:5], stop_on_failure=False)
        failed = [c.name for c in report.checks if not c.passed]
        self.assertEqual(len(report.checks), 5)
        self.assertIn("thm2.1-gamma", failed)
        self.assertIn("thm2.1-commutation", failed)

    def test_unknown_name(self):
        with self.assertRaises(ValueError):
            run_selftest(only=["no-such-check"])


if __name__ == "__main__":
    unittest.main()
