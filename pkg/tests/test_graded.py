"""
Tests for psi laws, suspension, extensions and smashing with Moore spectra.
"""

import unittest

from v1di4.errors import ContradictionNotFound, ZeroGroup
from v1di4.graded import (
    AdamsGradedTable,
    PsiLaw,
    extension_candidates,
    is_extension,
    moore_pieces,
    smash_moore,
    suspend,
    table_from_groups,
)
from v1di4.padic_core import OddRational
from v1di4.pseudosphere import ko_moore2_table, ko_sphere_table
from v1di4.types import ZERO, FinAbGroup2

Z = FinAbGroup2.free()
Z2 = FinAbGroup2.cyclic(1)
Z4 = FinAbGroup2.cyclic(2)


class TestPsiLaw(unittest.TestCase):
    def test_bott_law(self):
        law = PsiLaw.bott()
        self.assertEqual(law.value(3, 0), OddRational(1))
        self.assertEqual(law.value(3, 4), OddRational(1, 9))
        self.assertEqual(law.value(3, -2), OddRational(3))
        self.assertEqual(law.value(-1, 2), OddRational(-1))
        self.assertEqual(law.value(-1, 4), OddRational(1))

    def test_constant_law(self):
        law = PsiLaw(OddRational(5), -1)
        for n in (-3, 0, 7):
            self.assertEqual(law.value(3, n), OddRational(5))
            self.assertEqual(law.value(-1, n), OddRational(-1))

    def test_odd_offset_rejected(self):
        with self.assertRaises(ValueError):
            PsiLaw.bott().value(3, 1)
        with self.assertRaises(ValueError):
            PsiLaw(cm1=3)
        with self.assertRaises(ValueError):
            PsiLaw().value(2, 0)

    def test_suspension_shifts_weight(self):
        law = PsiLaw.bott().suspended(4)
        self.assertEqual(law.weight, 4)
        self.assertEqual(law.value(3, 4), OddRational(1))
        self.assertEqual(PsiLaw().suspended(4), PsiLaw())

    def test_residue_matches_value(self):
        law = PsiLaw(OddRational(36, 527), 1, -1)
        for n in (-9, -1, 3, 7, 15):
            with self.subTest(n=n):
                self.assertEqual(law.residue(3, n, 21), law.value(3, n).residue(21))


class TestTables(unittest.TestCase):
    def test_shape_checks(self):
        with self.assertRaises(ValueError):
            AdamsGradedTable("x", 4, ())
        with self.assertRaises(ValueError):
            AdamsGradedTable("x", 8, ())

    def test_zero_slot_has_no_operations(self):
        table = table_from_groups("x", 8, {0: (Z2, PsiLaw())})
        self.assertEqual(table.psi(3, 8), OddRational(1))
        with self.assertRaises(ZeroGroup):
            table.psi(3, 1)

    def test_suspend_rekeys(self):
        sphere = ko_sphere_table().ko
        s4 = suspend(sphere, 4)
        self.assertEqual(s4.group(4), Z)
        self.assertEqual(s4.group(2), Z2)
        self.assertEqual(s4.group(3), Z2)
        self.assertEqual(s4.shift, 4)
        # the Bott class moves with its degree
        self.assertEqual(s4.psi(3, 4), sphere.psi(3, 0))

    def test_suspend_by_period_keeps_groups(self):
        sphere = ko_sphere_table().ko
        s8 = suspend(sphere, 8)
        for n in range(8):
            self.assertEqual(s8.group(n), sphere.group(n))
        self.assertEqual(s8.psi(3, 8), OddRational(1))


class TestExtensions(unittest.TestCase):
    def test_is_extension(self):
        cases = [
            (Z2, Z2, FinAbGroup2.of(1, 1), True),
            (Z2, Z2, Z4, True),
            (Z2, Z2, Z2, False),
            (Z4, Z2, FinAbGroup2.cyclic(3), True),
            (Z2, Z2, FinAbGroup2.of(1, 1, 1), False),
            (FinAbGroup2.of(1, 1), Z2, FinAbGroup2.cyclic(3), False),
            (ZERO, Z2, Z2, True),
        ]
        for sub, quotient, middle, expected in cases:
            with self.subTest(sub=str(sub), quotient=str(quotient), middle=str(middle)):
                self.assertEqual(is_extension(sub, quotient, middle), expected)

    def test_candidates_split_first(self):
        self.assertEqual(extension_candidates(Z2, Z2), [FinAbGroup2.of(1, 1), Z4])
        self.assertEqual(
            extension_candidates(Z4, Z2),
            [FinAbGroup2.of(2, 1), FinAbGroup2.cyclic(3)],
        )
        self.assertEqual(extension_candidates(ZERO, ZERO), [ZERO])

    def test_candidates_are_extensions(self):
        for sub in (Z2, Z4, FinAbGroup2.of(1, 1)):
            for quotient in (Z2, FinAbGroup2.of(2, 1)):
                for g in extension_candidates(sub, quotient):
                    self.assertTrue(is_extension(sub, quotient, g))
                    self.assertEqual(g.order, sub.order * quotient.order)


class TestSmashMoore(unittest.TestCase):
    def test_pieces(self):
        sphere = ko_sphere_table().ko
        sub, quotient = moore_pieces(sphere, 1, 6)
        self.assertEqual((sub.group, quotient.group), (Z2, Z2))
        sub, quotient = moore_pieces(sphere, 3, 0)
        self.assertEqual((sub.group, quotient.group), (FinAbGroup2.cyclic(3), ZERO))

    def test_unresolved_extension(self):
        with self.assertRaises(ContradictionNotFound):
            smash_moore(ko_sphere_table().ko, 1)

    def test_moore2(self):
        moore = ko_moore2_table()
        expected = {0: Z2, 1: ZERO, 2: ZERO, 3: ZERO, 4: Z2, 5: Z2, 6: Z4, 7: Z2}
        for n, g in expected.items():
            with self.subTest(n=n):
                self.assertEqual(moore.ko.group(n), g)
        self.assertEqual(moore.k.group(0), Z2)
        self.assertEqual(moore.k.group(1), ZERO)
        cert = moore.ko.slot_at(6).certificate
        self.assertFalse(cert.split)

    def test_bad_exponent(self):
        with self.assertRaises(ValueError):
            smash_moore(ko_sphere_table().k, 0)


if __name__ == "__main__":
    unittest.main()
