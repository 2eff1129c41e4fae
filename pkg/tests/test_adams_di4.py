"""
Tests for the Adams operations on the free module and KO^*(Phi_1 DI(4)).
"""

import unittest

from v1di4.adams_di4 import (
    ALPHA,
    BETA,
    GAMMA,
    KO5_SPLIT_NAME,
    DI4_PSI2,
    DI4_PSI3_DIAG,
    AdamsFreeModule,
    commutator_solve,
    coker_psi3,
    exponent_bound,
    ko_phi1,
    di4_psi_matrices,
    psi_scalar,
    rat_matrix,
    theta_of,
    verify_commutation,
    _restrict_to_doubles,
)
from v1di4.errors import (
    EvenDenominator,
    NonScalarAction,
    NotInjective,
    OddEntry,
    SingularSolve,
    ZeroGroup,
)
from v1di4.padic_core import LEQ_RIGHT_SIDE, ONE, OddRational
from v1di4.types import FinAbGroup2, Justification
from v1di4.zlinalg import IntMatrix, coker_presentation

Z2 = FinAbGroup2.cyclic(1)
Z2_21 = FinAbGroup2.cyclic(21)


class TestFreeModule(unittest.TestCase):
    def test_solved_constants(self):
        m = di4_psi_matrices()
        self.assertEqual(m.psi3[1][0], OddRational(-27))
        self.assertEqual(m.psi3[2][0], OddRational(36, 527))
        self.assertEqual(m.psi3[2][1], OddRational(-(3**5) * 41, 17))
        self.assertEqual(m.psi_minus1, IntMatrix.identity(3))
        m.validate()

    def test_commutator_solve_reproduces_constants(self):
        solved = commutator_solve(DI4_PSI2, DI4_PSI3_DIAG)
        self.assertEqual(solved[1][0], ALPHA)
        self.assertEqual(solved[2][0], BETA)
        self.assertEqual(solved[2][1], GAMMA)
        self.assertEqual(solved, di4_psi_matrices().psi3)
        self.assertTrue(verify_commutation(DI4_PSI2, solved))

    def test_commutator_solve_small(self):
        psi2 = IntMatrix.from_rows([[4, 0], [-2, 64]])
        self.assertEqual(commutator_solve(psi2, (9, 729))[1][0], OddRational(-24))

    def test_diagonal_input_gives_diagonal_output(self):
        psi2 = IntMatrix.diagonal([2, 4, 8])
        solved = commutator_solve(psi2, (3, 9, 27))
        self.assertEqual(solved, rat_matrix([[3, 0, 0], [0, 9, 0], [0, 0, 27]]))

    def test_commutator_solve_errors(self):
        with self.assertRaises(SingularSolve):
            commutator_solve(IntMatrix.from_rows([[4, 0], [-2, 4]]), (9, 81))
        # the (2,1) entry solves to 1/2
        with self.assertRaises(EvenDenominator):
            commutator_solve(IntMatrix.from_rows([[2, 0], [1, 4]]), (1, 2))

    def test_perturbed_entry_breaks_commutation(self):
        m = di4_psi_matrices()
        rows = [list(r) for r in m.psi3]
        rows[2][0] = rows[2][0] + 1
        check = verify_commutation(DI4_PSI2, rat_matrix(rows))
        self.assertFalse(check)
        self.assertEqual((check.row, check.col), (2, 0))
        self.assertIn("[3,1]", check.describe())

    def test_validate_rejects_non_commuting(self):
        rows = [list(r) for r in di4_psi_matrices().psi3]
        rows[2][1] = rows[2][1] + 2
        with self.assertRaises(ValueError):
            AdamsFreeModule(DI4_PSI2, rat_matrix(rows)).validate()

    def test_theta(self):
        self.assertEqual(
            theta_of(di4_psi_matrices()).to_rows(),
            [[8, 0, 0], [-1, 32, 0], [0, -1, 8192]],
        )
        two = AdamsFreeModule(IntMatrix.diagonal([2, 2]), rat_matrix([[1, 0], [0, 1]]))
        self.assertEqual(theta_of(two), IntMatrix.identity(2))
        with self.assertRaises(OddEntry):
            theta_of(AdamsFreeModule(IntMatrix.from_rows([[3]]), rat_matrix([[1]])))


class TestKOPhi1(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.table = ko_phi1()

    def test_groups(self):
        expected = {
            "KO0": FinAbGroup2(),
            "KO1": FinAbGroup2(),
            "KO2": FinAbGroup2(),
            "KO3": Z2_21,
            "KO4": Z2,
            "KO5": FinAbGroup2.of(1, 1),
            "KO6": Z2,
            "KO7": Z2_21,
            "K0": FinAbGroup2(),
            "K1": Z2_21,
        }
        for slot, group in expected.items():
            with self.subTest(slot=slot):
                self.assertEqual(self.table.group(slot), group)

    def test_orders_agree(self):
        orders = {self.table.group(s).order for s in ("KO3", "KO7", "K1")}
        self.assertEqual(orders, {2**21})

    def test_exactness_witnesses(self):
        self.assertEqual(len(self.table.witnesses), 5)
        self.assertTrue(self.table.exact)

    def test_doubles_carry_theta(self):
        theta = theta_of(di4_psi_matrices())
        self.assertEqual(_restrict_to_doubles(theta), theta)
        self.assertEqual(self.table.witnesses[1].observed, 2**21)

    def test_ko5_certificate(self):
        cert = self.table.slot("KO5").certificate
        self.assertIsNotNone(cert)
        self.assertEqual(cert.name, KO5_SPLIT_NAME)
        self.assertEqual(cert.justification, Justification.BOTTOM_CELL)
        self.assertTrue(cert.split)

    def test_psi_scalars(self):
        self.assertEqual(psi_scalar(self.table, 3, "KO4"), ONE)
        self.assertEqual(psi_scalar(self.table, -1, "KO5"), ONE)
        self.assertEqual(psi_scalar(self.table, -1, "K1"), ONE)
        self.assertEqual(psi_scalar(self.table, 3, "K1"), LEQ_RIGHT_SIDE * OddRational(3) ** -4)
        self.assertEqual(psi_scalar(self.table, 3, "KO3"), LEQ_RIGHT_SIDE * OddRational(3) ** -2)
        self.assertEqual(psi_scalar(self.table, 3, "K1").residue(4).value, 9)

    def test_psi_scalar_at_other_degrees(self):
        # KO^{2j-1} with j = 2, 4, 6, 8
        for j in (2, 4, 6, 8):
            with self.subTest(j=j):
                slot = "KO3" if (2 * j - 1) % 8 == 3 else "KO7"
                value = psi_scalar(self.table, 3, slot, degree=2 * j - 1)
                self.assertEqual(value, LEQ_RIGHT_SIDE * OddRational(3) ** -j)
                self.assertEqual(psi_scalar(self.table, -1, slot, degree=2 * j - 1), ONE)

    def test_psi_scalar_errors(self):
        with self.assertRaises(ZeroGroup):
            psi_scalar(self.table, 3, "KO0")
        with self.assertRaises(ValueError):
            psi_scalar(self.table, 3, "KO9")
        with self.assertRaises(ValueError):
            psi_scalar(self.table, 3, "KO3", degree=4)

    def test_not_injective(self):
        with self.assertRaises(NotInjective):
            ko_phi1(AdamsFreeModule(IntMatrix.from_rows([[0]]), rat_matrix([[1]])))

    def test_non_cyclic_cokernel_with_scalar_action(self):
        module = AdamsFreeModule(IntMatrix.diagonal([4, 16, 64]), rat_matrix([[9, 0, 0], [0, 81, 0], [0, 0, 729]]))
        table = ko_phi1(module)
        self.assertEqual(table.group("KO7"), FinAbGroup2.of(5, 3, 1))
        self.assertEqual(coker_psi3(module, coker_presentation(theta_of(module))).residue(5).value, 729 % 32)
        self.assertEqual(psi_scalar(table, 3, "KO7", degree=7).residue(5).value, (729 * pow(3, -4, 32)) % 32)

    def test_non_scalar_action_rejected(self):
        module = AdamsFreeModule(IntMatrix.diagonal([8, 8]), rat_matrix([[1, 0], [0, 3]]))
        with self.assertRaises(NonScalarAction):
            ko_phi1(module)

    def test_basis_independence(self):
        rescaled = di4_psi_matrices().rescaled((15, 5, 1))
        other = ko_phi1(rescaled)
        for n in range(8):
            with self.subTest(n=n):
                self.assertEqual(other.ko.group(n), self.table.ko.group(n))
                if not self.table.ko.slot_at(n).is_zero:
                    self.assertEqual(
                        other.ko.psi_residue(3, n, 21),
                        self.table.ko.psi_residue(3, n, 21),
                    )
        self.assertEqual(other.k.group(1), Z2_21)


class TestExponentBound(unittest.TestCase):
    def test_di4_module(self):
        self.assertEqual(exponent_bound(), 21)

    def test_small_modules(self):
        psi2 = IntMatrix.from_rows([[4, 0, 0], [-2, 8, 0], [0, -2, 16]])
        three = AdamsFreeModule(psi2, rat_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))
        self.assertEqual(exponent_bound(three), 6)
        one = AdamsFreeModule(IntMatrix.from_rows([[4]]), rat_matrix([[9]]))
        self.assertEqual(exponent_bound(one), 1)


if __name__ == "__main__":
    unittest.main()
