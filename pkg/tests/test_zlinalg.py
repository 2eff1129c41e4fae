"""
Tests for Smith normal form, cokernel presentations and F_2 linear algebra.
"""

import random
import unittest

from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form

from v1di4.errors import InfiniteCokernel, NotTwoLocal
from v1di4.types import FinAbGroup2
from v1di4.zlinalg import (
    IntMatrix,
    brute_force_quotient,
    coker_order,
    coker_presentation,
    cokernel_mod2,
    image_mod2,
    invariant_factors,
    kernel_mod2,
    snf,
)

THETA = IntMatrix.from_rows([[8, 0, 0], [-1, 32, 0], [0, -1, 8192]])


def _random_matrix(rng, n, m, bound=20):
    return IntMatrix.from_rows([[rng.randint(-bound, bound) for _ in range(m)] for _ in range(n)])


def _unimodular(rng, n):
    M = IntMatrix.identity(n)
    for _ in range(3 * n):
        if n == 1:
            break
        i, j = rng.sample(range(n), 2)
        E = [[int(r == c) for c in range(n)] for r in range(n)]
        E[i][j] = rng.randint(-3, 3)
        M = M @ IntMatrix.from_rows(E)
    return M


class TestIntMatrix(unittest.TestCase):
    def test_shape_checks(self):
        with self.assertRaises(ValueError):
            IntMatrix(2, 2, (1, 2, 3))
        with self.assertRaises(ValueError):
            IntMatrix.from_rows([[1, 2], [3]])

    def test_matmul_and_det(self):
        A = IntMatrix.from_rows([[1, 2], [3, 4]])
        self.assertEqual((A @ IntMatrix.identity(2)), A)
        self.assertEqual(A.det(), -2)
        self.assertEqual(A.transpose().to_rows(), [[1, 3], [2, 4]])
        self.assertEqual(THETA.det(), 2**21)


class TestSmithNormalForm(unittest.TestCase):
    def test_examples(self):
        cases = [
            ([[2, 0], [0, 4]], [2, 4]),
            ([[8]], [8]),
            ([[0]], [0]),
            ([[2, 4], [6, 8]], [2, 4]),
            ([[4, 0], [0, 6]], [2, 12]),
        ]
        for rows, expected in cases:
            with self.subTest(rows=rows):
                self.assertEqual(invariant_factors(IntMatrix.from_rows(rows)), expected)

    def test_theta(self):
        U, D, V = snf(THETA)
        self.assertEqual(U @ THETA @ V, D)
        self.assertEqual(invariant_factors(THETA), [1, 1, 2**21])

    def test_random_against_sympy(self):
        rng = random.Random(20070)
        for _ in range(300):
            n, m = rng.randint(1, 4), rng.randint(1, 4)
            A = _random_matrix(rng, n, m)
            U, D, V = snf(A)
            self.assertEqual(U @ A @ V, D)
            self.assertEqual(abs(U.det()), 1)
            self.assertEqual(abs(V.det()), 1)
            if n == m:
                ours = [x for x in invariant_factors(A) if x]
                ref = smith_normal_form(Matrix(A.to_rows()))
                theirs = [abs(int(ref[k, k])) for k in range(n) if ref[k, k] != 0]
                self.assertEqual(ours, theirs, msg=str(A.to_rows()))


class TestCokernel(unittest.TestCase):
    def test_theta_presentation(self):
        pres = coker_presentation(THETA)
        self.assertEqual(pres.group, FinAbGroup2.cyclic(21))
        self.assertEqual([img[0] for img in pres.gen_images], [1, 8, 256])
        self.assertTrue(pres.is_cyclic)
        self.assertEqual(pres.generator_index(), 0)

    def test_images_reduced(self):
        A = IntMatrix.from_rows([[4, 2], [0, 8]])
        pres = coker_presentation(A)
        for img in pres.gen_images:
            for coeff, e in zip(img, pres.group.exponents):
                self.assertTrue(0 <= coeff < 2**e)

    def test_errors(self):
        with self.assertRaises(InfiniteCokernel):
            coker_presentation(IntMatrix.from_rows([[2, 0], [0, 0]]))
        with self.assertRaises(NotTwoLocal):
            coker_presentation(IntMatrix.from_rows([[6]]))

    def test_free_part_allowed(self):
        pres = coker_presentation(IntMatrix.from_rows([[4, 0], [0, 0]]), allow_free=True)
        self.assertEqual(pres.group, FinAbGroup2.of(2, free_rank=1))

    def test_wide_matrix_images_cover_codomain(self):
        pres = coker_presentation(IntMatrix.from_rows([[2, 0, 0], [0, 4, 0]]), allow_free=True)
        self.assertEqual(pres.group, FinAbGroup2.of(2, 1))
        self.assertEqual(pres.gen_images, ((0, 1), (1, 0)))

    def test_tall_matrix_images_cover_codomain(self):
        pres = coker_presentation(IntMatrix.from_rows([[2, 0], [0, 4], [0, 0]]), allow_free=True)
        self.assertEqual(pres.group, FinAbGroup2.of(2, 1, free_rank=1))
        self.assertEqual(pres.gen_images, ((0, 1, 0), (1, 0, 0), (0, 0, 1)))

    def test_order_is_det(self):
        self.assertEqual(coker_order(THETA), 2**21)

    def test_brute_force_agrees(self):
        rng = random.Random(1)
        for _ in range(150):
            n = rng.randint(1, 3)
            exps = [rng.randint(0, 3) for _ in range(n)]
            while sum(exps) > 10:
                exps[rng.randrange(n)] -= 1
            A = _unimodular(rng, n) @ IntMatrix.diagonal([2**e for e in exps]) @ _unimodular(rng, n)
            with self.subTest(rows=A.to_rows()):
                self.assertEqual(brute_force_quotient(A), coker_presentation(A).group)
                self.assertEqual(brute_force_quotient(A), FinAbGroup2(tuple(e for e in exps if e)))

    def test_brute_force_bound(self):
        with self.assertRaises(ValueError):
            brute_force_quotient(THETA)


class TestMod2(unittest.TestCase):
    def test_theta_mod2(self):
        t2 = THETA.mod2()
        self.assertEqual(kernel_mod2(t2), [(0, 0, 1)])
        self.assertEqual(image_mod2(t2), [(0, 1, 0), (0, 0, 1)])
        self.assertEqual(cokernel_mod2(t2), [(1, 0, 0)])

    def test_rank_nullity(self):
        rng = random.Random(2)
        for _ in range(200):
            n, m = rng.randint(1, 5), rng.randint(1, 5)
            A = _random_matrix(rng, n, m, bound=1).mod2()
            ker, im = kernel_mod2(A), image_mod2(A)
            self.assertEqual(len(ker) + len(im), m)
            self.assertEqual(len(cokernel_mod2(A)) + len(im), n)
            for v in ker:
                self.assertTrue(all(sum(a * b for a, b in zip(A.row(i), v)) % 2 == 0 for i in range(n)))


if __name__ == "__main__":
    unittest.main()
