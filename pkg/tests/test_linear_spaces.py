"""
Tests for c0 vectors, finite multilinear maps and the linearity classifier.
"""
import random
import unittest
from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from ultrawrap import cayley_dickson as cd
from ultrawrap import linear_spaces as ls
from ultrawrap import padic_field as pf
from ultrawrap.exceptions import DomainError, ParameterMismatch
from ultrawrap.padic_field import Field
from ultrawrap.schemas import check_document

Q5 = Field.qp(5, 8)


def quaternions():
    return cd.CDParams.build(Q5, (1, 2))


def octonions():
    return cd.CDParams.build(Q5, (1, 2, 3))


class TestC0Vector(unittest.TestCase):
    """Sup norm and arithmetic of c0 vectors."""

    def test_zero_entries_are_dropped(self):
        x = ls.C0Vector.from_values(Q5, [0, 5, 0, Fraction(1, 25)])
        self.assertEqual(x.support(), [1, 3])
        self.assertTrue(x[0].is_zero)
        self.assertEqual(ls.sup_norm(x), 25)

    def test_add_and_scale(self):
        x = ls.C0Vector.from_values(Q5, [1, 2])
        y = ls.C0Vector.from_values(Q5, [-1, 3])
        total = x + y
        self.assertEqual(total.support(), [1])
        self.assertEqual(total[1], Q5.from_int(5))
        self.assertEqual(ls.sup_norm(x.scale(5)), Fraction(1, 5))

    def test_fields_must_match(self):
        with self.assertRaises(ParameterMismatch):
            ls.C0Vector.from_values(Q5, [1]).add(ls.C0Vector.from_values(Field.qp(7), [1]))

    def test_algebra_entries_use_max_coordinate_norm(self):
        params = quaternions()
        x = cd.element(params, [5, Fraction(1, 5), 0, 1])
        self.assertEqual(ls.entry_norm(x), 5)


class TestFiniteMap(unittest.TestCase):
    """Finite multilinear maps and operator norms."""

    def test_linear_apply(self):
        a = ls.FiniteMap.build(Q5, [[1, 2], [3, 4]])
        self.assertEqual(a.apply([1, 1]), [Q5.from_int(3), Q5.from_int(7)])

    def test_bilinear_apply(self):
        dot = ls.FiniteMap.build(Q5, [[[1, 0], [0, 1]]])
        self.assertEqual(dot.arity, 2)
        self.assertEqual(dot([1, 2], [3, 4]), [Q5.from_int(11)])
        with self.assertRaises(DomainError):
            dot.apply([1, 2])

    def test_apply_checks_width(self):
        a = ls.FiniteMap.build(Q5, [[1, 2]])
        with self.assertRaises(DomainError):
            a.apply([1, 2, 3])

    def test_operator_norm_is_max_entry(self):
        a = ls.FiniteMap.build(Q5, [[1, 5], [Fraction(1, 5), 0]])
        self.assertEqual(ls.operator_norm(a), 5)
        self.assertLessEqual(ls.sampled_operator_norm(a, samples=200), 5)

    @settings(max_examples=100, derandomize=True)
    @given(
        st.lists(st.lists(st.integers(-50, 50), min_size=3, max_size=3), min_size=2, max_size=2),
        st.lists(st.integers(-50, 50), min_size=3, max_size=3).filter(any),
    )
    def test_norm_bounds_every_image(self, rows, h):
        a = ls.FiniteMap.build(Q5, rows)
        image = ls.C0Vector.from_values(Q5, a.apply(h))
        vector = ls.C0Vector.from_values(Q5, h)
        self.assertLessEqual(ls.sup_norm(image), ls.operator_norm(a) * ls.sup_norm(vector))

    def test_random_matrices(self):
        rng = random.Random(7)
        for _ in range(20):
            matrix = np.empty((3, 3), dtype=object)
            for index in np.ndindex(matrix.shape):
                matrix[index] = Q5.random_element(rng, (-2, 3), zero_probability=0.2)
            a = ls.FiniteMap(Q5, matrix)
            exact = ls.operator_norm(a)
            self.assertLessEqual(ls.sampled_operator_norm(a, samples=50, seed=rng.randrange(1000)), exact)
            on_basis = max(
                ls.sup_norm(ls.C0Vector.from_values(Q5, a.apply([int(i == j) for i in range(3)])))
                for j in range(3)
            )
            self.assertEqual(on_basis, exact)

    def test_compose_with_identity(self):
        a = ls.FiniteMap.build(Q5, [[1, 2], [3, 4]])
        composed = ls.compose(a, ls.identity_map(Q5, 2))
        self.assertTrue(all(x == y for x, y in zip(composed.matrix.flat, a.matrix.flat)))
        with self.assertRaises(DomainError):
            ls.compose(a, ls.FiniteMap.build(Q5, [[1, 2, 3]]))

    def test_algebra_shape_must_divide(self):
        with self.assertRaises(DomainError):
            ls.FiniteMap.build(Q5, [[1, 2, 3]], quaternions())

    def test_multiplication_maps(self):
        params = octonions()
        a = cd.element(params, [1, 2, 0, 0, 3, 0, 0, 1])
        x = cd.element(params, [0, 1, 1, 0, 0, 0, 2, 0])
        self.assertEqual(ls.left_multiplication(a).apply([x]), [cd.cd_mul(a, x)])
        self.assertEqual(ls.right_multiplication(a).apply([x]), [cd.cd_mul(x, a)])

    def test_document(self):
        a = ls.FiniteMap.build(Q5, [[1, Fraction(1, 5)], [0, -1]], quaternions().lower())
        doc = ls.to_document(a)
        check_document(doc, "finite_map")
        back = ls.from_document(doc)
        self.assertEqual(back.shape, a.shape)
        self.assertTrue(all(x == y for x, y in zip(back.matrix.flat, a.matrix.flat)))


class TestLinearityClass(unittest.TestCase):
    """Membership in K_q, K_r and K_l."""

    def test_identity_is_in_every_class(self):
        result = ls.linearity_class(ls.identity_map(Q5, 2, octonions()))
        self.assertEqual(result.classes, ("K_q", "K_r", "K_l"))

    def test_left_multiplication_in_quaternions(self):
        params = quaternions()
        result = ls.linearity_class(ls.left_multiplication(cd.generator(params, 1)))
        self.assertIn("K_r", result)
        self.assertNotIn("K_l", result)
        self.assertEqual(result.witnesses["K_l"], (0, 0, 2))

    def test_left_multiplication_in_octonions(self):
        params = octonions()
        full = ls.linearity_class(ls.left_multiplication(cd.generator(params, 1)))
        self.assertEqual(full.classes, ("K_q",))
        distinguished = ls.linearity_class(ls.left_multiplication(cd.generator(params, 1)), "distinguished")
        self.assertEqual(distinguished.classes, ("K_q", "K_r"))

    def test_domains_agree_on_right_multiplication_in_rank_one(self):
        params = cd.CDParams.build(Q5, (2,))
        c = cd.generator(params, 0) + cd.generator(params, 1)
        full = ls.linearity_class(ls.right_multiplication(c), "full")
        distinguished = ls.linearity_class(ls.right_multiplication(c), "distinguished")
        self.assertEqual(full.classes, distinguished.classes)
        self.assertEqual(full.classes, ("K_q", "K_r", "K_l"))

    def test_requires_algebra_map(self):
        with self.assertRaises(DomainError):
            ls.linearity_class(ls.FiniteMap.build(Q5, [[1]]))
        with self.assertRaises(DomainError):
            ls.linearity_class(ls.identity_map(Q5, 1, quaternions()), "half")


class TestModuleAxioms(unittest.TestCase):
    """Module laws for the A_r action."""

    def setUp(self):
        params = octonions()
        u = [cd.generator(params, j) for j in range(8)]
        self.vectors = [[u[4], u[0]], [u[1], u[2]], [u[3] + u[5], u[6]]]
        self.scalars = [u[1], u[2], u[0] + u[7]]

    def test_module_laws_hold(self):
        report = ls.module_axioms_check(self.vectors, self.scalars)
        for law in ("L1", "L2", "L3", "L4", "unit"):
            self.assertTrue(report.holds(law), law)

    def test_action_is_neither_associative_nor_commuting(self):
        report = ls.module_axioms_check(self.vectors, self.scalars)
        self.assertFalse(report.holds("associative_action"))
        self.assertFalse(report.holds("commuting_action"))

    def test_needs_samples(self):
        with self.assertRaises(DomainError):
            ls.module_axioms_check([], self.scalars)


if __name__ == "__main__":
    unittest.main()
