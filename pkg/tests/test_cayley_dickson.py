"""
Tests for the Cayley-Dickson tower A_r(q) and the commutative algebra K[u].
"""
import random
import unittest

from ultrawrap import cayley_dickson as cd
from ultrawrap import padic_field as pf
from ultrawrap.exceptions import DomainError, ParameterMismatch, ZeroNormElement
from ultrawrap.padic_field import Field
from ultrawrap.schemas import check_document

Q3 = Field.qp(3, 8)
Q5 = Field.qp(5, 8)
Q7 = Field.qp(7, 8)
F3T = Field.laurent(3, 8)


def octonions(field_=Q5, q=(1, 1, 1)):
    return cd.CDParams.build(field_, q)


class TestGeneratorTable(unittest.TestCase):
    """Generator products from the sign table."""

    def setUp(self):
        self.params = octonions()
        self.u = [cd.generator(self.params, j) for j in range(8)]

    def test_known_entries(self):
        u = self.u
        self.assertEqual(u[1] * u[2], u[3])
        self.assertEqual(u[3] * u[4], -u[7])
        self.assertEqual(u[7] * u[7], -u[0])

    def test_diagonal_is_minus_q_product(self):
        params = octonions(Q7, (2, 3, 5))
        u7 = cd.generator(params, 7)
        self.assertEqual(u7 * u7, cd.from_scalar(params, -30))
        u3 = cd.generator(params, 3)
        self.assertEqual(u3 * u3, cd.from_scalar(params, -6))

    def test_doubling_matches_table_on_all_pairs(self):
        params = octonions(Q7, (2, 3, 5))
        for j in range(8):
            for k in range(8):
                with self.subTest(j=j, k=k):
                    x, y = cd.generator(params, j), cd.generator(params, k)
                    self.assertEqual(cd.cd_mul(x, y), cd.table_mul(x, y))

    def test_imaginary_generators_anticommute(self):
        for j in range(1, 8):
            for k in range(1, 8):
                if j != k:
                    self.assertEqual(self.u[j] * self.u[k], -(self.u[k] * self.u[j]))

    def test_lower_levels_use_top_left_block(self):
        quaternions = cd.CDParams.build(Q5, (1, 1))
        self.assertEqual(len(cd.generator_table(quaternions)), 4)
        c, index = cd.basis_product(quaternions, 1, 2)
        self.assertEqual((c, index), (Q5.one(), 3))


class TestNonAssociativity(unittest.TestCase):
    """Associator witnesses from the octonion level up."""

    def test_octonion_witness(self):
        params = octonions()
        u1, u2, u4 = (cd.generator(params, j) for j in (1, 2, 4))
        left = (u1 * u2) * u4
        right = u1 * (u2 * u4)
        self.assertEqual(left, -cd.generator(params, 7))
        self.assertEqual(right, cd.generator(params, 7))
        self.assertFalse(cd.associator(u1, u2, u4).is_zero)

    def test_search_finds_a_triple(self):
        self.assertIsNotNone(cd.non_associativity_witness(octonions()))

    def test_quaternions_are_associative(self):
        self.assertIsNone(cd.non_associativity_witness(cd.CDParams.build(Q5, (1, 1))))


class TestAlgebraLaws(unittest.TestCase):
    """Involution, alternativity and norm laws on random elements."""

    fields = (Q3, Q5, F3T)

    def _samples(self, params, count, seed=0):
        rng = random.Random(seed)
        for _ in range(count):
            yield cd.random_element(params, rng), cd.random_element(params, rng)

    def test_involution(self):
        for field_ in self.fields:
            for r in (1, 2, 3):
                params = cd.CDParams.build(field_, (1, -1, field_.uniformizer())[:r])
                for a, _ in self._samples(params, 50):
                    self.assertEqual(cd.conj(cd.conj(a)), a)
                    s = a + cd.conj(a)
                    n = cd.cd_mul(a, cd.conj(a))
                    for j in range(1, params.dimension):
                        self.assertTrue(s[j].is_zero)
                        self.assertTrue(n[j].is_zero)
                    self.assertEqual(n[0], cd.norm_value(a))

    def test_alternativity(self):
        for field_ in self.fields:
            for r in (1, 2, 3):
                params = cd.CDParams.build(field_, (1, -1, field_.uniformizer())[:r])
                for a, b in self._samples(params, 100, seed=r):
                    self.assertEqual(a * (b * b), (a * b) * b)
                    self.assertEqual(b * (b * a), (b * b) * a)

    def test_norm_is_multiplicative(self):
        for field_ in self.fields:
            for r in (1, 2, 3):
                params = cd.CDParams.build(field_, (2, -1, field_.uniformizer())[:r])
                for a, b in self._samples(params, 100, seed=10 + r):
                    self.assertTrue(cd.norm_multiplicativity_defect(a, b).is_zero)

    def test_division_identities(self):
        params = octonions(Q3, (1, 1, 1))
        for a, b in self._samples(params, 100, seed=7):
            if cd.norm_value(b).is_zero:
                continue
            b_inv = cd.cd_inv(b)
            self.assertEqual((a * b) * b_inv, a)
            self.assertEqual(b_inv * (b * a), a)

    def test_doubling_norm_rule(self):
        params = octonions(Q5, (1, 2, 3))
        for a, _ in self._samples(params, 50, seed=3):
            self.assertTrue(cd.doubling_norm_rule(a, "doubled"))

    def test_literal_norm_rule_fails(self):
        params = cd.CDParams.build(Q5, (1,))
        x = cd.element(params, [1, 1])
        self.assertFalse(cd.doubling_norm_rule(x, "literal"))
        self.assertTrue(cd.doubling_norm_rule(x, "doubled"))


class TestElements(unittest.TestCase):
    """Norm, trace, conjugation and inverses."""

    def test_zero_divisor_has_no_inverse(self):
        params = cd.CDParams.build(Q5, (1,))
        r = pf.hensel_sqrt(Q5.from_int(-1))
        b = cd.CDElement(params, (Q5.one(), r))
        self.assertTrue(cd.cd_mul(b, cd.conj(b)).is_zero)
        with self.assertRaises(ZeroNormElement) as ctx:
            cd.cd_inv(b)
        self.assertIs(ctx.exception.element, b)

    def test_embed(self):
        small = cd.CDParams.build(Q5, (1,))
        big = cd.CDParams.build(Q5, (1, 2))
        self.assertEqual(cd.embed(cd.generator(small, 1), big), cd.generator(big, 1))
        with self.assertRaises(ParameterMismatch):
            cd.embed(cd.generator(big, 1), small)

    def test_parameter_checks(self):
        with self.assertRaises(DomainError):
            cd.CDParams.build(Q5, (1, 1, 1, 1))
        with self.assertRaises(DomainError):
            cd.CDParams.build(Q5, (0,))
        with self.assertRaises(DomainError):
            cd.generator(cd.CDParams.build(Q5, (1,)), 2)
        with self.assertRaises(ParameterMismatch):
            cd.generator(octonions(), 1) * cd.generator(octonions(Q5, (1, 1, 2)), 1)

    def test_trace(self):
        x = cd.element(octonions(), [3, 1, 0, 0, 0, 0, 0, 2])
        self.assertEqual(cd.trace(x), Q5.from_int(6))

    def test_document_round_trip(self):
        x = cd.element(octonions(), [3, 1, 0, 0, 5, 0, 0, 2])
        doc = check_document(cd.to_document(x), "cd_element")
        self.assertEqual(cd.from_document(doc), x)


class TestUAlgebra(unittest.TestCase):
    """The alternative algebra U_alpha."""

    def setUp(self):
        self.alpha = 2
        self.u = cd.u_element(0, 1, self.alpha, Q5)

    def test_u_squared(self):
        self.assertEqual(self.u * self.u, cd.u_element(self.alpha, 1, self.alpha, Q5))

    def test_u_times_conjugate(self):
        self.assertEqual(cd.u_mul(self.u, cd.u_conj(self.u)), cd.u_element(-self.alpha, 0, self.alpha, Q5))

    def test_unit(self):
        x = cd.u_element(3, 4, self.alpha, Q5)
        self.assertEqual(cd.u_element(1, 0, self.alpha, Q5) * x, x)

    def test_inverse(self):
        x = cd.u_element(3, 4, self.alpha, Q5)
        self.assertEqual(x * cd.u_inv(x), cd.u_element(1, 0, self.alpha, Q5))

    def test_degenerate_alpha(self):
        with self.assertRaises(DomainError):
            cd.u_element(0, 1, pf.from_rational(-1, 4, 5, 8), Q5)


if __name__ == "__main__":
    unittest.main()
