"""
Tests for windowed arithmetic in Q_p and F_p((t)).
"""
import math
import random
import unittest
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from ultrawrap import padic_field as pf
from ultrawrap.exceptions import DivisionByZero, DomainError, ParameterMismatch, PrecisionLoss
from ultrawrap.padic_field import Field
from ultrawrap.schemas import check_document


def scalars(field_: Field, valuations=(-3, 3)):
    """Nonzero elements with a full digit window."""
    return st.builds(
        lambda v, lead, rest: field_.element(v, [lead] + rest),
        st.integers(*valuations),
        st.integers(1, field_.p - 1),
        st.lists(st.integers(0, field_.p - 1), min_size=field_.precision - 1, max_size=field_.precision - 1),
    )


Q5 = Field.qp(5, 6)
F3T = Field.laurent(3, 6)


class TestConstruction(unittest.TestCase):
    """Scalars from integers, rationals and series."""

    def test_one_third_in_q5(self):
        x = pf.from_rational(1, 3, 5, 6)
        self.assertEqual(x.valuation, 0)
        self.assertEqual(x.digits, (2, 3, 1, 3, 1, 3))

    def test_minus_one_is_all_top_digits(self):
        self.assertEqual(Field.qp(5, 4).from_int(-1).digits, (4, 4, 4, 4))

    def test_valuation_of_integers(self):
        self.assertEqual(Q5.from_int(50).valuation, 2)
        self.assertEqual(Q5.from_rational(1, 25).valuation, -2)

    def test_zero_is_exact(self):
        z = Q5.from_int(0)
        self.assertTrue(z.is_exact_zero)
        self.assertEqual(z.valuation, math.inf)

    def test_composite_p_rejected(self):
        with self.assertRaises(DomainError):
            Field.qp(4)

    def test_zero_denominator(self):
        with self.assertRaises(DivisionByZero):
            pf.from_rational(1, 0, 5, 4)

    def test_laurent_characteristic(self):
        self.assertTrue(F3T.from_int(3).is_zero)
        self.assertEqual(F3T.from_int(4), F3T.one())

    def test_laurent_from_polynomial(self):
        x = pf.from_polynomial([0, 2, 1], 3, 4)
        self.assertEqual(x.valuation, 1)
        self.assertEqual(x.digits, (2, 1, 0, 0))

    def test_uniformizer(self):
        self.assertEqual(pf.norm(Q5.uniformizer()), Fraction(1, 5))
        self.assertEqual(F3T.uniformizer().valuation, 1)

    def test_random_element_is_deterministic(self):
        a = Q5.random_element(random.Random(3))
        b = Q5.random_element(random.Random(3))
        self.assertEqual(a.digits, b.digits)
        self.assertEqual(a.valuation, b.valuation)


class TestPrecisionRule(unittest.TestCase):
    """Precision of sums and products."""

    def test_sum_keeps_smallest_absolute_precision(self):
        x = Field.qp(5, 4).from_int(1)
        y = Field.qp(5, 2).from_int(5)
        s = x + y
        self.assertEqual(s.absolute_precision, 3)
        self.assertEqual(s.digits, (1, 1, 0))

    def test_cancellation_gives_bounded_zero(self):
        x = Field.qp(5, 4).from_int(7)
        d = x - x
        self.assertTrue(d.is_zero)
        self.assertFalse(d.is_exact_zero)
        self.assertEqual(d.known_to, 4)

    def test_exact_zero_is_additive_identity(self):
        x = Q5.from_rational(2, 7)
        self.assertIs(pf.add(Q5.zero(), x), x)

    def test_product_keeps_smallest_relative_precision(self):
        x = Field.qp(5, 3).from_int(2)
        y = Field.qp(5, 5).from_int(3)
        self.assertEqual((x * y).precision, 3)

    def test_bounded_zero_product(self):
        z = Field.qp(5, 4).from_int(7)
        z = z - z
        w = z * Q5.from_int(25)
        self.assertTrue(w.is_zero)
        self.assertEqual(w.known_to, 6)

    def test_inverse_of_zero(self):
        with self.assertRaises(DivisionByZero):
            pf.inv(Q5.zero())

    def test_mixed_fields_rejected(self):
        with self.assertRaises(ParameterMismatch):
            Q5.one() + Field.qp(7).one()

    def test_indistinguishable_at(self):
        x = Q5.from_int(1)
        y = Q5.from_int(1 + 125)
        self.assertTrue(pf.indistinguishable_at(x, y, 3))
        self.assertFalse(pf.indistinguishable_at(x, y, 4))

    def test_to_fraction(self):
        self.assertEqual(pf.to_fraction(Q5.from_int(7)), 7)
        self.assertEqual(pf.to_fraction(Q5.from_rational(3, 25)), Fraction(3, 25))

    def test_power_negative_exponent(self):
        self.assertEqual(pf.power(Q5.from_int(5), -2), Q5.from_rational(1, 25))


class TestSquareRoots(unittest.TestCase):
    """Hensel square roots."""

    def test_minus_one_in_q5(self):
        r = pf.hensel_sqrt(Q5.from_int(-1))
        self.assertIsNotNone(r)
        self.assertEqual(r.digits[0], 2)
        self.assertEqual(r * r, Q5.from_int(-1))

    def test_minus_one_not_square_in_q3(self):
        self.assertFalse(pf.is_square(Field.qp(3).from_int(-1)))

    def test_odd_valuation_not_square(self):
        self.assertIsNone(pf.hensel_sqrt(Q5.from_int(5)))

    def test_two_adic(self):
        q2 = Field.qp(2, 10)
        r = pf.hensel_sqrt(q2.from_int(17))
        self.assertIsNotNone(r)
        self.assertEqual(r * r, q2.from_int(17))
        self.assertIsNone(pf.hensel_sqrt(q2.from_int(3)))
        self.assertIsNone(pf.hensel_sqrt(q2.from_int(5)))

    def test_two_adic_needs_three_digits(self):
        with self.assertRaises(PrecisionLoss):
            pf.hensel_sqrt(Field.qp(2, 2).from_int(1))

    def test_laurent(self):
        x = pf.from_polynomial([1, 1], 3, 6)
        r = pf.hensel_sqrt(x)
        self.assertEqual(r * r, x)
        self.assertIsNone(pf.hensel_sqrt(F3T.from_int(2)))


class TestLiterals(unittest.TestCase):
    """Parsing and printing literals."""

    def test_parse(self):
        x = pf.parse_literal("p5:2.301e-1")
        self.assertEqual((x.p, x.valuation, x.digits), (5, -1, (2, 3, 0, 1)))
        self.assertEqual(pf.format_literal(x), "p5:2.301e-1")

    def test_zeros(self):
        self.assertTrue(pf.parse_literal("p5:0").is_exact_zero)
        self.assertEqual(pf.parse_literal("p5:0@4").known_to, 4)

    def test_laurent_tag(self):
        x = pf.parse_literal("t3:1.2e2")
        self.assertEqual(x.kind, pf.LAURENT)
        self.assertEqual(x.valuation, 2)

    def test_rejected(self):
        for text in ("p4:1", "p5:7", "q5:1", "p5:"):
            with self.subTest(text=text):
                with self.assertRaises(DomainError):
                    pf.parse_literal(text)

    def test_coerce(self):
        self.assertEqual(pf.coerce_scalar("p5:1", Q5), Q5.one())
        self.assertEqual(pf.coerce_scalar(Fraction(1, 3), Q5), pf.from_rational(1, 3, 5, 6))
        with self.assertRaises(ParameterMismatch):
            pf.coerce_scalar("p7:1", Q5)

    def test_document_passes_schema(self):
        for x in (Q5.from_rational(7, 5), Q5.zero(), Q5.from_int(3) - Q5.from_int(3)):
            doc = check_document(pf.to_document(x), "ultra_scalar")
            y = pf.from_document(doc)
            self.assertEqual(x.valuation, y.valuation)
            self.assertEqual(x.known_to, y.known_to)


class TestFieldLaws(unittest.TestCase):
    """Ultrametric and multiplicative laws on random windows."""

    @settings(max_examples=300, derandomize=True)
    @given(scalars(Q5), scalars(Q5))
    def test_ultrametric_q5(self, x, y):
        self.assertLessEqual(pf.norm(x + y), max(pf.norm(x), pf.norm(y)))

    @settings(max_examples=300, derandomize=True)
    @given(scalars(F3T), scalars(F3T))
    def test_ultrametric_laurent(self, x, y):
        self.assertLessEqual(pf.norm(x + y), max(pf.norm(x), pf.norm(y)))

    @settings(max_examples=300, derandomize=True)
    @given(st.sampled_from([Q5, F3T]).flatmap(lambda f: st.tuples(scalars(f), scalars(f))))
    def test_norm_is_multiplicative(self, pair):
        x, y = pair
        self.assertEqual(pf.norm(x * y), pf.norm(x) * pf.norm(y))

    @settings(max_examples=200, derandomize=True)
    @given(st.sampled_from([Q5, F3T]).flatmap(scalars))
    def test_inverse(self, x):
        self.assertEqual(x * pf.inv(x), x.field.one())
        self.assertTrue((x + (-x)).is_zero)

    @settings(max_examples=200, derandomize=True)
    @given(scalars(Q5), scalars(Q5))
    def test_commutativity(self, x, y):
        self.assertEqual(x + y, y + x)
        self.assertEqual(x * y, y * x)

    def test_ten_thousand_pairs(self):
        rng = random.Random(0)
        for field_ in (Q5, F3T):
            for _ in range(10_000):
                x, y = field_.random_element(rng), field_.random_element(rng)
                self.assertLessEqual(pf.norm(x + y), max(pf.norm(x), pf.norm(y)))
                self.assertEqual(pf.norm(x * y), pf.norm(x) * pf.norm(y))


if __name__ == "__main__":
    unittest.main()
