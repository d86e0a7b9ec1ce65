"""
Tests for finite magmas, free-group words, Grothendieck completion and the
skew product.
"""
import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from ultrawrap import group_constructions as gc
from ultrawrap.exceptions import (
    CapExceeded,
    DocumentError,
    DomainError,
    MonoidLawError,
    NonCancellative,
    NonCommutative,
    ParameterMismatch,
)
from ultrawrap.schemas import check_document

Q8 = gc.quaternion_units()
S3 = gc.symmetric3()


def words():
    letters = st.tuples(st.sampled_from("ab"), st.integers(-2, 2))
    return st.lists(letters, max_size=4).map(gc.free_reduce)


def skew_elements(w: gc.FiniteMagma):
    n = len(w)
    return st.builds(
        lambda g1, w1, g2, w2: gc.SkewElement(g1, w1, g2, w2, w.name),
        st.integers(0, n - 1),
        words(),
        st.integers(0, n - 1),
        words(),
    )


class TestAudit(unittest.TestCase):
    """Axiom audits of finite magmas."""

    def test_groups_pass(self):
        for m in (gc.trivial(), gc.cyclic(4), S3, Q8):
            report = gc.audit_axioms(m)
            self.assertTrue(all(report.results.values()), m.name)

    def test_commutativity(self):
        self.assertTrue(gc.cyclic(5).is_commutative())
        self.assertFalse(S3.is_commutative())
        self.assertTrue(gc.direct_product(gc.cyclic(2), gc.cyclic(2)).is_commutative())

    def test_octonion_units_are_alternative_but_not_associative(self):
        m = gc.octonion_units()
        report = gc.audit_axioms(m)
        self.assertTrue(report["G3"])
        self.assertTrue(report["G4"])
        self.assertFalse(report["G5"])
        a, b, c = report.witnesses["G5"]
        self.assertNotEqual(m.mul(m.mul(a, b), c), m.mul(a, m.mul(b, c)))
        self.assertEqual(len(report.named_witness(m, "G5")), 3)

    def test_non_alternative_magma(self):
        m = gc.FiniteMagma(("x", "y"), np.array([[1, 0], [0, 0]]))
        report = gc.audit_axioms(m)
        self.assertIsNone(m.unit)
        self.assertFalse(report["G2"])
        self.assertFalse(report["G4"])
        self.assertFalse(report["G5"])

    def test_cap(self):
        with self.assertRaises(CapExceeded) as ctx:
            gc.audit_axioms(gc.octonion_units(), cap=8)
        self.assertEqual((ctx.exception.size, ctx.exception.cap), (16, 8))

    def test_claimed_unit_is_checked(self):
        with self.assertRaises(MonoidLawError):
            gc.FiniteMagma(("0", "1"), np.array([[0, 1], [1, 0]]), unit=1)
        with self.assertRaises(DomainError):
            gc.FiniteMagma(("0", "1"), np.array([[0, 1]]))

    def test_abelianization(self):
        self.assertEqual(S3.abelianization()[0], 2)
        self.assertEqual(Q8.abelianization()[0], 4)
        self.assertEqual(gc.cyclic(6).abelianization()[0], 6)

    def test_document(self):
        doc = gc.to_document(Q8)
        check_document(doc, "magma_table")
        back = gc.from_document(doc)
        self.assertEqual(back.elements, Q8.elements)
        self.assertTrue(np.array_equal(back.table, Q8.table))
        doc["table"][0][0] = 1
        with self.assertRaises(DocumentError):
            gc.from_document(dict(doc, unit=0))


class TestWords(unittest.TestCase):
    """Free reduction of words."""

    def test_reduction(self):
        self.assertTrue(gc.parse_word("a b b^-1 a^-1").is_identity)
        self.assertEqual(str(gc.parse_word("a a b^-2")), "a^2 b^-2")
        self.assertEqual(str(gc.parse_word("e")), "e")

    def test_inverse_and_sums(self):
        w = gc.parse_word("b^-1 a b a")
        self.assertTrue((w * w.inverse()).is_identity)
        self.assertEqual(gc.word_exponent_sums(w), (2, 0))
        self.assertEqual(len(w), 4)

    def test_bad_word(self):
        with self.assertRaises(DomainError):
            gc.parse_word("a + b")


class TestGrothendieck(unittest.TestCase):
    """Completion of commutative cancellative monoids."""

    def test_naturals(self):
        k = gc.grothendieck(gc.truncated_naturals(6))
        three_minus_one = gc.FormalDifference((3,), (1,))
        self.assertTrue(k.equal(three_minus_one, k.eta(2)))
        self.assertTrue(k.equal(k.add(three_minus_one, k.neg(three_minus_one)), k.zero()))
        self.assertFalse(k.equal(k.eta(1), k.eta(2)))

    def test_finite_group_completes_to_itself(self):
        k = gc.grothendieck(gc.cyclic(3))
        table = k.as_magma()
        self.assertEqual(len(table), 3)
        self.assertTrue(all(gc.audit_axioms(table).results.values()))

    def test_table_needs_a_closed_carrier(self):
        k = gc.grothendieck(gc.truncated_naturals(3))
        with self.assertRaises(DomainError) as ctx:
            k.as_magma()
        self.assertIn("1 + 3", str(ctx.exception))
        self.assertEqual(len(k.classes()), 7)
        closed = gc.grothendieck(gc.PresentedMonoid.from_magma(gc.cyclic(4)))
        self.assertEqual(len(closed.as_magma()), 4)

    def test_non_cancellative(self):
        monoid = gc.PresentedMonoid((0, 1), max, 0, "max")
        with self.assertRaises(NonCancellative) as ctx:
            gc.grothendieck(monoid)
        self.assertEqual(ctx.exception.witness, (0, 1, 1))

    def test_non_commutative(self):
        with self.assertRaises(NonCommutative):
            gc.grothendieck(S3)

    def test_needs_unit(self):
        with self.assertRaises(MonoidLawError):
            gc.PresentedMonoid.from_magma(gc.FiniteMagma(("x", "y"), np.array([[1, 0], [0, 0]])))


class TestSkewProduct(unittest.TestCase):
    """Multiplication, inverses and relations in the skew product."""

    def setUp(self):
        self.sp = gc.SkewProduct(Q8)

    @settings(max_examples=150, derandomize=True)
    @given(skew_elements(Q8), skew_elements(Q8), skew_elements(Q8))
    def test_associative(self, x, y, z):
        sp = self.sp
        self.assertEqual(sp.mul(sp.mul(x, y), z), sp.mul(x, sp.mul(y, z)))

    @settings(max_examples=150, derandomize=True)
    @given(skew_elements(Q8))
    def test_unit_and_inverse(self, x):
        sp = self.sp
        self.assertEqual(sp.mul(sp.identity(), x), x)
        self.assertEqual(sp.mul(x, sp.identity()), x)
        self.assertEqual(sp.mul(x, sp.inverse(x)), sp.identity())
        self.assertEqual(sp.mul(sp.inverse(x), x), sp.identity())

    @settings(max_examples=150, derandomize=True)
    @given(skew_elements(Q8), skew_elements(Q8))
    def test_invariant_is_a_homomorphism(self, x, y):
        sp = self.sp
        ix, iy, ixy = sp.invariant(x), sp.invariant(y), sp.invariant(sp.mul(x, y))
        self.assertEqual(ixy[1:], tuple(a + b for a, b in zip(ix[1:], iy[1:])))
        gx = Q8.mul(x.g1, Q8.inv(x.g2))
        gy = Q8.mul(y.g1, Q8.inv(y.g2))
        self.assertEqual(ixy[0], sp.invariant(sp.element(Q8.mul(gx, gy)))[0])

    def test_relation(self):
        i, j = Q8.index("i"), Q8.index("j")
        lhs = self.sp.element(Q8.mul(i, j), "a", j, "b")
        self.assertEqual(self.sp.equiv(lhs, self.sp.element(i)), "equivalent")
        self.assertEqual(gc.skew_equiv(lhs, self.sp.element(i), Q8), "equivalent")

    def test_distinct_and_unknown(self):
        one = self.sp.element("1")
        self.assertEqual(self.sp.equiv(self.sp.element("1", "a"), one), "distinct")
        commutator = self.sp.element("1", "a b a^-1 b^-1")
        self.assertEqual(self.sp.invariant(commutator), self.sp.invariant(one))
        self.assertEqual(self.sp.equiv(commutator, one, budget=1), "unknown")

    def test_skew_commutator(self):
        x = self.sp.element("i", "a")
        y = self.sp.element("j", "e", "k", "b")
        c = gc.skew_commutator(x, y, Q8)
        self.assertEqual(gc.skew_invariant(c, Q8)[1:], (0, 0, 0))

    def test_groups_must_match(self):
        other = gc.SkewProduct(S3)
        with self.assertRaises(ParameterMismatch):
            self.sp.mul(self.sp.identity(), other.identity())

    def test_needs_group(self):
        with self.assertRaises(MonoidLawError):
            gc.SkewProduct(gc.FiniteMagma(("x", "y"), np.array([[1, 0], [0, 0]])))

    def test_special_cases(self):
        sp = self.sp
        self.assertEqual(sp.mul(sp.element("i"), sp.element("j")), sp.element("k"))
        x = sp.element("1", "e", "i", "a")
        y = sp.element("1", "e", "j", "b")
        self.assertEqual(sp.mul(x, y), sp.element("1", "e", "-k", "b a"))
        self.assertEqual(gc.skew_mul(x, y, Q8), sp.mul(x, y))

    def test_trivial_group_chain(self):
        sp = gc.SkewProduct(gc.trivial())
        rho = sp.element(0, "a", 0, "b")
        square = sp.mul(rho, rho)
        self.assertEqual(square, sp.element(0, "a a", 0, "a^-1 b a b"))
        self.assertEqual(sp.equiv(square, sp.identity(), budget=200), "equivalent")
        other = sp.mul(sp.element(0, "e", 0, "a b"), sp.element(0, "b a"))
        self.assertEqual(other, sp.element(0, "b a", 0, "a b"))
        self.assertNotEqual(sp.invariant(square), sp.invariant(other))
        self.assertEqual(sp.equiv(square, other), "distinct")

    def test_trivial_word_quotient(self):
        q = gc.quotient_group_on_trivial_words(S3)
        self.assertEqual(len(q), 36)
        self.assertTrue(gc.audit_axioms(q)["G5"])
        for g in range(len(S3)):
            for h in range(len(S3)):
                self.assertEqual(gc.theta(S3, S3.mul(g, h)), q.mul(gc.theta(S3, g), gc.theta(S3, h)))

    def test_trivial_words_over_quaternions_are_alternative(self):
        q = gc.quotient_group_on_trivial_words(Q8)
        report = gc.audit_axioms(q)
        self.assertTrue(report["G4"])
        self.assertTrue(report["G5"])
        sp = self.sp
        for g in range(len(Q8)):
            for h in range(len(Q8)):
                x, y = sp.element(g), sp.element(h)
                self.assertEqual(sp.mul(x, sp.mul(x, y)), sp.mul(sp.mul(x, x), y))


if __name__ == "__main__":
    unittest.main()
