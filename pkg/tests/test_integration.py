"""
Integration Tests
==================

Workflows that cross module boundaries: verdicts feeding algebra
arithmetic, documents written to disk and read back through the schemas,
and the wrap model built on the finite group machinery.
"""
import json
import tempfile
import unittest
from pathlib import Path

from ultrawrap import cayley_dickson as cd
from ultrawrap import expression as ex
from ultrawrap import group_constructions as gc
from ultrawrap import linear_spaces as ls
from ultrawrap import padic_field as pf
from ultrawrap import quadratic_forms as qf
from ultrawrap import ultrametric_calculus as calc
from ultrawrap import wrap_sim as ws
from ultrawrap.exceptions import ZeroNormElement
from ultrawrap.padic_field import Field
from ultrawrap.schemas import check_document


class TestZeroDivisorWorkflow(unittest.TestCase):
    """An isotropy witness is a zero divisor everywhere it is used."""

    def setUp(self):
        self.params = cd.CDParams.build(Field.qp(3, 10), (1, 1))
        self.verdict = qf.has_division_property(self.params)

    def test_pair_multiplies_to_zero(self):
        self.assertEqual(self.verdict.verdict, "zero_divisors")
        b, b_conj = self.verdict.pair
        self.assertFalse(b.is_zero)
        self.assertTrue(cd.cd_mul(b, b_conj).is_zero)

    def test_inverse_and_expressions_refuse_it(self):
        b, _ = self.verdict.pair
        with self.assertRaises(ZeroNormElement) as ctx:
            cd.cd_inv(b)
        self.assertEqual(ctx.exception.element, b)
        context = ex.EvalContext(self.params.field, self.params, variables={"b": b})
        self.assertTrue(ex.evaluate_text("n(b)", context).is_zero)
        with self.assertRaises(ZeroNormElement):
            ex.evaluate_text("1 / b", context)

    def test_witness_document(self):
        b, _ = self.verdict.pair
        doc = check_document(json.loads(json.dumps(cd.to_document(b))), "cd_element")
        self.assertEqual(cd.from_document(doc), b)


class TestDocumentsOnDisk(unittest.TestCase):
    """Maps and tables survive a trip through JSON files."""

    def setUp(self):
        self.tmpdir = tempfile.TemporaryDirectory()
        self.tmppath = Path(self.tmpdir.name)

    def tearDown(self):
        self.tmpdir.cleanup()

    def roundtrip(self, doc, name):
        path = self.tmppath / f"{name}.json"
        path.write_text(json.dumps(doc))
        return check_document(json.loads(path.read_text()), name)

    def test_multiplication_map_keeps_its_class(self):
        params = cd.CDParams.build(Field.qp(5, 8), (1, 2))
        a = ls.left_multiplication(cd.generator(params, 1))
        back = ls.from_document(self.roundtrip(ls.to_document(a), "finite_map"))
        self.assertEqual(ls.linearity_class(back).classes, ls.linearity_class(a).classes)
        self.assertEqual(ls.operator_norm(back), 1)

    def test_transport_keeps_its_holonomy(self):
        q8 = gc.quaternion_units()
        base = ws.constant_map(ws.BallGrid.hat_grid(3, 2), ("y0", "y1"))
        t = ws.TransportMap(base, q8, (("0", q8.index("j")), ("11", q8.index("k"))))
        back = ws.transport_from_document(self.roundtrip(ws.transport_to_document(t), "transport_map"))
        self.assertEqual(ws.holonomy(back), ws.holonomy(t))
        self.assertEqual(back.group.elements, q8.elements)


class TestAlgebraValuedCalculus(unittest.TestCase):
    """Differentials of A_r-valued functions are taken coordinatewise."""

    def test_componentwise_matches_scalar_differentials(self):
        field_ = Field.qp(7, 10)
        params = cd.CDParams.build(field_, (1, 3))
        parts = [calc.polynomial(s, field_) for s in ("x^2", "3*x", "x^3 - x", "1")]
        f = calc.componentwise(parts, params)
        x, v = field_.from_int(2), field_.from_int(5)
        value = calc.differential_n(f, x, [v])
        for part, coeff in zip(parts, value.coeffs):
            self.assertEqual(coeff, calc.differential_n(part, x, [v]))


class TestWrapOverGroups(unittest.TestCase):
    """The wrap model reuses the magma audit and completion."""

    def test_holonomy_image_of_quaternions_is_the_whole_group(self):
        report = ws.wrap_group(group=gc.quaternion_units())
        audit = gc.audit_axioms(report.image)
        self.assertTrue(all(audit.results.values()))
        self.assertEqual(len(report.image), 8)

    def test_completion_matches_integer_counts(self):
        report = ws.wrap_group(settings=ws.WrapSettings(stand_in="ball"))
        naturals = gc.grothendieck(gc.truncated_naturals(2))
        self.assertEqual(report.order, len(naturals.classes()))

    def test_skew_product_over_trivial_words(self):
        s3 = gc.symmetric3()
        skew = gc.SkewProduct(s3)
        quotient = gc.quotient_group_on_trivial_words(s3)
        n = len(s3)
        for x in range(len(quotient)):
            for y in range(len(quotient)):
                sx = skew.element(x // n, "e", x % n, "e")
                sy = skew.element(y // n, "e", y % n, "e")
                z = skew.mul(sx, sy)
                self.assertEqual(z.g1 * n + z.g2, quotient.mul(x, y))


if __name__ == "__main__":
    unittest.main()
