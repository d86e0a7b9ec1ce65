"""
Tests for the expression parser and evaluator.
"""
import unittest

from ultrawrap import cayley_dickson as cd
from ultrawrap import expression as ex
from ultrawrap import ultrametric_calculus as calc
from ultrawrap.exceptions import DomainError, ExpressionSyntaxError, ZeroNormElement
from ultrawrap.padic_field import Field

Q5 = Field.qp(5, 6)


def octonion_context(**kwargs) -> ex.EvalContext:
    return ex.EvalContext(Q5, cd.CDParams.build(Q5, (1, 1, 1)), **kwargs)


class TestParse(unittest.TestCase):
    """Tokenizing, parsing and printing."""

    def test_unparenthesized_triple_product_is_rejected(self):
        with self.assertRaises(ExpressionSyntaxError) as ctx:
            ex.parse("u1*u2*u4")
        self.assertEqual(ctx.exception.position, 5)
        self.assertIn("parentheses", str(ctx.exception))
        with self.assertRaises(ExpressionSyntaxError):
            ex.parse("u1/u2*u4")

    def test_printing_brackets_every_operation(self):
        self.assertEqual(ex.to_text(ex.parse("(u1*u2)*u4")), "((u1 * u2) * u4)")
        self.assertEqual(ex.to_text(ex.parse("-x^2")), "-x^2")
        self.assertEqual(ex.to_text(ex.parse("(-x)^2")), "(-x)^2")
        self.assertEqual(ex.to_text(ex.parse("phi(x, 1, p5:1e1)")), "phi(x, 1, p5:1e1)")

    def test_printed_form_parses_back(self):
        for text in ("-(u1*u2)^2 + conj(x)/3", "n(u3 - q2) - tr(u1)^-2", "d(x, 1, 2) + 1 - 2"):
            expr = ex.parse(text)
            self.assertEqual(ex.parse(ex.to_text(expr)), expr)

    def test_syntax_errors_carry_positions(self):
        cases = {
            "1 +": 3,
            "(1": 2,
            "2^x": 2,
            "u8": 0,
            "q4": 0,
            "1 $ 2": 2,
            "conj(1,": 7,
        }
        for text, position in cases.items():
            with self.assertRaises(ExpressionSyntaxError, msg=text) as ctx:
                ex.parse(text)
            self.assertEqual(ctx.exception.position, position, text)


class TestEvaluate(unittest.TestCase):
    """Evaluation against a context."""

    def test_scalars(self):
        ctx = ex.EvalContext(Q5)
        self.assertEqual(ex.evaluate_text("1/3", ctx), Q5.from_rational(1, 3))
        self.assertEqual(ex.evaluate_text("p5:1e1 + 2", ctx), Q5.from_int(7))
        self.assertEqual(ex.evaluate_text("2^-1", ctx), Q5.from_rational(1, 2))
        self.assertEqual(ex.evaluate_text("-(3 - 5)", ctx), Q5.from_int(2))

    def test_bracketing_decides_the_octonion_product(self):
        ctx = octonion_context()
        u7 = cd.generator(ctx.params, 7)
        self.assertEqual(ex.evaluate_text("(u1*u2)*u4", ctx), -u7)
        self.assertEqual(ex.evaluate_text("u1*(u2*u4)", ctx), u7)

    def test_algebra_functions(self):
        ctx = octonion_context()
        one = cd.from_scalar(ctx.params, 1)
        self.assertEqual(ex.evaluate_text("n(u1 + u2)", ctx), Q5.from_int(2))
        self.assertEqual(ex.evaluate_text("tr(1 + u1)", ctx), Q5.from_int(2))
        self.assertEqual(ex.evaluate_text("inv(u1) * u1", ctx), one)
        self.assertEqual(ex.evaluate_text("u1 / u1", ctx), one)
        self.assertEqual(ex.evaluate_text("conj(1 + u1)", ctx), ex.evaluate_text("1 - u1", ctx))
        self.assertEqual(ex.evaluate_text("u3^2", ctx), -one)

    def test_parameters(self):
        params = cd.CDParams.build(Q5, (1, 3))
        ctx = ex.EvalContext(Q5, params)
        self.assertEqual(ex.evaluate_text("q2", ctx), Q5.from_int(3))
        with self.assertRaises(DomainError):
            ex.evaluate_text("q3", ctx)
        with self.assertRaises(DomainError):
            ex.evaluate_text("u1", ex.EvalContext(Q5))

    def test_variables(self):
        ctx = ex.EvalContext(Q5, variables={"x": Q5.from_int(2)})
        self.assertEqual(ex.evaluate_text("x^2 + 1", ctx), Q5.from_int(5))
        with self.assertRaises(DomainError):
            ex.evaluate_text("y", ctx)

    def test_zero_divisor_propagates(self):
        ctx = ex.EvalContext(Q5, cd.CDParams.build(Q5, (-1,)))
        with self.assertRaises(ZeroNormElement):
            ex.evaluate_text("inv(1 + u1)", ctx)

    def test_quotients_and_differentials(self):
        ctx = octonion_context(function=calc.polynomial("x^2", Q5), variables={"x": Q5.one()})
        self.assertEqual(ex.evaluate_text("phi(x, 1, 5)", ctx), Q5.from_int(7))
        self.assertEqual(ex.evaluate_text("d(3, 2)", ctx), Q5.from_int(12))
        self.assertEqual(ex.evaluate_text("d(1, 2, 3)", ctx), Q5.from_int(24))
        with self.assertRaises(DomainError):
            ex.evaluate_text("phi(x, 1)", ctx)
        with self.assertRaises(DomainError):
            ex.evaluate_text("d(1, u1)", ctx)
        with self.assertRaises(DomainError):
            ex.evaluate_text("d(1, 2)", ex.EvalContext(Q5))

    def test_format_value(self):
        self.assertEqual(ex.format_value(Q5.from_int(7)), "p5:2.10000e0")
        ctx = octonion_context()
        self.assertEqual(ex.format_value(ex.evaluate_text("u2", ctx)), "p5:1.00000e0*u2")


if __name__ == "__main__":
    unittest.main()
