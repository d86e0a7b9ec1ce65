"""
Expression language for scalars and Cayley-Dickson elements.

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)?
    unary  := "-" unary | power
    power  := atom ("^" ["-"] INT)?
    atom   := INT | LITERAL | u0..u7 | q1..q3 | NAME | FUNC "(" expr ("," expr)* ")" | "(" expr ")"

A term holds at most one product: ``u1*u2*u4`` is rejected because the
algebra is not associative. Printing parenthesizes every binary operation.
"""
import logging
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from ultrawrap import cayley_dickson as cd
from ultrawrap import padic_field as pf
from ultrawrap import ultrametric_calculus as calc
from ultrawrap.exceptions import DomainError, ExpressionSyntaxError
from ultrawrap.padic_field import Field, UltraScalar

log = logging.getLogger(__name__)

FUNCTIONS = ("conj", "n", "tr", "inv", "phi", "d")

_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<literal>[pt]\d+:(?:0(?:@-?\d+)?|[0-9a-z](?:\.[0-9a-z]+)?(?:e-?\d+)?))"
    r"|(?P<int>\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),])"
    r")"
)


@dataclass(frozen=True)
class Expression:
    pass


@dataclass(frozen=True)
class Integer(Expression):
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Literal(Expression):
    text: str

    def __str__(self):
        return self.text


@dataclass(frozen=True)
class Generator(Expression):
    index: int

    def __str__(self):
        return f"u{self.index}"


@dataclass(frozen=True)
class Param(Expression):
    index: int

    def __str__(self):
        return f"q{self.index}"


@dataclass(frozen=True)
class Variable(Expression):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class BinOp(Expression):
    op: str
    left: Expression
    right: Expression

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class Neg(Expression):
    operand: Expression

    def __str__(self):
        return f"-{self.operand}"


@dataclass(frozen=True)
class Power(Expression):
    base: Expression
    exponent: int

    def __str__(self):
        base = f"({self.base})" if isinstance(self.base, (Neg, Power)) else str(self.base)
        return f"{base}^{self.exponent}"


@dataclass(frozen=True)
class Call(Expression):
    name: str
    args: Tuple[Expression, ...]

    def __str__(self):
        return f"{self.name}({', '.join(str(a) for a in self.args)})"


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise ExpressionSyntaxError(f"Unexpected character {text[pos]!r}", position=pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def current(self) -> Tuple[str, str, int]:
        return self.tokens[self.i]

    def _accept(self, value: str) -> bool:
        kind, tok, _ = self.current
        if kind == "op" and tok == value:
            self.i += 1
            return True
        return False

    def _expect(self, value: str):
        if not self._accept(value):
            kind, tok, pos = self.current
            found = "end of input" if kind == "end" else repr(tok)
            raise ExpressionSyntaxError(f"Expected {value!r}, found {found}", position=pos)

    def parse(self) -> Expression:
        expr = self.expr()
        kind, tok, pos = self.current
        if kind != "end":
            raise ExpressionSyntaxError(f"Unexpected {tok!r}", position=pos)
        return expr

    def expr(self) -> Expression:
        left = self.term()
        while True:
            if self._accept("+"):
                left = BinOp("+", left, self.term())
            elif self._accept("-"):
                left = BinOp("-", left, self.term())
            else:
                return left

    def term(self) -> Expression:
        left = self.unary()
        for op in ("*", "/"):
            if self._accept(op):
                left = BinOp(op, left, self.unary())
                break
        else:
            return left
        kind, tok, pos = self.current
        if kind == "op" and tok in "*/":
            raise ExpressionSyntaxError("Chained products need parentheses", position=pos)
        return left

    def unary(self) -> Expression:
        if self._accept("-"):
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expression:
        base = self.atom()
        if not self._accept("^"):
            return base
        sign = -1 if self._accept("-") else 1
        kind, tok, pos = self.current
        if kind != "int":
            raise ExpressionSyntaxError("Exponent must be an integer", position=pos)
        self.i += 1
        return Power(base, sign * int(tok))

    def atom(self) -> Expression:
        kind, tok, pos = self.current
        if kind == "int":
            self.i += 1
            return Integer(int(tok))
        if kind == "literal":
            self.i += 1
            return Literal(tok)
        if kind == "name":
            self.i += 1
            if tok in FUNCTIONS and self._accept("("):
                args = [self.expr()]
                while self._accept(","):
                    args.append(self.expr())
                self._expect(")")
                return Call(tok, tuple(args))
            m = re.fullmatch(r"([uq])(\d)", tok)
            if m:
                index = int(m.group(2))
                if m.group(1) == "u":
                    if index > 7:
                        raise ExpressionSyntaxError(f"No generator {tok}", position=pos)
                    return Generator(index)
                if not 1 <= index <= cd.MAX_LEVEL:
                    raise ExpressionSyntaxError(f"No parameter {tok}", position=pos)
                return Param(index)
            return Variable(tok)
        if self._accept("("):
            inner = self.expr()
            self._expect(")")
            return inner
        found = "end of input" if kind == "end" else repr(tok)
        raise ExpressionSyntaxError(f"Unexpected {found}", position=pos)


def parse(text: str) -> Expression:
    """
    Parse an expression.

    Raises
    ------
    ExpressionSyntaxError
        With the character offset of the first offending token.
    """
    return _Parser(text).parse()


def to_text(expr: Expression) -> str:
    return str(expr)


Value = Union[UltraScalar, cd.CDElement]


@dataclass
class EvalContext:
    """
    Everything an expression may refer to.

    ``params`` is needed for generators and q_j; ``function`` for ``phi``
    and ``d``.
    """
    field: Field
    params: Optional[cd.CDParams] = None
    variables: Dict[str, Value] = field(default_factory=dict)
    function: Optional[calc.ScalarFn] = None
    schedule: Optional[calc.ProbeSchedule] = None

    def require_params(self) -> cd.CDParams:
        if self.params is None:
            raise DomainError("Generators and parameters need an algebra (give q)")
        return self.params


def as_element(x: Value, ctx: EvalContext) -> cd.CDElement:
    return x if isinstance(x, cd.CDElement) else cd.from_scalar(ctx.require_params(), x)


def _as_scalar(x: Value, what: str) -> UltraScalar:
    if isinstance(x, cd.CDElement):
        raise DomainError(f"{what} takes field elements")
    return x


def _divide(a: Value, b: Value, ctx: EvalContext) -> Value:
    if isinstance(b, cd.CDElement):
        # right division a * b^-1
        return cd.cd_mul(as_element(a, ctx), cd.cd_inv(b))
    if isinstance(a, cd.CDElement):
        return cd.cd_scale(a, pf.inv(b))
    return pf.div(a, b)


def _power(x: Value, n: int, ctx: EvalContext) -> Value:
    if not isinstance(x, cd.CDElement):
        return pf.power(x, n)
    if n < 0:
        return _power(cd.cd_inv(x), -n, ctx)
    out = cd.from_scalar(x.params, 1)
    for _ in range(n):
        out = cd.cd_mul(x, out)
    return out


def _call(name: str, args: List[Value], ctx: EvalContext) -> Value:
    if name in ("conj", "n", "tr", "inv") and len(args) != 1:
        raise DomainError(f"{name} takes one argument")
    x = args[0]
    if name == "conj":
        return cd.conj(x) if isinstance(x, cd.CDElement) else x
    if name == "n":
        return cd.norm_value(x) if isinstance(x, cd.CDElement) else x * x
    if name == "tr":
        return cd.trace(x) if isinstance(x, cd.CDElement) else x + x
    if name == "inv":
        return cd.cd_inv(x) if isinstance(x, cd.CDElement) else pf.inv(x)
    if ctx.function is None:
        raise DomainError(f"{name} needs a function (give --f)")
    scalars = [_as_scalar(a, name) for a in args]
    if name == "phi":
        if len(scalars) < 3 or len(scalars) % 2 == 0:
            raise DomainError("phi takes x followed by (v, t) pairs")
        qp = calc.QuotientPoint(scalars[0], tuple(scalars[1::2]), tuple(scalars[2::2]))
        qp.check_domain(ctx.function)
        return calc.phi_n(ctx.function, qp)
    if len(scalars) < 2:
        raise DomainError("d takes x followed by one or more directions")
    return calc.differential_n(ctx.function, scalars[0], scalars[1:], ctx.schedule)


def evaluate(expr: Expression, ctx: EvalContext) -> Value:
    """
    Evaluate bottom-up in the order the tree is written.

    Errors from the arithmetic (``ZeroNormElement``, ``DivisionByZero``,
    ``NonConvergent``) propagate unchanged.
    """
    if isinstance(expr, Integer):
        return ctx.field.from_int(expr.value)
    if isinstance(expr, Literal):
        return pf.coerce_scalar(expr.text, ctx.field)
    if isinstance(expr, Generator):
        return cd.generator(ctx.require_params(), expr.index)
    if isinstance(expr, Param):
        params = ctx.require_params()
        if expr.index > params.r:
            raise DomainError(f"q{expr.index} does not exist at level r={params.r}")
        return params.q[expr.index - 1]
    if isinstance(expr, Variable):
        if expr.name not in ctx.variables:
            raise DomainError(f"Unbound name {expr.name!r}")
        return ctx.variables[expr.name]
    if isinstance(expr, Neg):
        value = evaluate(expr.operand, ctx)
        return cd.cd_neg(value) if isinstance(value, cd.CDElement) else pf.neg(value)
    if isinstance(expr, Power):
        return _power(evaluate(expr.base, ctx), expr.exponent, ctx)
    if isinstance(expr, Call):
        return _call(expr.name, [evaluate(a, ctx) for a in expr.args], ctx)
    if isinstance(expr, BinOp):
        a, b = evaluate(expr.left, ctx), evaluate(expr.right, ctx)
        if expr.op == "/":
            return _divide(a, b, ctx)
        mixed = isinstance(a, cd.CDElement) or isinstance(b, cd.CDElement)
        if mixed:
            a, b = as_element(a, ctx), as_element(b, ctx)
        if expr.op == "+":
            return a + b
        if expr.op == "-":
            return a - b
        return a * b
    raise DomainError(f"Cannot evaluate {expr!r}")


def evaluate_text(text: str, ctx: EvalContext) -> Value:
    expr = parse(text)
    log.debug("Parsed %r as %s", text, expr)
    return evaluate(expr, ctx)


def format_value(value: Value) -> str:
    if isinstance(value, cd.CDElement):
        return cd.format_element(value)
    return pf.format_literal(value)
