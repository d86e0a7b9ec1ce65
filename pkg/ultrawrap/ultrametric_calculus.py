"""
Difference-quotient calculus over an ultra-normed field.

    phi1 f(x; v; t)      = [f(x + t v) - f(x)] / t
    Phi^n f(x; v; t)     = Phi^1 applied to Phi^(n-1) f in the base point only
    f^[n]                = (f^[n-1])^[1], every argument of f^[n-1] varying

Continuous extension to t = 0 is certified by digit agreement of probes along
t = p^m. Polynomials are handled symbolically with sympy, locally constant
functions exactly, and black-box functions by probing only.

The differential follows d^n f(x).(v_1..v_n) = n! * Phi^n f(x; v; 0), so
d^2(x^2).(v1, v2) = 4 v1 v2 rather than the divided-difference value 2 v1 v2.
"""
import functools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import sympy

from ultrawrap import cayley_dickson as cd
from ultrawrap import padic_field as pf
from ultrawrap.exceptions import DomainError, NonConvergent
from ultrawrap.padic_field import Field, UltraScalar

log = logging.getLogger(__name__)

Value = Union[UltraScalar, cd.CDElement]

X = sympy.Symbol("x")


@dataclass(frozen=True)
class Ball:
    """Closed ball {y : v(y - center) >= radius}; ``radius=None`` is the whole field."""
    center: UltraScalar
    radius: Optional[int] = None

    def contains(self, y: UltraScalar) -> bool:
        if self.radius is None:
            return True
        d = y - self.center
        return d.is_zero or d.valuation >= self.radius


@dataclass(frozen=True)
class ScalarFn:
    field: Field
    domain: Ball

    kind = "abstract"

    def _evaluate(self, x: UltraScalar) -> Value:
        raise NotImplementedError

    def __call__(self, x: UltraScalar) -> Value:
        if not self.domain.contains(x):
            raise DomainError(f"{x} lies outside the domain ball")
        return self._evaluate(x)


@dataclass(frozen=True)
class PolynomialFn(ScalarFn):
    """Polynomial with rational coefficients, lowest degree first."""
    coeffs: Tuple[Fraction, ...] = ()

    kind = "polynomial"

    @property
    def degree(self) -> int:
        nonzero = [i for i, c in enumerate(self.coeffs) if c]
        return nonzero[-1] if nonzero else 0

    def expression(self) -> sympy.Expr:
        return sum(sympy.Rational(c.numerator, c.denominator) * X ** i for i, c in enumerate(self.coeffs))

    def _evaluate(self, x: UltraScalar) -> UltraScalar:
        out = self.field.zero()
        for c in reversed(self.coeffs):
            out = out * x + _rational(c, x)
        return out


@dataclass(frozen=True)
class LocallyConstantFn(ScalarFn):
    """
    f(x) = table[x mod p^ell] on the unit ball; missing classes map to 0.

    Residue classes are keyed by the integer sum(d_i p^i, i < ell) of the
    first ell digits above valuation 0.
    """
    table: Tuple[Tuple[int, Fraction], ...] = ()
    ell: int = 1

    kind = "locally-constant"

    def residue_class(self, x: UltraScalar) -> int:
        if x.is_zero:
            return 0
        v = int(x.valuation)
        if v < 0:
            raise DomainError("Locally constant corpus functions live on the unit ball")
        n = 0
        for i, d in enumerate(x.digits):
            pos = v + i
            if pos >= self.ell:
                break
            n += d * x.p ** pos
        return n

    def _evaluate(self, x: UltraScalar) -> UltraScalar:
        value = dict(self.table).get(self.residue_class(x), Fraction(0))
        return _rational(value, x)


@dataclass(frozen=True)
class BlackBoxFn(ScalarFn):
    """Arbitrary callable; its output type is checked once at the ball center."""
    fn: Callable = None

    kind = "black-box"

    def __post_init__(self):
        probe = self.fn(self.domain.center)
        if isinstance(probe, UltraScalar):
            if probe.kind != self.field.kind or probe.p != self.field.p:
                raise DomainError("Black-box function returns values outside the base field")
        elif not isinstance(probe, cd.CDElement):
            raise DomainError(
                f"Black-box function must return field or algebra values, got {type(probe).__name__}"
            )

    def _evaluate(self, x: UltraScalar) -> Value:
        return self.fn(x)


@dataclass(frozen=True)
class ComponentwiseFn(ScalarFn):
    """A_r-valued function given by one scalar function per coordinate."""
    components: Tuple[ScalarFn, ...] = ()
    params: Optional[cd.CDParams] = None

    kind = "componentwise"

    def __post_init__(self):
        if self.params is None or len(self.components) != self.params.dimension:
            raise DomainError("Componentwise functions need one component per generator")

    def _evaluate(self, x: UltraScalar) -> cd.CDElement:
        return cd.CDElement(self.params, tuple(c(x) for c in self.components))


def _rational(value, like: UltraScalar) -> UltraScalar:
    value = Fraction(value)
    k = like.precision if like.precision >= 1 else pf.DEFAULT_PRECISION
    return pf.from_rational(value.numerator, value.denominator, like.p, k, like.kind)


def polynomial(coeffs: Union[str, Sequence], field_: Field, domain: Optional[Ball] = None) -> PolynomialFn:
    """Build a polynomial from coefficients (lowest degree first) or a string such as ``"x^2 + 3"``."""
    if isinstance(coeffs, str):
        expr = sympy.sympify(coeffs.replace("^", "**"), locals={"x": X})
        poly = sympy.Poly(expr, X)
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
    domain = domain or Ball(field_.zero())
    return PolynomialFn(field_, domain, tuple(Fraction(c) for c in coeffs))


def locally_constant(table: Dict[int, Fraction], ell: int, field_: Field) -> LocallyConstantFn:
    domain = Ball(field_.zero(), 0)
    return LocallyConstantFn(field_, domain, tuple(sorted((int(k), Fraction(v)) for k, v in table.items())), ell)


def black_box(fn: Callable, field_: Field, domain: Optional[Ball] = None) -> BlackBoxFn:
    return BlackBoxFn(field_, domain or Ball(field_.zero()), fn)


def componentwise(components: Sequence[ScalarFn], params: cd.CDParams) -> ComponentwiseFn:
    domain = components[0].domain if components else Ball(params.field.zero())
    return ComponentwiseFn(params.field, domain, tuple(components), params)


def corpus(name: str, field_: Field) -> ScalarFn:
    """
    Resolve ``corpus:locally-constant:ELL`` or ``corpus:polynomial:EXPR``.

    The locally constant member maps each residue class n modulo p^ELL to n,
    so it is non-constant with vanishing differentials.
    """
    parts = name.split(":", 2)
    if len(parts) != 3 or parts[0] != "corpus":
        raise DomainError(f"Unknown corpus entry {name!r}")
    family, arg = parts[1], parts[2]
    if family == "locally-constant":
        ell = int(arg)
        return locally_constant({n: n for n in range(field_.p ** ell)}, ell, field_)
    if family == "polynomial":
        return polynomial(arg, field_)
    raise DomainError(f"Unknown corpus family {family!r}")


def _sub(a: Value, b: Value) -> Value:
    return a - b


def _divide(a: Value, t: UltraScalar) -> Value:
    if isinstance(a, cd.CDElement):
        return cd.cd_scale(a, pf.inv(t))
    return a / t


def _scale(a: Value, s) -> Value:
    if isinstance(a, cd.CDElement):
        return cd.cd_scale(a, s)
    return a * s


@dataclass(frozen=True)
class QuotientPoint:
    """
    Base point, directions and increments of an order-n quotient.

    ``flavor`` is ``"phi"`` for partial quotients Phi^n; the upsilon flavor is
    evaluated through :func:`upsilon_n` on flattened points.
    """
    x: UltraScalar
    vs: Tuple[UltraScalar, ...]
    ts: Tuple[UltraScalar, ...]
    flavor: str = "phi"

    def __post_init__(self):
        if len(self.vs) != len(self.ts) or not self.vs:
            raise DomainError("A quotient point needs matching, nonempty direction and increment lists")

    @property
    def order(self) -> int:
        return len(self.vs)

    def check_domain(self, f: ScalarFn):
        for point in [self.x] + [self.x + t * v for v, t in zip(self.vs, self.ts)]:
            if not f.domain.contains(point):
                raise DomainError(f"Quotient point leaves the domain at {point}")


def phi1(f: ScalarFn, x: UltraScalar, v: UltraScalar, t: UltraScalar) -> Value:
    """[f(x + t v) - f(x)] / t for t != 0."""
    if t.is_zero:
        raise DomainError("t = 0: use extend_at_zero for the extended quotient")
    return _divide(_sub(f(x + t * v), f(x)), t)


def _phi_recursive(f: ScalarFn, x: UltraScalar, vs: Sequence[UltraScalar], ts: Sequence[UltraScalar]) -> Value:
    if len(vs) == 1:
        return phi1(f, x, vs[0], ts[0])
    v, t = vs[-1], ts[-1]
    if t.is_zero:
        raise DomainError("All increments must be nonzero")
    shifted = _phi_recursive(f, x + t * v, vs[:-1], ts[:-1])
    base = _phi_recursive(f, x, vs[:-1], ts[:-1])
    return _divide(_sub(shifted, base), t)


def phi_n(f: ScalarFn, qp: QuotientPoint) -> Value:
    """Phi^n f at a quotient point, by the recursion Phi^(n+1) = Phi^1(Phi^n)."""
    if any(t.is_zero for t in qp.ts):
        raise DomainError("All increments must be nonzero")
    qp.check_domain(f)
    return _phi_recursive(f, qp.x, qp.vs, qp.ts)


def alternating_sum(f: ScalarFn, qp: QuotientPoint) -> Value:
    """Closed form: sum over subsets S of (-1)^(n-|S|) f(x + sum_S t_j v_j), over prod t_j."""
    if any(t.is_zero for t in qp.ts):
        raise DomainError("All increments must be nonzero")
    qp.check_domain(f)
    n = qp.order
    total = None
    for mask in range(2 ** n):
        point = qp.x
        for j in range(n):
            if mask >> j & 1:
                point = point + qp.ts[j] * qp.vs[j]
        value = f(point)
        if (n - bin(mask).count("1")) % 2:
            value = -value
        total = value if total is None else total + value
    denom = qp.ts[0]
    for t in qp.ts[1:]:
        denom = denom * t
    return _divide(total, denom)


@functools.lru_cache(maxsize=None)
def _symbolic_phi(coeffs: Tuple[Fraction, ...], n: int) -> Tuple[sympy.Expr, Tuple[sympy.Symbol, ...]]:
    vs = sympy.symbols(f"v1:{n + 1}")
    ts = sympy.symbols(f"t1:{n + 1}")
    f = sum(sympy.Rational(c.numerator, c.denominator) * X ** i for i, c in enumerate(coeffs))
    total = 0
    for mask in range(2 ** n):
        shift = sum(ts[j] * vs[j] for j in range(n) if mask >> j & 1)
        term = f.subs(X, X + shift)
        total += -term if (n - bin(mask).count("1")) % 2 else term
    quotient = sympy.expand(sympy.cancel(total / sympy.Mul(*ts)))
    return quotient, (X,) + tuple(vs) + tuple(ts)


def symbolic_phi(f: PolynomialFn, n: int) -> sympy.Expr:
    """Phi^n f as a polynomial in x, v_1..v_n, t_1..t_n."""
    return _symbolic_phi(f.coeffs, n)[0]


def _evaluate_polynomial(expr: sympy.Expr, symbols, values: Sequence[UltraScalar], field_: Field) -> UltraScalar:
    poly = sympy.Poly(expr, *symbols)
    like = next((v for v in values if not v.is_zero), field_.one())
    total = field_.zero()
    for exponents, coeff in poly.terms():
        term = _rational(Fraction(int(coeff.p), int(coeff.q)), like)
        for value, e in zip(values, exponents):
            if e:
                term = term * pf.power(value, e)
        total = total + term
    return total


def phi_symbolic_value(f: PolynomialFn, x: UltraScalar, vs: Sequence[UltraScalar], ts: Sequence[UltraScalar]) -> UltraScalar:
    """Exact value of the symbolic quotient; increments may be zero."""
    expr, symbols = _symbolic_phi(f.coeffs, len(vs))
    return _evaluate_polynomial(expr, symbols, [x] + list(vs) + list(ts), f.field)


def upsilon_dimension(n: int) -> int:
    """Number of scalar arguments of f^[n]: d_0 = 1, d_n = 2 d_(n-1) + 1."""
    return 1 if n == 0 else 2 * upsilon_dimension(n - 1) + 1


def _upsilon(f: ScalarFn, n: int, args: Sequence[UltraScalar]) -> Value:
    if n == 0:
        return f(args[0])
    d = upsilon_dimension(n - 1)
    z, w, s = list(args[:d]), list(args[d:2 * d]), args[2 * d]
    if s.is_zero:
        raise DomainError(f"Increment of level {n} is zero")
    shifted = [a + s * b for a, b in zip(z, w)]
    return _divide(_sub(_upsilon(f, n - 1, shifted), _upsilon(f, n - 1, z)), s)


def upsilon_n(f: ScalarFn, n: int, point: Sequence[UltraScalar]) -> Value:
    """
    The full quotient f^[n] at a flattened point of length d_n.

    A level-n point is (z, w, s): a level-(n-1) point z, a direction w of the
    same length and an increment s.
    """
    if len(point) != upsilon_dimension(n):
        raise DomainError(f"f^[{n}] takes {upsilon_dimension(n)} arguments, got {len(point)}")
    return _upsilon(f, n, point)


@dataclass(frozen=True)
class ProbeSchedule:
    """Probes t = p^m for m0 <= m <= m1; convergence needs agreement to ``target`` digits."""
    m0: int = 1
    m1: Optional[int] = None
    target: Optional[int] = None

    def resolve(self, precision: int) -> Tuple[int, int, int]:
        m1 = self.m1 if self.m1 is not None else precision + 2
        target = self.target if self.target is not None else precision - 2
        if m1 <= self.m0:
            raise DomainError("Probe schedule needs m1 > m0")
        return self.m0, m1, target


@dataclass
class ExtensionReport:
    converged: bool
    limit: Optional[Value]
    stabilization: Union[int, float]
    schedule: List[int] = field(default_factory=list)
    agreements: List[Union[int, float]] = field(default_factory=list)
    method: str = "probe"


def _promote(x: UltraScalar, precision: int) -> UltraScalar:
    if x.is_zero or x.precision >= precision:
        return x
    return pf.UltraScalar(x.kind, x.p, x.valuation, x.digits + (0,) * (precision - x.precision), precision)


def _truncate(value: Value, precision: int) -> Value:
    if isinstance(value, cd.CDElement):
        return cd.CDElement(value.params, tuple(_truncate(c, precision) for c in value.coeffs))
    if value.is_zero or value.precision <= precision:
        return value
    return pf.UltraScalar(value.kind, value.p, value.valuation, value.digits[:precision], precision)


def _agreement(a: Value, b: Value) -> Union[int, float]:
    d = _sub(a, b)
    coords = d.coeffs if isinstance(d, cd.CDElement) else (d,)
    out = math.inf
    for c in coords:
        if c.is_zero:
            if c.known_to is not None:
                out = min(out, c.known_to)
        else:
            out = min(out, c.valuation)
    return out


def _zero_like(f: ScalarFn, x: UltraScalar) -> Value:
    sample = f(x)
    if isinstance(sample, cd.CDElement):
        return cd.CDElement(sample.params, tuple(sample.params.field.zero() for _ in sample.coeffs))
    return f.field.zero()


def extend_at_zero(
    f: ScalarFn,
    x: UltraScalar,
    vs: Sequence[UltraScalar],
    schedule: Optional[ProbeSchedule] = None,
) -> ExtensionReport:
    """
    Probe Phi^n f(x; vs; t, ..., t) along t = p^m and certify a limit at t = 0.

    Polynomials and locally constant functions take exact paths. Otherwise the
    probes run at precision k + n*m1 + n and the extension is reported as
    converged when the last two consecutive probe pairs agree to ``target``
    digits; the limit is the final probe cut back to k digits.
    """
    n = len(vs)
    k = f.field.precision
    if isinstance(f, PolynomialFn):
        zeros = [f.field.zero()] * n
        limit = phi_symbolic_value(f, x, vs, zeros)
        return ExtensionReport(True, limit, math.inf, [], [], "symbolic")
    if isinstance(f, LocallyConstantFn):
        # once |t v| <= p^-ell every evaluation point shares x's residue class
        return ExtensionReport(True, _zero_like(f, x), math.inf, [], [], "locally-constant")
    if isinstance(f, ComponentwiseFn):
        reports = [extend_at_zero(c, x, vs, schedule) for c in f.components]
        converged = all(r.converged for r in reports)
        limit = cd.CDElement(f.params, tuple(r.limit for r in reports)) if converged else None
        return ExtensionReport(
            converged,
            limit,
            min(r.stabilization for r in reports),
            reports[0].schedule,
            [min(a) for a in zip(*[r.agreements for r in reports])] if reports[0].agreements else [],
            "componentwise",
        )
    m0, m1, target = (schedule or ProbeSchedule()).resolve(k)
    work = k + n * m1 + n
    xw = _promote(x, work)
    vw = [_promote(v, work) for v in vs]
    uniformizer = _promote(f.field.uniformizer(), work)
    probes: List[Value] = []
    ms = list(range(m0, m1 + 1))
    for m in ms:
        t = pf.power(uniformizer, m)
        probes.append(_phi_recursive(f, xw, vw, [t] * n))
    agreements = [_agreement(a, b) for a, b in zip(probes, probes[1:])]
    converged = len(agreements) >= 2 and all(a >= target for a in agreements[-2:])
    stabilization = min(agreements[-2:]) if len(agreements) >= 2 else -math.inf
    log.debug("extend_at_zero n=%d agreements=%s target=%d", n, agreements, target)
    limit = _truncate(probes[-1], k) if converged else None
    return ExtensionReport(converged, limit, stabilization, ms, agreements, "probe")


def differential_n(
    f: ScalarFn,
    x: UltraScalar,
    vs: Sequence[UltraScalar],
    schedule: Optional[ProbeSchedule] = None,
) -> Value:
    """
    d^n f(x).(v_1, ..., v_n) = n! * (extended Phi^n)(x; v; 0).

    Raises
    ------
    NonConvergent
        When the extension at zero is not certified.
    """
    report = extend_at_zero(f, x, vs, schedule)
    if not report.converged:
        raise NonConvergent(f"Phi^{len(vs)} does not stabilize at t = 0", report=report)
    return _scale(report.limit, math.factorial(len(vs)))


@dataclass(frozen=True)
class ClassVerdict:
    verdict: str
    order: int
    flavor: str
    witness: Optional[Tuple] = None

    @property
    def is_member(self) -> bool:
        return self.verdict == "member"


def _upsilon_probe_point(x: UltraScalar, vs: Sequence[UltraScalar], n: int, t: UltraScalar) -> List[UltraScalar]:
    """Flattened level-n point with every increment equal to t and directions taken cyclically."""
    point = [x]
    directions = list(vs) or [x.field.one()]
    counter = 0
    for _ in range(n):
        w = []
        for _ in range(len(point)):
            w.append(directions[counter % len(directions)])
            counter += 1
        point = point + w + [t]
    return point


def class_check(
    f: ScalarFn,
    n: int,
    flavor: str = "C",
    base_points: Sequence[UltraScalar] = (),
    directions: Sequence[Sequence[UltraScalar]] = (),
    schedule: Optional[ProbeSchedule] = None,
) -> ClassVerdict:
    """
    Desk-scale verdict on membership of f in C^n (``flavor="C"``) or C^[n]
    (``flavor="C[n]"``).

    Polynomials and locally constant functions are members by structure.
    For black-box functions a sampled divergence is reported as
    ``non_member`` with its witness; otherwise the verdict is
    ``inconclusive`` since samples cannot prove membership.
    """
    if flavor not in ("C", "C[n]"):
        raise DomainError(f"Unknown smoothness flavor {flavor!r}")
    structural = f
    if isinstance(f, ComponentwiseFn):
        if all(isinstance(c, (PolynomialFn, LocallyConstantFn)) for c in f.components):
            return ClassVerdict("member", n, flavor)
        structural = None
    if isinstance(structural, (PolynomialFn, LocallyConstantFn)):
        return ClassVerdict("member", n, flavor)
    bases = list(base_points) or [f.domain.center]
    dirs = list(directions) or [[f.field.one()] * n]
    for x in bases:
        for vs in dirs:
            for order in range(1, n + 1):
                if flavor == "C":
                    report = extend_at_zero(f, x, vs[:order], schedule)
                    if not report.converged:
                        log.info("Divergence at order %d, x=%s", order, x)
                        return ClassVerdict("non_member", n, flavor, (order, x, tuple(vs[:order]), report))
                else:
                    report = _probe_upsilon(f, x, vs, order, schedule)
                    if not report.converged:
                        return ClassVerdict("non_member", n, flavor, (order, x, tuple(vs), report))
    return ClassVerdict("inconclusive", n, flavor)


def _probe_upsilon(f: ScalarFn, x: UltraScalar, vs: Sequence[UltraScalar], n: int, schedule: Optional[ProbeSchedule]) -> ExtensionReport:
    k = f.field.precision
    m0, m1, target = (schedule or ProbeSchedule()).resolve(k)
    work = k + upsilon_dimension(n) * m1 + n
    uniformizer = _promote(f.field.uniformizer(), work)
    probes = []
    ms = list(range(m0, m1 + 1))
    for m in ms:
        t = pf.power(uniformizer, m)
        point = [_promote(a, work) for a in _upsilon_probe_point(x, vs, n, t)]
        probes.append(_upsilon(f, n, point))
    agreements = [_agreement(a, b) for a, b in zip(probes, probes[1:])]
    converged = len(agreements) >= 2 and all(a >= target for a in agreements[-2:])
    limit = _truncate(probes[-1], k) if converged else None
    return ExtensionReport(converged, limit, min(agreements[-2:]) if converged else -math.inf, ms, agreements)


def leibniz_defect(f: ScalarFn, g: ScalarFn, x: UltraScalar, v: UltraScalar, t: UltraScalar) -> Value:
    """Phi^1(fg) - [f(x + t v) Phi^1 g + Phi^1 f g(x)]; zero to precision."""
    fg = black_box(lambda y: f(y) * g(y), f.field, f.domain)
    lhs = phi1(fg, x, v, t)
    rhs = f(x + t * v) * phi1(g, x, v, t) + phi1(f, x, v, t) * g(x)
    return lhs - rhs
