"""
The Cayley-Dickson tower A_0 = K, A_1, A_2, A_3 over a field of characteristic
other than 2, plus the commutative variant of A_1 with u^2 = u + alpha.

Elements are stored in the generator basis u_0 = 1, ..., u_{2^r - 1} with the
sign conventions of the static multiplication table ``GENERATOR_TABLE``.
Products are computed by recursive doubling

    (a1, a2)(b1, b2) = (a1 b1 - delta b2 a2*, a1* b2 + b1 a2)

on the raw doubling basis; the raw basis is calibrated against the table
the first time it is needed, and a disagreement is a hard error.
"""
import functools
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from ultrawrap import padic_field as pf
from ultrawrap.exceptions import (
    DivisionByZero,
    DomainError,
    ParameterMismatch,
    ZeroNormElement,
)
from ultrawrap.padic_field import Field, UltraScalar

log = logging.getLogger(__name__)

MAX_LEVEL = 3

# GENERATOR_TABLE[j][k] = (sign, q indices, l) means u_j u_k = sign * prod(q_i) * u_l.
# l is always j XOR k. Rows and columns are u_0 .. u_7; lower levels use the
# top-left block.
GENERATOR_TABLE: Tuple[Tuple[Tuple[int, Tuple[int, ...], int], ...], ...] = (
    ((1, (), 0), (1, (), 1), (1, (), 2), (1, (), 3), (1, (), 4), (1, (), 5), (1, (), 6), (1, (), 7)),
    ((1, (), 1), (-1, (1,), 0), (1, (), 3), (-1, (1,), 2), (-1, (), 5), (1, (1,), 4), (-1, (), 7), (1, (1,), 6)),
    ((1, (), 2), (-1, (), 3), (-1, (2,), 0), (1, (2,), 1), (-1, (), 6), (1, (), 7), (1, (2,), 4), (-1, (2,), 5)),
    ((1, (), 3), (1, (1,), 2), (-1, (2,), 1), (-1, (1, 2), 0), (-1, (), 7), (-1, (1,), 6), (1, (2,), 5), (1, (1, 2), 4)),
    ((1, (), 4), (1, (), 5), (1, (), 6), (1, (), 7), (-1, (3,), 0), (-1, (3,), 1), (-1, (3,), 2), (-1, (3,), 3)),
    ((1, (), 5), (-1, (1,), 4), (-1, (), 7), (1, (1,), 6), (1, (3,), 1), (-1, (1, 3), 0), (-1, (3,), 3), (1, (1, 3), 2)),
    ((1, (), 6), (1, (), 7), (-1, (2,), 4), (-1, (2,), 5), (1, (3,), 2), (1, (3,), 3), (-1, (2, 3), 0), (-1, (2, 3), 1)),
    ((1, (), 7), (-1, (1,), 6), (1, (2,), 5), (-1, (1, 2), 4), (1, (3,), 3), (-1, (1, 3), 2), (1, (2, 3), 1), (-1, (1, 2, 3), 0)),
)


def _raw_conj(a: List) -> List:
    return [a[0]] + [-c for c in a[1:]]


def _raw_mul(a: List, b: List, deltas: Sequence) -> List:
    """Recursive doubling product on raw coordinates; works for any ring-like scalars."""
    n = len(a)
    if n == 1:
        return [a[0] * b[0]]
    h = n // 2
    delta = deltas[int(math.log2(n)) - 1]
    a1, a2, b1, b2 = a[:h], a[h:], b[:h], b[h:]
    first = [x - delta * y for x, y in zip(_raw_mul(a1, b1, deltas), _raw_mul(b2, _raw_conj(a2), deltas))]
    second = [x + y for x, y in zip(_raw_mul(_raw_conj(a1), b2, deltas), _raw_mul(b1, a2, deltas))]
    return first + second


@functools.lru_cache(maxsize=None)
def basis_signs() -> Tuple[int, ...]:
    """
    Signs s_k with u_k = s_k e_k, where e_k is the raw doubling basis.

    Derived from u_3 = u_1 u_2, u_5 = -u_1 u_4, u_6 = -u_2 u_4, u_7 = -u_1 u_6 and
    then checked against every entry of ``GENERATOR_TABLE``.

    Raises
    ------
    RuntimeError
        If the doubling product and the table disagree anywhere.
    """
    q = sympy.symbols("q1 q2 q3")
    n = 2 ** MAX_LEVEL

    def raw_product(j, k):
        ej = [sympy.Integer(int(i == j)) for i in range(n)]
        ek = [sympy.Integer(int(i == k)) for i in range(n)]
        return [sympy.expand(c) for c in _raw_mul(ej, ek, q)]

    def raw_sign(vec, index):
        coeff = vec[index]
        return 1 if coeff == 1 else -1

    signs = [1, 1, 1, 0, 1, 0, 0, 0]
    signs[3] = raw_sign(raw_product(1, 2), 3)
    signs[5] = -raw_sign(raw_product(1, 4), 5)
    signs[6] = -raw_sign(raw_product(2, 4), 6)
    signs[7] = -signs[6] * raw_sign(raw_product(1, 6), 7)

    for j in range(n):
        for k in range(n):
            sign, qidx, target = GENERATOR_TABLE[j][k]
            raw = raw_product(j, k)
            expected = [sympy.Integer(0)] * n
            expected[target] = sympy.Integer(sign * signs[target]) * sympy.Mul(*[q[i - 1] for i in qidx])
            got = [sympy.expand(signs[j] * signs[k] * c) for c in raw]
            if any(sympy.expand(g - e) != 0 for g, e in zip(got, expected)):
                raise RuntimeError(f"Doubling product disagrees with the generator table at u{j}*u{k}")
    log.debug("Calibrated doubling basis signs %s", signs)
    return tuple(signs)


@dataclass(frozen=True)
class CDParams:
    """
    Parameters of A_r(q_1, ..., q_r): the base field and the doubling scalars.

    The doubling at level j uses delta = q_j.
    """
    field: Field
    q: Tuple[UltraScalar, ...] = ()

    def __post_init__(self):
        if len(self.q) > MAX_LEVEL:
            raise DomainError(f"Level r={len(self.q)} exceeds {MAX_LEVEL}")
        if self.field.kind == pf.LAURENT and self.field.p == 2:
            raise DomainError("F_2((t)) has characteristic 2")
        for j, qj in enumerate(self.q, start=1):
            if qj.kind != self.field.kind or qj.p != self.field.p:
                raise ParameterMismatch(f"q{j} is not an element of the base field")
            if qj.is_zero:
                raise DomainError(f"q{j} must be nonzero")

    @classmethod
    def build(cls, field_: Field, q_values: Sequence = ()) -> "CDParams":
        return cls(field_, tuple(pf.coerce_scalar(v, field_) for v in q_values))

    @property
    def r(self) -> int:
        return len(self.q)

    @property
    def dimension(self) -> int:
        return 2 ** self.r

    def q_product(self, indices: Sequence[int]) -> UltraScalar:
        out = self.field.one()
        for i in indices:
            out = out * self.q[i - 1]
        return out

    def lower(self) -> "CDParams":
        return CDParams(self.field, self.q[:-1])

    def matches(self, other: "CDParams") -> bool:
        return self.field == other.field and len(self.q) == len(other.q) and all(
            a == b for a, b in zip(self.q, other.q)
        )


@dataclass(frozen=True, eq=False)
class CDElement:
    params: CDParams
    coeffs: Tuple[UltraScalar, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.params.dimension:
            raise ParameterMismatch(
                f"Expected {self.params.dimension} coefficients, got {len(self.coeffs)}"
            )

    def __getitem__(self, j: int) -> UltraScalar:
        return self.coeffs[j]

    def _lift(self, other) -> "CDElement":
        if isinstance(other, CDElement):
            _check_params(self, other)
            return other
        if isinstance(other, (int, UltraScalar)):
            return from_scalar(self.params, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        return NotImplemented if other is NotImplemented else cd_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        return NotImplemented if other is NotImplemented else cd_sub(self, other)

    def __rsub__(self, other):
        other = self._lift(other)
        return NotImplemented if other is NotImplemented else cd_sub(other, self)

    def __mul__(self, other):
        other = self._lift(other)
        return NotImplemented if other is NotImplemented else cd_mul(self, other)

    def __rmul__(self, other):
        other = self._lift(other)
        return NotImplemented if other is NotImplemented else cd_mul(other, self)

    def __neg__(self):
        return cd_neg(self)

    def __eq__(self, other):
        if isinstance(other, (int, UltraScalar)):
            other = from_scalar(self.params, other)
        if not isinstance(other, CDElement) or not self.params.matches(other.params):
            return False
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.coeffs)

    def __repr__(self):
        return f"CDElement({format_element(self)})"

    def __str__(self):
        return format_element(self)


def format_element(x: CDElement) -> str:
    terms = [f"{pf.format_literal(c)}*u{j}" for j, c in enumerate(x.coeffs) if not c.is_exact_zero]
    return " + ".join(terms) if terms else "0"


def _check_params(x: CDElement, y: CDElement):
    if not x.params.matches(y.params):
        raise ParameterMismatch("Elements belong to different Cayley-Dickson algebras")


def from_scalar(params: CDParams, value) -> CDElement:
    zero = params.field.zero()
    c0 = pf.coerce_scalar(value, params.field)
    return CDElement(params, (c0,) + (zero,) * (params.dimension - 1))


def generator(params: CDParams, j: int) -> CDElement:
    if not 0 <= j < params.dimension:
        raise DomainError(f"u{j} does not exist at level r={params.r}")
    one, zero = params.field.one(), params.field.zero()
    return CDElement(params, tuple(one if i == j else zero for i in range(params.dimension)))


def element(params: CDParams, values: Sequence) -> CDElement:
    return CDElement(params, tuple(pf.coerce_scalar(v, params.field) for v in values))


def embed(x: CDElement, params: CDParams) -> CDElement:
    """Image of x under A_{r} -> A_{r'} for r <= r' (padding with zeros)."""
    if params.field != x.params.field or params.r < x.params.r or not all(
        a == b for a, b in zip(params.q, x.params.q)
    ):
        raise ParameterMismatch("Target algebra does not contain the source algebra")
    zero = params.field.zero()
    return CDElement(params, x.coeffs + (zero,) * (params.dimension - x.params.dimension))


def cd_add(x: CDElement, y: CDElement) -> CDElement:
    _check_params(x, y)
    return CDElement(x.params, tuple(a + b for a, b in zip(x.coeffs, y.coeffs)))


def cd_neg(x: CDElement) -> CDElement:
    return CDElement(x.params, tuple(-c for c in x.coeffs))


def cd_sub(x: CDElement, y: CDElement) -> CDElement:
    return cd_add(x, cd_neg(y))


def cd_scale(x: CDElement, scalar) -> CDElement:
    s = pf.coerce_scalar(scalar, x.params.field)
    return CDElement(x.params, tuple(s * c for c in x.coeffs))


def _to_raw(x: CDElement) -> List[UltraScalar]:
    signs = basis_signs()
    return [c if signs[j] > 0 else -c for j, c in enumerate(x.coeffs)]


def _from_raw(params: CDParams, raw: Sequence[UltraScalar]) -> CDElement:
    signs = basis_signs()
    return CDElement(params, tuple(c if signs[j] > 0 else -c for j, c in enumerate(raw)))


def cd_mul(x: CDElement, y: CDElement) -> CDElement:
    """Product by recursive doubling."""
    _check_params(x, y)
    if x.params.r == 0:
        return CDElement(x.params, (x.coeffs[0] * y.coeffs[0],))
    return _from_raw(x.params, _raw_mul(_to_raw(x), _to_raw(y), x.params.q))


def basis_product(params: CDParams, j: int, k: int) -> Tuple[UltraScalar, int]:
    """u_j u_k as (scalar, l) read from the generator table."""
    sign, qidx, target = GENERATOR_TABLE[j][k]
    scalar = params.q_product(qidx)
    return (scalar if sign > 0 else -scalar), target


def generator_table(params: CDParams) -> List[List[Tuple[UltraScalar, int]]]:
    """The 2^r x 2^r signed table of generator products."""
    n = params.dimension
    return [[basis_product(params, j, k) for k in range(n)] for j in range(n)]


def table_mul(x: CDElement, y: CDElement) -> CDElement:
    """Product through the generator table, independent of the doubling path."""
    _check_params(x, y)
    params = x.params
    out = [params.field.zero() for _ in range(params.dimension)]
    for j, xj in enumerate(x.coeffs):
        if xj.is_exact_zero:
            continue
        for k, yk in enumerate(y.coeffs):
            if yk.is_exact_zero:
                continue
            scalar, target = basis_product(params, j, k)
            out[target] = out[target] + scalar * xj * yk
    return CDElement(params, tuple(out))


def conj(x: CDElement) -> CDElement:
    return CDElement(x.params, (x.coeffs[0],) + tuple(-c for c in x.coeffs[1:]))


def trace(x: CDElement) -> UltraScalar:
    return x.coeffs[0] + x.coeffs[0]


def norm_weights(params: CDParams) -> Tuple[UltraScalar, ...]:
    """Diagonal weights of the norm form: the product of q_i over the bits of j."""
    return tuple(
        params.q_product([i + 1 for i in range(params.r) if j >> i & 1]) for j in range(params.dimension)
    )


def norm_value(x: CDElement) -> UltraScalar:
    total = x.params.field.zero()
    for w, c in zip(norm_weights(x.params), x.coeffs):
        if not c.is_exact_zero:
            total = total + w * c * c
    return total


def cd_inv(x: CDElement) -> CDElement:
    """
    Inverse a*/n(a).

    Raises
    ------
    DivisionByZero
        If x is zero.
    ZeroNormElement
        If x is nonzero with n(x) = 0; the element is attached as the witness.
    """
    if x.is_zero:
        raise DivisionByZero("Zero has no inverse")
    n = norm_value(x)
    if n.is_zero:
        raise ZeroNormElement(f"{format_element(x)} is a zero divisor: its norm vanishes", element=x)
    return cd_scale(conj(x), pf.inv(n))


def associator(x: CDElement, y: CDElement, z: CDElement) -> CDElement:
    return cd_sub(cd_mul(cd_mul(x, y), z), cd_mul(x, cd_mul(y, z)))


def non_associativity_witness(params: CDParams) -> Optional[Tuple[int, int, int]]:
    """First generator triple (i, j, k) in index order with a nonzero associator."""
    gens = [generator(params, j) for j in range(params.dimension)]
    for i in range(1, params.dimension):
        for j in range(1, params.dimension):
            for k in range(1, params.dimension):
                if not associator(gens[i], gens[j], gens[k]).is_zero:
                    return i, j, k
    return None


def norm_multiplicativity_defect(a: CDElement, b: CDElement) -> UltraScalar:
    return norm_value(cd_mul(a, b)) - norm_value(a) * norm_value(b)


def halves(x: CDElement) -> Tuple[CDElement, CDElement]:
    """The doubling pair (a1, a2) of x, both in A_{r-1}."""
    if x.params.r == 0:
        raise DomainError("A_0 elements are not doubled")
    lower = x.params.lower()
    raw = _to_raw(x)
    h = len(raw) // 2
    return _from_raw(lower, raw[:h]), _from_raw(lower, raw[h:])


def doubling_norm_rule(x: CDElement, reading: str = "doubled") -> bool:
    """
    Check n(a1, a2) = n(a1) + delta n(a2) for x = (a1, a2).

    ``reading="literal"`` instead tests n(a1 a2) = n(a1) + delta n(a2), with the
    product taken in the lower algebra.
    """
    a1, a2 = halves(x)
    delta = x.params.q[-1]
    rhs = norm_value(a1) + delta * norm_value(a2)
    if reading == "doubled":
        return norm_value(x) == rhs
    if reading == "literal":
        return norm_value(cd_mul(a1, a2)) == rhs
    raise DomainError(f"Unknown reading {reading!r}")


def random_element(params: CDParams, rng, valuation_range=(0, 2), zero_probability: float = 0.1) -> CDElement:
    return CDElement(
        params,
        tuple(
            params.field.random_element(rng, valuation_range, zero_probability)
            for _ in range(params.dimension)
        ),
    )


def to_document(x: CDElement) -> Dict:
    return {
        "params": {
            "kind": x.params.field.kind,
            "p": x.params.field.p,
            "precision": x.params.field.precision,
            "q": [pf.to_document(q) for q in x.params.q],
        },
        "coeffs": [pf.to_document(c) for c in x.coeffs],
    }


def from_document(doc: Dict) -> CDElement:
    spec = doc["params"]
    params = CDParams(
        Field(spec["kind"], spec["p"], spec["precision"]),
        tuple(pf.from_document(q) for q in spec["q"]),
    )
    return CDElement(params, tuple(pf.from_document(c) for c in doc["coeffs"]))


@dataclass(frozen=True, eq=False)
class UAlgebraElement:
    """a + b u in K[u]/(u^2 - u - alpha), with 4 alpha + 1 != 0."""
    a: UltraScalar
    b: UltraScalar
    alpha: UltraScalar

    def __post_init__(self):
        if (4 * self.alpha + 1).is_zero:
            raise DomainError("4*alpha + 1 must be nonzero")

    def _check(self, other: "UAlgebraElement"):
        if not self.alpha == other.alpha:
            raise ParameterMismatch("Elements use different alpha")

    def __mul__(self, other):
        return u_mul(self, other)

    def __add__(self, other):
        self._check(other)
        return UAlgebraElement(self.a + other.a, self.b + other.b, self.alpha)

    def __eq__(self, other):
        if not isinstance(other, UAlgebraElement):
            return False
        return self.alpha == other.alpha and self.a == other.a and self.b == other.b

    __hash__ = None

    def __repr__(self):
        return f"UAlgebraElement({self.a} + {self.b}*u; alpha={self.alpha})"


def u_element(a, b, alpha, field_: Field) -> UAlgebraElement:
    return UAlgebraElement(
        pf.coerce_scalar(a, field_), pf.coerce_scalar(b, field_), pf.coerce_scalar(alpha, field_)
    )


def u_mul(x: UAlgebraElement, y: UAlgebraElement) -> UAlgebraElement:
    x._check(y)
    bb = x.b * y.b
    return UAlgebraElement(x.a * y.a + x.alpha * bb, x.a * y.b + x.b * y.a + bb, x.alpha)


def u_conj(x: UAlgebraElement) -> UAlgebraElement:
    """(a + b u)* = (a + b) - b u, so u* = 1 - u."""
    return UAlgebraElement(x.a + x.b, -x.b, x.alpha)


def u_norm(x: UAlgebraElement) -> UltraScalar:
    return x.a * x.a + x.a * x.b - x.alpha * x.b * x.b


def u_trace(x: UAlgebraElement) -> UltraScalar:
    return x.a + x.a + x.b


def u_inv(x: UAlgebraElement) -> UAlgebraElement:
    n = u_norm(x)
    if n.is_zero:
        raise ZeroNormElement("Element of K[u] with vanishing norm", element=x)
    c = u_conj(x)
    ninv = pf.inv(n)
    return UAlgebraElement(c.a * ninv, c.b * ninv, x.alpha)
