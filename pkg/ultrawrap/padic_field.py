"""
Exact fixed-precision arithmetic in the locally compact ultra-normed fields
Q_p and F_p((t)).

A nonzero value is stored as a valuation and a little-endian window of
``precision`` significant digits whose first digit is nonzero. Zero is a
distinguished value: an exact zero, or a zero known only modulo p^N (a
"bounded zero"), which is what cancellation to tracked precision produces.

Precision rule
--------------
* sum/difference: the absolute precision is ``min(valuation + precision)``
  over the operands; the result keeps every digit below that bound.
* product/quotient: the relative precision is the minimum of the operands'
  relative precisions.
"""
import logging
import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import isprime
from sympy.ntheory.residue_ntheory import sqrt_mod

from ultrawrap.exceptions import (
    DivisionByZero,
    DomainError,
    ParameterMismatch,
    PrecisionLoss,
)

log = logging.getLogger(__name__)

PADIC = "p-adic"
LAURENT = "laurent"
KINDS = (PADIC, LAURENT)

DEFAULT_PRECISION = 12

_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"
_LITERAL_RE = re.compile(
    r"^(?P<tag>[pt])(?P<p>\d+):"
    r"(?:(?P<zero>0)(?:@(?P<bound>-?\d+))?"
    r"|(?P<lead>[0-9a-z])(?:\.(?P<rest>[0-9a-z]+))?(?:e(?P<val>-?\d+))?)$"
)


def _valuation_of_int(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _int_to_digits(n: int, p: int, k: int) -> Tuple[int, ...]:
    out = []
    for _ in range(k):
        n, r = divmod(n, p)
        out.append(r)
    return tuple(out)


def _digits_to_int(digits: Sequence[int], p: int) -> int:
    n = 0
    for d in reversed(digits):
        n = n * p + int(d)
    return n


@dataclass(frozen=True, eq=False)
class UltraScalar:
    """
    Element of Q_p or F_p((t)) known to a fixed number of significant digits.

    Attributes
    ----------
    kind: str
        ``"p-adic"`` or ``"laurent"``.
    p: int
        The prime (residue characteristic).
    valuation: Union[int, float]
        Exponent of the leading digit; ``math.inf`` for zero.
    digits: Tuple[int, ...]
        Little-endian residues in ``[0, p)``; empty for zero.
    precision: int
        Number of significant digits tracked beyond the valuation.
    known_to: Optional[int]
        For a zero only: the value is known to vanish modulo p^known_to.
        ``None`` marks an exact zero.
    """
    kind: str
    p: int
    valuation: Union[int, float]
    digits: Tuple[int, ...]
    precision: int
    known_to: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"Unknown field kind {self.kind!r}")
        if self.valuation == math.inf:
            if self.digits:
                raise DomainError("A zero value carries no digits")
            return
        if len(self.digits) != self.precision or self.precision < 1:
            raise PrecisionLoss(
                f"Digit window of length {len(self.digits)} does not match precision {self.precision}",
                remaining=len(self.digits),
            )
        if self.digits[0] == 0:
            raise DomainError("Leading digit of a nonzero value must be nonzero")
        if any(not 0 <= d < self.p for d in self.digits):
            raise DomainError(f"Digits must lie in [0, {self.p})")

    @property
    def is_zero(self) -> bool:
        return self.valuation == math.inf

    @property
    def is_exact_zero(self) -> bool:
        return self.is_zero and self.known_to is None

    @property
    def absolute_precision(self) -> Union[int, float]:
        """Exponent N such that the value is known modulo p^N."""
        if self.is_zero:
            return math.inf if self.known_to is None else self.known_to
        return self.valuation + self.precision

    @property
    def field(self) -> "Field":
        return Field(self.kind, self.p, self.precision if self.precision >= 1 else DEFAULT_PRECISION)

    def unit_int(self) -> int:
        """The digit window read as an integer (p-adic) or as a base-p number (laurent)."""
        return _digits_to_int(self.digits, self.p)

    def residue(self) -> int:
        return self.digits[0] if self.digits else 0

    def _coerce(self, other) -> "UltraScalar":
        if isinstance(other, UltraScalar):
            if other.kind != self.kind or other.p != self.p:
                raise ParameterMismatch(
                    f"Cannot combine {self.kind} p={self.p} with {other.kind} p={other.p}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            k = self.precision if self.precision >= 1 else DEFAULT_PRECISION
            other = Fraction(other)
            return from_rational(other.numerator, other.denominator, self.p, k, self.kind)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else sub(self, other)

    def __rsub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else sub(other, self)

    def __mul__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else div(self, other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else div(other, self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, n: int):
        return power(self, n)

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except ParameterMismatch:
            return False
        if other is NotImplemented:
            return NotImplemented
        return sub(self, other).is_zero

    def __hash__(self):
        # Equality holds only to tracked precision, so only the field is hashed.
        return hash((self.kind, self.p))

    def __repr__(self):
        return f"UltraScalar({format_literal(self)!r})"

    def __str__(self):
        return format_literal(self)


@dataclass(frozen=True)
class Field:
    """Descriptor of a base field: kind, prime and default precision."""
    kind: str
    p: int
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"Unknown field kind {self.kind!r}")
        if not isprime(self.p):
            raise DomainError(f"p={self.p} is not prime")
        if self.precision < 1:
            raise PrecisionLoss("Precision must be at least 1", remaining=self.precision)

    @classmethod
    def qp(cls, p: int, precision: int = DEFAULT_PRECISION) -> "Field":
        return cls(PADIC, p, precision)

    @classmethod
    def laurent(cls, p: int, precision: int = DEFAULT_PRECISION) -> "Field":
        return cls(LAURENT, p, precision)

    @property
    def characteristic(self) -> int:
        return 0 if self.kind == PADIC else self.p

    def zero(self) -> UltraScalar:
        return UltraScalar(self.kind, self.p, math.inf, (), self.precision)

    def one(self) -> UltraScalar:
        return self.from_int(1)

    def from_int(self, n: int) -> UltraScalar:
        return from_rational(n, 1, self.p, self.precision, self.kind)

    def from_rational(self, num: int, den: int = 1) -> UltraScalar:
        return from_rational(num, den, self.p, self.precision, self.kind)

    def uniformizer(self) -> UltraScalar:
        """p for Q_p, t for F_p((t))."""
        return UltraScalar(self.kind, self.p, 1, (1,) + (0,) * (self.precision - 1), self.precision)

    def element(self, valuation: int, digits: Sequence[int]) -> UltraScalar:
        digits = tuple(int(d) for d in digits)
        digits = digits + (0,) * (self.precision - len(digits))
        return UltraScalar(self.kind, self.p, valuation, digits[: self.precision], self.precision)

    def random_element(
        self,
        rng: random.Random,
        valuation_range: Tuple[int, int] = (-2, 3),
        zero_probability: float = 0.0,
    ) -> UltraScalar:
        if zero_probability and rng.random() < zero_probability:
            return self.zero()
        v = rng.randint(*valuation_range)
        digits = [rng.randrange(1, self.p)] + [rng.randrange(self.p) for _ in range(self.precision - 1)]
        return UltraScalar(self.kind, self.p, v, tuple(digits), self.precision)


def _bounded_zero(kind: str, p: int, bound: Union[int, float], precision: int) -> UltraScalar:
    known_to = None if bound == math.inf else int(bound)
    return UltraScalar(kind, p, math.inf, (), max(precision, 1), known_to)


def _check_same_field(x: UltraScalar, y: UltraScalar):
    if x.kind != y.kind or x.p != y.p:
        raise ParameterMismatch(f"Cannot combine {x.kind} p={x.p} with {y.kind} p={y.p}")


def from_rational(num: int, den: int, p: int, precision: int, kind: str = PADIC) -> UltraScalar:
    """
    Expansion of ``num/den`` truncated to ``precision`` significant digits.

    For the laurent kind the rational is read as a constant of F_p.

    Raises
    ------
    DivisionByZero
        When ``den`` is zero (or divisible by p for the laurent kind).
    DomainError
        When ``p`` is not prime.
    """
    if den == 0:
        raise DivisionByZero("Zero denominator")
    if not isprime(p):
        raise DomainError(f"p={p} is not prime")
    if precision < 1:
        raise PrecisionLoss("Precision must be at least 1", remaining=precision)
    if kind == LAURENT:
        if den % p == 0:
            raise DivisionByZero(f"Denominator {den} vanishes in F_{p}")
        c = (num * pow(den, -1, p)) % p
        if c == 0:
            return _bounded_zero(kind, p, math.inf, precision)
        return UltraScalar(kind, p, 0, (c,) + (0,) * (precision - 1), precision)
    if num == 0:
        return _bounded_zero(kind, p, math.inf, precision)
    vn = _valuation_of_int(num, p)
    vd = _valuation_of_int(den, p)
    modulus = p ** precision
    unit = ((num // p ** vn) * pow(den // p ** vd, -1, modulus)) % modulus
    return UltraScalar(kind, p, vn - vd, _int_to_digits(unit, p, precision), precision)


def from_polynomial(coeffs: Sequence[int], p: int, precision: int, shift: int = 0) -> UltraScalar:
    """Element ``t^shift * sum(coeffs[i] t^i)`` of F_p((t))."""
    reduced = [int(c) % p for c in coeffs]
    nonzero = [i for i, c in enumerate(reduced) if c]
    if not nonzero:
        return _bounded_zero(LAURENT, p, math.inf, precision)
    first = nonzero[0]
    window = reduced[first:first + precision]
    window += [0] * (precision - len(window))
    return UltraScalar(LAURENT, p, shift + first, tuple(window), precision)


def _window(x: UltraScalar, base: int, length: int):
    """Digits of x placed relative to p^base, truncated to ``length`` positions."""
    offset = int(x.valuation) - base
    if x.kind == PADIC:
        return (x.unit_int() * x.p ** offset) % x.p ** length if length > 0 else 0
    arr = np.zeros(max(length, 0), dtype=np.int64)
    if offset < length:
        take = min(len(x.digits), length - offset)
        arr[offset:offset + take] = x.digits[:take]
    return arr


def _normalize(kind: str, p: int, raw, base: int, bound: int, precision_hint: int) -> UltraScalar:
    length = bound - base
    if length <= 0:
        return _bounded_zero(kind, p, bound, precision_hint)
    if kind == PADIC:
        raw %= p ** length
        if raw == 0:
            return _bounded_zero(kind, p, bound, precision_hint)
        shift = _valuation_of_int(raw, p)
        k = length - shift
        return UltraScalar(kind, p, base + shift, _int_to_digits(raw // p ** shift, p, k), k)
    raw = np.asarray(raw, dtype=np.int64) % p
    nonzero = np.flatnonzero(raw)
    if nonzero.size == 0:
        return _bounded_zero(kind, p, bound, precision_hint)
    shift = int(nonzero[0])
    return UltraScalar(kind, p, base + shift, tuple(int(d) for d in raw[shift:length]), length - shift)


def add(x: UltraScalar, y: UltraScalar) -> UltraScalar:
    _check_same_field(x, y)
    if x.is_exact_zero:
        return y
    if y.is_exact_zero:
        return x
    bound = min(x.absolute_precision, y.absolute_precision)
    live = [z for z in (x, y) if not z.is_zero]
    hint = min(x.precision, y.precision)
    if not live:
        return _bounded_zero(x.kind, x.p, bound, hint)
    base = min(int(z.valuation) for z in live)
    length = int(bound) - base
    if length <= 0:
        return _bounded_zero(x.kind, x.p, bound, hint)
    raw = sum(_window(z, base, length) for z in live)
    return _normalize(x.kind, x.p, raw, base, int(bound), hint)


def neg(x: UltraScalar) -> UltraScalar:
    if x.is_zero:
        return x
    if x.kind == PADIC:
        modulus = x.p ** x.precision
        return UltraScalar(x.kind, x.p, x.valuation, _int_to_digits((-x.unit_int()) % modulus, x.p, x.precision), x.precision)
    return UltraScalar(x.kind, x.p, x.valuation, tuple((-d) % x.p for d in x.digits), x.precision)


def sub(x: UltraScalar, y: UltraScalar) -> UltraScalar:
    return add(x, neg(y))


def mul(x: UltraScalar, y: UltraScalar) -> UltraScalar:
    _check_same_field(x, y)
    if x.is_exact_zero or y.is_exact_zero:
        return _bounded_zero(x.kind, x.p, math.inf, min(x.precision, y.precision))
    if x.is_zero or y.is_zero:
        # |x| <= p^-N and |y| <= p^-M bound the product by p^-(N+M)
        bx = x.known_to if x.is_zero else x.valuation
        by = y.known_to if y.is_zero else y.valuation
        return _bounded_zero(x.kind, x.p, bx + by, min(x.precision, y.precision))
    k = min(x.precision, y.precision)
    if x.kind == PADIC:
        modulus = x.p ** k
        unit = (x.unit_int() * y.unit_int()) % modulus
        return UltraScalar(x.kind, x.p, x.valuation + y.valuation, _int_to_digits(unit, x.p, k), k)
    prod = np.convolve(np.array(x.digits[:k], dtype=np.int64), np.array(y.digits[:k], dtype=np.int64))[:k] % x.p
    return UltraScalar(x.kind, x.p, x.valuation + y.valuation, tuple(int(d) for d in prod), k)


def _series_inverse(digits: Sequence[int], p: int, k: int) -> Tuple[int, ...]:
    a = list(digits[:k])
    a0_inv = pow(a[0], -1, p)
    b = [a0_inv]
    for n in range(1, k):
        acc = sum(a[i] * b[n - i] for i in range(1, n + 1))
        b.append((-a0_inv * acc) % p)
    return tuple(b)


def inv(x: UltraScalar) -> UltraScalar:
    """
    Multiplicative inverse.

    Raises
    ------
    DivisionByZero
        If x is zero to tracked precision.
    """
    if x.is_zero:
        raise DivisionByZero("Inverse of a value that is zero to tracked precision")
    if x.kind == PADIC:
        modulus = x.p ** x.precision
        unit = pow(x.unit_int(), -1, modulus)
        return UltraScalar(x.kind, x.p, -x.valuation, _int_to_digits(unit, x.p, x.precision), x.precision)
    return UltraScalar(x.kind, x.p, -x.valuation, _series_inverse(x.digits, x.p, x.precision), x.precision)


def div(x: UltraScalar, y: UltraScalar) -> UltraScalar:
    return mul(x, inv(y))


def power(x: UltraScalar, n: int) -> UltraScalar:
    if n < 0:
        return power(inv(x), -n)
    result = from_rational(1, 1, x.p, x.precision if x.precision >= 1 else DEFAULT_PRECISION, x.kind)
    base = x
    while n:
        if n & 1:
            result = mul(result, base)
        base = mul(base, base)
        n >>= 1
    return result


def norm(x: UltraScalar) -> Fraction:
    """Exact absolute value p^(-v); zero for zero."""
    if x.is_zero:
        return Fraction(0)
    v = int(x.valuation)
    return Fraction(1, x.p ** v) if v >= 0 else Fraction(x.p ** (-v))


def unit_part(x: UltraScalar) -> UltraScalar:
    if x.is_zero:
        raise DivisionByZero("Zero has no unit part")
    return UltraScalar(x.kind, x.p, 0, x.digits, x.precision)


def to_fraction(x: UltraScalar) -> Fraction:
    """Rational approximant of a p-adic value: the digit window times p^v."""
    if x.kind != PADIC:
        raise DomainError("Only p-adic values have rational approximants")
    if x.is_zero:
        return Fraction(0)
    return Fraction(x.unit_int()) * Fraction(x.p) ** int(x.valuation)


def indistinguishable_at(x: UltraScalar, y: UltraScalar, k: int) -> bool:
    """True when x and y agree modulo p^k (or their difference is zero to precision)."""
    d = sub(x, y)
    return d.is_zero or d.valuation >= k


def hensel_sqrt(a: UltraScalar) -> Optional[UltraScalar]:
    """
    Square root by residue test and Hensel lifting.

    The canonical root is the lift of the smaller residue root (odd p) or the
    root congruent to 1 modulo 4 (p = 2). Returns ``None`` for non-squares.

    Raises
    ------
    PrecisionLoss
        When too few digits are tracked to decide squareness (p = 2 needs 3).
    """
    if a.is_zero:
        bound = None if a.known_to is None else a.known_to // 2
        return UltraScalar(a.kind, a.p, math.inf, (), a.precision, bound)
    if int(a.valuation) % 2:
        return None
    v = int(a.valuation) // 2
    p, k = a.p, a.precision
    if a.kind == LAURENT:
        if p == 2:
            raise DomainError("Square roots in characteristic 2 are not supported")
        roots = sqrt_mod(a.digits[0], p, all_roots=True)
        if not roots:
            return None
        b = [min(roots)]
        inv2b0 = pow(2 * b[0], -1, p)
        for n in range(1, k):
            acc = sum(b[i] * b[n - i] for i in range(1, n))
            b.append(((a.digits[n] - acc) * inv2b0) % p)
        return UltraScalar(a.kind, p, v, tuple(b), k)
    u = a.unit_int()
    if p == 2:
        if k < 3:
            raise PrecisionLoss("2-adic squareness needs three digits", remaining=k)
        if u % 8 != 1:
            return None
        r = 1
        for i in range(3, k):
            if (r * r - u) % 2 ** (i + 1):
                r += 2 ** (i - 1)
        k_out = k - 1
        return UltraScalar(a.kind, p, v, _int_to_digits(r % 2 ** k_out, p, k_out), k_out)
    roots = sqrt_mod(u % p, p, all_roots=True)
    if not roots:
        return None
    modulus = p ** k
    r = min(roots)
    # Newton iteration doubles the number of correct digits each step
    steps = max(1, math.ceil(math.log2(k)) + 1)
    inv2 = pow(2, -1, modulus)
    for _ in range(steps):
        r = ((r + u * pow(r, -1, modulus)) * inv2) % modulus
    log.debug("hensel_sqrt p=%d k=%d residue root %d", p, k, min(roots))
    return UltraScalar(a.kind, p, v, _int_to_digits(r, p, k), k)


def is_square(a: UltraScalar) -> bool:
    return hensel_sqrt(a) is not None


def parse_literal(text: str) -> UltraScalar:
    """
    Parse ``p5:2.301e-1`` (Q_5, digits 2,3,0,1, valuation -1) or ``t3:...``.

    ``p5:0`` is an exact zero and ``p5:0@4`` a zero known modulo 5^4.
    """
    m = _LITERAL_RE.match(text.strip())
    if m is None:
        raise DomainError(f"Malformed literal {text!r}")
    kind = PADIC if m.group("tag") == "p" else LAURENT
    p = int(m.group("p"))
    if not isprime(p):
        raise DomainError(f"p={p} is not prime")
    if m.group("zero") is not None:
        bound = m.group("bound")
        return _bounded_zero(kind, p, math.inf if bound is None else int(bound), DEFAULT_PRECISION)
    chars = m.group("lead") + (m.group("rest") or "")
    digits = tuple(_DIGITS.index(c) for c in chars)
    if any(d >= p for d in digits):
        raise DomainError(f"Digit out of range for p={p} in {text!r}")
    valuation = int(m.group("val") or 0)
    return UltraScalar(kind, p, valuation, digits, len(digits))


def format_literal(x: UltraScalar) -> str:
    tag = "p" if x.kind == PADIC else "t"
    if x.is_zero:
        return f"{tag}{x.p}:0" if x.known_to is None else f"{tag}{x.p}:0@{x.known_to}"
    chars = "".join(_DIGITS[d] for d in x.digits)
    body = chars[0] + ("." + chars[1:] if len(chars) > 1 else "")
    return f"{tag}{x.p}:{body}e{int(x.valuation)}"


def to_document(x: UltraScalar) -> Dict:
    doc = {
        "p": x.p,
        "kind": x.kind,
        "valuation": None if x.is_zero else int(x.valuation),
        "digits": list(x.digits),
        "precision": x.precision,
    }
    if x.is_zero:
        doc["known_to"] = x.known_to
    return doc


def from_document(doc: Dict) -> UltraScalar:
    if doc.get("valuation") is None:
        bound = doc.get("known_to")
        return _bounded_zero(doc["kind"], doc["p"], math.inf if bound is None else bound, doc["precision"])
    return UltraScalar(doc["kind"], doc["p"], doc["valuation"], tuple(doc["digits"]), doc["precision"])


def coerce_scalar(value, field_: Field) -> UltraScalar:
    """Bring an int, Fraction, literal string or UltraScalar into ``field_``."""
    if isinstance(value, UltraScalar):
        if value.kind != field_.kind or value.p != field_.p:
            raise ParameterMismatch(f"{value} is not an element of {field_}")
        return value
    if isinstance(value, str):
        return coerce_scalar(parse_literal(value), field_)
    value = Fraction(value)
    return field_.from_rational(value.numerator, value.denominator)
