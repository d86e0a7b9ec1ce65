"""
Finite magmas and the group constructions built on them.

* ``FiniteMagma`` with the axiom audit G1-G5 (G4 alternativity, G5 associativity).
* Reduced words of the free group B on ``a``, ``b``.
* Grothendieck completion of a commutative cancellative monoid.
* The skew product W x B x W x B with product

      (g1 a1 (x) g2 a2)(g3 a3 (x) g4 a4) = ((g1 g3)(a1 a3) (x) (g4 g2)((a1^-1 a4 a1) a2))

  and bounded rewriting modulo the relation g1 g2 a (x) g2 b ~ g1 (x) e.
"""
import itertools
import logging
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ultrawrap import cayley_dickson as cd
from ultrawrap.exceptions import (
    CapExceeded,
    DocumentError,
    DomainError,
    MonoidLawError,
    NonCancellative,
    NonCommutative,
    ParameterMismatch,
)

log = logging.getLogger(__name__)

AUDIT_CAP = 512
DEFAULT_REWRITE_BUDGET = 10_000

_CHUNK = 32


@dataclass(eq=False)
class FiniteMagma:
    """
    A finite set with a total binary operation given by its table.

    ``table[i, j]`` is the index of ``elements[i] * elements[j]``. A claimed
    unit or inverse table is verified on construction; when no unit is
    claimed a two-sided unit is looked up.
    """
    elements: Tuple[str, ...]
    table: np.ndarray
    unit: Optional[int] = None
    inverse: Optional[Tuple[int, ...]] = None
    name: str = "magma"

    def __post_init__(self):
        self.table = np.asarray(self.table, dtype=np.int64)
        n = len(self.elements)
        if self.table.shape != (n, n):
            raise DomainError(f"Table of shape {self.table.shape} does not match {n} elements")
        if n and (self.table.min() < 0 or self.table.max() >= n):
            raise DomainError("Table entries must index elements")
        if self.unit is None:
            self.unit = self._find_unit()
        elif not self._is_unit(self.unit):
            raise MonoidLawError(f"{self.elements[self.unit]} is not a two-sided unit", witness=(self.unit,))
        if self.inverse is None and self.unit is not None:
            self.inverse = self._find_inverses()
        elif self.inverse is not None:
            for a, b in enumerate(self.inverse):
                if self.unit is None or self.table[a, b] != self.unit or self.table[b, a] != self.unit:
                    raise MonoidLawError(f"{self.elements[b]} is not inverse to {self.elements[a]}", witness=(a, b))

    def __len__(self) -> int:
        return len(self.elements)

    def _is_unit(self, e: int) -> bool:
        idx = np.arange(len(self))
        return bool(np.all(self.table[e] == idx) and np.all(self.table[:, e] == idx))

    def _find_unit(self) -> Optional[int]:
        return next((e for e in range(len(self)) if self._is_unit(e)), None)

    def _find_inverses(self) -> Optional[Tuple[int, ...]]:
        out = []
        for a in range(len(self)):
            hits = np.nonzero((self.table[a] == self.unit) & (self.table[:, a] == self.unit))[0]
            if not len(hits):
                return None
            out.append(int(hits[0]))
        return tuple(out)

    @property
    def is_group_like(self) -> bool:
        return self.unit is not None and self.inverse is not None

    def index(self, name: str) -> int:
        try:
            return self.elements.index(name)
        except ValueError:
            raise DomainError(f"{name!r} is not an element of {self.name}") from None

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        if self.inverse is None:
            raise MonoidLawError(f"{self.name} has no inverses", witness=(a,))
        return self.inverse[a]

    def product(self, items: Iterable[int]) -> int:
        """Left-bracketed product ((x1 x2) x3)...; the unit for no items."""
        out = self.unit
        for x in items:
            out = x if out is None else self.mul(out, x)
        return out

    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def abelianization(self) -> Tuple[int, Tuple[int, ...]]:
        """
        Number of classes of W / [W, W] and the class index of every element.

        The commutator subgroup is closed under products starting from all
        commutators a b a^-1 b^-1.
        """
        if not self.is_group_like:
            raise MonoidLawError(f"{self.name} is not a group", witness=None)
        n = len(self)
        sub = {self.unit}
        for a in range(n):
            for b in range(n):
                sub.add(self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b))))
        frontier = list(sub)
        while frontier:
            x = frontier.pop()
            for y in list(sub):
                for z in (self.mul(x, y), self.mul(y, x)):
                    if z not in sub:
                        sub.add(z)
                        frontier.append(z)
        classes = [-1] * n
        count = 0
        for a in range(n):
            if classes[a] >= 0:
                continue
            for c in sub:
                classes[self.mul(a, c)] = count
            count += 1
        return count, tuple(classes)


@dataclass
class AuditReport:
    """Result of ``audit_axioms``; each witness is None when the axiom holds."""
    results: Dict[str, bool] = field(default_factory=dict)
    witnesses: Dict[str, Optional[Tuple[int, ...]]] = field(default_factory=dict)

    def __getitem__(self, axiom: str) -> bool:
        return self.results[axiom]

    def named_witness(self, magma: FiniteMagma, axiom: str) -> Optional[Tuple[str, ...]]:
        w = self.witnesses.get(axiom)
        return None if w is None else tuple(magma.elements[i] for i in w)


def _first_true(mask: np.ndarray) -> Optional[Tuple[int, ...]]:
    hits = np.argwhere(mask)
    return None if not len(hits) else tuple(int(i) for i in hits[0])


def audit_axioms(m: FiniteMagma, cap: int = AUDIT_CAP) -> AuditReport:
    """
    Exhaustive check of G1-G5 over the table.

    Raises
    ------
    CapExceeded
        When the magma has more than ``cap`` elements.
    """
    n = len(m)
    if n > cap:
        raise CapExceeded(f"{m.name} has {n} elements; the audit cap is {cap}", size=n, cap=cap)
    report = AuditReport()
    t = m.table
    idx = np.arange(n)

    def record(axiom, witness):
        report.results[axiom] = witness is None
        report.witnesses[axiom] = witness

    record("G1", None)
    record("G2", None if m.unit is not None else (0,))
    if m.unit is None:
        record("G3", (0,))
    else:
        bad = next(
            (a for a in range(n) if not np.any((t[a] == m.unit) & (t[:, a] == m.unit))),
            None,
        )
        record("G3", None if bad is None else (bad,))

    # right and left alternativity: (ab)b = a(bb), b(ba) = (bb)a
    sq = t[idx, idx]
    right = t[t, idx[None, :]] != t[idx[:, None], sq[None, :]]
    left = t[idx[None, :], t.T] != t[sq[None, :], idx[:, None]]
    witness = _first_true(right | left)
    if witness is None and m.inverse is not None:
        inv = np.asarray(m.inverse)
        cancel_right = t[t, inv[None, :]] != idx[:, None]
        cancel_left = t[inv[None, :], t.T] != idx[:, None]
        witness = _first_true(cancel_right | cancel_left)
    record("G4", witness)

    witness = None
    for start in range(0, n, _CHUNK):
        a = idx[start:start + _CHUNK]
        lhs = t[t[a][:, :, None], idx[None, None, :]]
        rhs = t[a[:, None, None], t[None, :, :]]
        hit = _first_true(lhs != rhs)
        if hit is not None:
            witness = (int(a[hit[0]]), hit[1], hit[2])
            break
    record("G5", witness)
    if report["G5"] and report["G3"] and not report["G4"]:
        raise AssertionError("Associativity without alternativity")
    log.info("Audit of %s: %s", m.name, report.results)
    return report


def _from_function(elements: Sequence[str], op: Callable[[int, int], int], name: str) -> FiniteMagma:
    n = len(elements)
    table = np.array([[op(a, b) for b in range(n)] for a in range(n)], dtype=np.int64)
    return FiniteMagma(tuple(elements), table, name=name)


def cyclic(n: int) -> FiniteMagma:
    return _from_function([str(i) for i in range(n)], lambda a, b: (a + b) % n, f"Z/{n}")


def trivial() -> FiniteMagma:
    return cyclic(1)


def symmetric3() -> FiniteMagma:
    """S3 as permutations of (0, 1, 2); (s t)(x) = s(t(x))."""
    perms = list(itertools.permutations(range(3)))
    names = ["".join(map(str, p)) for p in perms]

    def op(a, b):
        s, t = perms[a], perms[b]
        return perms.index(tuple(s[t[x]] for x in range(3)))

    return _from_function(names, op, "S3")


def signed_units(r: int, names: Optional[Sequence[str]] = None) -> FiniteMagma:
    """{+u_j, -u_j} in A_r(1, ..., 1) under the generator table."""
    dim = 2 ** r
    labels = list(names) if names else [f"u{j}" for j in range(dim)]
    elements = []
    for label in labels:
        elements.extend([label, "-" + label])

    def op(a, b):
        j, sa = divmod(a, 2)
        k, sb = divmod(b, 2)
        sign, _, target = cd.GENERATOR_TABLE[j][k]
        negative = (sign < 0) ^ bool(sa) ^ bool(sb)
        return 2 * target + int(negative)

    return _from_function(elements, op, f"signed units of A_{r}")


def quaternion_units() -> FiniteMagma:
    m = signed_units(2, ["1", "i", "j", "k"])
    m.name = "Q8"
    return m


def octonion_units() -> FiniteMagma:
    m = signed_units(3)
    m.name = "signed octonion units"
    return m


def direct_product(m1: FiniteMagma, m2: FiniteMagma) -> FiniteMagma:
    n2 = len(m2)
    names = [f"({a},{b})" for a in m1.elements for b in m2.elements]

    def op(x, y):
        a1, b1 = divmod(x, n2)
        a2, b2 = divmod(y, n2)
        return m1.mul(a1, a2) * n2 + m2.mul(b1, b2)

    return _from_function(names, op, f"{m1.name} x {m2.name}")


def to_document(m: FiniteMagma) -> Dict:
    doc = {"name": m.name, "elements": list(m.elements), "table": m.table.tolist()}
    if m.unit is not None:
        doc["unit"] = int(m.unit)
    return doc


def from_document(doc: Dict) -> FiniteMagma:
    try:
        return FiniteMagma(tuple(doc["elements"]), np.array(doc["table"]), doc.get("unit"), name=doc.get("name", "magma"))
    except (DomainError, MonoidLawError) as err:
        raise DocumentError(f"Invalid magma table: {err}") from err


@dataclass(frozen=True)
class ReducedWord:
    """Reduced word of a free group: (generator, nonzero exponent) pairs, no equal neighbours."""
    letters: Tuple[Tuple[str, int], ...] = ()

    def __mul__(self, other: "ReducedWord") -> "ReducedWord":
        return free_reduce(self.letters + other.letters)

    def inverse(self) -> "ReducedWord":
        return ReducedWord(tuple((g, -e) for g, e in reversed(self.letters)))

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def exponent_sum(self, generator: str) -> int:
        return sum(e for g, e in self.letters if g == generator)

    def __str__(self):
        if not self.letters:
            return "e"
        return " ".join(g if e == 1 else f"{g}^{e}" for g, e in self.letters)


def free_reduce(letters: Iterable[Tuple[str, int]]) -> ReducedWord:
    stack: List[List] = []
    for g, e in letters:
        if e == 0:
            continue
        if stack and stack[-1][0] == g:
            stack[-1][1] += e
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([g, e])
    return ReducedWord(tuple((g, e) for g, e in stack))


_TOKEN = re.compile(r"\s*([a-df-z])(?:\^(-?\d+))?")


def parse_word(text: str) -> ReducedWord:
    """Parse ``"b^-1 a b a^-1"``, ``"ab"`` or ``"e"``."""
    text = text.strip()
    if text in ("", "e"):
        return ReducedWord()
    letters = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DomainError(f"Cannot read a word at position {pos} of {text!r}")
        letters.append((m.group(1), int(m.group(2) or 1)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return free_reduce(letters)


def word(spec) -> ReducedWord:
    return spec if isinstance(spec, ReducedWord) else parse_word(spec)


def word_exponent_sums(w: ReducedWord) -> Tuple[int, int]:
    return w.exponent_sum("a"), w.exponent_sum("b")


E_B = ReducedWord()
A_GEN = ReducedWord((("a", 1),))
B_GEN = ReducedWord((("b", 1),))


@dataclass
class PresentedMonoid:
    """A commutative monoid given by a finite carrier sample, an operation and its identity."""
    carrier: Tuple[Hashable, ...]
    op: Callable[[Hashable, Hashable], Hashable]
    identity: Hashable
    name: str = "monoid"

    @classmethod
    def from_magma(cls, m: FiniteMagma) -> "PresentedMonoid":
        if m.unit is None:
            raise MonoidLawError(f"{m.name} has no unit", witness=None)
        return cls(tuple(range(len(m))), m.mul, m.unit, m.name)


def truncated_naturals(n: int) -> PresentedMonoid:
    """(N, +) sampled on {0, ..., n}."""
    return PresentedMonoid(tuple(range(n + 1)), lambda x, y: x + y, 0, f"N<={n}")


@dataclass(frozen=True)
class FormalDifference:
    """The class of sum(plus) - sum(minus)."""
    plus: Tuple[Hashable, ...]
    minus: Tuple[Hashable, ...] = ()


class GrothendieckGroup:
    """Formal differences [m] - [n] of a commutative cancellative monoid."""

    def __init__(self, monoid: PresentedMonoid):
        self.monoid = monoid

    def _fold(self, items: Sequence[Hashable]) -> Hashable:
        out = self.monoid.identity
        for x in items:
            out = self.monoid.op(out, x)
        return out

    def pair(self, d: FormalDifference) -> Tuple[Hashable, Hashable]:
        return self._fold(d.plus), self._fold(d.minus)

    def equal(self, d1: FormalDifference, d2: FormalDifference) -> bool:
        m1, n1 = self.pair(d1)
        m2, n2 = self.pair(d2)
        return self.monoid.op(m1, n2) == self.monoid.op(m2, n1)

    def add(self, d1: FormalDifference, d2: FormalDifference) -> FormalDifference:
        return FormalDifference(d1.plus + d2.plus, d1.minus + d2.minus)

    def neg(self, d: FormalDifference) -> FormalDifference:
        return FormalDifference(d.minus, d.plus)

    def zero(self) -> FormalDifference:
        return FormalDifference((), ())

    def eta(self, x: Hashable) -> FormalDifference:
        """eta(x) = [x] - [0]."""
        return FormalDifference((x,), (self.monoid.identity,))

    def classes(self) -> List[Tuple[Hashable, Hashable]]:
        """Representatives (m, n) of the distinct classes with m, n in the carrier."""
        reps: List[Tuple[Hashable, Hashable]] = []
        for m, n in itertools.product(self.monoid.carrier, repeat=2):
            d = FormalDifference((m,), (n,))
            if not any(self.equal(d, FormalDifference((a,), (b,))) for a, b in reps):
                reps.append((m, n))
        return reps

    def class_of(self, d: FormalDifference, reps: Sequence[Tuple[Hashable, Hashable]]) -> int:
        for i, (a, b) in enumerate(reps):
            if self.equal(d, FormalDifference((a,), (b,))):
                return i
        raise DomainError("Difference leaves the generated range")

    def as_magma(self) -> FiniteMagma:
        """
        The completion as a table.

        Raises
        ------
        DomainError
            When the carrier is not closed under the operation, as for
            ``truncated_naturals(n)`` where n + n leaves the sample.
        """
        carrier = set(self.monoid.carrier)
        for a, b in itertools.product(self.monoid.carrier, repeat=2):
            if self.monoid.op(a, b) not in carrier:
                raise DomainError(f"{a} + {b} leaves the carrier of {self.monoid.name}; no finite table")
        reps = self.classes()
        names = [f"[{a}]-[{b}]" for a, b in reps]
        table = [
            [self.class_of(FormalDifference((a1, a2), (b1, b2)), reps) for a2, b2 in reps]
            for a1, b1 in reps
        ]
        return FiniteMagma(tuple(names), np.array(table), name=f"K({self.monoid.name})")


def grothendieck(monoid) -> GrothendieckGroup:
    """
    Completion of a commutative cancellative monoid.

    Raises
    ------
    NonCommutative
        With a pair (x, y) where xy != yx.
    NonCancellative
        With a triple (x, y, z) where xz = yz but x != y; eta would not inject.
    """
    if isinstance(monoid, FiniteMagma):
        monoid = PresentedMonoid.from_magma(monoid)
    carrier = monoid.carrier
    for x, y in itertools.combinations(carrier, 2):
        if monoid.op(x, y) != monoid.op(y, x):
            raise NonCommutative(f"{x} and {y} do not commute in {monoid.name}", witness=(x, y))
    for x, y in itertools.combinations(carrier, 2):
        for z in carrier:
            if monoid.op(x, z) == monoid.op(y, z):
                raise NonCancellative(f"{x} + {z} = {y} + {z} in {monoid.name}", witness=(x, y, z))
    log.info("Grothendieck completion of %s on %d carrier elements", monoid.name, len(carrier))
    return GrothendieckGroup(monoid)


@dataclass(frozen=True)
class SkewElement:
    """g1 w1 (x) g2 w2 with g_i indices into W and w_i reduced words of B."""
    g1: int
    w1: ReducedWord
    g2: int
    w2: ReducedWord
    group: str = ""


class SkewProduct:
    """Arithmetic of W x B x W x B for a finite group W."""

    def __init__(self, w: FiniteMagma):
        if not w.is_group_like:
            raise MonoidLawError(f"{w.name} is not a group", witness=None)
        self.w = w
        self._ab = w.abelianization()

    def element(self, g1, w1="e", g2=None, w2="e") -> SkewElement:
        """Build from element names (or indices) and word strings."""
        g1 = self.w.index(g1) if isinstance(g1, str) else g1
        if g2 is None:
            g2 = self.w.unit
        g2 = self.w.index(g2) if isinstance(g2, str) else g2
        return SkewElement(g1, word(w1), g2, word(w2), self.w.name)

    def identity(self) -> SkewElement:
        return SkewElement(self.w.unit, E_B, self.w.unit, E_B, self.w.name)

    def _check(self, *xs: SkewElement):
        for x in xs:
            if x.group != self.w.name:
                raise ParameterMismatch(f"Element over {x.group!r} used with {self.w.name!r}")

    def mul(self, x: SkewElement, y: SkewElement) -> SkewElement:
        self._check(x, y)
        w = self.w
        twisted = x.w1.inverse() * y.w2 * x.w1
        return SkewElement(
            w.mul(x.g1, y.g1),
            x.w1 * y.w1,
            w.mul(y.g2, x.g2),
            twisted * x.w2,
            w.name,
        )

    def inverse(self, x: SkewElement) -> SkewElement:
        self._check(x)
        return SkewElement(
            self.w.inv(x.g1),
            x.w1.inverse(),
            self.w.inv(x.g2),
            x.w1 * x.w2.inverse() * x.w1.inverse(),
            self.w.name,
        )

    def commutator(self, x: SkewElement, y: SkewElement) -> SkewElement:
        """(x y)(x^-1 y^-1)."""
        return self.mul(self.mul(x, y), self.mul(self.inverse(x), self.inverse(y)))

    def invariant(self, x: SkewElement) -> Tuple[int, int, int, int]:
        """
        Homomorphism to W_ab x Z^3:
        ([g1][g2]^-1, sigma_a(w1) - sigma_b(w2), sigma_b(w1), sigma_a(w2)).

        Both sides of g1 g2 a (x) g2 b ~ g1 (x) e have the same image, so
        different images prove different classes.
        """
        count, classes = self._ab
        w = self.w
        g_class = classes[w.mul(x.g1, w.inv(x.g2))]
        return (
            g_class,
            x.w1.exponent_sum("a") - x.w2.exponent_sum("b"),
            x.w1.exponent_sum("b"),
            x.w2.exponent_sum("a"),
        )

    def relators(self) -> List[SkewElement]:
        """(g1 g2 a (x) g2 b)(g1 (x) e)^-1 for all g1, g2, and their inverses."""
        out = []
        for g1 in range(len(self.w)):
            for g2 in range(len(self.w)):
                lhs = SkewElement(self.w.mul(g1, g2), A_GEN, g2, B_GEN, self.w.name)
                rhs = SkewElement(g1, E_B, self.w.unit, E_B, self.w.name)
                rel = self.mul(lhs, self.inverse(rhs))
                out.append(rel)
                out.append(self.inverse(rel))
        return out

    def rewrite_steps(self, x: SkewElement, relators: Sequence[SkewElement]) -> Iterable[SkewElement]:
        """Direct applications of the relation in both orientations, then relator multiples."""
        w = self.w
        if x.w1 == A_GEN and x.w2 == B_GEN:
            yield SkewElement(w.mul(x.g1, w.inv(x.g2)), E_B, w.unit, E_B, w.name)
        if x.w1.is_identity and x.w2.is_identity and x.g2 == w.unit:
            for g2 in range(len(w)):
                yield SkewElement(w.mul(x.g1, g2), A_GEN, g2, B_GEN, w.name)
        for rel in relators:
            yield self.mul(x, rel)
            yield self.mul(rel, x)

    def equiv(self, x: SkewElement, y: SkewElement, budget: int = DEFAULT_REWRITE_BUDGET) -> str:
        """
        ``"equivalent"`` when a rewrite path joins x and y within ``budget``
        node expansions, ``"distinct"`` when the invariant separates them,
        ``"unknown"`` otherwise.
        """
        self._check(x, y)
        if self.invariant(x) != self.invariant(y):
            return "distinct"
        if x == y:
            return "equivalent"
        relators = self.relators()
        seen = [{x: None}, {y: None}]
        queues = [deque([x]), deque([y])]
        expanded = 0
        while expanded < budget and (queues[0] or queues[1]):
            side = 0 if queues[0] and (not queues[1] or len(queues[0]) <= len(queues[1])) else 1
            node = queues[side].popleft()
            expanded += 1
            for nxt in self.rewrite_steps(node, relators):
                if nxt in seen[1 - side]:
                    log.info("Rewrite path found after %d expansions", expanded)
                    return "equivalent"
                if nxt not in seen[side]:
                    seen[side][nxt] = node
                    queues[side].append(nxt)
            if expanded % 1000 == 0:
                log.debug("Rewrite search: %d expanded, frontiers %d/%d", expanded, len(queues[0]), len(queues[1]))
        return "unknown"


def skew_mul(x: SkewElement, y: SkewElement, w: FiniteMagma) -> SkewElement:
    return SkewProduct(w).mul(x, y)


def skew_inverse(x: SkewElement, w: FiniteMagma) -> SkewElement:
    return SkewProduct(w).inverse(x)


def skew_commutator(x: SkewElement, y: SkewElement, w: FiniteMagma) -> SkewElement:
    return SkewProduct(w).commutator(x, y)


def skew_invariant(x: SkewElement, w: FiniteMagma) -> Tuple[int, int, int, int]:
    return SkewProduct(w).invariant(x)


def skew_equiv(x: SkewElement, y: SkewElement, w: FiniteMagma, budget: int = DEFAULT_REWRITE_BUDGET) -> str:
    return SkewProduct(w).equiv(x, y, budget)


def quotient_group_on_trivial_words(w: FiniteMagma) -> FiniteMagma:
    """W x W with (g1, g2)(g3, g4) = (g1 g3, g4 g2)."""
    if not w.is_group_like:
        raise MonoidLawError(f"{w.name} is not a group", witness=None)
    n = len(w)
    names = [f"({a},{b})" for a in w.elements for b in w.elements]

    def op(x, y):
        g1, g2 = divmod(x, n)
        g3, g4 = divmod(y, n)
        return w.mul(g1, g3) * n + w.mul(g4, g2)

    return _from_function(names, op, f"{w.name} skew {w.name}")


def theta(w: FiniteMagma, g: int) -> int:
    """Index of (g, e) in ``quotient_group_on_trivial_words(w)``."""
    return g * len(w) + w.unit
