"""
Finitely supported c0 spaces over K and A_r, finite multilinear maps with
exact operator norms, and the K_q / K_r / K_l linearity classifier.

The index set gamma is a set of integers; finite support stands in for the
c0 condition. Norms are rationals |x| = p^-v(x), and an A_r entry has the
max of its coordinate norms.
"""
import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ultrawrap import cayley_dickson as cd
from ultrawrap import padic_field as pf
from ultrawrap.exceptions import DomainError, ParameterMismatch
from ultrawrap.padic_field import Field, UltraScalar

log = logging.getLogger(__name__)

Entry = Union[UltraScalar, cd.CDElement]


def entry_norm(x: Entry) -> Fraction:
    """|x| for a field element, |x|_r = max_k |x_k| for an algebra element."""
    if isinstance(x, cd.CDElement):
        return max((pf.norm(c) for c in x.coeffs), default=Fraction(0))
    return pf.norm(x)


def _is_zero(x: Entry) -> bool:
    return x.is_zero


@dataclass
class C0Vector:
    """Sparse vector gamma -> K (or A_r); zero entries are dropped."""
    field: Field
    entries: Dict[int, Entry] = field(default_factory=dict)
    params: Optional[cd.CDParams] = None

    def __post_init__(self):
        self.entries = {j: x for j, x in self.entries.items() if not _is_zero(x)}

    @classmethod
    def from_values(cls, field_: Field, values: Sequence, params: Optional[cd.CDParams] = None) -> "C0Vector":
        if params is None:
            entries = {j: pf.coerce_scalar(v, field_) for j, v in enumerate(values)}
        else:
            entries = {j: v if isinstance(v, cd.CDElement) else cd.from_scalar(params, v) for j, v in enumerate(values)}
        return cls(field_, entries, params)

    def support(self) -> List[int]:
        return sorted(self.entries)

    def __getitem__(self, j: int) -> Entry:
        if j in self.entries:
            return self.entries[j]
        if self.params is not None:
            return cd.from_scalar(self.params, 0)
        return self.field.zero()

    def add(self, other: "C0Vector") -> "C0Vector":
        if self.field != other.field:
            raise ParameterMismatch("Vectors over different fields")
        out = dict(self.entries)
        for j, x in other.entries.items():
            out[j] = out[j] + x if j in out else x
        return C0Vector(self.field, out, self.params or other.params)

    __add__ = add

    def scale(self, s) -> "C0Vector":
        """Multiply by a field scalar."""
        s = pf.coerce_scalar(s, self.field)
        out = {}
        for j, x in self.entries.items():
            out[j] = cd.cd_scale(x, s) if isinstance(x, cd.CDElement) else s * x
        return C0Vector(self.field, out, self.params)


def sup_norm(x: C0Vector) -> Fraction:
    return max((entry_norm(e) for e in x.entries.values()), default=Fraction(0))


@dataclass
class FiniteMap:
    """
    A K-multilinear map K^n x ... x K^n -> K^m stored as an object array of
    shape (m, n, ..., n) with ``arity`` input axes.

    When ``params`` is set the map acts on A_r^(n / 2^r): algebra vectors are
    flattened into their generator coordinates before the matrix is applied.
    """
    field: Field
    matrix: np.ndarray
    arity: int = 1
    params: Optional[cd.CDParams] = None

    def __post_init__(self):
        if self.matrix.ndim != self.arity + 1:
            raise DomainError(f"A map of arity {self.arity} needs a {self.arity + 1}-axis array")
        if self.params is not None:
            dim = self.params.dimension
            if self.matrix.shape[0] % dim or any(s % dim for s in self.matrix.shape[1:]):
                raise DomainError("Matrix shape is not a multiple of the algebra dimension")

    @classmethod
    def build(cls, field_: Field, rows: Sequence, params: Optional[cd.CDParams] = None) -> "FiniteMap":
        """Build from nested lists of ints, Fractions or literals."""
        array = np.array(rows, dtype=object)
        coerced = np.empty(array.shape, dtype=object)
        for index in np.ndindex(array.shape):
            coerced[index] = pf.coerce_scalar(array[index], field_)
        return cls(field_, coerced, arity=array.ndim - 1, params=params)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.matrix.shape

    def _flatten(self, h) -> List[UltraScalar]:
        if isinstance(h, C0Vector):
            n = self.matrix.shape[1] // (self.params.dimension if self.params else 1)
            h = [h[j] for j in range(n)]
        out = []
        for x in h:
            if isinstance(x, cd.CDElement):
                out.extend(x.coeffs)
            else:
                out.append(pf.coerce_scalar(x, self.field))
        return out

    def _unflatten(self, coords: List[UltraScalar]) -> List[Entry]:
        if self.params is None:
            return coords
        dim = self.params.dimension
        return [cd.CDElement(self.params, tuple(coords[i:i + dim])) for i in range(0, len(coords), dim)]

    def apply(self, *hs) -> List[Entry]:
        """A.(h_1, ..., h_n)."""
        if len(hs) != self.arity:
            raise DomainError(f"Map of arity {self.arity} applied to {len(hs)} arguments")
        flat = [self._flatten(h) for h in hs]
        for h in flat:
            if len(h) != self.matrix.shape[1]:
                raise DomainError(f"Argument has {len(h)} coordinates, expected {self.matrix.shape[1]}")
        out = []
        for i in range(self.matrix.shape[0]):
            total = self.field.zero()
            for index in itertools.product(range(self.matrix.shape[1]), repeat=self.arity):
                a = self.matrix[(i,) + index]
                if a.is_zero:
                    continue
                term = a
                for h, j in zip(flat, index):
                    term = term * h[j]
                total = total + term
            out.append(total)
        return self._unflatten(out)

    __call__ = apply

    def as_k_matrix(self) -> np.ndarray:
        return self.matrix


def operator_norm(a: FiniteMap) -> Fraction:
    """
    Exact operator norm max |a_{i,j...}| over entries.

    Every quotient ||A.(h)|| / prod ||h_i|| is bounded by the max entry by the
    ultrametric inequality, and unit basis vectors attain it.
    """
    return max((pf.norm(x) for x in a.matrix.flat), default=Fraction(0))


def _random_unit_scalar(field_: Field, rng: random.Random) -> UltraScalar:
    return field_.random_element(rng, (0, 3), zero_probability=0.2)


def sampled_operator_norm(a: FiniteMap, samples: int = 1000, seed: int = 0) -> Fraction:
    """Largest quotient over random arguments; a lower bound for operator_norm."""
    rng = random.Random(seed)
    best = Fraction(0)
    n = a.matrix.shape[1]
    for _ in range(samples):
        hs = [[_random_unit_scalar(a.field, rng) for _ in range(n)] for _ in range(a.arity)]
        norms = [max((pf.norm(x) for x in h), default=Fraction(0)) for h in hs]
        if any(nm == 0 for nm in norms):
            continue
        k_map = FiniteMap(a.field, a.matrix, a.arity)
        value = max((pf.norm(x) for x in k_map.apply(*hs)), default=Fraction(0))
        denom = Fraction(1)
        for nm in norms:
            denom *= nm
        best = max(best, value / denom)
    log.debug("Sampled operator norm %s over %d samples", best, samples)
    return best


def compose(a: FiniteMap, b: FiniteMap) -> FiniteMap:
    """a o b for linear maps."""
    if a.arity != 1 or b.arity != 1:
        raise DomainError("Composition is defined for linear maps")
    if a.matrix.shape[1] != b.matrix.shape[0]:
        raise DomainError("Inner dimensions do not match")
    m, n = a.matrix.shape[0], b.matrix.shape[1]
    out = np.empty((m, n), dtype=object)
    for i in range(m):
        for j in range(n):
            total = a.field.zero()
            for k in range(a.matrix.shape[1]):
                total = total + a.matrix[i, k] * b.matrix[k, j]
            out[i, j] = total
    return FiniteMap(a.field, out, 1, a.params or b.params)


def identity_map(field_: Field, n: int, params: Optional[cd.CDParams] = None) -> FiniteMap:
    size = n * (params.dimension if params else 1)
    out = np.empty((size, size), dtype=object)
    for i in range(size):
        for j in range(size):
            out[i, j] = field_.one() if i == j else field_.zero()
    return FiniteMap(field_, out, 1, params)


def _map_from_action(params: cd.CDParams, action) -> FiniteMap:
    dim = params.dimension
    out = np.empty((dim, dim), dtype=object)
    for k in range(dim):
        column = action(cd.generator(params, k))
        for i in range(dim):
            out[i, k] = column.coeffs[i]
    return FiniteMap(params.field, out, 1, params)


def left_multiplication(a: cd.CDElement) -> FiniteMap:
    """L_a(x) = a x on A_r as a K-matrix."""
    return _map_from_action(a.params, lambda x: cd.cd_mul(a, x))


def right_multiplication(c: cd.CDElement) -> FiniteMap:
    """R_c(x) = x c on A_r as a K-matrix."""
    return _map_from_action(c.params, lambda x: cd.cd_mul(x, c))


@dataclass(frozen=True)
class LinearityClass:
    classes: Tuple[str, ...]
    witnesses: Dict[str, Tuple[int, int, int]] = field(default_factory=dict, hash=False, compare=False)

    def __contains__(self, name: str) -> bool:
        return name in self.classes


def _basis_vectors(params: cd.CDParams, m: int, distinguished: bool) -> Iterable[Tuple[int, int, List[cd.CDElement]]]:
    zero = cd.from_scalar(params, 0)
    gens = [0] if distinguished else range(params.dimension)
    for slot in range(m):
        for g in gens:
            vec = [zero] * m
            vec[slot] = cd.generator(params, g)
            yield slot, g, vec


def linearity_class(a: FiniteMap, domain: str = "full") -> LinearityClass:
    """
    Decide membership of an A_r-additive K-linear map in K_q, K_r and K_l.

    Right linearity A(x b) = (A x) b and left linearity A(b x) = b (A x) are
    K-bilinear in (x, b), so checking generator pairs decides them. With
    ``domain="full"`` x ranges over every generator slot; with
    ``domain="distinguished"`` only over the u_0 coordinates.

    Returns
    -------
    LinearityClass
        Member classes, plus (slot, x generator, b generator) witnesses for
        the failed ones.
    """
    if a.params is None or a.arity != 1:
        raise DomainError("Linearity classes apply to linear maps between A_r modules")
    if domain not in ("full", "distinguished"):
        raise DomainError(f"Unknown domain {domain!r}")
    params = a.params
    m = a.matrix.shape[1] // params.dimension
    classes = ["K_q"]
    witnesses: Dict[str, Tuple[int, int, int]] = {}
    for name, side in (("K_r", "right"), ("K_l", "left")):
        failed = None
        for slot, g, vec in _basis_vectors(params, m, domain == "distinguished"):
            image = a.apply(vec)
            for k in range(params.dimension):
                b = cd.generator(params, k)
                if side == "right":
                    lhs = a.apply([cd.cd_mul(x, b) for x in vec])
                    rhs = [cd.cd_mul(y, b) for y in image]
                else:
                    lhs = a.apply([cd.cd_mul(b, x) for x in vec])
                    rhs = [cd.cd_mul(b, y) for y in image]
                if not all(u == v for u, v in zip(lhs, rhs)):
                    failed = (slot, g, k)
                    break
            if failed:
                break
        if failed is None:
            classes.append(name)
        else:
            witnesses[name] = failed
    return LinearityClass(tuple(classes), witnesses)


@dataclass
class ModuleAxiomsReport:
    """Each law maps to (holds, first failing sample or None)."""
    laws: Dict[str, Tuple[bool, Optional[Tuple]]] = field(default_factory=dict)

    def holds(self, law: str) -> bool:
        return self.laws[law][0]


def _act_left(a: cd.CDElement, x: Sequence[cd.CDElement]) -> List[cd.CDElement]:
    return [cd.cd_mul(a, xi) for xi in x]


def _act_right(x: Sequence[cd.CDElement], a: cd.CDElement) -> List[cd.CDElement]:
    return [cd.cd_mul(xi, a) for xi in x]


def _vec_add(x, y):
    return [cd.cd_add(a, b) for a, b in zip(x, y)]


def _vec_eq(x, y) -> bool:
    return all(a == b for a, b in zip(x, y))


def module_axioms_check(
    vectors: Sequence[Sequence[cd.CDElement]],
    scalars: Sequence[cd.CDElement],
) -> ModuleAxiomsReport:
    """
    Check L1-L4 for A_r^m with the two-sided coordinatewise action.

    L4 is checked on the distinguished component (vectors with K entries);
    the unrestricted associativity (ab)x = a(bx) is reported as
    ``"associative_action"`` and commutation ax = xa as ``"commuting_action"``.
    """
    report = ModuleAxiomsReport()
    if not vectors or not scalars:
        raise DomainError("Need sample vectors and scalars")
    params = scalars[0].params

    def record(law, fn, samples):
        for sample in samples:
            if not fn(*sample):
                report.laws[law] = (False, sample)
                return
        report.laws[law] = (True, None)

    pairs_xy = list(itertools.product(vectors, repeat=2))
    pairs_ab = list(itertools.product(scalars, repeat=2))
    record("L1", lambda x, y: _vec_eq(_vec_add(x, y), _vec_add(y, x)), pairs_xy)
    record(
        "L2",
        lambda a, x, y: _vec_eq(_act_left(a, _vec_add(x, y)), _vec_add(_act_left(a, x), _act_left(a, y)))
        and _vec_eq(_act_right(_vec_add(x, y), a), _vec_add(_act_right(x, a), _act_right(y, a))),
        [(a, x, y) for a in scalars for x, y in pairs_xy],
    )
    record(
        "L3",
        lambda a, b, x: _vec_eq(_act_left(cd.cd_add(a, b), x), _vec_add(_act_left(a, x), _act_left(b, x)))
        and _vec_eq(_act_right(x, cd.cd_add(a, b)), _vec_add(_act_right(x, a), _act_right(x, b))),
        [(a, b, x) for a, b in pairs_ab for x in vectors],
    )
    distinguished = [[cd.from_scalar(params, xi.coeffs[0]) for xi in x] for x in vectors]
    record(
        "L4",
        lambda a, b, x: _vec_eq(_act_left(cd.cd_mul(a, b), x), _act_left(a, _act_left(b, x)))
        and _vec_eq(_act_right(x, cd.cd_mul(a, b)), _act_right(_act_right(x, a), b)),
        [(a, b, x) for a, b in pairs_ab for x in distinguished],
    )
    record(
        "unit",
        lambda x: _vec_eq(_act_left(cd.from_scalar(params, 1), x), x),
        [(x,) for x in vectors],
    )
    record(
        "associative_action",
        lambda a, b, x: _vec_eq(_act_left(cd.cd_mul(a, b), x), _act_left(a, _act_left(b, x))),
        [(a, b, x) for a, b in pairs_ab for x in vectors],
    )
    record(
        "commuting_action",
        lambda a, x: _vec_eq(_act_left(a, x), _act_right(x, a)),
        [(a, x) for a in scalars for x in vectors],
    )
    log.info("Module axioms: %s", {k: v[0] for k, v in report.laws.items()})
    return report


def to_document(a: FiniteMap) -> Dict:
    doc = {
        "field": {"kind": a.field.kind, "p": a.field.p, "precision": a.field.precision},
        "arity": a.arity,
        "matrix": np.vectorize(pf.format_literal, otypes=[object])(a.matrix).tolist(),
    }
    if a.params is not None:
        doc["q"] = [pf.format_literal(q) for q in a.params.q]
    return doc


def from_document(doc: Dict) -> FiniteMap:
    spec = doc["field"]
    field_ = Field(spec["kind"], spec["p"], spec.get("precision", pf.DEFAULT_PRECISION))
    params = None
    if "q" in doc:
        params = cd.CDParams(field_, tuple(pf.coerce_scalar(q, field_) for q in doc["q"]))
    return FiniteMap.build(field_, doc["matrix"], params)
