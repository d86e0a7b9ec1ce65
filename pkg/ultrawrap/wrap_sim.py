"""
Finite desk model of wrap monoids and groups.

The domain is the leaf set of a depth-d p-ary ball tree with marked leaves.
Maps into a finite pointed set N = (y0, y1, ...) are flat: every leaf within
tree distance ``radius`` of a marked leaf goes to y0. Composition wedges two
maps and pulls the wedge back along a fixed leaf bijection kappa into the
tree of depth d + 1.

Reparametrization classes are modelled by one of two stand-ins:

* ``"tree"`` (default): orbits of tree automorphisms fixing the marked
  leaves, compared on canonical forms. Lifting moves values between root
  subtrees that no automorphism can exchange, so the audit reports the unit
  law as failing and no wrap group is built from these classes.
* ``"ball"``: permutations of the non-flat leaves together with
  depth-lifting. The class of a map is the count of each non-base value.
  Coarser than the automorphism orbits; selected explicitly for comparison.

Parallel transport is modelled on the trivial bundle N x G by group labels on
tree edges; the value at a leaf is the ordered product of labels along its
root path.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ultrawrap.exceptions import CapExceeded, DomainError, MonoidLawError, ParameterMismatch
from ultrawrap.group_constructions import (
    FiniteMagma,
    GrothendieckGroup,
    FormalDifference,
    PresentedMonoid,
    audit_axioms,
    grothendieck,
)
from ultrawrap.group_constructions import from_document as magma_from_document
from ultrawrap.group_constructions import to_document as magma_to_document

log = logging.getLogger(__name__)

AUTOMORPHISM_CAP = 100_000

_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"

STAND_INS = ("ball", "tree")


@dataclass(frozen=True)
class WrapSettings:
    radius: int = 1
    kappa: Tuple[int, int] = (0, 1)
    stand_in: str = "tree"

    def __post_init__(self):
        if self.stand_in not in STAND_INS:
            raise DomainError(f"Unknown stand-in {self.stand_in!r}; use one of {STAND_INS}")
        if self.kappa[0] == self.kappa[1]:
            raise DomainError("kappa must send the two copies to different subtrees")
        if self.radius < 0:
            raise DomainError("Flatness radius must be non-negative")


@dataclass(frozen=True)
class BallGrid:
    """
    Leaves of the depth-d p-ary tree, addressed by base-p strings.

    In the hat model there are 2k marked leaves and the pairing sends
    marked[q] and marked[q + k] to the same point s_{0,q}.
    The marked set may be empty, in which case every tree automorphism is
    allowed.
    """
    p: int
    depth: int
    marked: Tuple[str, ...]
    hat: bool = False

    def __post_init__(self):
        if self.p < 2 or self.p > len(_DIGITS):
            raise DomainError(f"Branching p={self.p} is out of range")
        if len(set(self.marked)) != len(self.marked):
            raise DomainError("Marked leaves must be distinct")
        if self.hat and len(self.marked) % 2:
            raise DomainError("The hat model marks leaves in pairs")
        if self.p ** self.depth <= len(self.marked):
            raise DomainError(f"p^d = {self.p ** self.depth} leaves cannot hold {len(self.marked)} marked leaves")
        for s in self.marked:
            if len(s) != self.depth or any(c not in _DIGITS[: self.p] for c in s):
                raise DomainError(f"{s!r} is not a leaf address of depth {self.depth}")

    @classmethod
    def build(cls, p: int, depth: int, k: int = 1) -> "BallGrid":
        return cls(p, depth, _spread(p, depth, k))

    @classmethod
    def hat_grid(cls, p: int, depth: int, k: int = 1) -> "BallGrid":
        return cls(p, depth, _spread(p, depth, 2 * k), hat=True)

    @property
    def k(self) -> int:
        return len(self.marked) // 2 if self.hat else len(self.marked)

    def leaves(self) -> List[str]:
        return ["".join(t) for t in itertools.product(_DIGITS[: self.p], repeat=self.depth)]

    def leaf_index(self, address: str) -> int:
        n = 0
        for c in address:
            n = n * self.p + _DIGITS.index(c)
        return n

    def distance(self, u: str, v: str) -> int:
        """Tree distance: depth minus the length of the common prefix."""
        common = 0
        for a, b in zip(u, v):
            if a != b:
                break
            common += 1
        return self.depth - common

    def flat_neighborhood(self, radius: int) -> Tuple[int, ...]:
        return tuple(
            i for i, leaf in enumerate(self.leaves()) if any(self.distance(leaf, s) <= radius for s in self.marked)
        )

    def contains_marked(self, prefix: str) -> bool:
        return any(s.startswith(prefix) for s in self.marked)

    def lifted(self, kappa: Tuple[int, int] = (0, 1)) -> "BallGrid":
        return BallGrid(self.p, self.depth + 1, tuple(_DIGITS[kappa[0]] + s for s in self.marked), self.hat)


def _spread(p: int, depth: int, count: int) -> Tuple[str, ...]:
    total = p ** depth
    if count == 0:
        return ()
    if count >= total:
        raise DomainError(f"Cannot mark {count} of {total} leaves")
    stride = total // count
    return tuple(_address(j * stride, p, depth) for j in range(count))


def _address(n: int, p: int, depth: int) -> str:
    chars = []
    for _ in range(depth):
        n, d = divmod(n, p)
        chars.append(_DIGITS[d])
    return "".join(reversed(chars))


@dataclass(frozen=True)
class GridMap:
    """A flat map from the leaves of ``grid`` into ``target`` (target[0] is y0)."""
    grid: BallGrid
    target: Tuple[str, ...]
    values: Tuple[int, ...]
    radius: int = 1

    def __post_init__(self):
        if len(self.target) < 1:
            raise DomainError("The target needs a base point")
        if len(self.values) != self.grid.p ** self.grid.depth:
            raise DomainError(f"Expected {self.grid.p ** self.grid.depth} values, got {len(self.values)}")
        if any(not 0 <= v < len(self.target) for v in self.values):
            raise DomainError("Values must index the target set")
        for i in self.grid.flat_neighborhood(self.radius):
            if self.values[i] != 0:
                raise DomainError(f"Map is not flat at leaf {self.grid.leaves()[i]}")

    def value_at(self, address: str) -> str:
        return self.target[self.values[self.grid.leaf_index(address)]]

    def counts(self) -> Tuple[int, ...]:
        """Number of leaves sent to each non-base value."""
        return tuple(self.values.count(v) for v in range(1, len(self.target)))


def constant_map(grid: BallGrid, target: Sequence[str], radius: int = 1) -> GridMap:
    """w0: every leaf goes to y0."""
    return GridMap(grid, tuple(target), (0,) * grid.p ** grid.depth, radius)


def enumerate_flat_maps(grid: BallGrid, target: Sequence[str], radius: int = 1) -> List[GridMap]:
    """All flat maps, free leaves ranging over the target in product order."""
    target = tuple(target)
    flat = set(grid.flat_neighborhood(radius))
    free = [i for i in range(grid.p ** grid.depth) if i not in flat]
    out = []
    for choice in itertools.product(range(len(target)), repeat=len(free)):
        values = [0] * grid.p ** grid.depth
        for i, v in zip(free, choice):
            values[i] = v
        out.append(GridMap(grid, target, tuple(values), radius))
    return out


@dataclass(frozen=True)
class Swap:
    """Exchange the child subtrees ``prefix + a`` and ``prefix + b``."""
    prefix: str
    a: str
    b: str

    def apply(self, address: str) -> str:
        n = len(self.prefix)
        if len(address) > n and address.startswith(self.prefix):
            head = address[n]
            if head == self.a:
                return self.prefix + self.b + address[n + 1:]
            if head == self.b:
                return self.prefix + self.a + address[n + 1:]
        return address


@dataclass
class AutomorphismGroup:
    generators: List[Swap]
    elements: Optional[List[Tuple[int, ...]]] = None

    @property
    def order(self) -> Optional[int]:
        return None if self.elements is None else len(self.elements)


def _internal_nodes(grid: BallGrid) -> Iterable[str]:
    for level in range(grid.depth):
        for t in itertools.product(_DIGITS[: grid.p], repeat=level):
            yield "".join(t)


def automorphisms(grid: BallGrid, full: bool = True, cap: int = AUTOMORPHISM_CAP) -> AutomorphismGroup:
    """
    Tree automorphisms fixing every marked leaf.

    Generators swap adjacent free children of an internal node. With
    ``full=True`` the group is closed into leaf permutations.

    Raises
    ------
    CapExceeded
        When the full listing would exceed ``cap`` elements.
    """
    gens = []
    for node in _internal_nodes(grid):
        free = [c for c in _DIGITS[: grid.p] if not grid.contains_marked(node + c)]
        gens.extend(Swap(node, a, b) for a, b in zip(free, free[1:]))
    group = AutomorphismGroup(gens)
    if not full:
        return group
    leaves = grid.leaves()
    gen_perms = [tuple(grid.leaf_index(g.apply(leaf)) for leaf in leaves) for g in gens]
    identity = tuple(range(len(leaves)))
    seen = {identity}
    frontier = [identity]
    while frontier:
        perm = frontier.pop()
        for g in gen_perms:
            nxt = tuple(g[i] for i in perm)
            if nxt not in seen:
                seen.add(nxt)
                if len(seen) > cap:
                    raise CapExceeded(f"Automorphism group exceeds {cap} elements", size=len(seen), cap=cap)
                frontier.append(nxt)
    group.elements = sorted(seen)
    log.debug("Automorphism group of order %d from %d generators", len(seen), len(gens))
    return group


def permute(f: GridMap, perm: Sequence[int]) -> GridMap:
    """The map x -> f(perm^-1 x): leaf i carries value to perm[i]."""
    values = [0] * len(f.values)
    for i, j in enumerate(perm):
        values[j] = f.values[i]
    return GridMap(f.grid, f.target, tuple(values), f.radius)


def tree_canonical(f: GridMap) -> Tuple[int, ...]:
    """
    Lexicographic minimum of the values over the tree-automorphism orbit.

    Children containing a marked leaf keep their place; the canonical forms
    of the free children are sorted into the free positions.
    """
    grid = f.grid

    def canon(prefix: str) -> Tuple[int, ...]:
        if len(prefix) == grid.depth:
            return (f.values[grid.leaf_index(prefix)],)
        children = [prefix + c for c in _DIGITS[: grid.p]]
        forms = [canon(c) for c in children]
        free_slots = [i for i, c in enumerate(children) if not grid.contains_marked(c)]
        for slot, form in zip(free_slots, sorted(forms[i] for i in free_slots)):
            forms[slot] = form
        return tuple(v for form in forms for v in form)

    return canon("")


@dataclass(frozen=True)
class WrapClass:
    """
    A reparametrization class.

    ``key`` decides equality: value counts for the ball stand-in (depth
    independent), (depth, canonical values) for the tree stand-in.
    """
    key: Tuple
    representative: GridMap
    stand_in: str = "tree"
    certificate: Optional[Tuple[int, ...]] = None

    def __eq__(self, other):
        return isinstance(other, WrapClass) and self.stand_in == other.stand_in and self.key == other.key

    def __hash__(self):
        return hash((self.stand_in, self.key))


def canonicalize(f: GridMap, stand_in: str = "tree") -> WrapClass:
    if stand_in == "tree":
        values = tree_canonical(f)
        rep = GridMap(f.grid, f.target, values, f.radius)
        return WrapClass((f.grid.depth, f.grid.marked, values), rep, "tree")
    if stand_in != "ball":
        raise DomainError(f"Unknown stand-in {stand_in!r}")
    flat = set(f.grid.flat_neighborhood(f.radius))
    free = [i for i in range(len(f.values)) if i not in flat]
    order = sorted(free, key=lambda i: (f.values[i], i))
    perm = list(range(len(f.values)))
    for src, dst in zip(order, free):
        perm[src] = dst
    rep = permute(f, perm)
    return WrapClass(f.counts(), rep, "ball", tuple(perm))


@dataclass(frozen=True)
class Wedge:
    """Two maps on copies of the same grid, glued at their marked leaves."""
    first: GridMap
    second: GridMap

    @property
    def leaf_count(self) -> int:
        return len(self.first.values) + len(self.second.values)


def wedge(f: GridMap, g: GridMap) -> Wedge:
    if f.target != g.target:
        raise ParameterMismatch("Wedge needs a common target")
    if f.grid.p != g.grid.p or f.grid.depth != g.grid.depth or f.grid.k != g.grid.k:
        raise ParameterMismatch("Wedge needs copies of the same grid")
    return Wedge(f, g)


def chi_star(h: Wedge, kappa: Tuple[int, int] = (0, 1)) -> GridMap:
    """
    Pull the wedge back to the depth d + 1 tree.

    kappa = (c1, c2) sends leaf u of copy 1 to c1 u and of copy 2 to c2 u;
    the other root subtrees go to y0. Marked leaves of the result are the
    images of copy 1's marked leaves, or in the hat model the copy-1 starts
    followed by the copy-2 ends.
    """
    f, g = h.first, h.second
    grid = f.grid
    if max(kappa) >= grid.p or kappa[0] == kappa[1]:
        raise DomainError(f"kappa={kappa} does not fit p={grid.p}")
    c1, c2 = _DIGITS[kappa[0]], _DIGITS[kappa[1]]
    if grid.hat:
        k = grid.k
        marked = tuple(c1 + s for s in f.grid.marked[:k]) + tuple(c2 + s for s in g.grid.marked[k:])
    else:
        marked = tuple(c1 + s for s in f.grid.marked)
    out_grid = BallGrid(grid.p, grid.depth + 1, marked, grid.hat)
    values = [0] * grid.p ** (grid.depth + 1)
    block = grid.p ** grid.depth
    for i in range(block):
        values[kappa[0] * block + i] = f.values[i]
        values[kappa[1] * block + i] = g.values[i]
    return GridMap(out_grid, f.target, tuple(values), max(f.radius, g.radius))


def lift(f: GridMap, kappa: Tuple[int, int] = (0, 1)) -> GridMap:
    """chi_star(wedge(f, w0)): the same class one level deeper."""
    return chi_star(wedge(f, constant_map(f.grid, f.target, f.radius)), kappa)


def _align(f: GridMap, g: GridMap, kappa: Tuple[int, int]) -> Tuple[GridMap, GridMap]:
    while f.grid.depth < g.grid.depth:
        f = lift(f, kappa)
    while g.grid.depth < f.grid.depth:
        g = lift(g, kappa)
    if f.grid != g.grid:
        raise ParameterMismatch("Maps live on different grids")
    return f, g


def compose_maps(f: GridMap, g: GridMap, settings: WrapSettings = WrapSettings()) -> GridMap:
    """g o f := chi_star(g v f) on representatives, after lifting to a common depth."""
    f, g = _align(f, g, settings.kappa)
    return chi_star(wedge(f, g), settings.kappa)


def compose(f: GridMap, g: GridMap, settings: WrapSettings = WrapSettings()) -> WrapClass:
    return canonicalize(compose_maps(f, g, settings), settings.stand_in)


@dataclass(frozen=True)
class TransportMap:
    """
    Parallel transport on N x G over a hat-model map.

    ``labels`` maps node addresses (the edge from the parent into the node)
    to element indices of ``group``; missing edges carry the unit.
    """
    base: GridMap
    group: FiniteMagma = field(compare=False, hash=False)
    labels: Tuple[Tuple[str, int], ...] = ()

    def __post_init__(self):
        if not self.base.grid.hat:
            raise DomainError("Transport needs the hat model")
        if not self.group.is_group_like:
            raise DomainError(f"{self.group.name} is not a group")

    def label(self, node: str) -> int:
        return dict(self.labels).get(node, self.group.unit)

    def value_at(self, address: str) -> int:
        """Ordered product of edge labels along the root path."""
        out = self.group.unit
        for n in range(1, len(address) + 1):
            out = self.group.mul(out, self.label(address[:n]))
        return out

    def endpoints(self) -> Tuple[int, ...]:
        return tuple(self.value_at(s) for s in self.base.grid.marked)

    def translate(self, z: int, side: str = "left") -> "TransportMap":
        """
        Translate every endpoint value: z g (left) or g z (right).

        Left translation multiplies the root edges; right translation the
        edges into the marked leaves.
        """
        labels = dict(self.labels)
        if side == "left":
            for c in _DIGITS[: self.base.grid.p]:
                labels[c] = self.group.mul(z, labels.get(c, self.group.unit))
        elif side == "right":
            for s in self.base.grid.marked:
                labels[s] = self.group.mul(labels.get(s, self.group.unit), z)
        else:
            raise DomainError(f"Unknown side {side!r}")
        return TransportMap(self.base, self.group, tuple(sorted(labels.items())))

    def apply_swap(self, swap: Swap) -> "TransportMap":
        """Relabel along a tree automorphism; the base values move with the leaves."""
        grid = self.base.grid
        leaves = grid.leaves()
        perm = [grid.leaf_index(swap.apply(leaf)) for leaf in leaves]
        labels = tuple(sorted((swap.apply(node), g) for node, g in self.labels))
        return TransportMap(permute(self.base, perm), self.group, labels)


def holonomy(t: TransportMap) -> Tuple[int, ...]:
    """h_q = g_q^-1 g_{q+k} for q = 0..k-1."""
    g = t.endpoints()
    k = t.base.grid.k
    w = t.group
    return tuple(w.mul(w.inv(g[q]), g[q + k]) for q in range(k))


def enumerate_transports(base: GridMap, group: FiniteMagma) -> List[TransportMap]:
    """Labelings of the edges into the marked leaves; every other edge carries the unit."""
    marked = base.grid.marked
    out = []
    for choice in itertools.product(range(len(group)), repeat=len(marked)):
        labels = tuple(sorted((s, g) for s, g in zip(marked, choice) if g != group.unit))
        out.append(TransportMap(base, group, labels))
    return out


def compose_transports(t1: TransportMap, t2: TransportMap, kappa: Tuple[int, int] = (0, 1)) -> TransportMap:
    """
    Transport over chi_star(t1.base v t2.base) continuing t1 by t2.

    Copy 2 is translated on the left so that its q-th start value meets the
    q-th end value of copy 1; the translation is absorbed into the last edge
    of each end path. Holonomies then multiply: h = h(t1) h(t2).
    The shallower transport is lifted first, as for ``compose_maps``.
    """
    if t1.group is not t2.group and t1.group.elements != t2.group.elements:
        raise ParameterMismatch("Transports over different structure groups")
    while t1.base.grid.depth < t2.base.grid.depth:
        t1 = lift_transport(t1, kappa)
    while t2.base.grid.depth < t1.base.grid.depth:
        t2 = lift_transport(t2, kappa)
    return _compose_aligned(t1, t2, kappa)


def lift_transport(t: TransportMap, kappa: Tuple[int, int] = (0, 1)) -> TransportMap:
    """Continue ``t`` by the unit transport over w0: one level deeper, same holonomy."""
    unit = TransportMap(constant_map(t.base.grid, t.base.target, t.base.radius), t.group)
    return _compose_aligned(t, unit, kappa)


def _compose_aligned(t1: TransportMap, t2: TransportMap, kappa: Tuple[int, int]) -> TransportMap:
    w = t1.group
    if t1.base.grid.depth != t2.base.grid.depth:
        raise ParameterMismatch("Transports live on grids of different depth")
    base = chi_star(wedge(t1.base, t2.base), kappa)
    c1, c2 = _DIGITS[kappa[0]], _DIGITS[kappa[1]]
    labels = {c1 + node: g for node, g in t1.labels}
    labels.update({c2 + node: g for node, g in t2.labels})
    g1, g2 = t1.endpoints(), t2.endpoints()
    k = t1.base.grid.k
    out = TransportMap(base, w, tuple(sorted(labels.items())))
    for q in range(k):
        z = w.mul(g1[q + k], w.inv(g2[q]))
        end = c2 + t2.base.grid.marked[q + k]
        prefix = out.value_at(end[:-1])
        last = labels.get(end, w.unit)
        labels[end] = w.mul(w.mul(w.inv(prefix), w.mul(z, prefix)), last)
    return TransportMap(base, w, tuple(sorted(labels.items())))


def transport_key(t: TransportMap) -> Tuple:
    return (t.base.counts(), holonomy(t))


@dataclass
class WrapAuditReport:
    """Each law maps to (holds, first witness or None)."""
    laws: Dict[str, Tuple[bool, Optional[Tuple]]] = field(default_factory=dict)
    population: int = 0
    classes: int = 0

    def holds(self, law: str) -> bool:
        return self.laws[law][0]


def _check(report: WrapAuditReport, law: str, samples: Iterable, predicate) -> None:
    for sample in samples:
        if not predicate(*sample):
            report.laws[law] = (False, sample)
            return
    report.laws[law] = (True, None)


def audit_wrap_monoid(
    p: int = 2,
    depth: int = 2,
    k: int = 1,
    target: Sequence[str] = ("y0", "y1"),
    settings: WrapSettings = WrapSettings(),
    group: Optional[FiniteMagma] = None,
) -> WrapAuditReport:
    """
    Exhaustive law checks on the full flat-map population.

    Without ``group`` the population is every flat map on the plain grid and
    the laws are checked on classes under ``settings.stand_in``. With a
    structure group the population is every transport over the hat-model w0
    and classes are keyed by (value counts, holonomy).
    """
    report = WrapAuditReport()
    if group is not None:
        return _audit_transports(report, p, depth, k, target, settings, group)
    grid = BallGrid.build(p, depth, k)
    maps = enumerate_flat_maps(grid, target, settings.radius)
    report.population = len(maps)
    cls = {f: canonicalize(f, settings.stand_in) for f in maps}
    report.classes = len(set(cls.values()))
    w0 = constant_map(grid, target, settings.radius)

    def comp(f, g):
        return compose(f, g, settings)

    _check(report, "unit", ((f,) for f in maps), lambda f: comp(w0, f) == comp(f, w0) == canonicalize(lift(f, settings.kappa), settings.stand_in))
    _check(report, "commutativity", itertools.product(maps, repeat=2), lambda f, g: comp(f, g) == comp(g, f))
    _check(
        report,
        "cancellation",
        itertools.product(maps, repeat=3),
        lambda f, g, h: comp(f, g) != comp(h, g) or cls[f] == cls[h],
    )
    _check(
        report,
        "alternativity",
        itertools.product(maps, repeat=2),
        lambda f, g: canonicalize(compose_maps(compose_maps(f, f, settings), g, settings), settings.stand_in)
        == canonicalize(compose_maps(f, compose_maps(f, g, settings), settings), settings.stand_in),
    )
    mates = {f: _orbit_mates(f, settings.stand_in) for f in maps}
    _check(
        report,
        "well_defined",
        ((f, g, f2) for f, g in itertools.product(maps, repeat=2) for f2 in mates[f]),
        lambda f, g, f2: comp(f2, g) == comp(f, g),
    )
    other = WrapSettings(settings.radius, tuple(reversed(settings.kappa)), settings.stand_in)
    _check(
        report,
        "kappa_independence",
        itertools.product(maps, repeat=2),
        lambda f, g: compose(f, g, other) == comp(f, g),
    )
    log.info("Wrap audit (%s): %s", settings.stand_in, {law: v[0] for law, v in report.laws.items()})
    return report


def _orbit_mates(f: GridMap, stand_in: str) -> List[GridMap]:
    if stand_in == "tree":
        return [permute(f, perm) for perm in automorphisms(f.grid).elements]
    flat = set(f.grid.flat_neighborhood(f.radius))
    free = [i for i in range(len(f.values)) if i not in flat]
    out = []
    for image in itertools.permutations(free):
        perm = list(range(len(f.values)))
        for src, dst in zip(free, image):
            perm[src] = dst
        out.append(permute(f, perm))
    return out


def _audit_transports(report, p, depth, k, target, settings, group) -> WrapAuditReport:
    grid = BallGrid.hat_grid(p, depth, k)
    base = constant_map(grid, target, settings.radius)
    population = enumerate_transports(base, group)
    report.population = len(population)
    reps: Dict[Tuple, TransportMap] = {}
    for t in population:
        reps.setdefault(transport_key(t), t)
    report.classes = len(reps)

    def comp(s, t):
        return compose_transports(s, t, settings.kappa)

    def conjugate(z, hol):
        return tuple(group.mul(group.inv(z), group.mul(h, z)) for h in hol)

    pairs = list(itertools.product(population, repeat=2))
    _check(
        report,
        "holonomy_morphism",
        pairs,
        lambda s, t: holonomy(comp(s, t))
        == tuple(group.mul(a, b) for a, b in zip(holonomy(s), holonomy(t))),
    )
    _check(
        report,
        "commutativity",
        pairs,
        lambda s, t: transport_key(comp(s, t)) == transport_key(comp(t, s)),
    )
    _check(
        report,
        "associativity",
        itertools.product(list(reps.values()), repeat=3),
        lambda s, t, u: transport_key(comp(comp(s, t), u)) == transport_key(comp(s, comp(t, u))),
    )
    # right translation by z conjugates holonomy; trivial on abelian G
    _check(
        report,
        "equivariance",
        ((t, z) for t in population for z in range(len(group))),
        lambda t, z: holonomy(t.translate(z, "right")) == conjugate(z, holonomy(t)),
    )
    log.info("Transport audit over %s: %s", group.name, {law: v[0] for law, v in report.laws.items()})
    return report


@dataclass
class WrapGroupReport:
    kind: str
    order: int
    axioms: Dict[str, bool] = field(default_factory=dict)
    completion: Optional[GrothendieckGroup] = None
    image: Optional[FiniteMagma] = None


def wrap_group(
    p: int = 2,
    depth: int = 2,
    k: int = 1,
    target: Sequence[str] = ("y0", "y1"),
    group: Optional[FiniteMagma] = None,
    settings: WrapSettings = WrapSettings(),
) -> WrapGroupReport:
    """
    The desk wrap group of the generated sample.

    For a commutative structure group the class monoid (value counts with
    holonomy) is completed with ``grothendieck`` and the group laws are
    checked on the generated differences. For a non-commutative group the
    holonomy image in G^k is closed into a subgroup and audited instead.
    Transport classes do not depend on ``settings.stand_in``.

    Raises
    ------
    MonoidLawError
        Without a structure group, when the plain map classes under
        ``settings.stand_in`` fail the unit law; the witness is the
        offending map.
    """
    if group is None and settings.stand_in != "ball":
        report = audit_wrap_monoid(p, depth, k, target, settings)
        if not report.holds("unit"):
            raise MonoidLawError(
                f"The {settings.stand_in} stand-in breaks the unit law; use the ball stand-in",
                witness=report.laws["unit"][1],
            )
    if group is None:
        maps = enumerate_flat_maps(BallGrid.build(p, depth, k), target, settings.radius)
        keys = sorted({(f.counts(), ()) for f in maps})
        unit_hol: Tuple = ()
        group_mul = None
    else:
        base = constant_map(BallGrid.hat_grid(p, depth, k), target, settings.radius)
        transports = enumerate_transports(base, group)
        keys = sorted({transport_key(t) for t in transports})
        unit_hol = (group.unit,) * k
        group_mul = group.mul
    if group is not None and not group.is_commutative():
        return _holonomy_image(keys, group, k)

    def op(x, y):
        counts = tuple(a + b for a, b in zip(x[0], y[0]))
        hol = tuple(group_mul(a, b) for a, b in zip(x[1], y[1])) if group_mul else ()
        return counts, hol

    identity = ((0,) * (len(target) - 1), unit_hol)
    completion = grothendieck(PresentedMonoid(tuple(keys), op, identity, "wrap classes"))
    reps = completion.classes()
    diffs = [FormalDifference((a,), (b,)) for a, b in reps]
    zero = completion.zero()
    axioms = {
        "unit": all(completion.equal(completion.add(d, zero), d) for d in diffs),
        "inverse": all(completion.equal(completion.add(d, completion.neg(d)), zero) for d in diffs),
        "associativity": all(
            completion.equal(completion.add(completion.add(a, b), c), completion.add(a, completion.add(b, c)))
            for a, b, c in itertools.product(diffs, repeat=3)
        ),
        "commutativity": all(
            completion.equal(completion.add(a, b), completion.add(b, a)) for a, b in itertools.product(diffs, repeat=2)
        ),
        "eta_injective": all(
            not completion.equal(completion.eta(x), completion.eta(y)) for x, y in itertools.combinations(keys, 2)
        ),
    }
    return WrapGroupReport("grothendieck", len(reps), axioms, completion=completion)


def _holonomy_image(keys, group: FiniteMagma, k: int) -> WrapGroupReport:
    image = {h for _, h in keys}
    frontier = list(image)
    while frontier:
        x = frontier.pop()
        for y in list(image):
            for z in (tuple(group.mul(a, b) for a, b in zip(x, y)), tuple(group.mul(a, b) for a, b in zip(y, x))):
                if z not in image:
                    image.add(z)
                    frontier.append(z)
    elements = sorted(image)
    index = {h: i for i, h in enumerate(elements)}
    table = [[index[tuple(group.mul(a, b) for a, b in zip(x, y))] for y in elements] for x in elements]
    names = tuple("(" + ",".join(group.elements[g] for g in h) + ")" for h in elements)
    magma = FiniteMagma(names, table, name=f"holonomy image in {group.name}^{k}")
    report = audit_axioms(magma)
    return WrapGroupReport("holonomy-image", len(elements), dict(report.results), image=magma)


def to_document(f: GridMap) -> Dict:
    return {
        "grid": {"p": f.grid.p, "depth": f.grid.depth, "marked": list(f.grid.marked), "hat": f.grid.hat},
        "target": list(f.target),
        "values": list(f.values),
        "radius": f.radius,
    }


def from_document(doc: Dict) -> GridMap:
    g = doc["grid"]
    grid = BallGrid(g["p"], g["depth"], tuple(g["marked"]), g.get("hat", False))
    return GridMap(grid, tuple(doc["target"]), tuple(doc["values"]), doc.get("radius", 1))


def transport_to_document(t: TransportMap) -> Dict:
    return {
        "base": to_document(t.base),
        "group": magma_to_document(t.group),
        "labels": {node: t.group.elements[g] for node, g in t.labels},
    }


def transport_from_document(doc: Dict, group: Optional[FiniteMagma] = None) -> TransportMap:
    if group is None:
        group = magma_from_document(doc["group"])
    labels = tuple(sorted((node, group.index(name)) for node, name in doc.get("labels", {}).items()))
    return TransportMap(from_document(doc["base"]), group, labels)
