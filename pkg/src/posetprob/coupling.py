"""Couplings with prescribed marginals on monotone maps.

``realize`` decides, by an exact phase-one LP over the monotone elements,
whether a system of measures admits a joint law supported on order-preserving
maps; it returns either the coupling or a strictly violated functional family
(a Farkas witness, re-verified before it is emitted).  ``strassen_pair``
solves the two-marginal case by integer max-flow, and three constructive
couplers cover acyclic index posets, path-shaped targets, and index posets
that enlarge to acyclic ones.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Optional, Sequence

from .measure import (
    Measure,
    MeasureSystem,
    ZERO,
    insert_middle,
    is_stochastically_monotone,
)
from .poset import CapExceeded, OrderError, Poset
from .simplex import FeasibleResult, InfeasibleResult, solve_feasibility
from .structure import (
    NotAcyclic,
    NotEnlargeable,
    _bipartite_blocks,
    _reachable_inside,
    check_enlargeable,
    classify,
)

DEFAULT_CANDIDATE_CAP = 10_000_000

__all__ = [
    "DEFAULT_CANDIDATE_CAP",
    "UpwardKernel",
    "MonotoneSet",
    "Coupling",
    "InfeasibilityCertificate",
    "RealizabilityResult",
    "NotDominated",
    "NotStochasticallyMonotone",
    "NotClassZ",
    "TargetInClassB",
    "DegenerateSystem",
    "strassen_pair",
    "pair_coupling",
    "monotone_elements",
    "certificate_value",
    "realize",
    "realize_acyclic",
    "realize_class_z",
    "realize_enlargeable",
]


class NotDominated(OrderError):
    def __init__(self, up_set: frozenset[str]):
        super().__init__(f"dominance fails on the up-set {sorted(up_set)}")
        self.up_set = up_set


class NotStochasticallyMonotone(OrderError):
    pass


class NotClassZ(OrderError):
    pass


class TargetInClassB(OrderError):
    pass


class DegenerateSystem(OrderError):
    pass


# -- pairwise transport ----------------------------------------------------


def _max_flow(n: int, cap: list[list[int]], source: int, sink: int) -> tuple[int, set[int]]:
    """Edmonds-Karp; returns (flow value, residual source side). ``cap`` is
    mutated into the residual capacities."""
    total = 0
    while True:
        parent = [-1] * n
        parent[source] = source
        queue = [source]
        while queue and parent[sink] < 0:
            v = queue.pop(0)
            for w in range(n):
                if parent[w] < 0 and cap[v][w] > 0:
                    parent[w] = v
                    queue.append(w)
        if parent[sink] < 0:
            reach = {i for i in range(n) if parent[i] >= 0}
            return total, reach
        bottleneck = None
        w = sink
        while w != source:
            v = parent[w]
            bottleneck = cap[v][w] if bottleneck is None else min(bottleneck, cap[v][w])
            w = v
        w = sink
        while w != source:
            v = parent[w]
            cap[v][w] -= bottleneck
            cap[w][v] += bottleneck
            w = v
        total += bottleneck


def _transport(p1: Measure, p2: Measure):
    """Integer-scaled transport of p1 onto p2 along <=.

    Returns ("ok", joint) with joint[(x, y)] exact, or ("cut", up_set) with a
    violating up-set read off the min cut.
    """
    if p1.base != p2.base:
        raise OrderError("transport needs a common base poset")
    base = p1.base
    els = base.elements
    n = len(els)
    denoms = [v.denominator for v in p1.mass.values()] + [v.denominator for v in p2.mass.values()]
    scale = math.lcm(*denoms) if denoms else 1
    supply = [int(p1.at(e) * scale) for e in els]
    demand = [int(p2.at(e) * scale) for e in els]

    size = 2 * n + 2
    source, sink = 0, 2 * n + 1
    cap = [[0] * size for _ in range(size)]
    for i in range(n):
        cap[source][1 + i] = supply[i]
        cap[1 + n + i][sink] = demand[i]
    for i in range(n):
        for j in range(n):
            if base.leq(els[i], els[j]):
                cap[1 + i][1 + n + j] = scale  # effectively unbounded
    residual = [row[:] for row in cap]
    value, reach = _max_flow(size, residual, source, sink)
    if value < scale:
        left = [els[i] for i in range(n) if (1 + i) in reach]
        return "cut", base.up_set_generated(left)
    joint = {}
    for i in range(n):
        for j in range(n):
            if cap[1 + i][1 + n + j]:
                sent = cap[1 + i][1 + n + j] - residual[1 + i][1 + n + j]
                if sent > 0:
                    joint[(els[i], els[j])] = Fraction(sent, scale)
    return "ok", joint


@dataclass(frozen=True)
class UpwardKernel:
    """Stochastic kernel whose row at x is supported on {xi : x <= xi}."""

    base: Poset
    rows: Mapping[str, Mapping[str, Fraction]]

    def row(self, x: str) -> Mapping[str, Fraction]:
        return self.rows[x]

    def apply(self, p: Measure) -> Measure:
        acc: dict[str, Fraction] = {}
        for x, v in p.mass.items():
            for y, k in self.rows[x].items():
                acc[y] = acc.get(y, ZERO) + v * k
        return Measure(self.base, acc)


def pair_coupling(p1: Measure, p2: Measure) -> dict[tuple[str, str], Fraction]:
    """Joint law with marginals (p1, p2) supported on {(x, y): x <= y}."""
    kind, payload = _transport(p1, p2)
    if kind == "cut":
        raise NotDominated(payload)
    return payload


def strassen_pair(p1: Measure, p2: Measure) -> UpwardKernel:
    """Upward kernel carrying p1 onto p2; fails with a violating up-set."""
    joint = pair_coupling(p1, p2)
    rows: dict[str, dict[str, Fraction]] = {}
    for (x, y), v in sorted(joint.items()):
        rows.setdefault(x, {})[y] = v / p1.at(x)
    for e in p1.base.elements:
        if p1.at(e) == 0:
            rows[e] = {e: Fraction(1)}
    kernel = UpwardKernel(p1.base, rows)
    assert kernel.apply(p1) == p2, "kernel does not carry p1 onto p2"
    return kernel


# -- monotone elements ------------------------------------------------------


@dataclass(frozen=True)
class MonotoneSet:
    """Order-preserving maps from the index poset into the target poset.

    ``elements`` holds value tuples aligned with ``index.elements``;
    ``complete`` records whether the list is the whole collection.
    """

    index: Poset
    target: Poset
    elements: tuple[tuple[str, ...], ...]
    complete: bool

    def __post_init__(self):
        object.__setattr__(self, "_pos", {v: i for i, v in enumerate(self.elements)})

    def __len__(self) -> int:
        return len(self.elements)

    def position(self, values: tuple[str, ...]) -> int:
        return self._pos[values]

    def as_map(self, i: int) -> dict[str, str]:
        return dict(zip(self.index.elements, self.elements[i]))


def _monotone_products(index: Poset, target: Poset, choices: Sequence[Sequence[str]], cap: int):
    """Monotone value tuples from the per-coordinate candidate sets."""
    count = 1
    for c in choices:
        count *= len(c)
        if count > cap:
            raise CapExceeded(
                f"{count}+ candidate maps exceed the enumeration cap of {cap}"
            )
    cover_idx = [
        (index.index_of(x), index.index_of(y)) for x, y in index.covers()
    ]
    tleq = target._up
    tidx = target._index
    out = []
    for values in itertools.product(*choices):
        vi = [tidx[v] for v in values]
        if all((tleq[vi[i]] >> vi[j]) & 1 for i, j in cover_idx):
            out.append(tuple(values))
    return out


@lru_cache(maxsize=None)
def monotone_elements(index: Poset, target: Poset, cap: int = DEFAULT_CANDIDATE_CAP) -> MonotoneSet:
    """The complete collection of monotone maps, lexicographic order."""
    choices = [target.elements] * len(index)
    elements = _monotone_products(index, target, choices, cap)
    return MonotoneSet(index, target, tuple(elements), complete=True)


# -- realizability -----------------------------------------------------------


@dataclass(frozen=True)
class Coupling:
    """Joint mass on monotone maps; masses sum to one."""

    domain: MonotoneSet
    mass: Mapping[int, Fraction]

    def __post_init__(self):
        total = ZERO
        clean = {}
        for i, v in sorted(self.mass.items()):
            v = Fraction(v)
            if v < 0:
                raise OrderError("coupling mass must be nonnegative")
            if v:
                if not 0 <= i < len(self.domain.elements):
                    raise OrderError(f"coupling names an unknown support point {i}")
                clean[i] = v
                total += v
        if total != 1:
            raise OrderError(f"coupling masses sum to {total}, expected 1")
        object.__setattr__(self, "mass", clean)

    def points(self):
        for i, v in self.mass.items():
            yield self.domain.elements[i], v

    def marginal(self, alpha: str) -> Measure:
        k = self.domain.index.index_of(alpha)
        acc: dict[str, Fraction] = {}
        for values, v in self.points():
            acc[values[k]] = acc.get(values[k], ZERO) + v
        return Measure(self.domain.target, acc)

    def has_marginals(self, sys: MeasureSystem) -> bool:
        return all(self.marginal(a) == sys.assignment[a] for a in sys.index.elements)


@dataclass(frozen=True)
class InfeasibilityCertificate:
    """A functional family strictly violating the extensibility inequality."""

    index: Poset
    target: Poset
    functionals: Mapping[str, Mapping[str, Fraction]]
    lhs: Fraction
    sup: Fraction

    def is_strict(self) -> bool:
        return self.lhs > self.sup


@dataclass(frozen=True)
class RealizabilityResult:
    coupling: Optional[Coupling] = None
    certificate: Optional[InfeasibilityCertificate] = None

    def __post_init__(self):
        if (self.coupling is None) == (self.certificate is None):
            raise OrderError("exactly one of coupling/certificate must be present")

    @property
    def feasible(self) -> bool:
        return self.coupling is not None


def certificate_value(
    sys: MeasureSystem,
    functionals: Mapping[str, Mapping[str, Fraction]],
    delta: MonotoneSet,
) -> tuple[Fraction, Fraction]:
    """(sum of expectations, max over the monotone maps) for a functional family."""
    lhs = ZERO
    for a in sys.index.elements:
        f = functionals.get(a, {})
        for s, v in sys.assignment[a].mass.items():
            lhs += v * Fraction(f.get(s, ZERO))
    best: Optional[Fraction] = None
    fs = [functionals.get(a, {}) for a in sys.index.elements]
    for values in delta.elements:
        total = sum((Fraction(fs[k].get(values[k], ZERO)) for k in range(len(values))), ZERO)
        if best is None or total > best:
            best = total
    if best is None:
        raise OrderError("certificate value needs a nonempty monotone set")
    return lhs, best


def _coupling_from_point_masses(
    sys: MeasureSystem,
    points: Mapping[tuple[str, ...], Fraction],
    cap: int,
) -> Coupling:
    delta = monotone_elements(sys.index, sys.target, cap)
    mass = {}
    for values, v in points.items():
        try:
            mass[delta.position(values)] = v
        except KeyError:
            raise AssertionError(f"coupling support point {values} is not monotone") from None
    coupling = Coupling(delta, mass)
    assert coupling.has_marginals(sys), "coupling marginals disagree with the system"
    return coupling


def realize(sys: MeasureSystem, cap: int = DEFAULT_CANDIDATE_CAP) -> RealizabilityResult:
    """Exact LP test for a coupling on the monotone maps with the system's
    marginals; infeasibility comes back as a strict functional certificate.

    The LP runs over the monotone maps inside the support box (any admissible
    joint mass vanishes elsewhere); the certificate is extended off-support
    with a large negative constant and re-verified against the full monotone
    collection before being returned.
    """
    for a in sys.index.elements:
        if sys.assignment[a].base != sys.target:
            raise DegenerateSystem(f"measure at {a!r} is not a measure on the target")
    delta = monotone_elements(sys.index, sys.target, cap)

    supports = [tuple(sys.assignment[a].support()) for a in sys.index.elements]
    box = _monotone_products(sys.index, sys.target, supports, cap)

    rows = []
    row_id = {}
    rhs = []
    for k, a in enumerate(sys.index.elements):
        for s in supports[k]:
            row_id[(k, s)] = len(rows)
            rows.append((a, s))
            rhs.append(sys.assignment[a].at(s))
    columns = [
        [(row_id[(k, values[k])], Fraction(1)) for k in range(len(values))]
        for values in box
    ]

    result = solve_feasibility(len(rows), columns, rhs)
    if isinstance(result, FeasibleResult):
        points = {box[j]: v for j, v in result.solution.items()}
        coupling = _coupling_from_point_masses(sys, points, cap)
        return RealizabilityResult(coupling=coupling)

    assert isinstance(result, InfeasibleResult)
    y = result.dual
    shift = sum((abs(v) for v in y), ZERO) + 1
    functionals: dict[str, dict[str, Fraction]] = {}
    for k, a in enumerate(sys.index.elements):
        f = {}
        for s in sys.target.elements:
            if (k, s) in row_id:
                val = y[row_id[(k, s)]]
            else:
                val = -shift
            if val:
                f[s] = val
        functionals[a] = f
    lhs, sup = certificate_value(sys, functionals, delta)
    assert lhs == result.objective, "dual objective mismatch"
    assert lhs > sup, "extracted certificate is not strict"
    cert = InfeasibilityCertificate(sys.index, sys.target, functionals, lhs, sup)
    return RealizabilityResult(certificate=cert)


# -- constructive couplers ----------------------------------------------------


def _product_points(
    left: Mapping[tuple[str, ...], Fraction],
    left_names: tuple[str, ...],
    right: Mapping[tuple[str, ...], Fraction],
    right_names: tuple[str, ...],
) -> dict[tuple[str, ...], Fraction]:
    names = tuple(sorted(left_names + right_names))
    out: dict[tuple[str, ...], Fraction] = {}
    for lv, lm in left.items():
        row = dict(zip(left_names, lv))
        for rv, rm in right.items():
            row.update(zip(right_names, rv))
            key = tuple(row[e] for e in names)
            out[key] = out.get(key, ZERO) + lm * rm
    return out


def _couple_acyclic_points(index: Poset, measures: Mapping[str, Measure]) -> dict[tuple[str, ...], Fraction]:
    """Leaf-peeling coupling of a stochastically monotone system over an
    acyclic index poset; keys align with index.elements."""
    els = index.elements
    if len(els) == 1:
        return {(s,): v for s, v in measures[els[0]].mass.items()}
    comps = index.components()
    if len(comps) > 1:
        acc = None
        acc_names: tuple[str, ...] = ()
        for comp in comps:
            part = _couple_acyclic_points(comp, {e: measures[e] for e in comp.elements})
            if acc is None:
                acc, acc_names = part, comp.elements
            else:
                acc = _product_points(acc, acc_names, part, comp.elements)
                acc_names = tuple(sorted(acc_names + comp.elements))
        return acc

    leaf = sorted(index.leaves())[0]
    (neighbor,) = index.neighbors(leaf)
    rest = index.induced(e for e in els if e != leaf)
    sub = _couple_acyclic_points(rest, {e: measures[e] for e in rest.elements})

    leaf_above = index.leq(neighbor, leaf)
    if leaf_above:
        joint = pair_coupling(measures[neighbor], measures[leaf])
        given: dict[str, dict[str, Fraction]] = {}
        for (nb, lf), v in joint.items():
            given.setdefault(nb, {})[lf] = v / measures[neighbor].at(nb)
    else:
        joint = pair_coupling(measures[leaf], measures[neighbor])
        given = {}
        for (lf, nb), v in joint.items():
            given.setdefault(nb, {})[lf] = v / measures[neighbor].at(nb)

    nb_pos = rest.elements.index(neighbor)
    out: dict[tuple[str, ...], Fraction] = {}
    for values, v in sub.items():
        row = dict(zip(rest.elements, values))
        for lf, w in given[values[nb_pos]].items():
            row[leaf] = lf
            key = tuple(row[e] for e in els)
            out[key] = out.get(key, ZERO) + v * w
    return out


def realize_acyclic(sys: MeasureSystem, cap: int = DEFAULT_CANDIDATE_CAP) -> Coupling:
    """Coupling for an acyclic index poset, built by peeling leaves and
    extending through pairwise transport kernels."""
    if not sys.index.is_acyclic():
        raise NotAcyclic("index poset must be acyclic")
    if not is_stochastically_monotone(sys):
        raise NotStochasticallyMonotone("system is not stochastically monotone")
    points = _couple_acyclic_points(sys.index, sys.assignment)
    return _coupling_from_point_masses(sys, points, cap)


def realize_class_z(sys: MeasureSystem, cap: int = DEFAULT_CANDIDATE_CAP) -> Coupling:
    """Common-uniform-variable coupling for a path-shaped target.

    All inverse probability transforms are evaluated on the common cell
    partition of [0, 1) cut at every distribution-function value.
    """
    label = classify(sys.target)
    if label.label != "Z":
        raise NotClassZ(f"target classifies as {label.label}")
    if not is_stochastically_monotone(sys):
        raise NotStochasticallyMonotone("system is not stochastically monotone")
    path = label.path
    assert path is not None

    cumulative: dict[str, list[Fraction]] = {}
    for a in sys.index.elements:
        acc = ZERO
        cum = []
        for x in path:
            acc += sys.assignment[a].at(x)
            cum.append(acc)
        cumulative[a] = cum

    cuts = {ZERO, Fraction(1)}
    for cum in cumulative.values():
        cuts.update(cum)
    grid = sorted(cuts)

    def inverse(a: str, t: Fraction) -> str:
        cum = cumulative[a]
        for i, x in enumerate(path):
            if t < cum[i]:
                return x
        raise AssertionError("inverse transform ran off the path")

    points: dict[tuple[str, ...], Fraction] = {}
    for lo, hi in zip(grid, grid[1:]):
        if hi == lo:
            continue
        values = tuple(inverse(a, lo) for a in sys.index.elements)
        points[values] = points.get(values, ZERO) + (hi - lo)
    return _coupling_from_point_masses(sys, points, cap)


def _couple_enlargeable_points(
    index: Poset, measures: Mapping[str, Measure], target: Poset
) -> dict[tuple[str, ...], Fraction]:
    if index.is_acyclic():
        return _couple_acyclic_points(index, measures)

    blocks = _bipartite_blocks(index)
    assert blocks, "non-acyclic enlargeable index must contain a bipartite block"
    X, Y = min(blocks, key=lambda xy: tuple(sorted(xy[0] + xy[1])))
    mid = "c"
    k = 0
    while mid in index.elements:
        k += 1
        mid = f"c{k}"
    middle = insert_middle([measures[x] for x in X], [measures[y] for y in Y])

    covers = [cv for cv in index.covers() if not (cv[0] in X and cv[1] in Y)]
    covers += [(x, mid) for x in X] + [(mid, y) for y in Y]
    split = Poset.from_covers(index.elements + (mid,), covers)

    ci = split.index_of(mid)
    mask = ((1 << len(split)) - 1) & ~(1 << ci)
    side_x = 0
    for x in X:
        side_x |= _reachable_inside(split, mask, split.index_of(x))
    side_y = 0
    for y in Y:
        side_y |= _reachable_inside(split, mask, split.index_of(y))
    assert side_x & side_y == 0 and (side_x | side_y) == mask, "midpoint failed to split"

    left = split.induced(split._set(side_x | (1 << ci)))
    right = split.induced(split._set(side_y | (1 << ci)))
    left_measures = {e: (middle if e == mid else measures[e]) for e in left.elements}
    right_measures = {e: (middle if e == mid else measures[e]) for e in right.elements}
    ql = _couple_enlargeable_points(left, left_measures, target)
    qr = _couple_enlargeable_points(right, right_measures, target)

    li = left.elements.index(mid)
    ri = right.elements.index(mid)
    by_value: dict[str, list[tuple[tuple[str, ...], Fraction]]] = {}
    for values, v in ql.items():
        by_value.setdefault(values[li], []).append((values, v))

    out: dict[tuple[str, ...], Fraction] = {}
    for rvalues, rv in qr.items():
        xi = rvalues[ri]
        denom = middle.at(xi)
        for lvalues, lv in by_value.get(xi, ()):  # ql's marginal at mid equals middle
            row = dict(zip(left.elements, lvalues))
            row.update(zip(right.elements, rvalues))
            key = tuple(row[e] for e in index.elements)
            out[key] = out.get(key, ZERO) + lv * rv / denom
    return out


def realize_enlargeable(sys: MeasureSystem, cap: int = DEFAULT_CANDIDATE_CAP) -> Coupling:
    """Coupling for an index poset that enlarges to an acyclic poset, over a
    target outside Class B.

    Recursively splits the index at an inserted midpoint carrying a middle
    measure, couples both halves, and glues them by conditioning on the
    shared coordinate.
    """
    label = classify(sys.target)
    if label.label == "B":
        raise TargetInClassB("no middle-measure coupling on a Class-B target")
    obstruction = check_enlargeable(sys.index)
    if obstruction is not None:
        raise NotEnlargeable(obstruction)
    if not is_stochastically_monotone(sys):
        raise NotStochasticallyMonotone("system is not stochastically monotone")
    points = _couple_enlargeable_points(sys.index, sys.assignment, sys.target)
    return _coupling_from_point_masses(sys, points, cap)
