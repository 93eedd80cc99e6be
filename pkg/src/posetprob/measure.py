"""Exact-rational probability measures on posets and stochastic dominance.

All arithmetic is fractions.Fraction; dominance and every derived check is
an exact set-function inequality, never a tolerance comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .poset import OrderError, Poset
from .structure import RootedTree, classify, rooted_tree

__all__ = [
    "Measure",
    "DistFn",
    "MeasureSystem",
    "BaseMismatch",
    "TreeMismatch",
    "InvalidDistribution",
    "PreconditionFailed",
    "stochastically_leq",
    "dominance_violation",
    "down_set_dominance",
    "is_stochastically_monotone",
    "monotonicity_violation",
    "distribution_function",
    "measure_from_distribution",
    "df_leq",
    "insert_middle",
]

ZERO = Fraction(0)
ONE = Fraction(1)


class BaseMismatch(OrderError):
    pass


class TreeMismatch(OrderError):
    pass


class InvalidDistribution(OrderError):
    pass


class PreconditionFailed(OrderError):
    pass


@dataclass(frozen=True)
class Measure:
    """Probability mass function on a poset's ground set, exact rationals.

    Only nonzero masses are stored; lookups outside the support return 0.
    """

    base: Poset
    mass: Mapping[str, Fraction]

    def __post_init__(self):
        clean = {}
        total = ZERO
        for e, v in self.mass.items():
            self.base.index_of(e)
            v = Fraction(v)
            if v < 0:
                raise OrderError(f"negative mass at {e!r}")
            if v:
                clean[e] = v
                total += v
        if total != 1:
            raise OrderError(f"masses sum to {total}, expected 1")
        object.__setattr__(self, "mass", dict(sorted(clean.items())))

    @classmethod
    def point(cls, base: Poset, x: str) -> "Measure":
        return cls(base, {x: ONE})

    @classmethod
    def uniform(cls, base: Poset, support: Iterable[str]) -> "Measure":
        sup = sorted(set(support))
        if not sup:
            raise OrderError("uniform measure needs a nonempty support")
        w = Fraction(1, len(sup))
        return cls(base, {e: w for e in sup})

    @classmethod
    def mix(cls, parts: Sequence[tuple[Fraction, "Measure"]]) -> "Measure":
        """Convex combination; weights must sum to 1."""
        base = parts[0][1].base
        acc: dict[str, Fraction] = {}
        for w, m in parts:
            if m.base != base:
                raise BaseMismatch("mixture components live on different posets")
            for e, v in m.mass.items():
                acc[e] = acc.get(e, ZERO) + Fraction(w) * v
        return cls(base, acc)

    def __call__(self, event: Iterable[str]) -> Fraction:
        return sum((self.mass.get(e, ZERO) for e in event), ZERO)

    def at(self, e: str) -> Fraction:
        self.base.index_of(e)
        return self.mass.get(e, ZERO)

    def support(self) -> tuple[str, ...]:
        return tuple(self.mass)

    def on_dual(self) -> "Measure":
        return Measure(self.base.dual(), dict(self.mass))

    def pushed(self, mapping: Mapping[str, str], target: Poset) -> "Measure":
        """Image measure under an injective element map into ``target``."""
        out: dict[str, Fraction] = {}
        for e, v in self.mass.items():
            out[mapping[e]] = out.get(mapping[e], ZERO) + v
        return Measure(target, out)


def dominance_violation(p1: Measure, p2: Measure) -> Optional[frozenset[str]]:
    """An up-set maximizing P1(U) - P2(U) when dominance fails, else None."""
    if p1.base != p2.base:
        raise BaseMismatch("measures live on different posets")
    worst: Optional[frozenset[str]] = None
    gap = ZERO
    for u in p1.base.up_sets():
        d = p1(u) - p2(u)
        if d > gap:
            gap, worst = d, u
    return worst


def stochastically_leq(p1: Measure, p2: Measure) -> bool:
    """P1(U) <= P2(U) for every up-set U."""
    return dominance_violation(p1, p2) is None


def down_set_dominance(p1: Measure, p2: Measure) -> bool:
    """P1(V) >= P2(V) for every down-set V; equivalent to stochastically_leq."""
    if p1.base != p2.base:
        raise BaseMismatch("measures live on different posets")
    return all(p1(v) >= p2(v) for v in p1.base.down_sets())


@dataclass(frozen=True)
class MeasureSystem:
    """An index poset together with one measure on the target per element."""

    index: Poset
    target: Poset
    assignment: Mapping[str, Measure]

    def __post_init__(self):
        missing = [a for a in self.index.elements if a not in self.assignment]
        if missing:
            raise OrderError(f"system misses measures for {missing}")
        for a, m in self.assignment.items():
            self.index.index_of(a)
            if m.base != self.target:
                raise BaseMismatch(f"measure at {a!r} lives on the wrong poset")
        object.__setattr__(
            self, "assignment", {a: self.assignment[a] for a in self.index.elements}
        )

    def measure(self, alpha: str) -> Measure:
        return self.assignment[alpha]

    def on_dual(self) -> "MeasureSystem":
        """Both posets dualized, the mass functions unchanged."""
        return MeasureSystem(
            self.index.dual(),
            self.target.dual(),
            {a: m.on_dual() for a, m in self.assignment.items()},
        )

    def restricted(self, index_subset: Iterable[str]) -> "MeasureSystem":
        sub = self.index.induced(index_subset)
        return MeasureSystem(sub, self.target, {a: self.assignment[a] for a in sub.elements})


def monotonicity_violation(
    sys: MeasureSystem,
) -> Optional[tuple[str, str, frozenset[str]]]:
    """First pair alpha < beta with P_alpha not below P_beta, plus the up-set."""
    for a in sys.index.elements:
        for b in sys.index.elements:
            if a != b and sys.index.leq(a, b):
                u = dominance_violation(sys.assignment[a], sys.assignment[b])
                if u is not None:
                    return (a, b, u)
    return None


def is_stochastically_monotone(sys: MeasureSystem) -> bool:
    return monotonicity_violation(sys) is None


# -- distribution functions on rooted trees --------------------------------


@dataclass(frozen=True)
class DistFn:
    """F(x) = P(section of x) over a rooted tree."""

    tree: RootedTree
    values: Mapping[str, Fraction]

    def __post_init__(self):
        vals = {x: Fraction(self.values[x]) for x in self.tree.base.elements}
        object.__setattr__(self, "values", vals)

    def at(self, x: str) -> Fraction:
        return self.values[x]


def _check_tree_axioms(tree: RootedTree, values: Mapping[str, Fraction]) -> None:
    if values[tree.root] != 1:
        raise InvalidDistribution(f"F(root) = {values[tree.root]}, expected 1")
    for x in tree.base.elements:
        if values[x] < 0:
            raise InvalidDistribution(f"F({x}) < 0")
        kids = sum((values[c] for c in tree.successors(x)), ZERO)
        if kids > values[x]:
            raise InvalidDistribution(f"children of {x} sum to {kids} > F({x}) = {values[x]}")


def distribution_function(tree: RootedTree, p: Measure) -> DistFn:
    """F(x) := P({xi : xi below x in the tree order})."""
    if p.base != tree.base:
        raise BaseMismatch("measure lives off the tree's base poset")
    values = {x: p(tree.sections[x]) for x in tree.base.elements}
    return DistFn(tree, values)


def measure_from_distribution(tree: RootedTree, f: DistFn) -> Measure:
    """Inverse of distribution_function: P({x}) = F(x) - sum of child values."""
    if f.tree.base != tree.base or f.tree.root != tree.root:
        raise TreeMismatch("distribution function belongs to a different tree")
    _check_tree_axioms(tree, f.values)
    mass = {}
    for x in tree.base.elements:
        mass[x] = f.values[x] - sum((f.values[c] for c in tree.successors(x)), ZERO)
    return Measure(tree.base, mass)


def df_leq(f1: DistFn, f2: DistFn) -> bool:
    """Pointwise dominance test: F1 <= F2 on up-set sections and F1 >= F2 on
    down-set sections; equivalent to stochastic dominance of the measures."""
    if f1.tree.base != f2.tree.base or f1.tree.root != f2.tree.root:
        raise TreeMismatch("distribution functions live on different trees")
    tree = f1.tree
    for x in tree.base.elements:
        if tree.section_is_up[x]:
            if f1.values[x] > f2.values[x]:
                return False
        elif f1.values[x] < f2.values[x]:
            return False
    return True


def insert_middle(lower: Sequence[Measure], upper: Sequence[Measure]) -> Measure:
    """A measure sandwiched between all of ``lower`` and all of ``upper``.

    The base poset must be connected and outside Class B.  The candidate is
    assembled from the pointwise envelope of the distribution functions over
    the tree rooted at the lex-least leaf, then verified exactly against
    every input before it is returned.
    """
    if not lower or not upper:
        raise PreconditionFailed("need at least one lower and one upper measure")
    base = lower[0].base
    for m in list(lower) + list(upper):
        if m.base != base:
            raise BaseMismatch("all measures must share one poset")
    if not base.is_connected():
        raise PreconditionFailed("base poset must be connected")
    if classify(base).label == "B":
        raise PreconditionFailed("no middle measure is guaranteed on a Class-B poset")
    for lo in lower:
        for hi in upper:
            if not stochastically_leq(lo, hi):
                raise PreconditionFailed("lower measures must be dominated by upper measures")

    leaves = base.leaves() if len(base) > 1 else base.elements
    tree = rooted_tree(base, sorted(leaves)[0])
    f_lower = [distribution_function(tree, m) for m in lower]
    f_upper = [distribution_function(tree, m) for m in upper]

    def envelope(x: str) -> Fraction:
        if tree.section_is_up[x]:
            return max(f.values[x] for f in f_lower)
        return max(f.values[x] for f in f_upper)

    values: dict[str, Fraction] = {}
    for x in tree.bottom_up():
        kids = sum((values[c] for c in tree.successors(x)), ZERO)
        values[x] = max(envelope(x), kids)

    middle = measure_from_distribution(tree, DistFn(tree, values))
    for lo in lower:
        assert stochastically_leq(lo, middle), "middle measure misses a lower bound"
    for hi in upper:
        assert stochastically_leq(middle, hi), "middle measure misses an upper bound"
    return middle
