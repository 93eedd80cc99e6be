"""Generators for stochastically monotone systems that admit no monotone
coupling, each returned with a machine-checked certificate.

The fixtures are small hand-built systems on diamond/bowtie/crown/Y-shaped
posets; the two general generators transplant them into arbitrary hosts.
Every produced system is re-checked: it must be stochastically monotone and
the LP must return a strict certificate, otherwise generation fails loudly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from . import catalog
from .coupling import DEFAULT_CANDIDATE_CAP, InfeasibilityCertificate, realize
from .measure import Measure, MeasureSystem, is_stochastically_monotone
from .poset import OrderError, Poset, find_induced_pattern
from .structure import (
    CycleWitness,
    check_enlargeable,
    classify,
    cycle_witness,
    induced_cycle,
    induced_cycle_height3,
)

__all__ = [
    "Counterexample",
    "UnknownFixture",
    "BadParameter",
    "fixture",
    "extend_crown",
    "counterexample_class_b",
    "counterexample_class_y",
]


class UnknownFixture(OrderError):
    pass


class BadParameter(OrderError):
    pass


@dataclass(frozen=True)
class Counterexample:
    """A certified stochastically-monotone-but-not-realizable system."""

    system: MeasureSystem
    provenance: str
    certificate: InfeasibilityCertificate
    seed_index: tuple[str, ...]  # induced sub-index the construction grew from
    sentinels: Optional[tuple[Measure, Measure]] = None  # bottom/top companions

    def on_dual(self) -> "Counterexample":
        return certify(self.system.on_dual(), self.provenance + "*", self.seed_index)


def certify(
    sys: MeasureSystem,
    provenance: str,
    seed_index: tuple[str, ...],
    sentinels: Optional[tuple[Measure, Measure]] = None,
    cap: int = DEFAULT_CANDIDATE_CAP,
) -> Counterexample:
    """Check monotonicity and extract the LP certificate, or fail."""
    assert is_stochastically_monotone(sys), f"{provenance}: system is not monotone"
    result = realize(sys, cap)
    assert not result.feasible, f"{provenance}: system is unexpectedly realizable"
    assert result.certificate is not None and result.certificate.is_strict()
    return Counterexample(sys, provenance, result.certificate, seed_index, sentinels)


# -- fixtures ----------------------------------------------------------------


def _diamond_index() -> Poset:
    """Diamond with index labels a < b,c < d."""
    return Poset.from_covers("abcd", [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])


def _crown_index(k: int) -> Poset:
    """k-crown with index labels a0..a{k-1} below b0..b{k-1}."""
    a = [f"a{i}" for i in range(k)]
    b = [f"b{i}" for i in range(k)]
    covers = [(a[i], b[i]) for i in range(k)] + [(a[i], b[(i - 1) % k]) for i in range(k)]
    return Poset.from_covers(a + b, covers)


def _crown_measures(k: int, s: Poset) -> dict[str, Measure]:
    """The bowtie-over-k-crown system, exact mixture weights."""
    s1 = [f"x{i}" for i in range(k)]
    s2 = [f"y{i}" for i in range(k)]
    big = Fraction(k - 1, k)
    small = Fraction(1, k)
    full = s1 + s2
    return {
        "a0": Measure.mix(
            [(big, Measure.uniform(s, [e for e in s1 if e != "x1"])),
             (small, Measure.uniform(s, ["y0", "x1"]))]
        ),
        "a1": Measure.mix(
            [(small, Measure.point(s, "x0")),
             (big, Measure.uniform(s, [e for e in full if e not in ("x0", "y0")]))]
        ),
        "b0": Measure.mix(
            [(small, Measure.point(s, f"y{k-1}")),
             (big, Measure.uniform(s, [e for e in full if e not in ("x0", f"y{k-1}")]))]
        ),
        "b1": Measure.mix(
            [(big, Measure.uniform(s, ["x0"] + [e for e in s2 if e not in ("y0", f"y{k-1}")])),
             (small, Measure.uniform(s, ["y0", f"y{k-1}"]))]
        ),
    }


def crown_indicator_family(k: int) -> dict[str, dict[str, Fraction]]:
    """The up-set indicator functionals certifying the bowtie/crown system."""
    s1 = [f"x{i}" for i in range(k)]
    s2 = [f"y{i}" for i in range(k)]
    one = Fraction(1)
    return {
        "a0": {"y0": one},
        "a1": {e: one for e in s2 if e != "y0"},
        "b0": {e: one for e in s1 if e != "x0"},
        "b1": {"x0": one},
    }


def diamond_crown_indicator_family(k: int) -> dict[str, dict[str, Fraction]]:
    """Indicator functionals certifying the diamond-over-k-crown system."""
    s1 = [f"x{i}" for i in range(k)]
    one = Fraction(1)
    return {
        "a": {"x0": one},
        "b": {e: one for e in ["y0"] + [x for x in s1 if x != "x0"]},
        "c": {e: one for e in [f"y{k-1}"] + [x for x in s1 if x != "x0"]},
        "d": {},
    }


def fixture(name: str, k: int = 2) -> Counterexample:
    """Hand-built counterexample systems.

    Names: diamond-diamond, bowtie-diamond, bowtie-crown (takes k >= 2),
    diamond-crown (takes k >= 2), diamond-y.
    """
    if name == "diamond-diamond":
        d = catalog.diamond()
        assign = {
            "x": Measure.uniform(d, "xy"),
            "y": Measure.uniform(d, "xw"),
            "z": Measure.uniform(d, "yz"),
            "w": Measure.uniform(d, "yw"),
        }
        return certify(MeasureSystem(d, d, assign), name, d.elements)
    if name == "bowtie-diamond":
        a = _crown_index(2)
        d = catalog.diamond()
        assign = {
            "a0": Measure.uniform(d, "xw"),
            "a1": Measure.uniform(d, "yz"),
            "b0": Measure.uniform(d, "yw"),
            "b1": Measure.uniform(d, "zw"),
        }
        sentinels = (Measure.point(d, "x"), Measure.point(d, "w"))
        return certify(MeasureSystem(a, d, assign), name, a.elements, sentinels)
    if name == "bowtie-crown":
        if k < 2:
            raise BadParameter("crown fixtures need k >= 2")
        a = _crown_index(2)
        s = catalog.k_crown(k)
        assign = _crown_measures(k, s)
        sentinels = (
            Measure.uniform(s, [f"x{i}" for i in range(k)]),
            Measure.uniform(s, [f"y{i}" for i in range(k)]),
        )
        return certify(MeasureSystem(a, s, assign), f"{name}({k})", a.elements, sentinels)
    if name == "diamond-crown":
        if k < 2:
            raise BadParameter("crown fixtures need k >= 2")
        a = _diamond_index()
        s = catalog.k_crown(k)
        s1 = [f"x{i}" for i in range(k)]
        s2 = [f"y{i}" for i in range(k)]
        assign = {
            "a": Measure.uniform(s, s1),
            "b": Measure.uniform(s, ["y0"] + [x for x in s1 if x != "x0"]),
            "c": Measure.uniform(s, [f"y{k-1}"] + [x for x in s1 if x != "x0"]),
            "d": Measure.uniform(s, s2),
        }
        return certify(MeasureSystem(a, s, assign), f"{name}({k})", a.elements)
    if name == "diamond-y":
        a = _diamond_index()
        s = catalog.y_poset()
        assign = {
            "a": Measure.uniform(s, "xy"),
            "b": Measure.uniform(s, "xw"),
            "c": Measure.uniform(s, "yw"),
            "d": Measure.uniform(s, "zw"),
        }
        return certify(MeasureSystem(a, s, assign), name, a.elements)
    raise UnknownFixture(f"unknown fixture {name!r}")


def extend_crown(base: Counterexample, k2: int) -> Counterexample:
    """Pad a crown-indexed counterexample out to a larger crown.

    New elements repeat the measure at b_{k-1}; monotonicity survives and
    non-realizability is inherited, then re-certified.
    """
    index = base.system.index
    k = len(index) // 2
    if index != _crown_index(k):
        raise BadParameter("extend_crown needs a crown-labeled index poset")
    if k2 < k:
        raise BadParameter(f"cannot shrink a {k}-crown to {k2}")
    if k2 == k:
        return base
    bigger = _crown_index(k2)
    pad = base.system.assignment[f"b{k-1}"]
    assign = dict(base.system.assignment)
    for e in bigger.elements:
        if e not in assign:
            assign[e] = pad
    sys2 = MeasureSystem(bigger, base.system.target, assign)
    return certify(sys2, f"{base.provenance}+crown({k2})", index.elements, base.sentinels)


# -- general Class-B generator -------------------------------------------------


def _class_b_core(s: Poset) -> tuple[str, Poset, dict[str, str]]:
    """An induced diamond or crown inside a Class-B poset."""
    emb = find_induced_pattern(s, catalog.diamond())
    if emb is not None:
        return "diamond", catalog.diamond(), emb
    for k in range(2, len(s) // 2 + 1):
        emb = find_induced_pattern(s, catalog.k_crown(k))
        if emb is not None:
            return f"crown({k})", catalog.k_crown(k), emb
    raise AssertionError("Class-B poset contains neither a diamond nor a crown")


def _pushed_measure(m: Measure, emb: Mapping[str, str], target: Poset) -> Measure:
    return m.pushed(dict(emb), target)


def counterexample_class_b(a: Poset, s: Poset) -> Counterexample:
    """Certified counterexample for a non-acyclic index over a Class-B target.

    With an induced diamond in the index, the diamond-indexed fixture is
    spread over the partition {below-neither, b, c, strictly-above}; without
    one, an induced cycle is a subdivided crown and the crown-indexed fixture
    is spread along its segments, with sentinel measures outside.
    """
    if not a.is_connected():
        raise OrderError("index poset must be connected")
    if a.is_acyclic():
        raise OrderError("index poset must be non-acyclic")
    if classify(s).label != "B":
        raise OrderError("target poset must be of Class B")

    core_kind, core, s_emb = _class_b_core(s)

    dia = find_induced_pattern(a, catalog.diamond())
    if dia is not None:
        # diamond-indexed base system on the core; the pattern embedding is
        # keyed x (bottom), y/z (middles), w (top)
        if core_kind == "diamond":
            base = fixture("diamond-diamond")
            relabel = {"a": "x", "b": "y", "c": "z", "d": "w"}
        else:
            base = fixture("diamond-crown", k=len(core) // 2)
            relabel = {"a": "a", "b": "b", "c": "c", "d": "d"}
        measures = {
            pos: _pushed_measure(base.system.assignment[relabel[pos]], s_emb, s)
            for pos in "abcd"
        }
        b_el, c_el = dia["y"], dia["z"]
        assign = {}
        for alpha in a.elements:
            if alpha == b_el:
                assign[alpha] = measures["b"]
            elif alpha == c_el:
                assign[alpha] = measures["c"]
            elif a.lt(b_el, alpha) or a.lt(c_el, alpha):
                assign[alpha] = measures["d"]
            else:
                assign[alpha] = measures["a"]
        sys_out = MeasureSystem(a, s, assign)
        return certify(sys_out, f"class-b-case-i[{core_kind}]", tuple(sorted(dia.values())))

    # diamond-free: take an induced cycle, necessarily a subdivided crown
    seed = a.find_cover_cycle()
    assert seed is not None
    cycle = induced_cycle(a, cycle_witness(a, seed))
    valleys = cycle.extrema[0::2]
    peaks = cycle.extrema[1::2]
    k = len(valleys)
    assert k >= 2, "induced cycle in a diamond-free poset must alternate at least twice"

    if core_kind == "diamond":
        base = extend_crown(fixture("bowtie-diamond"), k)
    else:
        base = extend_crown(fixture("bowtie-crown", k=len(core) // 2), k)
    pushed = {
        beta: _pushed_measure(m, s_emb, s) for beta, m in base.system.assignment.items()
    }
    assert base.sentinels is not None
    bottom = _pushed_measure(base.sentinels[0], s_emb, s)
    top = _pushed_measure(base.sentinels[1], s_emb, s)

    cycle_set = set(cycle.vertices)
    assign = {}
    for alpha in cycle.vertices:
        if alpha in peaks:
            assign[alpha] = pushed[f"b{peaks.index(alpha)}"]
            continue
        owner = None
        for i, valley in enumerate(valleys):
            if a.leq(valley, alpha) and (
                a.lt(alpha, peaks[i]) or a.lt(alpha, peaks[(i - 1) % k])
            ):
                owner = i
                break
        assert owner is not None, "cycle vertex escaped every crown segment"
        assign[alpha] = pushed[f"a{owner}"]
    for alpha in a.elements:
        if alpha in cycle_set:
            continue
        if any(a.lt(beta, alpha) for beta in cycle.vertices):
            assign[alpha] = top
        else:
            assign[alpha] = bottom
    sys_out = MeasureSystem(a, s, assign)
    return certify(sys_out, f"class-b-case-ii[{core_kind},k={k}]", cycle.vertices)


# -- general Class-Y generator --------------------------------------------------


def _y_base_measures(s: Poset) -> tuple[dict[str, Measure], tuple[str, ...]]:
    """The four diamond-indexed measures on an embedded Y-poset (or dual)."""
    emb = find_induced_pattern(s, catalog.y_poset())
    if emb is not None:
        xx, yy, ww, zz = emb["x"], emb["y"], emb["w"], emb["z"]
        return (
            {
                "a": Measure.uniform(s, [xx, yy]),
                "b": Measure.uniform(s, [xx, ww]),
                "c": Measure.uniform(s, [yy, ww]),
                "d": Measure.uniform(s, [zz, ww]),
            },
            (xx, yy, ww, zz),
        )
    emb = find_induced_pattern(s, catalog.y_poset().dual())
    assert emb is not None, "Class-Y target has no induced Y-poset or dual"
    xx, yy, ww, zz = emb["x"], emb["y"], emb["w"], emb["z"]
    # dualized system: reverse the diamond roles of top and bottom
    return (
        {
            "a": Measure.uniform(s, [zz, ww]),
            "b": Measure.uniform(s, [xx, ww]),
            "c": Measure.uniform(s, [yy, ww]),
            "d": Measure.uniform(s, [xx, yy]),
        },
        (xx, yy, ww, zz),
    )


def counterexample_class_y(a: Poset, s: Poset) -> Counterexample:
    """Certified counterexample for a non-enlargeable index over a Class-Y
    target, dispatching on the enlargement obstruction."""
    if not a.is_connected():
        raise OrderError("index poset must be connected")
    if classify(s).label != "Y":
        raise OrderError("target poset must be of Class Y")
    obstruction = check_enlargeable(a)
    if obstruction is None:
        raise OrderError("index poset is enlargeable; no counterexample exists")

    tilde, seed_target = _y_base_measures(s)

    if obstruction.kind in ("diamond", "subdivided-crown"):
        cycle = induced_cycle_height3(a)
        assert cycle is not None
        return _tall_cycle_system(a, s, tilde, cycle)
    if obstruction.kind == "k-crown":
        emb = obstruction.embedding
        assert emb is not None and obstruction.k is not None
        return _crown_y_system(a, s, tilde, emb, obstruction.k)
    assert obstruction.kind == "double-bowtie"
    emb = obstruction.embedding
    assert emb is not None
    return _double_bowtie_y_system(a, s, tilde, emb)


def _tall_cycle_system(
    a: Poset, s: Poset, tilde: dict[str, Measure], cycle: CycleWitness
) -> Counterexample:
    """Spread the four measures around an induced cycle of height >= 3."""
    own = cycle.own_order()
    runs: list[tuple[str, ...]] = []
    n = len(cycle.vertices)
    start = 0
    ups = cycle.ups
    for i in range(1, n + 1):
        if ups[i % n] != ups[start]:
            runs.append(tuple(cycle.vertices[j % n] for j in range(start, i + 1)))
            start = i
    tall = next(r for r in runs if len(r) >= 3)
    anchor = tall[1]  # strictly interior to a maximal monotone run

    assign = {}
    for alpha in a.elements:
        if alpha == anchor:
            assign[alpha] = tilde["b"]
        elif a.lt(anchor, alpha):
            assign[alpha] = tilde["d"]
        elif a.lt(alpha, anchor):
            assign[alpha] = tilde["a"]
        else:
            assign[alpha] = tilde["c"]
    sys_out = MeasureSystem(a, s, assign)
    return certify(sys_out, "tall-cycle-y", cycle.vertices)


def _crown_y_system(
    a: Poset, s: Poset, tilde: dict[str, Measure], emb: Mapping[str, str], k: int
) -> Counterexample:
    """Spread the four measures through the up-set of a crown's first valley
    and the down-set of its last peak."""
    a0 = emb["x0"]
    b_last = emb[f"y{k-1}"]
    up = a.up_set_of(a0)
    down = a.down_set_of(b_last)
    assign = {}
    for alpha in a.elements:
        if alpha in up and alpha in down:
            assign[alpha] = tilde["b"]
        elif alpha in up:
            assign[alpha] = tilde["d"]
        elif alpha in down:
            assign[alpha] = tilde["a"]
        else:
            assign[alpha] = tilde["c"]
    sys_out = MeasureSystem(a, s, assign)
    return certify(sys_out, f"crown-y(k={k})", tuple(sorted(emb.values())))


def _double_bowtie_y_system(
    a: Poset, s: Poset, tilde: dict[str, Measure], emb: Mapping[str, str]
) -> Counterexample:
    """Spread the four measures through the principal down-sets of the two
    outer peaks of an induced double-bowtie."""
    d1 = a.down_set_of(emb["b1"])
    d3 = a.down_set_of(emb["b3"])
    assign = {}
    for alpha in a.elements:
        in1, in3 = alpha in d1, alpha in d3
        if in1 and in3:
            assign[alpha] = tilde["a"]
        elif in1:
            assign[alpha] = tilde["b"]
        elif in3:
            assign[alpha] = tilde["c"]
        else:
            assign[alpha] = tilde["d"]
    sys_out = MeasureSystem(a, s, assign)
    return certify(sys_out, "double-bowtie-y", tuple(sorted(emb.values())))
