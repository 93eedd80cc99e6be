"""Acceptance suite: exact reproduction of the worked examples plus
property sweeps against brute-force oracles.  Every check is exact rational
arithmetic; tolerance is zero throughout.

Each criterion builds a deterministic report string; criterion 10 re-runs
the seeded criteria and demands byte-identical reports.  Run with ``-s`` to
see one PASS line per criterion.
"""

import random
import time
from fractions import Fraction

import pytest

from posetprob import catalog
from posetprob.coupling import (
    NotDominated,
    certificate_value,
    monotone_elements,
    realize,
    realize_acyclic,
    realize_class_z,
    realize_enlargeable,
    strassen_pair,
)
from posetprob.decide import FAILS, HOLDS, decide_equivalence
from posetprob.measure import (
    Measure,
    insert_middle,
    is_stochastically_monotone,
    stochastically_leq,
)
from posetprob.structure import check_enlargeable, classify, enlarge_to_acyclic
from posetprob.structure import NotEnlargeable
from posetprob.poset import find_induced_pattern
from posetprob.witness import (
    counterexample_class_b,
    crown_indicator_family,
    diamond_crown_indicator_family,
    fixture,
)

from oracles import (
    powerset_up_sets,
    random_down_transport,
    random_measure,
    random_monotone_system,
    random_up_transport,
)

F = Fraction
SEED = 20260808


def _report(lines):
    return "\n".join(lines) + "\n"


# -- criterion implementations ------------------------------------------------


def criterion_1():
    cx = fixture("diamond-diamond")
    ups = cx.system.target.up_sets()
    assert len(ups) == 6
    for a in cx.system.index.elements:
        for b in cx.system.index.elements:
            if cx.system.index.leq(a, b):
                for u in ups:
                    assert cx.system.assignment[a](u) <= cx.system.assignment[b](u)
    res = realize(cx.system)
    assert not res.feasible
    assert res.certificate.lhs > res.certificate.sup
    return _report(
        [
            "criterion-1 diamond-diamond",
            f"up-sets=6 monotone=yes feasible=no lhs={res.certificate.lhs} sup={res.certificate.sup}",
        ]
    )


def criterion_2():
    lines = ["criterion-2 crown certificate values"]
    for k in range(2, 6):
        bc = fixture("bowtie-crown", k=k)
        delta = monotone_elements(bc.system.index, bc.system.target)
        lhs, sup = certificate_value(bc.system, crown_indicator_family(k), delta)
        assert lhs == 1 + F(1, 2 * k), f"bowtie-crown({k}) lhs {lhs}"
        assert sup == 1
        assert not realize(bc.system).feasible
        lines.append(f"bowtie-crown k={k} lhs={lhs} sup={sup} infeasible=yes")

        dc = fixture("diamond-crown", k=k)
        delta = monotone_elements(dc.system.index, dc.system.target)
        lhs, sup = certificate_value(dc.system, diamond_crown_indicator_family(k), delta)
        assert lhs == 2 + F(1, k), f"diamond-crown({k}) lhs {lhs}"
        assert sup == 2
        assert not realize(dc.system).feasible
        lines.append(f"diamond-crown k={k} lhs={lhs} sup={sup} infeasible=yes")
    return _report(lines)


def criterion_3(seed=SEED):
    rng = random.Random(seed)
    lines = ["criterion-3 pairwise transport vs up-set dominance, n<=5, 50 pairs each"]
    posets = catalog.connected_posets(5)
    coupled = refused = 0
    for p in posets:
        for _ in range(50):
            p1, p2 = random_measure(rng, p), random_measure(rng, p)
            dominated = all(p1(u) <= p2(u) for u in powerset_up_sets(p))
            try:
                kernel = strassen_pair(p1, p2)
            except NotDominated as exc:
                assert not dominated
                assert p.is_up_set(exc.up_set)
                assert p1(exc.up_set) > p2(exc.up_set)
                refused += 1
            else:
                assert dominated
                assert kernel.apply(p1) == p2
                for x, row in kernel.rows.items():
                    assert sum(row.values()) == 1
                    assert all(p.leq(x, y) for y in row)
                coupled += 1
    lines.append(f"posets={len(posets)} coupled={coupled} refused={refused}")
    return _report(lines)


def criterion_4(seed=SEED):
    rng = random.Random(seed)
    lines = ["criterion-4 self-indexed systems, n<=5"]
    acyclic_posets = 0
    feasible_systems = 0
    refuted = 0
    for s in catalog.connected_posets(5):
        if s.is_acyclic():
            acyclic_posets += 1
            for _ in range(100):
                sys_ = random_monotone_system(rng, s, s, atoms=3)
                assert is_stochastically_monotone(sys_)
                res = realize(sys_)
                assert res.feasible, f"LP refused a monotone system on {s!r}"
                coupling = realize_acyclic(sys_)
                assert coupling.has_marginals(sys_)
                feasible_systems += 1
        else:
            cx = counterexample_class_b(s, s)
            assert is_stochastically_monotone(cx.system)
            assert cx.certificate.lhs > cx.certificate.sup
            refuted += 1
    lines.append(
        f"acyclic-posets={acyclic_posets} feasible-systems={feasible_systems} "
        f"non-acyclic-refuted={refuted} exceptions=0"
    )
    return _report(lines)


def criterion_5(seed=SEED):
    rng = random.Random(seed)
    lines = ["criterion-5 path-target coupling, zigzags 3..7"]
    total = 0
    indexes = [("diamond", catalog.diamond()), ("bowtie", catalog.bowtie()), ("3crown", catalog.k_crown(3))]
    for n in range(3, 8):
        z = catalog.zigzag(n)
        for name, index in indexes:
            for _ in range(100):
                sys_ = random_monotone_system(rng, index, z, atoms=4)
                coupling = realize_class_z(sys_)
                assert coupling.has_marginals(sys_)
                for values, _ in coupling.points():
                    for i, a in enumerate(index.elements):
                        for j, b in enumerate(index.elements):
                            if index.leq(a, b):
                                assert z.leq(values[i], values[j])
                assert realize(sys_).feasible
                total += 1
    lines.append(f"couplings={total} all-exact=yes")
    return _report(lines)


def criterion_6(seed=SEED):
    rng = random.Random(seed)
    yt = catalog.tall_y_tree()
    lines = ["criterion-6 middle-measure insertion on the branching Class-Y tree"]
    for _ in range(200):
        core = random_measure(rng, yt, max_atoms=4)
        lowers = [random_down_transport(rng, core) for _ in range(rng.randint(1, 3))]
        uppers = [random_up_transport(rng, core) for _ in range(rng.randint(1, 3))]
        mid = insert_middle(lowers, uppers)
        for lo in lowers:
            assert stochastically_leq(lo, mid)
        for hi in uppers:
            assert stochastically_leq(mid, hi)
    lines.append("instances=200 sandwiches-exact=yes")
    return _report(lines)


def criterion_7():
    lines = ["criterion-7 enlargement iff no obstruction, n<=6"]
    enlarged = obstructed = 0
    for p in catalog.connected_posets(6):
        obstruction = check_enlargeable(p)
        if obstruction is None:
            out = enlarge_to_acyclic(p)
            assert out.is_acyclic()
            assert out.induced(p.elements) == p
            enlarged += 1
        else:
            with pytest.raises(NotEnlargeable):
                enlarge_to_acyclic(p)
            obstructed += 1
    lines.append(f"enlarged={enlarged} obstructed={obstructed}")
    return _report(lines)


def criterion_8(seed=SEED):
    rng = random.Random(seed)
    y = catalog.y_poset()
    lines = ["criterion-8 Class-Y decision"]
    failing = [
        ("diamond", catalog.diamond()),
        ("3crown", catalog.k_crown(3)),
        ("4crown", catalog.k_crown(4)),
        ("double-bowtie", catalog.double_bowtie()),
        ("tall-cycle", catalog.hexagon()),
    ]
    for name, a in failing:
        verdict = decide_equivalence(a, y)
        assert verdict.outcome == FAILS, name
        w = verdict.witness
        assert is_stochastically_monotone(w.system)
        assert w.certificate.lhs > w.certificate.sup
        lines.append(f"fails {name} witness={w.provenance}")
    holding = [
        ("bowtie", catalog.bowtie()),
        ("tree", catalog.double_v()),
        ("bipartite-3x3", catalog.complete_bipartite(3, 3)),
    ]
    for name, a in holding:
        verdict = decide_equivalence(a, y)
        assert verdict.outcome == HOLDS, name
        for _ in range(50):
            sys_ = random_monotone_system(rng, a, y, atoms=4)
            coupling = realize_enlargeable(sys_)
            assert coupling.has_marginals(sys_)
        lines.append(f"holds {name} coupler={verdict.coupler} systems=50")
    return _report(lines)


def criterion_9():
    lines = ["criterion-9 Class-B iff induced diamond or crown, n<=6"]
    in_b = 0
    for p in catalog.connected_posets(6):
        crowned = find_induced_pattern(p, catalog.diamond()) is not None or any(
            find_induced_pattern(p, catalog.k_crown(k)) is not None
            for k in range(2, len(p) // 2 + 1)
        )
        label = classify(p).label
        assert (label == "B") == crowned
        in_b += label == "B"
    lines.append(f"posets={len(catalog.connected_posets(6))} class-b={in_b}")
    return _report(lines)


SEEDED = {3: criterion_3, 4: criterion_4, 5: criterion_5, 6: criterion_6, 8: criterion_8}
UNSEEDED = {1: criterion_1, 2: criterion_2, 7: criterion_7, 9: criterion_9}
BUDGETS = {1: 1, 2: 5, 3: 120, 4: 600, 5: 120, 6: 60, 7: 300, 8: 300, 9: 120}


def _run(num):
    fn = SEEDED.get(num) or UNSEEDED[num]
    started = time.time()
    report = fn(SEED) if num in SEEDED else fn()
    return report, time.time() - started


@pytest.fixture(scope="module")
def reports():
    out = {}
    for num in range(1, 10):
        out[num] = _run(num)
    return out


@pytest.mark.parametrize("num", list(range(1, 10)))
def test_criterion(num, reports):
    report, elapsed = reports[num]
    assert report
    assert elapsed < BUDGETS[num], f"criterion {num} took {elapsed:.1f}s, budget {BUDGETS[num]}s"
    print(f"\ncriterion {num:02d}: PASS ({elapsed:.1f}s, budget {BUDGETS[num]}s)\n{report}")


def test_criterion_10_determinism(reports):
    for num in range(3, 10):
        report, _ = _run(num)
        assert report == reports[num][0], f"criterion {num} report changed between runs"
    print("\ncriterion 10: PASS (criteria 3-9 byte-identical on rerun)")
