import random

import pytest

from posetprob import catalog
from posetprob.coupling import realize, realize_acyclic, realize_class_z, realize_enlargeable
from posetprob.decide import FAILS, HOLDS, UNKNOWN, decide_equivalence, decide_markov
from posetprob.measure import is_stochastically_monotone
from posetprob.poset import EmptyPoset, Poset, disjoint_union

from oracles import random_monotone_system


def test_examples_table():
    d = catalog.diamond()
    v = decide_equivalence(d, d)
    assert v.outcome == FAILS and v.witness is not None

    assert decide_equivalence(catalog.double_bowtie(), catalog.chain(5)).outcome == HOLDS
    assert decide_equivalence(d, catalog.chain(5)).coupler == "class-z"

    v = decide_equivalence(catalog.bowtie(), catalog.tall_y_tree())
    assert v.outcome == HOLDS and v.coupler == "enlargeable"

    v = decide_equivalence(catalog.double_bowtie(), catalog.w_poset())
    assert v.outcome == UNKNOWN

    # enlargeable index over a W-class target still holds
    v = decide_equivalence(catalog.bowtie(), catalog.w_poset())
    assert v.outcome == HOLDS and v.coupler == "enlargeable"

    v = decide_equivalence(catalog.chain(4), d)
    assert v.outcome == HOLDS and v.coupler == "acyclic"

    with pytest.raises(EmptyPoset):
        decide_equivalence(Poset((), ()), d)


def test_markov_examples():
    assert decide_markov(catalog.chain(4)).outcome == HOLDS
    assert decide_markov(catalog.diamond()).outcome == FAILS
    assert decide_markov(catalog.double_v()).outcome == HOLDS  # acyclic despite bowtie


def test_markov_consistency_sweep():
    for n in range(1, 7):
        for s in catalog.all_posets(n):
            if not s.is_connected():
                continue
            verdict = decide_markov(s)
            assert (verdict.outcome == HOLDS) == s.is_acyclic()
            assert verdict.outcome != UNKNOWN
            if verdict.outcome == FAILS:
                w = verdict.witness
                assert is_stochastically_monotone(w.system)
                assert w.certificate.lhs > w.certificate.sup


def test_component_reduction():
    d = catalog.diamond()
    chain2 = catalog.chain(2)
    two_chains = disjoint_union(chain2, catalog.chain(3, "r"))
    assert decide_equivalence(two_chains, d).outcome == HOLDS

    # a failing component pair dominates and the witness is lifted
    bad_index = disjoint_union(d, catalog.chain(2, "k"))
    v = decide_equivalence(bad_index, d)
    assert v.outcome == FAILS
    assert set(v.witness.system.index.elements) == set(bad_index.elements)
    assert is_stochastically_monotone(v.witness.system)
    assert not realize(v.witness.system).feasible

    # unknown dominates holds
    odd = disjoint_union(catalog.double_bowtie(), catalog.chain(2, "k"))
    v = decide_equivalence(odd, catalog.w_poset())
    assert v.outcome == UNKNOWN

    split_target = disjoint_union(catalog.chain(2, "l"), catalog.chain(2, "r"))
    assert decide_equivalence(d, split_target).outcome == HOLDS

    # disconnected target with one bad component; witness lifts to the union
    bad_target = disjoint_union(d, catalog.chain(2, "k"))
    v = decide_equivalence(d, bad_target)
    assert v.outcome == FAILS
    assert v.witness.system.target == bad_target
    assert not realize(v.witness.system).feasible


def test_dual_symmetry():
    for n in range(1, 5):
        for a in catalog.all_posets(n):
            if not a.is_connected():
                continue
            for s in (catalog.y_poset(), catalog.chain(3), catalog.diamond()):
                va = decide_equivalence(a, s)
                vb = decide_equivalence(a.dual(), s.dual())
                assert va.outcome == vb.outcome


def test_holds_verdicts_are_sound():
    rng = random.Random(61)
    cases = [
        (catalog.chain(3), catalog.diamond(), realize_acyclic),
        (catalog.diamond(), catalog.zigzag(5), realize_class_z),
        (catalog.bowtie(), catalog.y_poset(), realize_enlargeable),
        (catalog.bowtie(), catalog.w_poset(), realize_enlargeable),
    ]
    for index, target, coupler in cases:
        verdict = decide_equivalence(index, target)
        assert verdict.outcome == HOLDS
        for _ in range(10):
            sys_ = random_monotone_system(rng, index, target)
            coupling = coupler(sys_)
            assert coupling.has_marginals(sys_)
            assert realize(sys_).feasible


def test_fails_verdicts_carry_valid_witnesses():
    cases = [
        (catalog.diamond(), catalog.diamond()),
        (catalog.k_crown(3), catalog.y_poset()),
        (catalog.hexagon(), catalog.tall_y_tree()),
    ]
    for index, target in cases:
        verdict = decide_equivalence(index, target)
        assert verdict.outcome == FAILS
        w = verdict.witness
        assert w.system.index == index and w.system.target == target
        assert is_stochastically_monotone(w.system)
        assert w.certificate.lhs > w.certificate.sup
