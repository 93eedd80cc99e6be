import pytest

from posetprob import catalog
from posetprob.poset import (
    CapExceeded,
    CycleInRelation,
    DuplicateElement,
    EmptyPoset,
    Poset,
    SubposetView,
    UnknownElement,
    disjoint_union,
    find_induced_pattern,
    poset_isomorphic,
)

from oracles import brute_pattern_search, powerset_up_sets


def test_from_covers_diamond_transitivity_and_reduction():
    # a redundant x<w arc must be dropped by the reduction
    p = Poset.from_covers("xyzw", [("x", "y"), ("x", "z"), ("y", "w"), ("z", "w"), ("x", "w")])
    assert p.leq("x", "w")
    assert ("x", "w") not in p.covers()
    assert p == catalog.diamond()


def test_from_covers_singleton():
    p = Poset.from_covers(["a"], [])
    assert p.leq("a", "a")
    assert p.covers() == ()


def test_from_covers_rejections():
    with pytest.raises(CycleInRelation):
        Poset.from_covers("ab", [("a", "b"), ("b", "a")])
    with pytest.raises(DuplicateElement):
        Poset.from_covers(["a", "a"], [])
    with pytest.raises(UnknownElement):
        Poset.from_covers(["a"], [("a", "b")])


def test_up_sets_examples():
    single = Poset.from_covers(["a"], [])
    assert set(single.up_sets()) == {frozenset(), frozenset({"a"})}

    d = catalog.diamond()
    expected = {
        frozenset(),
        frozenset("w"),
        frozenset("yw"),
        frozenset("zw"),
        frozenset("yzw"),
        frozenset("xyzw"),
    }
    assert set(d.up_sets()) == expected
    assert len(catalog.bowtie().up_sets()) == 7


def test_up_sets_against_subset_filter_small_sweep():
    for n in range(1, 6):
        for p in catalog.all_posets(n):
            assert set(p.up_sets()) == powerset_up_sets(p)


def test_up_down_complementation():
    for n in range(1, 7):
        for p in catalog.all_posets(n):
            full = frozenset(p.elements)
            for u in p.up_sets():
                assert p.is_down_set(full - u)
            assert set(p.dual().up_sets()) == {full - u for u in p.up_sets()}


def test_up_set_cap():
    big = catalog.antichain(23)
    with pytest.raises(CapExceeded):
        big.up_sets()


def test_down_set_generated():
    d = catalog.diamond()
    assert d.down_set_generated(["w"]) == frozenset("xyzw")
    assert d.down_set_generated(["y"]) == frozenset("xy")
    assert d.down_set_generated([]) == frozenset()
    with pytest.raises(UnknownElement):
        d.down_set_generated(["nope"])


def test_dual():
    two = catalog.chain(2)
    assert two.dual().leq("c1", "c0")
    assert not two.dual().leq("c0", "c1")
    assert two.dual().dual() == two
    assert poset_isomorphic(catalog.diamond(), catalog.diamond().dual())
    y = catalog.y_poset()
    assert not poset_isomorphic(y, y.dual())


def test_disjoint_union_and_components():
    u = disjoint_union(Poset.from_covers(["a"], []), Poset.from_covers(["b"], []))
    assert u.covers() == () and len(u) == 2
    comps = u.components()
    assert [c.elements for c in comps] == [("a",), ("b",)]

    v = disjoint_union(catalog.chain(2, "l"), catalog.chain(3, "r"))
    assert len(v) == 5 and v.height() == 3
    parts = v.components()
    assert {poset_isomorphic(parts[0], catalog.chain(2)), poset_isomorphic(parts[1], catalog.chain(3))} == {True}

    with pytest.raises(DuplicateElement):
        disjoint_union(catalog.chain(2), catalog.chain(2))

    assert catalog.bowtie().components() == (catalog.bowtie(),)
    single = Poset.from_covers(["a"], [])
    assert single.components() == (single,)


def test_induced_subposet():
    d = catalog.diamond()
    assert d.induced(d.elements) == d
    two = d.induced(["x", "w"])
    assert two.leq("x", "w") and two.covers() == (("x", "w"),)
    with pytest.raises(UnknownElement):
        d.induced(["x", "nope"])


def test_induced_vs_cover_induced():
    chain3 = catalog.chain(3)
    induced = chain3.induced(["c0", "c2"])
    cover_view = chain3.cover_induced(["c0", "c2"])
    assert induced.leq("c0", "c2")
    assert not cover_view.leq("c0", "c2")

    view = SubposetView(chain3, ["c0", "c2"], "induced")
    assert view.is_induced() and not view.is_cover_induced()
    view2 = SubposetView(chain3, ["c0", "c2"], "cover-induced")
    assert view2.is_cover_induced() and not view2.is_induced()
    view3 = SubposetView(chain3, ["c0", "c1"], "explicit", relation=[("c0", "c1")])
    assert view3.is_induced() and view3.is_cover_induced()


def test_height():
    assert catalog.antichain(3).height() == 1
    assert catalog.diamond().height() == 3
    for k in (2, 3, 4):
        assert catalog.k_crown(k).height() == 2
    with pytest.raises(EmptyPoset):
        Poset((), ()).height()


def test_is_acyclic_and_cycle_witness():
    assert catalog.chain(4).is_acyclic()
    d = catalog.diamond()
    assert not d.is_acyclic()
    cyc = d.find_cover_cycle()
    assert cyc is not None and len(cyc) >= 4
    dv = catalog.double_v()
    assert dv.is_acyclic()
    assert find_induced_pattern(dv, catalog.bowtie()) is not None


def test_leaves():
    assert set(catalog.chain(2).leaves()) == {"c0", "c1"}
    assert len(catalog.y_poset().leaves()) == 3
    assert catalog.diamond().leaves() == ()


def test_find_induced_pattern_examples():
    d = catalog.diamond()
    emb = find_induced_pattern(d, d)
    assert emb == {e: e for e in d.elements}
    emb = find_induced_pattern(catalog.double_v(), catalog.bowtie())
    assert emb is not None and set(emb.values()) == {"x1", "x2", "z1", "z2"}
    assert find_induced_pattern(catalog.chain(5), catalog.bowtie()) is None


@pytest.mark.parametrize(
    "pattern",
    [catalog.diamond(), catalog.bowtie(), catalog.y_poset(), catalog.w_poset()],
    ids=["diamond", "bowtie", "y", "w"],
)
def test_pattern_search_matches_brute_force(pattern):
    for n in range(1, 7):
        for host in catalog.all_posets(n):
            assert (find_induced_pattern(host, pattern) is not None) == brute_pattern_search(
                host, pattern
            )


def test_closure_reduction_roundtrip():
    for n in range(1, 6):
        for p in catalog.all_posets(n):
            rebuilt = Poset.from_covers(p.elements, p.covers())
            assert rebuilt == p


def test_enumeration_counts():
    # published counts of posets / connected posets up to isomorphism
    assert [len(catalog.all_posets(n)) for n in range(1, 7)] == [1, 2, 5, 16, 63, 318]
    by_size = {n: len([p for p in catalog.all_posets(n) if p.is_connected()]) for n in range(1, 7)}
    assert [by_size[n] for n in range(1, 7)] == [1, 1, 3, 10, 44, 238]
