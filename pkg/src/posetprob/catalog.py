"""Named small posets and exhaustive enumeration of small posets.

The named posets double as the classification patterns; ``pattern`` builds
them with their canonical labels.  ``connected_posets(n)`` enumerates all
connected posets with at most n elements up to isomorphism and is the input
generator for sweep-style checks.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .poset import OrderError, Poset, poset_isomorphic


def chain(n: int, prefix: str = "c") -> Poset:
    els = [f"{prefix}{i}" for i in range(n)]
    return Poset.from_covers(els, [(els[i], els[i + 1]) for i in range(n - 1)])


def antichain(n: int, prefix: str = "a") -> Poset:
    return Poset.from_covers([f"{prefix}{i}" for i in range(n)], [])


def diamond() -> Poset:
    """x < y, z and y, z < w."""
    return Poset.from_covers("xyzw", [("x", "y"), ("x", "z"), ("y", "w"), ("z", "w")])


def k_crown(k: int) -> Poset:
    """x_i < y_i and x_i < y_{i-1 mod k}; the 2-crown is the bowtie."""
    if k < 2:
        raise OrderError(f"crowns need k >= 2, got {k}")
    xs = [f"x{i}" for i in range(k)]
    ys = [f"y{i}" for i in range(k)]
    covers = [(xs[i], ys[i]) for i in range(k)] + [(xs[i], ys[(i - 1) % k]) for i in range(k)]
    return Poset.from_covers(xs + ys, covers)


def bowtie() -> Poset:
    return k_crown(2)


def y_poset() -> Poset:
    """x, y < z < w: two feet, a middle, and a single top."""
    return Poset.from_covers("xyzw", [("x", "z"), ("y", "z"), ("z", "w")])


def w_poset() -> Poset:
    """One element covered by three pairwise-incomparable elements."""
    return Poset.from_covers(["x", "y0", "y1", "y2"], [("x", "y0"), ("x", "y1"), ("x", "y2")])


def double_bowtie() -> Poset:
    """Two bowties glued along a shared column: a_i < b_j except (a1,b3), (a3,b1)."""
    els = ["a1", "a2", "a3", "b1", "b2", "b3"]
    covers = [
        (a, b)
        for a, b in itertools.product(["a1", "a2", "a3"], ["b1", "b2", "b3"])
        if (a, b) not in (("a1", "b3"), ("a3", "b1"))
    ]
    return Poset.from_covers(els, covers)


def double_v() -> Poset:
    """x1, x2 < y < z1, z2: acyclic but contains an induced bowtie."""
    return Poset.from_covers(
        ["x1", "x2", "y", "z1", "z2"],
        [("x1", "y"), ("x2", "y"), ("y", "z1"), ("y", "z2")],
    )


def zigzag(n: int, prefix: str = "v") -> Poset:
    """Fence on n elements: v0 < v1 > v2 < v3 ...; its cover graph is a path."""
    els = [f"{prefix}{i}" for i in range(n)]
    covers = []
    for i in range(n - 1):
        if i % 2 == 0:
            covers.append((els[i], els[i + 1]))
        else:
            covers.append((els[i + 1], els[i]))
    return Poset.from_covers(els, covers)


def hexagon() -> Poset:
    """Subdivided bowtie of height 3 (a 6-cycle cover graph), diamond-free."""
    return Poset.from_covers(
        ["a0", "a1", "b0", "b1", "c0", "c1"],
        [("a0", "c0"), ("c0", "b0"), ("a1", "b0"), ("a1", "c1"), ("c1", "b1"), ("a0", "b1")],
    )


def tall_y_tree() -> Poset:
    """Eight-element Class-Y tree used in examples: x,y < p < r > q > t(au)...

    Covers: t(au) < q < r, p < r, x < p, y < p, r < t, t < z, so x < z holds
    and the section of r when rooting at the leaf "tau" is an up-set.
    """
    return Poset.from_covers(
        ["tau", "q", "r", "p", "t", "x", "y", "z"],
        [("tau", "q"), ("q", "r"), ("p", "r"), ("x", "p"), ("y", "p"), ("r", "t"), ("t", "z")],
    )


def complete_bipartite(m: int, n: int) -> Poset:
    """a_1..a_m all below b_1..b_n."""
    a = [f"a{i}" for i in range(1, m + 1)]
    b = [f"b{j}" for j in range(1, n + 1)]
    return Poset.from_covers(a + b, list(itertools.product(a, b)))


def pattern(kind: str, k: int | None = None) -> Poset:
    """Canonical pattern poset for ``kind``.

    Kinds: diamond, bowtie, y-poset, w-poset, k-crown (needs k), double-bowtie.
    """
    if kind == "diamond":
        return diamond()
    if kind == "bowtie":
        return bowtie()
    if kind == "y-poset":
        return y_poset()
    if kind == "w-poset":
        return w_poset()
    if kind == "k-crown":
        if k is None:
            raise OrderError("k-crown pattern needs k")
        return k_crown(k)
    if kind == "double-bowtie":
        return double_bowtie()
    raise OrderError(f"unknown pattern kind: {kind!r}")


# -- enumeration up to isomorphism --------------------------------------


def _triangular_orders(n: int):
    """All transitive strict orders contained in the natural order of 0..n-1,
    yielded as tuples of strict-up masks.

    Every poset admits a labeling compatible with some linear extension, so
    scanning these covers every isomorphism class.
    """
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for bits in range(1 << len(pairs)):
        up = [0] * n
        for k, (i, j) in enumerate(pairs):
            if (bits >> k) & 1:
                up[i] |= 1 << j
        ok = True
        for i in range(n):
            acc = 0
            m = up[i]
            while m:
                low = m & -m
                acc |= up[low.bit_length() - 1]
                m ^= low
            if acc & ~up[i]:
                ok = False
                break
        if ok:
            yield tuple(up)


def _invariant(p: Poset) -> tuple:
    profile = sorted(
        (
            p._up[i].bit_count(),
            p._down[i].bit_count(),
            p._cover_up[i].bit_count(),
            p._cover_down[i].bit_count(),
        )
        for i in range(len(p))
    )
    return (len(p), len(p.covers()), p.height(), tuple(profile))


@lru_cache(maxsize=None)
def all_posets(n: int) -> tuple[Poset, ...]:
    """All posets on exactly n elements, up to isomorphism (n <= 6)."""
    if n == 0:
        return ()
    if n > 6:
        raise OrderError("poset enumeration supported up to 6 elements")
    els = tuple(f"e{i}" for i in range(n))
    seen: dict[tuple, list[Poset]] = {}
    result = []
    for up in _triangular_orders(n):
        masks = tuple(up[i] | (1 << i) for i in range(n))
        p = Poset(els, masks)
        key = _invariant(p)
        bucket = seen.setdefault(key, [])
        if any(poset_isomorphic(p, q) for q in bucket):
            continue
        bucket.append(p)
        result.append(p)
    return tuple(result)


@lru_cache(maxsize=None)
def connected_posets(n: int) -> tuple[Poset, ...]:
    """All connected posets with at most n elements, up to isomorphism."""
    out = []
    for size in range(1, n + 1):
        out.extend(p for p in all_posets(size) if p.is_connected())
    return tuple(out)
