"""Finite posets with exact order-theoretic primitives.

Ground sets are small (at most a few dozen elements), so the order relation
is kept as dense bitmask rows over a lexicographically sorted element tuple.
Every value is immutable after construction and every operation is a pure
function; posets are hashable and safe to share between threads.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional, Sequence


class OrderError(Exception):
    """Base class for order-theoretic errors."""


class DuplicateElement(OrderError):
    pass


class UnknownElement(OrderError):
    pass


class CycleInRelation(OrderError):
    """Transitive closure of the input produced x <= y <= x with x != y."""


class EmptyPoset(OrderError):
    pass


class CapExceeded(OrderError):
    """An enumeration would exceed its configured size cap."""


# Up-set enumeration refuses ground sets larger than this.
UP_SET_ELEMENT_CAP = 22


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Poset:
    """Immutable finite poset.

    ``elements`` is the lexicographically sorted ground set. ``_up[i]`` is
    the bitmask of indices j with elements[i] <= elements[j] (reflexive).
    """

    __slots__ = (
        "elements",
        "_index",
        "_up",
        "_down",
        "_cover_up",
        "_cover_down",
        "_hash",
        "_cache",
    )

    def __init__(self, elements: tuple[str, ...], up_masks: tuple[int, ...]):
        self.elements = elements
        self._index = {e: i for i, e in enumerate(elements)}
        self._up = up_masks
        n = len(elements)
        down = [0] * n
        for i in range(n):
            for j in _bits(up_masks[i]):
                down[j] |= 1 << i
        self._down = tuple(down)
        cover_up = []
        for i in range(n):
            strict = up_masks[i] & ~(1 << i)
            mask = 0
            for j in _bits(strict):
                if not (strict & (self._down[j] & ~(1 << j))):
                    mask |= 1 << j
            cover_up.append(mask)
        self._cover_up = tuple(cover_up)
        cover_down = [0] * n
        for i in range(n):
            for j in _bits(cover_up[i]):
                cover_down[j] |= 1 << i
        self._cover_down = tuple(cover_down)
        self._hash = hash((elements, up_masks))
        self._cache: dict = {}

    # -- construction --------------------------------------------------

    @classmethod
    def from_covers(cls, elements: Iterable[str], covers: Iterable[tuple[str, str]]) -> "Poset":
        """Build a poset whose order is the reflexive-transitive closure of
        the cover arcs (x, y) meaning y covers x.  Redundant arcs are
        dropped when the cover relation is recomputed."""
        elems = list(elements)
        if len(set(elems)) != len(elems):
            dup = sorted(e for e in set(elems) if elems.count(e) > 1)
            raise DuplicateElement(f"duplicate element identifiers: {dup}")
        order = tuple(sorted(elems))
        index = {e: i for i, e in enumerate(order)}
        n = len(order)
        succ = [0] * n
        for x, y in covers:
            if x not in index:
                raise UnknownElement(f"unknown element in cover pair: {x!r}")
            if y not in index:
                raise UnknownElement(f"unknown element in cover pair: {y!r}")
            succ[index[x]] |= 1 << index[y]
        up = _reach_closure(succ)
        for i in range(n):
            for j in _bits(up[i] & ~(1 << i)):
                if up[j] & (1 << i):
                    raise CycleInRelation(
                        f"{order[i]} <= {order[j]} <= {order[i]} violates antisymmetry"
                    )
        return cls(order, tuple(up))

    @classmethod
    def from_relation(cls, elements: Iterable[str], leq_pairs: Iterable[tuple[str, str]]) -> "Poset":
        """Build a poset from arbitrary <=-pairs; the relation is closed
        transitively and checked for antisymmetry."""
        return cls.from_covers(elements, leq_pairs)

    # -- basics --------------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, e: str) -> bool:
        return e in self._index

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Poset)
            and self.elements == other.elements
            and self._up == other._up
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        pairs = " ".join(f"{x}<{y}" for x, y in self.covers())
        return f"Poset({' '.join(self.elements)} | {pairs})"

    def index_of(self, e: str) -> int:
        try:
            return self._index[e]
        except KeyError:
            raise UnknownElement(f"unknown element: {e!r}") from None

    def leq(self, x: str, y: str) -> bool:
        return bool(self._up[self.index_of(x)] & (1 << self.index_of(y)))

    def lt(self, x: str, y: str) -> bool:
        return x != y and self.leq(x, y)

    def comparable(self, x: str, y: str) -> bool:
        return self.leq(x, y) or self.leq(y, x)

    def covers(self) -> tuple[tuple[str, str], ...]:
        """Hasse-diagram arcs (x, y) with y covering x, sorted."""
        out = []
        for i, e in enumerate(self.elements):
            for j in _bits(self._cover_up[i]):
                out.append((e, self.elements[j]))
        return tuple(sorted(out))

    def covers_above(self, x: str) -> tuple[str, ...]:
        return tuple(self.elements[j] for j in _bits(self._cover_up[self.index_of(x)]))

    def covers_below(self, x: str) -> tuple[str, ...]:
        return tuple(self.elements[j] for j in _bits(self._cover_down[self.index_of(x)]))

    def neighbors(self, x: str) -> tuple[str, ...]:
        i = self.index_of(x)
        return tuple(self.elements[j] for j in _bits(self._cover_up[i] | self._cover_down[i]))

    def degree(self, x: str) -> int:
        i = self.index_of(x)
        return (self._cover_up[i] | self._cover_down[i]).bit_count()

    def up_set_of(self, x: str) -> frozenset[str]:
        return self._set(self._up[self.index_of(x)])

    def down_set_of(self, x: str) -> frozenset[str]:
        return self._set(self._down[self.index_of(x)])

    def down_set_generated(self, b: Iterable[str]) -> frozenset[str]:
        """All xi with xi <= eta for some eta in b."""
        mask = 0
        for e in b:
            mask |= self._down[self.index_of(e)]
        return self._set(mask)

    def up_set_generated(self, b: Iterable[str]) -> frozenset[str]:
        mask = 0
        for e in b:
            mask |= self._up[self.index_of(e)]
        return self._set(mask)

    def minimal_elements(self) -> tuple[str, ...]:
        return tuple(e for i, e in enumerate(self.elements) if not self._cover_down[i])

    def maximal_elements(self) -> tuple[str, ...]:
        return tuple(e for i, e in enumerate(self.elements) if not self._cover_up[i])

    def _set(self, mask: int) -> frozenset[str]:
        return frozenset(self.elements[i] for i in _bits(mask))

    def _mask(self, subset: Iterable[str]) -> int:
        mask = 0
        for e in subset:
            mask |= 1 << self.index_of(e)
        return mask

    # -- derived structure ----------------------------------------------

    def linear_extension(self) -> tuple[str, ...]:
        """Deterministic linear extension (lex-min minimal element first)."""
        if "linext" in self._cache:
            return self._cache["linext"]
        n = len(self.elements)
        remaining = (1 << n) - 1
        out = []
        while remaining:
            for i in _bits(remaining):
                if not (self._cover_down[i] & remaining):
                    out.append(self.elements[i])
                    remaining &= ~(1 << i)
                    break
        self._cache["linext"] = tuple(out)
        return self._cache["linext"]

    def up_set_masks(self) -> tuple[int, ...]:
        """All up-sets as bitmasks, sorted by (size, element tuple)."""
        if "upmasks" in self._cache:
            return self._cache["upmasks"]
        n = len(self.elements)
        if n > UP_SET_ELEMENT_CAP:
            raise CapExceeded(
                f"up-set enumeration capped at {UP_SET_ELEMENT_CAP} elements, got {n}"
            )
        order = [self.index_of(e) for e in self.linear_extension()]
        acc: list[int] = []

        def rec(pos: int, mask: int) -> None:
            if pos < 0:
                acc.append(mask)
                return
            i = order[pos]
            rec(pos - 1, mask)
            # include i only when everything above it is already in
            if self._cover_up[i] & ~mask == 0:
                rec(pos - 1, mask | (1 << i))

        rec(len(order) - 1, 0)
        acc.sort(key=lambda m: (m.bit_count(), tuple(sorted(self._set(m)))))
        self._cache["upmasks"] = tuple(acc)
        return self._cache["upmasks"]

    def up_sets(self) -> tuple[frozenset[str], ...]:
        """All up-sets, deterministic order, including the empty and full set."""
        if "upsets" not in self._cache:
            self._cache["upsets"] = tuple(self._set(m) for m in self.up_set_masks())
        return self._cache["upsets"]

    def down_sets(self) -> tuple[frozenset[str], ...]:
        full = frozenset(self.elements)
        return tuple(full - u for u in self.up_sets())

    def is_up_set(self, subset: Iterable[str]) -> bool:
        mask = self._mask(subset)
        return all(self._up[i] & ~mask == 0 for i in _bits(mask))

    def is_down_set(self, subset: Iterable[str]) -> bool:
        mask = self._mask(subset)
        return all(self._down[i] & ~mask == 0 for i in _bits(mask))

    def dual(self) -> "Poset":
        """Same ground set with the order reversed."""
        return Poset(self.elements, self._down)

    def induced(self, ground: Iterable[str]) -> "Poset":
        """Induced subposet: the restriction of <= to ``ground``."""
        sub = tuple(sorted(set(ground)))
        for e in sub:
            self.index_of(e)
        keep = {e: k for k, e in enumerate(sub)}
        masks = []
        for e in sub:
            m = 0
            for j in _bits(self._up[self.index_of(e)]):
                other = self.elements[j]
                if other in keep:
                    m |= 1 << keep[other]
            masks.append(m)
        return Poset(sub, tuple(masks))

    def cover_induced(self, ground: Iterable[str]) -> "Poset":
        """Subposet via induced cover subgraph: closure of the parent cover
        arcs that stay inside ``ground``."""
        sub = tuple(sorted(set(ground)))
        inside = set(sub)
        arcs = [(x, y) for x, y in self.covers() if x in inside and y in inside]
        return Poset.from_covers(sub, arcs)

    def is_connected(self) -> bool:
        return len(self.component_masks()) <= 1

    def component_masks(self) -> tuple[int, ...]:
        if "comps" in self._cache:
            return self._cache["comps"]
        n = len(self.elements)
        seen = 0
        comps = []
        for i in range(n):
            if seen & (1 << i):
                continue
            frontier = 1 << i
            comp = 0
            while frontier:
                comp |= frontier
                nxt = 0
                for j in _bits(frontier):
                    nxt |= self._cover_up[j] | self._cover_down[j]
                frontier = nxt & ~comp
            comps.append(comp)
            seen |= comp
        self._cache["comps"] = tuple(comps)
        return self._cache["comps"]

    def components(self) -> tuple["Poset", ...]:
        """Connected components of the cover graph, as induced subposets."""
        return tuple(self.induced(self._set(m)) for m in self.component_masks())

    def height(self) -> int:
        """Number of elements in a maximum-sized chain."""
        if not self.elements:
            raise EmptyPoset("height of the empty poset is undefined")
        depth = {e: 1 for e in self.elements}
        for e in self.linear_extension():
            i = self.index_of(e)
            for j in _bits(self._cover_down[i]):
                depth[e] = max(depth[e], depth[self.elements[j]] + 1)
        return max(depth.values())

    def is_acyclic(self) -> bool:
        """True iff the cover graph (taken undirected) is a forest."""
        edges = sum(m.bit_count() for m in self._cover_up)
        return edges == len(self.elements) - len(self.component_masks())

    def find_cover_cycle(self) -> Optional[tuple[str, ...]]:
        """Some undirected cover-graph cycle (length >= 4), or None.

        Deterministic: DFS from the lex-least vertex, lex neighbor order.
        """
        if self.is_acyclic():
            return None
        n = len(self.elements)
        parent: dict[int, Optional[int]] = {}
        for root in range(n):
            if root in parent:
                continue
            parent[root] = None
            stack = [root]
            while stack:
                v = stack.pop()
                for w in sorted(_bits(self._cover_up[v] | self._cover_down[v])):
                    if w not in parent:
                        parent[w] = v
                        stack.append(w)
                    elif w != parent[v]:
                        # walk both ancestor chains up to their meeting point
                        anc_v = []
                        a: Optional[int] = v
                        while a is not None:
                            anc_v.append(a)
                            a = parent[a]
                        path_w = [w]
                        b: Optional[int] = w
                        while b not in anc_v:
                            b = parent[b]
                            assert b is not None
                            path_w.append(b)
                        meet = path_w[-1]
                        cyc = anc_v[: anc_v.index(meet) + 1] + path_w[-2::-1]
                        if len(cyc) >= 4:
                            return tuple(self.elements[i] for i in cyc)
            break  # only need the first component containing a cycle
        # a cycle may live in a later component
        for comp in self.components():
            if not comp.is_acyclic() and len(comp) < len(self):
                sub = comp.find_cover_cycle()
                if sub:
                    return sub
        return None

    def leaves(self) -> tuple[str, ...]:
        """All cover-graph vertices of degree one."""
        return tuple(e for e in self.elements if self.degree(e) == 1)


def _reach_closure(succ: Sequence[int]) -> list[int]:
    """Reflexive-transitive closure of a successor-mask digraph."""
    n = len(succ)
    up = [succ[i] | (1 << i) for i in range(n)]
    changed = True
    while changed:
        changed = False
        for i in range(n):
            acc = up[i]
            for j in _bits(acc):
                acc |= up[j]
            if acc != up[i]:
                up[i] = acc
                changed = True
    return up


def disjoint_union(p: Poset, q: Poset, prefixes: tuple[str, str] = ("", "")) -> Poset:
    """Disjoint union; comparabilities are exactly those within p or within q.

    Optional prefixes rename the two ground sets; a collision is an error.
    """
    pa, pb = prefixes
    left = {e: pa + e for e in p.elements}
    right = {e: pb + e for e in q.elements}
    names = list(left.values()) + list(right.values())
    if len(set(names)) != len(names):
        raise DuplicateElement("ground sets collide in disjoint union")
    covers = [(left[x], left[y]) for x, y in p.covers()]
    covers += [(right[x], right[y]) for x, y in q.covers()]
    return Poset.from_covers(names, covers)


def find_induced_pattern(host: Poset, pattern: Poset) -> Optional[dict[str, str]]:
    """First injective map phi with x <= y in pattern iff phi(x) <= phi(y).

    Deterministic: pattern elements in their canonical order, host candidates
    in lexicographic order, depth-first.
    """
    pel = pattern.elements
    hel = host.elements
    np_, nh = len(pel), len(hel)
    if np_ > nh:
        return None
    assign: list[int] = []

    def ok(i: int, cand: int) -> bool:
        for k in range(i):
            a = assign[k]
            if a == cand:
                return False
            pr = bool(pattern._up[k] & (1 << i)), bool(pattern._up[i] & (1 << k))
            hr = bool(host._up[a] & (1 << cand)), bool(host._up[cand] & (1 << a))
            if pr != hr:
                return False
        return True

    def rec(i: int) -> bool:
        if i == np_:
            return True
        for cand in range(nh):
            if ok(i, cand):
                assign.append(cand)
                if rec(i + 1):
                    return True
                assign.pop()
        return False

    if rec(0):
        return {pel[k]: hel[assign[k]] for k in range(np_)}
    return None


def poset_isomorphic(p: Poset, q: Poset) -> bool:
    """True iff p and q are order-isomorphic."""
    if len(p) != len(q):
        return False
    if sorted(m.bit_count() for m in p._up) != sorted(m.bit_count() for m in q._up):
        return False
    return find_induced_pattern(q, p) is not None


class SubposetView:
    """A subposet of ``parent`` on ``ground`` in one of three modes.

    induced: x <= y in the view iff x <= y in the parent.
    cover-induced: the view's cover graph is the induced subgraph of the
      parent's cover graph.
    explicit: an arbitrary subposet given by its own relation (must be
      implied by the parent's order).
    """

    __slots__ = ("parent", "ground", "mode", "_poset")

    def __init__(
        self,
        parent: Poset,
        ground: Iterable[str],
        mode: str = "induced",
        relation: Optional[Iterable[tuple[str, str]]] = None,
    ):
        ground = tuple(sorted(set(ground)))
        for e in ground:
            parent.index_of(e)
        if mode == "induced":
            poset = parent.induced(ground)
        elif mode == "cover-induced":
            poset = parent.cover_induced(ground)
        elif mode == "explicit":
            if relation is None:
                raise OrderError("explicit mode requires a relation")
            poset = Poset.from_covers(ground, relation)
            for x, y in poset.covers():
                if not parent.leq(x, y):
                    raise OrderError(f"explicit relation {x}<{y} not implied by parent")
        else:
            raise OrderError(f"unknown subposet mode: {mode!r}")
        self.parent = parent
        self.ground = ground
        self.mode = mode
        self._poset = poset

    def poset(self) -> Poset:
        return self._poset

    def is_induced(self) -> bool:
        return self._poset == self.parent.induced(self.ground)

    def is_cover_induced(self) -> bool:
        return self._poset == self.parent.cover_induced(self.ground)
