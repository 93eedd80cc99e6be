"""Top-level decision procedure for monotonicity equivalence of a pair
(index poset, target poset): does every stochastically monotone system of
measures admit a coupling on the monotone maps?

The answer is reduced over connected components, then decided by the index's
acyclicity and the target's class; a failing verdict always carries a
certified counterexample, a holding verdict names the coupler whose
preconditions the pair satisfies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .measure import Measure, MeasureSystem
from .poset import EmptyPoset, Poset
from .structure import check_enlargeable, classify
from .witness import Counterexample, certify, counterexample_class_b, counterexample_class_y

__all__ = ["Verdict", "decide_equivalence", "decide_markov"]

HOLDS = "holds"
FAILS = "fails"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class Verdict:
    """Outcome of the equivalence decision.

    ``coupler`` names the construction guaranteed to work on every
    stochastically monotone system ("acyclic" | "class-z" | "enlargeable",
    or "componentwise" for disconnected inputs with mixed couplers);
    ``witness`` carries a certified counterexample when the pair fails.
    """

    outcome: str
    reason: str
    coupler: Optional[str] = None
    witness: Optional[Counterexample] = None
    pairs: tuple["Verdict", ...] = field(default_factory=tuple)


def _decide_connected(a: Poset, s: Poset) -> Verdict:
    if a.is_acyclic():
        return Verdict(HOLDS, "index-acyclic", coupler="acyclic")
    label = classify(s)
    if label.label == "B":
        return Verdict(FAILS, "target-class-b", witness=counterexample_class_b(a, s))
    if label.label == "Z":
        return Verdict(HOLDS, "target-class-z", coupler="class-z")
    enlargeable = check_enlargeable(a) is None
    if label.label == "Y":
        if enlargeable:
            return Verdict(HOLDS, "index-enlargeable", coupler="enlargeable")
        return Verdict(FAILS, "target-class-y", witness=counterexample_class_y(a, s))
    # Class W: enlargeable indexes couple; the rest is out of scope here
    if enlargeable:
        return Verdict(HOLDS, "index-enlargeable", coupler="enlargeable")
    return Verdict(UNKNOWN, "class-w-not-enlargeable")


def _lift_witness(a: Poset, s: Poset, part: Counterexample) -> Counterexample:
    """Extend a component counterexample to the full pair: every other index
    element gets the point mass at the target's lex-least element."""
    filler = Measure.point(s, s.elements[0])
    assign = {}
    for alpha in a.elements:
        if alpha in part.system.index:
            assign[alpha] = Measure(s, dict(part.system.assignment[alpha].mass))
        else:
            assign[alpha] = filler
    sys_full = MeasureSystem(a, s, assign)
    return certify(sys_full, part.provenance + "+lifted", part.seed_index)


def decide_equivalence(a: Poset, s: Poset) -> Verdict:
    """Decide whether stochastic monotonicity implies a monotone coupling for
    every system on the pair (a, s).

    Disconnected inputs reduce to all component pairs; a failing pair
    dominates an unknown one, which dominates holding pairs.
    """
    if not a.elements or not s.elements:
        raise EmptyPoset("equivalence needs nonempty posets")
    a_parts = a.components()
    s_parts = s.components()
    if len(a_parts) == 1 and len(s_parts) == 1:
        return _decide_connected(a, s)

    sub = []
    worst: Optional[tuple[Verdict, Poset, Poset]] = None
    for ap in a_parts:
        for sp in s_parts:
            v = _decide_connected(ap, sp)
            sub.append(v)
            if v.outcome == FAILS and (worst is None or worst[0].outcome != FAILS):
                worst = (v, ap, sp)
            elif v.outcome == UNKNOWN and worst is None:
                worst = (v, ap, sp)
    if worst is not None and worst[0].outcome == FAILS:
        v, ap, sp = worst
        assert v.witness is not None
        lifted = v.witness if (ap == a and sp == s) else _lift_witness(a, s, v.witness)
        return Verdict(FAILS, v.reason, witness=lifted, pairs=tuple(sub))
    if worst is not None:
        return Verdict(UNKNOWN, worst[0].reason, pairs=tuple(sub))
    couplers = {v.coupler for v in sub}
    name = couplers.pop() if len(couplers) == 1 else "componentwise"
    return Verdict(HOLDS, "all-component-pairs-hold", coupler=name, pairs=tuple(sub))


def decide_markov(s: Poset) -> Verdict:
    """Equivalence for a transition kernel on s: the pair (s, s).

    The outcome provably matches acyclicity of s; that identity is asserted
    here as a cross-check.
    """
    verdict = decide_equivalence(s, s)
    expected = all(comp.is_acyclic() for comp in s.components())
    assert (verdict.outcome == HOLDS) == expected, "self-pair verdict contradicts acyclicity"
    return verdict
