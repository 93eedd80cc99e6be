"""Exact-rational toolkit for stochastic dominance and monotone couplings
on finite posets: order primitives, the B/Y/W/Z classification, coupling
construction with certificates, and the monotonicity-equivalence decision."""

from .poset import (
    CapExceeded,
    CycleInRelation,
    DuplicateElement,
    EmptyPoset,
    OrderError,
    Poset,
    SubposetView,
    UnknownElement,
    disjoint_union,
    find_induced_pattern,
    poset_isomorphic,
)
from .structure import (
    ClassLabel,
    CycleWitness,
    Obstruction,
    PathWitness,
    RootedTree,
    check_enlargeable,
    classify,
    cycle_witness,
    enlarge_to_acyclic,
    induced_cycle,
    induced_cycle_height3,
    induced_path,
    rooted_tree,
    subdivided_diamond,
    weld,
)
from .measure import (
    DistFn,
    Measure,
    MeasureSystem,
    df_leq,
    distribution_function,
    down_set_dominance,
    dominance_violation,
    insert_middle,
    is_stochastically_monotone,
    measure_from_distribution,
    monotonicity_violation,
    stochastically_leq,
)
from .coupling import (
    Coupling,
    InfeasibilityCertificate,
    MonotoneSet,
    RealizabilityResult,
    UpwardKernel,
    certificate_value,
    monotone_elements,
    pair_coupling,
    realize,
    realize_acyclic,
    realize_class_z,
    realize_enlargeable,
    strassen_pair,
)
from .witness import (
    Counterexample,
    counterexample_class_b,
    counterexample_class_y,
    extend_crown,
    fixture,
)
from .decide import Verdict, decide_equivalence, decide_markov

__all__ = [name for name in dir() if not name.startswith("_")]
