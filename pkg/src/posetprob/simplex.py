"""Exact phase-one simplex for equality-form feasibility.

Decides {x >= 0 : A x = b} with b >= 0 over exact rationals by minimizing
the sum of artificial variables with a revised simplex.  Bland's rule
(lowest eligible index in, lowest basic index out on ratio ties) guarantees
termination without perturbation.  On infeasibility the dual vector read
off the final basis is a Farkas witness: y.b > 0 and y.A_j <= 0 for every
column j.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)
ONE = Fraction(1)

Column = Sequence[tuple[int, Fraction]]


@dataclass(frozen=True)
class FeasibleResult:
    solution: dict[int, Fraction]  # column index -> value, zeros omitted


@dataclass(frozen=True)
class InfeasibleResult:
    dual: tuple[Fraction, ...]  # y with y.b > 0 and y.A_j <= 0 for all j
    objective: Fraction  # y.b, the artificial mass that cannot be removed


def solve_feasibility(
    num_rows: int,
    columns: Sequence[Column],
    rhs: Sequence[Fraction],
) -> FeasibleResult | InfeasibleResult:
    """Phase-one simplex over sparse columns; ``rhs`` must be nonnegative."""
    m = num_rows
    n = len(columns)
    b = [Fraction(v) for v in rhs]
    if any(v < 0 for v in b):
        raise ValueError("phase-one setup needs a nonnegative right-hand side")

    # start from the artificial identity basis; artificial i has id n + i
    basis = [n + i for i in range(m)]
    in_basis = [False] * n
    binv = [[ONE if i == j else ZERO for j in range(m)] for i in range(m)]

    while True:
        # y = c_B . B^-1 with c_B = 1 exactly on artificial basics
        y = [ZERO] * m
        for i in range(m):
            if basis[i] >= n:
                row = binv[i]
                for k in range(m):
                    if row[k]:
                        y[k] += row[k]

        entering = -1
        for j in range(n):
            if in_basis[j]:
                continue
            red = ZERO
            for r, a in columns[j]:
                if y[r]:
                    red -= y[r] * a
            if red < 0:
                entering = j
                break

        xb = [sum(binv[i][k] * b[k] for k in range(m) if b[k]) for i in range(m)]
        if entering < 0:
            objective = sum((xb[i] for i in range(m) if basis[i] >= n), ZERO)
            if objective > 0:
                return InfeasibleResult(dual=tuple(y), objective=objective)
            return FeasibleResult(
                solution={basis[i]: xb[i] for i in range(m) if basis[i] < n and xb[i]}
            )

        d = [ZERO] * m
        for r, a in columns[entering]:
            if a:
                for i in range(m):
                    if binv[i][r]:
                        d[i] += binv[i][r] * a

        leave = -1
        best = None
        for i in range(m):
            if d[i] > 0:
                ratio = xb[i] / d[i]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            raise AssertionError("phase-one objective unbounded below; impossible")

        piv = d[leave]
        row = binv[leave]
        for k in range(m):
            if row[k]:
                row[k] /= piv
        for i in range(m):
            if i != leave and d[i]:
                coef = d[i]
                dst = binv[i]
                for k in range(m):
                    if row[k]:
                        dst[k] -= coef * row[k]
        if basis[leave] < n:
            in_basis[basis[leave]] = False
        basis[leave] = entering
        in_basis[entering] = True
