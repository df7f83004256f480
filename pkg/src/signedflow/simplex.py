"""Exact two-phase simplex over the integers.

The tableau is kept fraction-free: every entry is an integer and the
true value is entry/den for one shared positive denominator (integer
pivoting as in reverse-search vertex enumeration codes).  Divisions in
the pivot rule are exact by the subdeterminant identity; a nonzero
remainder would mean corruption and raises.

Bland's smallest-index rule everywhere, so the pivot sequence (and hence
the returned optimal basis) is fully deterministic and finite.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import InvariantViolation

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def solve_lp(
    c: Sequence[int],
    a_eq: Sequence[Sequence[int]],
    b_eq: Sequence[int],
    a_ub: Sequence[Sequence[int]],
    b_ub: Sequence[int],
) -> tuple[str, list[Fraction] | None, Fraction | None]:
    """Minimize c.x subject to a_eq.x == b_eq, a_ub.x <= b_ub, x >= 0.

    All inputs must be integers.  Returns (status, x, objective).
    """
    p = len(c)
    rows: list[list[int]] = []
    rhs: list[int] = []
    kinds: list[str] = []  # "eq" or "ub"
    for a, b in zip(a_eq, b_eq):
        if len(a) != p:
            raise ValueError("a_eq row length mismatch")
        rows.append(list(a))
        rhs.append(b)
        kinds.append("eq")
    for a, b in zip(a_ub, b_ub):
        if len(a) != p:
            raise ValueError("a_ub row length mismatch")
        rows.append(list(a))
        rhs.append(b)
        kinds.append("ub")
    r = len(rows)

    # column layout: structural | slacks (ub rows) | artificials (as needed)
    num_slack = sum(1 for kd in kinds if kd == "ub")
    slack_col = {}
    j = p
    for i, kd in enumerate(kinds):
        if kd == "ub":
            slack_col[i] = j
            j += 1
    art_col = {}
    basis: list[int] = [0] * r
    tab: list[list[int]] = []
    total_pre_art = p + num_slack
    # count artificials first so the row width is known
    needs_art = []
    for i, kd in enumerate(kinds):
        neg = rhs[i] < 0
        if kd == "eq" or neg:
            needs_art.append(i)
    width = total_pre_art + len(needs_art) + 1  # + rhs column
    for i in range(r):
        row = [0] * width
        sign = -1 if rhs[i] < 0 else 1
        for jj in range(p):
            row[jj] = sign * rows[i][jj]
        if i in slack_col:
            row[slack_col[i]] = sign
        row[-1] = sign * rhs[i]
        tab.append(row)
    for idx, i in enumerate(needs_art):
        col = total_pre_art + idx
        art_col[i] = col
        tab[i][col] = 1
        basis[i] = col
    for i in range(r):
        if i not in art_col:
            basis[i] = slack_col[i]
    art_cols = set(art_col.values())
    den = 1

    def pivot(r_i: int, c_j: int) -> int:
        nonlocal den
        piv = tab[r_i][c_j]
        rowr = tab[r_i]
        for i in range(len(tab)):
            if i == r_i:
                continue
            rowi = tab[i]
            ric = rowi[c_j]
            for jj in range(width):
                q, rem = divmod(rowi[jj] * piv - ric * rowr[jj], den)
                if rem:
                    raise InvariantViolation("inexact division in pivot")
                rowi[jj] = q
        den = piv
        basis[r_i] = c_j
        return piv

    def run_phase(obj: list[int], allowed) -> str:
        # obj is the scaled reduced-cost row; optimal when all >= 0
        while True:
            enter = -1
            for jj in range(total_pre_art + len(needs_art)):
                if jj in allowed and obj[jj] < 0:
                    enter = jj
                    break
            if enter < 0:
                return OPTIMAL
            # ratio test over rows with positive pivot column entry
            best_i = -1
            for i in range(r):
                a = tab[i][enter]
                if a <= 0:
                    continue
                if best_i < 0:
                    best_i = i
                    continue
                lhs = tab[i][-1] * tab[best_i][enter]
                rhs_ = tab[best_i][-1] * a
                if lhs < rhs_ or (lhs == rhs_ and basis[i] < basis[best_i]):
                    best_i = i
            if best_i < 0:
                return UNBOUNDED
            piv = tab[best_i][enter]
            # update objective row with the same elimination step
            oc = obj[enter]
            rowr = tab[best_i]
            for jj in range(width):
                q, rem = divmod(obj[jj] * piv - oc * rowr[jj], den)
                if rem:
                    raise InvariantViolation("inexact division in objective row")
                obj[jj] = q
            pivot(best_i, enter)

    # ---- phase 1: drive artificials to zero
    if needs_art:
        obj1 = [0] * width
        for i in art_col:
            for jj in range(width):
                obj1[jj] -= tab[i][jj]
        for col in art_cols:
            obj1[col] = 0
        allowed = set(range(total_pre_art + len(needs_art)))
        status = run_phase(obj1, allowed)
        if status != OPTIMAL:
            raise InvariantViolation("phase 1 cannot be unbounded")
        if obj1[-1] != 0:
            return INFEASIBLE, None, None
        # remove leftover artificials from the basis where possible
        for i in range(r):
            if basis[i] in art_cols:
                for jj in range(total_pre_art):
                    if tab[i][jj] != 0:
                        if tab[i][jj] < 0:
                            for j2 in range(width):
                                tab[i][j2] = -tab[i][j2]
                        pivot(i, jj)
                        break
                # a row that stays artificial-basic is redundant (b == 0)

    # ---- phase 2
    obj2 = [0] * width
    for jj in range(p):
        obj2[jj] = c[jj] * den
    for i in range(r):
        cb = c[basis[i]] if basis[i] < p else 0
        if cb:
            for jj in range(width):
                obj2[jj] -= cb * tab[i][jj]
    allowed2 = set(range(total_pre_art))
    status = run_phase(obj2, allowed2)
    if status == UNBOUNDED:
        return UNBOUNDED, None, None
    x = [Fraction(0)] * p
    for i in range(r):
        if basis[i] < p:
            x[basis[i]] = Fraction(tab[i][-1], den)
    objective = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    return OPTIMAL, x, objective
