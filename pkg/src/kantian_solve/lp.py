"""Dense two-phase tableau simplex with Bland's anti-cycling rule.

Problems have the form::

    maximize    c . x
    subject to  a_k . x  (<= | = | >=)  b_k
                x >= 0

The welfare solvers need a deterministic answer when the optimum is not
unique.  ``solve`` therefore accepts optional *tie-break* objectives that are
maximized in turn over the optimal face of the previous ones.  The face is
kept by fixing every nonbasic column whose reduced cost is strictly negative
(complementary slackness), so later stages never degrade earlier optima.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import NumericalError

log = logging.getLogger(__name__)

FEAS_TOL = 1e-8
OPT_TOL = 1e-9
PIVOT_TOL = 1e-11
MAX_PIVOTS = 50_000


class Relation(str, enum.Enum):
    LE = "<="
    EQ = "="
    GE = ">="


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Constraint:
    coefficients: np.ndarray
    relation: Relation
    bound: float


@dataclass
class LinearProgram:
    """Maximize ``objective . x`` subject to ``constraints`` and ``x >= 0``."""

    objective: np.ndarray
    constraints: list[Constraint] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.objective = np.asarray(self.objective, dtype=float)
        if self.objective.ndim != 1:
            raise ValueError("objective must be a vector")
        if not np.all(np.isfinite(self.objective)):
            raise ValueError("objective coefficients must be finite")

    @property
    def num_vars(self) -> int:
        return self.objective.shape[0]

    def add(self, coefficients: Sequence[float], relation: str | Relation, bound: float) -> LinearProgram:
        coeffs = np.asarray(coefficients, dtype=float)
        if coeffs.shape != (self.num_vars,):
            raise ValueError(f"constraint has {coeffs.shape} coefficients, expected {self.num_vars}")
        if not np.all(np.isfinite(coeffs)) or not np.isfinite(bound):
            raise ValueError("constraint data must be finite")
        self.constraints.append(Constraint(coeffs, Relation(relation), float(bound)))
        return self

    def le(self, coefficients, bound) -> LinearProgram:
        return self.add(coefficients, Relation.LE, bound)

    def ge(self, coefficients, bound) -> LinearProgram:
        return self.add(coefficients, Relation.GE, bound)

    def eq(self, coefficients, bound) -> LinearProgram:
        return self.add(coefficients, Relation.EQ, bound)

    def max_violation(self, x: np.ndarray) -> float:
        worst = float(max(0.0, -x.min())) if x.size else 0.0
        for con in self.constraints:
            lhs = float(con.coefficients @ x)
            if con.relation is Relation.LE:
                gap = lhs - con.bound
            elif con.relation is Relation.GE:
                gap = con.bound - lhs
            else:
                gap = abs(lhs - con.bound)
            worst = max(worst, gap)
        return worst


@dataclass
class LpSolution:
    status: Status
    x: np.ndarray | None = None
    value: float | None = None
    tiebreak_values: list[float] = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


class _Tableau:
    """Constraint rows ``[B^-1 A | B^-1 b]`` with the current basis."""

    def __init__(self, rows: np.ndarray, rhs: np.ndarray, basis: list[int]):
        self.t = np.hstack([rows, rhs[:, None]])
        self.basis = basis
        self.pivots = 0
        self.degenerate_pivots = 0
        self.min_pivot = np.inf

    @property
    def ncols(self) -> int:
        return self.t.shape[1] - 1

    def reduced_costs(self, cost: np.ndarray) -> np.ndarray:
        return cost - cost[self.basis] @ self.t[:, :-1]

    def pivot(self, r: int, c: int) -> None:
        piv = self.t[r, c]
        self.min_pivot = min(self.min_pivot, abs(piv))
        if abs(self.t[r, -1]) <= FEAS_TOL:
            self.degenerate_pivots += 1
        self.t[r] /= piv
        col = self.t[:, c].copy()
        col[r] = 0.0
        self.t -= np.outer(col, self.t[r])
        self.t[:, c] = 0.0
        self.t[r, c] = 1.0
        self.basis[r] = c
        self.pivots += 1

    def optimize(self, cost: np.ndarray, allowed: np.ndarray) -> Status:
        """Maximize ``cost`` over the allowed columns with Bland's rule."""
        while True:
            if self.pivots > MAX_PIVOTS:
                raise NumericalError("simplex exceeded the pivot limit")
            d = self.reduced_costs(cost)
            candidates = np.flatnonzero(allowed & (d > OPT_TOL))
            if candidates.size == 0:
                return Status.OPTIMAL
            c = int(candidates[0])
            col = self.t[:, c]
            rows = np.flatnonzero(col > PIVOT_TOL)
            if rows.size == 0:
                return Status.UNBOUNDED
            ratios = self.t[rows, -1] / col[rows]
            best = ratios.min()
            tied = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
            # Bland: among tied rows leave the variable with the smallest index
            r = int(min(tied, key=lambda k: self.basis[k]))
            self.pivot(r, c)

    def solution(self, n: int) -> np.ndarray:
        x = np.zeros(self.ncols)
        x[self.basis] = self.t[:, -1]
        return x[:n]


def solve(lp: LinearProgram, tiebreak: Sequence[Sequence[float]] = ()) -> LpSolution:
    """Solve ``lp``; optional ``tiebreak`` objectives refine among optimal points.

    Deterministic for a fixed input.  Raises :class:`NumericalError` when the
    returned point fails the feasibility check, so degeneracy is never silent.
    """
    n = lp.num_vars
    m = len(lp.constraints)
    rows = np.zeros((m, n))
    rhs = np.zeros(m)
    rels = []
    for k, con in enumerate(lp.constraints):
        sign = -1.0 if con.bound < 0 else 1.0
        rows[k] = sign * con.coefficients
        rhs[k] = sign * con.bound
        rel = con.relation
        if sign < 0 and rel is not Relation.EQ:
            rel = Relation.GE if rel is Relation.LE else Relation.LE
        rels.append(rel)

    n_slack = sum(1 for r in rels if r is not Relation.EQ)
    n_art = sum(1 for r in rels if r is not Relation.LE)
    total = n + n_slack + n_art
    a = np.zeros((m, total))
    a[:, :n] = rows
    basis = [0] * m
    s = n
    art = n + n_slack
    artificial = []
    for k, rel in enumerate(rels):
        if rel is Relation.LE:
            a[k, s] = 1.0
            basis[k] = s
            s += 1
        else:
            if rel is Relation.GE:
                a[k, s] = -1.0
                s += 1
            a[k, art] = 1.0
            basis[k] = art
            artificial.append(art)
            art += 1

    tab = _Tableau(a, rhs, basis)
    diagnostics: dict = {"rows": m, "cols": n}

    is_art = np.zeros(total, dtype=bool)
    is_art[artificial] = True
    if artificial:
        phase1 = np.where(is_art, -1.0, 0.0)
        tab.optimize(phase1, np.ones(total, dtype=bool))
        infeas = float(-(phase1[tab.basis] @ tab.t[:, -1]))
        diagnostics["phase1_residual"] = infeas
        if infeas > FEAS_TOL * max(1.0, float(np.abs(rhs).max(initial=0.0))):
            diagnostics.update(_pivot_stats(tab))
            return LpSolution(Status.INFEASIBLE, diagnostics=diagnostics)
        _drive_out_artificials(tab, is_art, diagnostics)

    cost = np.zeros(total)
    cost[:n] = lp.objective
    allowed = ~is_art
    status = tab.optimize(cost, allowed)
    if status is Status.UNBOUNDED:
        diagnostics.update(_pivot_stats(tab))
        return LpSolution(Status.UNBOUNDED, diagnostics=diagnostics)

    tie_values = []
    for extra in tiebreak:
        d = tab.reduced_costs(cost)
        allowed = allowed & (d >= -OPT_TOL)
        cost = np.zeros(total)
        cost[:n] = np.asarray(extra, dtype=float)
        if tab.optimize(cost, allowed) is Status.UNBOUNDED:
            raise NumericalError("tie-break objective unbounded on the optimal face")
        tie_values.append(float(cost[:n] @ tab.solution(n)))

    x = tab.solution(n)
    x[np.abs(x) < 1e-13] = 0.0
    diagnostics.update(_pivot_stats(tab))
    violation = lp.max_violation(x)
    diagnostics["max_violation"] = violation
    if violation > FEAS_TOL or x.min(initial=0.0) < -1e-10:
        raise NumericalError(f"simplex solution violates constraints by {violation:.3g}")
    return LpSolution(Status.OPTIMAL, x, float(lp.objective @ x), tie_values, diagnostics)


def _drive_out_artificials(tab: _Tableau, is_art: np.ndarray, diagnostics: dict) -> None:
    redundant = []
    for r in range(len(tab.basis)):
        if not is_art[tab.basis[r]]:
            continue
        row = tab.t[r, :-1]
        cols = np.flatnonzero(~is_art & (np.abs(row) > 1e-9))
        if cols.size:
            tab.pivot(r, int(cols[0]))
        else:
            redundant.append(r)
    if redundant:
        keep = [r for r in range(len(tab.basis)) if r not in redundant]
        tab.t = tab.t[keep]
        tab.basis = [tab.basis[r] for r in keep]
        diagnostics["redundant_rows"] = len(redundant)


def _pivot_stats(tab: _Tableau) -> dict:
    stats = {
        "pivots": tab.pivots,
        "degenerate_pivots": tab.degenerate_pivots,
        "min_pivot": None if not np.isfinite(tab.min_pivot) else float(tab.min_pivot),
    }
    if np.isfinite(tab.min_pivot) and tab.min_pivot < 1e-9:
        stats["warning"] = "ill-conditioned pivot encountered"
        log.warning("simplex used a pivot of magnitude %.3g", tab.min_pivot)
    return stats
