"""Other-regarding equilibria computed as two-stage linear programs.

Every equilibrium is a correlated distribution over the Pareto set.  Stage 1
optimizes the concept's criterion; stage 2 maximizes the utility sum while
keeping the stage-1 optimum, which rules out strictly dominating alternatives
with the same property.  Remaining ties are broken by maximizing the weight of
each Pareto profile in lexicographic order, so the answer is unique.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import lp
from .errors import NumericalError, UnsupportedGameError
from .game import Game, JointDistribution
from .pareto import ParetoSet, pareto_optimal_profiles

WEIGHT_EPS = 1e-12


class WelfareKind(str, enum.Enum):
    RAWLSIAN = "rawlsian"
    BENTHAM_HARSANYI = "bentham_harsanyi"
    BEST_OFF = "best_off"
    RAWLSIAN_PERCENTILE = "rawlsian_percentile"
    ASPIRATION = "aspiration"


@dataclass
class EquilibriumReport:
    kind: WelfareKind
    distribution: JointDistribution
    expected_utilities: np.ndarray
    stage1_value: float
    diagnostics: dict = field(default_factory=dict)
    pareto: ParetoSet | None = None
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class AspirationData:
    nep: np.ndarray  # natural expectation point per player
    happy: np.ndarray  # shape (|P|, n), aligned with the Pareto set


def percentile_table(pareto: ParetoSet) -> np.ndarray:
    """Percent of *other* Pareto profiles that pay each player strictly more."""
    u = pareto.payoffs
    size = u.shape[0]
    better = (u[None, :, :] > u[:, None, :]).sum(axis=1)
    return 100.0 * better / max(1, size - 1)


def aspiration_data(pareto: ParetoSet) -> AspirationData:
    nep = np.median(pareto.payoffs, axis=0)
    return AspirationData(nep, pareto.payoffs >= nep[None, :])


def _pareto(game: Game) -> ParetoSet:
    pareto = pareto_optimal_profiles(game)
    if len(pareto) == 0:
        raise UnsupportedGameError("empty Pareto set")
    return pareto


def _staged(problem: lp.LinearProgram, size: int, stage2: np.ndarray | None,
            diagnostics: dict) -> tuple[lp.LpSolution, np.ndarray]:
    """Optimize the stage-1 objective, then ``stage2`` and lexicographic weights on its optimal face.

    The first ``size`` variables of ``problem`` are the Pareto-profile weights.
    Later stages never leave the earlier optimal faces, so no tolerance slack
    is needed to carry a stage-1 optimum into stage 2.
    """
    nvars = problem.num_vars
    tiebreak = [] if stage2 is None else [np.pad(stage2, (0, nvars - size))]
    tiebreak += [np.pad(row, (0, nvars - size)) for row in np.eye(size)]
    sol = lp.solve(problem, tiebreak)
    diagnostics["lp"] = {"status": sol.status.value, **sol.diagnostics}
    if not sol.optimal:
        raise NumericalError(f"welfare linear program ended {sol.status.value}")
    if stage2 is not None:
        diagnostics["stage2_value"] = sol.tiebreak_values[0]
    return sol, sol.x[:size]


def _report(kind: WelfareKind, game: Game, pareto: ParetoSet, weights: np.ndarray,
            stage1: float, diagnostics: dict, extra: dict | None = None) -> EquilibriumReport:
    w = np.where(weights > WEIGHT_EPS, weights, 0.0)
    w = w / w.sum()
    pairs = [(pareto.profiles[k], float(w[k])) for k in np.flatnonzero(w)]
    dist = JointDistribution.from_pairs(pairs)
    eu = w @ pareto.payoffs
    return EquilibriumReport(kind, dist, eu, float(stage1) + 0.0, diagnostics, pareto, extra or {})


def rawlsian(game: Game) -> EquilibriumReport:
    """Maximize the worst-off player's expected utility."""
    pareto = _pareto(game)
    u = pareto.payoffs
    size, n = u.shape
    diagnostics: dict = {"pareto_size": size}
    # variables: p (size), t+, t-
    obj = np.zeros(size + 2)
    obj[size], obj[size + 1] = 1.0, -1.0
    prob = lp.LinearProgram(obj)
    prob.eq(np.concatenate([np.ones(size), [0.0, 0.0]]), 1.0)
    for i in range(n):
        prob.ge(np.concatenate([u[:, i], [-1.0, 1.0]]), 0.0)
    sol, w = _staged(prob, size, u.sum(axis=1), diagnostics)
    return _report(WelfareKind.RAWLSIAN, game, pareto, w, sol.value, diagnostics)


def bentham_harsanyi(game: Game) -> EquilibriumReport:
    """Maximize the sum of expected utilities."""
    pareto = _pareto(game)
    size = len(pareto)
    diagnostics: dict = {"pareto_size": size}
    prob = lp.LinearProgram(pareto.payoffs.sum(axis=1))
    prob.eq(np.ones(size), 1.0)
    sol, w = _staged(prob, size, None, diagnostics)
    return _report(WelfareKind.BENTHAM_HARSANYI, game, pareto, w, sol.value, diagnostics)


def best_off(game: Game) -> EquilibriumReport:
    """Maximize the largest expected payoff, then the utility sum.

    The largest expected payoff any player can reach is that player's best
    Pareto payoff, attained only by distributions supported on the profiles
    paying it, so stage 2 runs over those profiles.
    """
    pareto = _pareto(game)
    u = pareto.payoffs
    best = u.max(axis=0)
    star = int(np.argmax(best))  # lowest player index on ties
    v = float(best[star])
    keep = np.flatnonzero(u[:, star] == v)
    diagnostics: dict = {"pareto_size": len(pareto), "best_player": star + 1}
    prob = lp.LinearProgram(u[keep].sum(axis=1))
    prob.eq(np.ones(keep.size), 1.0)
    _, wk = _staged(prob, keep.size, None, diagnostics)
    w = np.zeros(len(pareto))
    w[keep] = wk
    return _report(WelfareKind.BEST_OFF, game, pareto, w, v, diagnostics)


def _minmax(pareto: ParetoSet, table: np.ndarray, diagnostics: dict) -> tuple[float, np.ndarray]:
    """min t s.t. table[:, i] . p <= t for every column i; then max utility sum on that face."""
    size, n = table.shape
    obj = np.zeros(size + 1)
    obj[size] = -1.0
    prob = lp.LinearProgram(obj)
    prob.eq(np.concatenate([np.ones(size), [0.0]]), 1.0)
    for i in range(n):
        prob.le(np.concatenate([table[:, i], [-1.0]]), 0.0)
    sol, w = _staged(prob, size, pareto.payoffs.sum(axis=1), diagnostics)
    return -sol.value, w


def rawlsian_percentile(game: Game) -> EquilibriumReport:
    """Minimize the largest expected percentile index."""
    pareto = _pareto(game)
    perc = percentile_table(pareto)
    diagnostics: dict = {"pareto_size": len(pareto)}
    t_star, w = _minmax(pareto, perc, diagnostics)
    return _report(WelfareKind.RAWLSIAN_PERCENTILE, game, pareto, w, t_star, diagnostics,
                   {"percentiles": perc})


def aspiration(game: Game) -> EquilibriumReport:
    """Minimize the largest probability that a player ends below its median payoff."""
    pareto = _pareto(game)
    data = aspiration_data(pareto)
    unhappy = (~data.happy).astype(float)
    diagnostics: dict = {"pareto_size": len(pareto)}
    t_star, w = _minmax(pareto, unhappy, diagnostics)
    return _report(WelfareKind.ASPIRATION, game, pareto, w, t_star, diagnostics,
                   {"nep": data.nep, "happy": data.happy})


SOLVERS = {
    WelfareKind.RAWLSIAN: rawlsian,
    WelfareKind.BENTHAM_HARSANYI: bentham_harsanyi,
    WelfareKind.BEST_OFF: best_off,
    WelfareKind.RAWLSIAN_PERCENTILE: rawlsian_percentile,
    WelfareKind.ASPIRATION: aspiration,
}


def solve_welfare(game: Game, kind: WelfareKind | str) -> EquilibriumReport:
    return SOLVERS[WelfareKind(kind)](game)
