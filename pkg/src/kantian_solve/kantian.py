"""Pure and mixed Kantian equilibria, price of miscoordination, Platonia."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import DomainError, SizeLimitError, UnsupportedGameError
from .game import Game, Profile, classify, expected_utility_product

EXACT_MAX_ACTIONS = 20
SINGULAR_DET = 1e-12
SUPPORT_FEAS_TOL = 1e-10
VALUE_TIE_TOL = 1e-9
SUPPORT_BATCH = 20_000


@dataclass(frozen=True)
class VariationFamily:
    """Explicit variation maps: for every parameter a total action-to-action table."""

    maps: Mapping[str, Mapping[str, str]]
    name: str = "custom"

    @classmethod
    def replace_all(cls, actions: Sequence[str]) -> VariationFamily:
        """The family where parameter ``b`` sends every action to ``b``."""
        return cls({b: {a: b for a in actions} for b in actions}, name="replace_all")

    @classmethod
    def identity(cls, actions: Sequence[str]) -> VariationFamily:
        return cls({"id": {a: a for a in actions}}, name="identity")

    @property
    def parameters(self) -> list[str]:
        return list(self.maps)

    def validate(self, actions: Sequence[str]) -> None:
        acts = set(actions)
        for r, table in self.maps.items():
            if set(table) != acts:
                raise DomainError(f"variation map {r!r} is not total on the action set")
            bad = [v for v in table.values() if v not in acts]
            if bad:
                raise DomainError(f"variation map {r!r} sends actions outside the set: {bad}")


@dataclass(frozen=True)
class KantianResult:
    equilibria: list[Profile]
    payoffs: list[np.ndarray]


@dataclass(frozen=True)
class MixedKantianResult:
    strategy: np.ndarray
    value: float
    method: str
    multiplier: float
    max_violation: float
    support: tuple[int, ...] = ()
    diagnostics: dict = field(default_factory=dict)


@dataclass(frozen=True)
class MiscoordinationReport:
    kantian_actions: list[int]
    kantian_payoff: float
    worst_payoff: float
    worst_profile: Profile
    price: float
    theoretical_range: tuple[float, float]
    uniform_mixing_utility: np.ndarray
    common_mixture_price: float | None = None
    common_mixture_worst: np.ndarray | None = None


def _common_actions(game: Game) -> tuple[str, ...]:
    if not game.has_identical_actions:
        raise UnsupportedGameError("Kantian equilibria need identical action sets")
    return game.actions[0]


def is_kantian_profile(game: Game, profile: Sequence[int], family: VariationFamily | None = None) -> bool:
    """True if no variation ``r`` applied to everyone raises any player's payoff."""
    actions = _common_actions(game)
    prof = game.check_profile(profile)
    if family is None:
        family = VariationFamily.replace_all(actions)
    family.validate(actions)
    u = game.payoffs[prof]
    for table in family.maps.values():
        varied = tuple(actions.index(table[actions[k]]) for k in prof)
        if np.any(game.payoffs[varied] > u):
            return False
    return True


def pure_kantian(game: Game, family: VariationFamily | None = None) -> KantianResult:
    """Diagonal profiles satisfying the Kantian inequality for every player and parameter."""
    actions = _common_actions(game)
    if family is None:
        family = VariationFamily.replace_all(actions)
    family.validate(actions)
    found = [d for d in game.diagonal() if is_kantian_profile(game, d, family)]
    return KantianResult(found, [game.payoffs[d].copy() for d in found])


def kantian_actions(game: Game) -> list[int]:
    """Indices of actions whose diagonal profile is a pure Kantian equilibrium."""
    return [d[0] for d in pure_kantian(game).equilibria]


def _symmetric_matrix(game: Game) -> np.ndarray:
    if not classify(game).symmetric_two_player:
        raise UnsupportedGameError("mixed Kantian equilibria need a symmetric two-player game")
    a = game.matrix(0)
    return (a + a.T) / 2.0


def _certificate(q: np.ndarray, x: np.ndarray) -> tuple[float, float, float]:
    qx = q @ x
    value = float(x @ qx)
    support = x > 0
    off = qx[~support]
    violation = float(max(0.0, (off - value).max())) if off.size else 0.0
    return value, 2.0 * value, violation


def _stationary_points(q: np.ndarray, supports: np.ndarray, k: int):
    """Nonnegative solutions of the bordered stationarity systems for a batch of supports."""
    sub = q[supports[:, :, None], supports[:, None, :]]
    kkt = np.zeros((len(supports), k + 1, k + 1))
    kkt[:, :k, :k] = sub
    kkt[:, :k, k] = -1.0
    kkt[:, k, :k] = 1.0
    rhs = np.zeros((len(supports), k + 1, 1))
    rhs[:, k, 0] = 1.0
    ok = np.abs(np.linalg.det(kkt)) >= SINGULAR_DET
    if k == 1:
        ok[:] = True  # vertices are always candidates
    skipped = int((~ok).sum())
    if not ok.any():
        return [], skipped
    xs = np.linalg.solve(kkt[ok], rhs[ok])[:, :k, 0]
    feasible = (xs >= -SUPPORT_FEAS_TOL).all(axis=1)
    out = []
    for sup, xsub in zip(supports[ok][feasible], xs[feasible]):
        xsub = np.clip(xsub, 0.0, None)
        out.append((sup, xsub / xsub.sum()))
    return out, skipped


def _simplex_qp_max(q: np.ndarray) -> tuple[np.ndarray, int]:
    """Global maximizer of ``x^T q x`` over the simplex and the count of singular supports skipped.

    Ties within ``VALUE_TIE_TOL`` go to the lexicographically smallest support.
    """
    m = q.shape[0]
    best_val = -np.inf
    best_support: tuple[int, ...] = ()
    best_x = None
    skipped = 0
    for k in range(1, m + 1):
        combos = itertools.combinations(range(m), k)
        while True:
            batch = list(itertools.islice(combos, SUPPORT_BATCH))
            if not batch:
                break
            points, n_singular = _stationary_points(q, np.array(batch, dtype=int), k)
            skipped += n_singular
            for sup, xsub in points:
                val = float(xsub @ q[np.ix_(sup, sup)] @ xsub)
                key = tuple(int(s) for s in sup)
                tied = abs(val - best_val) <= VALUE_TIE_TOL
                if best_x is None or (val > best_val and not tied) or (tied and key < best_support):
                    best_val = max(val, best_val)
                    best_support = key
                    best_x = np.zeros(m)
                    best_x[list(sup)] = xsub
    return best_x, skipped


def mixed_kantian_exact(game: Game) -> MixedKantianResult:
    """Global maximizer of ``x^T A x`` over the simplex by support enumeration.

    For each support S the stationarity system ``Q_S x_S = mu 1, sum x_S = 1``
    is solved (``Q`` the symmetrized matrix); nonnegative solutions and all
    vertices are candidates.  Supports are batched by size.
    """
    q = _symmetric_matrix(game)
    m = q.shape[0]
    if m > EXACT_MAX_ACTIONS:
        raise SizeLimitError(f"{m} actions exceed the exact limit of {EXACT_MAX_ACTIONS}; "
                             "use the replicator heuristic instead")
    best_x, skipped = _simplex_qp_max(q)
    value, mult, viol = _certificate(q, best_x)
    return MixedKantianResult(best_x, value, "support_enumeration", mult, viol,
                              tuple(int(i) for i in np.flatnonzero(best_x > 0)),
                              {"singular_supports_skipped": skipped})


def mixed_kantian_replicator(game: Game, seed: int = 0, restarts: int = 20,
                             iterations: int = 10_000, tol: float = 1e-15) -> MixedKantianResult:
    """Best local maximizer found by replicator dynamics from random interior points."""
    q = _symmetric_matrix(game)
    m = q.shape[0]
    shift = max(0.0, -float(q.min())) + 1.0
    b = q + shift
    rng = np.random.Generator(np.random.PCG64(seed))
    best_x, best_val = None, -np.inf
    for _ in range(max(1, restarts)):
        x = rng.dirichlet(np.ones(m)) if m > 1 else np.ones(1)
        for _ in range(iterations):
            bx = b @ x
            nxt = x * bx / (x @ bx)
            done = np.abs(nxt - x).max() < tol
            x = nxt
            if done:
                break
        val = float(x @ q @ x)
        if val > best_val + VALUE_TIE_TOL:
            best_x, best_val = x, val
    x = best_x.copy()
    x[x < 1e-12] = 0.0
    x /= x.sum()
    value, mult, viol = _certificate(q, x)
    return MixedKantianResult(x, value, "replicator", mult, viol,
                              tuple(int(i) for i in np.flatnonzero(x > 0)),
                              {"seed": seed, "restarts": restarts, "iterations": iterations, "shift": shift})


def price_of_miscoordination(game: Game) -> MiscoordinationReport:
    """Worst-case ratio of the Kantian payoff to uncoordinated play over Kantian actions.

    ``price`` ranges over all mixed profiles of Kantian actions.  Expected
    utility is multilinear in independent mixtures, so the worst case is a pure
    profile.  ``common_mixture_price`` only ranges over profiles where every
    player uses the same mixture; this is the quantity the ``[1, r^(n-1)]``
    bound of ``theoretical_range`` holds for in diagonal games.  It is computed
    exactly for two players (a minimization over the simplex) and left as None
    otherwise.
    """
    _common_actions(game)
    if np.any(game.payoffs <= 0):
        raise DomainError("price of miscoordination needs strictly positive payoffs")
    kact = kantian_actions(game)
    if not kact:
        raise UnsupportedGameError("game has no pure Kantian action")
    n = game.num_players
    kpay = game.payoffs[(kact[0],) * n]
    price, worst, worst_prof, kbest = -np.inf, None, None, None
    for prof in itertools.product(kact, repeat=n):
        u = game.payoffs[prof]
        ratios = kpay / u
        i = int(np.argmax(ratios))
        if ratios[i] > price:
            price, worst, worst_prof, kbest = float(ratios[i]), float(u[i]), prof, float(kpay[i])
    r = len(kact)
    uniform = np.zeros(len(game.actions[0]))
    uniform[kact] = 1.0 / r
    mix = expected_utility_product(game, [uniform] * n)
    common_price, common_worst = None, None
    if n == 2:
        common_worst = np.empty(2)
        for i in range(2):
            b = game.matrix(i)[np.ix_(kact, kact)]
            x, _ = _simplex_qp_max(-(b + b.T) / 2.0)
            common_worst[i] = float(x @ b @ x)
        common_price = float((kpay / common_worst).max())
    return MiscoordinationReport(kact, kbest, worst, tuple(worst_prof), price,
                                 (1.0, float(r ** (n - 1))), mix, common_price, common_worst)


def platonia_mixed_kantian(n: int) -> tuple[float, float]:
    """Submission probability and expected payoff of the symmetric mixed optimum."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError("Platonia needs at least one agent")
    n = int(n)
    p = 1.0 / n
    return p, p * (1.0 - p) ** (n - 1)


def platonia_payoff(p: float, n: int) -> float:
    """Expected payoff when each of ``n`` agents submits independently with probability ``p``."""
    return p * (1.0 - p) ** (n - 1)
