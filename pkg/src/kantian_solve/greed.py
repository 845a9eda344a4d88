"""Bounded-greed and homo-moralis payoff transforms, pure Nash enumeration."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, UnsupportedGameError
from .game import Game, Profile, classify


def greed_index(lam: float) -> float:
    """``1/(lambda-1)``: infinite at lambda=1, zero at lambda=inf."""
    if not lam >= 1:
        raise DomainError(f"lambda must be at least 1, got {lam}")
    if lam == 1:
        return math.inf
    if math.isinf(lam):
        return 0.0
    return 1.0 / (lam - 1.0)


def lambda_for_greed(index: float) -> float:
    if index < 0:
        raise DomainError("greed index must be nonnegative")
    if index == 0:
        return math.inf
    if math.isinf(index):
        return 1.0
    return 1.0 + 1.0 / index


@dataclass(frozen=True)
class TransformedGame:
    game: Game
    kantian_actions: tuple[int, ...]
    kantian_payoffs: tuple[float, ...]
    lambdas: tuple[float, ...] = ()
    tempted: tuple[bool, ...] = ()

    @property
    def greed_indices(self) -> tuple[float, ...]:
        return tuple(greed_index(lam) for lam in self.lambdas)


def _kantian_reference(game: Game) -> tuple[list[int], list[float]]:
    """First diagonal maximizer of each player's payoff, and the payoff there."""
    if not game.has_identical_actions:
        raise UnsupportedGameError("greed transforms need identical action sets")
    diag = game.diagonal()
    acts, pays = [], []
    for i in range(game.num_players):
        values = [game.payoffs[d][i] for d in diag]
        k = int(np.argmax(values))
        acts.append(k)
        pays.append(float(values[k]))
    return acts, pays


def _threshold(lam: float, kantian_payoff: float) -> float:
    if math.isinf(lam):
        if kantian_payoff > 0:
            return math.inf
        return 0.0 if kantian_payoff == 0 else -math.inf
    return lam * kantian_payoff


def greed_transform(game: Game, lambdas: Sequence[float], *, per_cell: bool = False) -> TransformedGame:
    """Perceived utilities of lambda-utilitarian agents.

    Each player keeps its Kantian reference action ``k`` (first diagonal
    maximizer) with payoff ``K``.  A player is *tempted* when some profile in
    which it plays a non-Kantian action pays it strictly more than
    ``lambda * K``.  An untempted player perceives ``K`` for every profile where
    it plays ``k`` and 0 whenever it plays anything else: no deviation is worth
    abandoning the Kantian action.  A tempted player has left the Kantian frame
    and perceives its material payoffs.

    With ``per_cell=True`` the rule is applied cell by cell instead: ``K`` on
    the Kantian action, the material payoff where it exceeds ``lambda * K``
    and 0 elsewhere.  In the Prisoners' Dilemma this reading never makes
    mutual defection stable.
    """
    if len(lambdas) != game.num_players:
        raise DomainError(f"need one lambda per player, got {len(lambdas)}")
    lams = tuple(float(lam) for lam in lambdas)
    for lam in lams:
        greed_index(lam)
    acts, pays = _kantian_reference(game)
    out = np.array(game.payoffs, dtype=float)
    tempted = []
    for i, (k, kpay, lam) in enumerate(zip(acts, pays, lams)):
        own = np.moveaxis(game.matrix(i), i, 0)
        limit = _threshold(lam, kpay)
        others = np.delete(own, k, axis=0)
        is_tempted = bool(others.size and np.any(others > limit))
        tempted.append(is_tempted)
        if per_cell:
            perceived = np.where(own > limit, own, 0.0)
        elif is_tempted:
            continue
        else:
            perceived = np.zeros_like(own)
        perceived[k] = kpay
        out[..., i] = np.moveaxis(perceived, 0, i)
    return TransformedGame(game.with_payoffs(out), tuple(acts), tuple(pays), lams, tuple(tempted))


def homo_moralis_transform(game: Game, kappa: float) -> TransformedGame:
    """Blend ``(1-kappa)*material + kappa*payoff if everyone copied my action``."""
    if not 0.0 <= kappa <= 1.0:
        raise DomainError(f"kappa must lie in [0, 1], got {kappa}")
    if not classify(game).symmetric_two_player:
        raise UnsupportedGameError("homo moralis transform needs a symmetric two-player game")
    a = game.matrix(0)
    diag = np.diag(a)
    u1 = (1.0 - kappa) * a + kappa * diag[:, None]
    acts, pays = _kantian_reference(game)
    return TransformedGame(Game.from_bimatrix(u1, u1.T, game.actions), tuple(acts), tuple(pays))


def pure_nash(game: Game) -> list[Profile]:
    """Pure profiles where no player has a strictly improving unilateral deviation."""
    stable = np.ones(game.shape, dtype=bool)
    for i in range(game.num_players):
        u = game.matrix(i)
        stable &= u >= u.max(axis=i, keepdims=True)
    return [tuple(int(k) for k in idx) for idx in np.argwhere(stable)]
