"""Named games used throughout the examples and tests."""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

from .errors import DomainError
from .game import Game, check_profile_cap


def prisoners_dilemma() -> Game:
    return Game.from_bimatrix([[2, 0], [3, 1]], [[2, 3], [0, 1]], ["C", "D"])


def roemer_battle_of_sexes() -> Game:
    """Battle of the sexes with Roemer's asymmetric off-diagonal payoffs."""
    return Game.from_bimatrix([[2, 0], [1, 3]], [[3, 0], [1, 2]], ["B", "S"])


def multiple_kantian() -> Game:
    """3x3 game with two equally good Kantian actions C and E that miscoordinate badly."""
    row = [[5, 3, 1], [6, 4, 6], [2, 3, 5]]
    col = [[5, 6, 2], [3, 4, 3], [1, 6, 5]]
    return Game.from_bimatrix(row, col, ["C", "D", "E"])


def coordination_game(diagonal: Sequence[Sequence[float]], actions: Sequence[str] | None = None) -> Game:
    """Coordination game: ``diagonal[k]`` is the payoff vector of ``(k, ..., k)``, zero elsewhere."""
    diag = np.asarray(diagonal, dtype=float)
    m, n = diag.shape
    if actions is None:
        actions = [chr(ord("C") + k) if m <= 24 else f"a{k + 1}" for k in range(m)]
    payoffs = np.zeros((m,) * n + (n,))
    for k in range(m):
        payoffs[(k,) * n] = diag[k]
    return Game((tuple(actions),) * n, payoffs)


def modified_bos_percentile() -> Game:
    return coordination_game([[10, 1], [4, 2]], ["C", "D"])


def modified_bos_music_lover() -> Game:
    return coordination_game([[6, 1], [3, 2]], ["B", "S"])


def anticoordination() -> Game:
    return Game.from_bimatrix([[10, 100], [200, 6]], [[10, 200], [100, 6]], ["C", "S"])


def aspiration_example() -> Game:
    return coordination_game([[10, 1], [9, 2], [8, 3], [4, 7]], ["C", "D", "E", "F"])


def platonia(n: int) -> Game:
    """n agents choose S(UBMIT) or D(ON'T); a unique submitter earns 1."""
    if n < 1:
        raise DomainError("Platonia needs at least one agent")
    check_profile_cap((2,) * n)
    payoffs = np.zeros((2,) * n + (n,))
    for prof in itertools.product((0, 1), repeat=n):
        submitters = [i for i, a in enumerate(prof) if a == 0]
        if len(submitters) == 1:
            payoffs[prof + (submitters[0],)] = 1.0
    return Game((("S", "D"),) * n, payoffs)


CATALOG = {
    "prisoners_dilemma": prisoners_dilemma,
    "roemer_bos": roemer_battle_of_sexes,
    "multiple_kantian": multiple_kantian,
    "modified_bos_percentile": modified_bos_percentile,
    "modified_bos_music_lover": modified_bos_music_lover,
    "anticoordination": anticoordination,
    "aspiration_example": aspiration_example,
}
