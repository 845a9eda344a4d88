"""Finite normal-form games, profiles, distributions and structural predicates."""

from __future__ import annotations

import enum
import itertools
import math
import os
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import InvalidProfileError, SizeLimitError

PROB_TOL = 1e-9
DEFAULT_MAX_PROFILES = 10**6

Profile = tuple[int, ...]


def max_profiles() -> int:
    """Pure-profile cap, overridable through ``KANTIAN_SOLVE_MAX_PROFILES``."""
    raw = os.environ.get("KANTIAN_SOLVE_MAX_PROFILES")
    if raw is None:
        return DEFAULT_MAX_PROFILES
    try:
        value = int(raw)
    except ValueError:
        return DEFAULT_MAX_PROFILES
    return value if value > 0 else DEFAULT_MAX_PROFILES


@dataclass(frozen=True, eq=False)
class Game:
    """A finite n-player game given by a dense payoff tensor.

    ``payoffs`` has shape ``(m_1, ..., m_n, n)``: indexing with a pure
    profile yields the utility vector of all players.
    """

    actions: tuple[tuple[str, ...], ...]
    payoffs: np.ndarray

    def __post_init__(self) -> None:
        actions = tuple(tuple(str(a) for a in acts) for acts in self.actions)
        if not actions:
            raise InvalidProfileError("a game needs at least one player")
        for i, acts in enumerate(actions):
            if not acts:
                raise InvalidProfileError(f"player {i + 1} has no actions")
            if len(set(acts)) != len(acts):
                raise InvalidProfileError(f"player {i + 1} has duplicate action names")
        n = len(actions)
        shape = tuple(len(a) for a in actions) + (n,)
        payoffs = np.array(self.payoffs, dtype=float)
        if payoffs.shape != shape:
            raise InvalidProfileError(f"payoff tensor has shape {payoffs.shape}, expected {shape}")
        if not np.all(np.isfinite(payoffs)):
            raise InvalidProfileError("payoffs must be finite")
        payoffs.setflags(write=False)
        object.__setattr__(self, "actions", actions)
        object.__setattr__(self, "payoffs", payoffs)

    @classmethod
    def from_bimatrix(cls, row: Sequence[Sequence[float]], col: Sequence[Sequence[float]],
                      actions: Sequence[Sequence[str]] | Sequence[str] | None = None) -> Game:
        """Two-player game from the row player's and column player's matrices."""
        a = np.asarray(row, dtype=float)
        b = np.asarray(col, dtype=float)
        if a.shape != b.shape or a.ndim != 2:
            raise InvalidProfileError("bimatrix payoffs must be two matrices of equal shape")
        if actions is None:
            acts = ([f"a{k + 1}" for k in range(a.shape[0])], [f"a{k + 1}" for k in range(a.shape[1])])
        elif actions and isinstance(actions[0], str):
            acts = (list(actions), list(actions))
        else:
            acts = (list(actions[0]), list(actions[1]))
        return cls(tuple(map(tuple, acts)), np.stack([a, b], axis=-1))

    @classmethod
    def symmetric(cls, matrix: Sequence[Sequence[float]], actions: Sequence[str] | None = None) -> Game:
        """Symmetric two-player game in which player 1 receives ``matrix[i][j]``."""
        a = np.asarray(matrix, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InvalidProfileError("a symmetric game needs a square matrix")
        return cls.from_bimatrix(a, a.T, actions)

    @property
    def num_players(self) -> int:
        return len(self.actions)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.payoffs.shape[:-1]

    @property
    def num_profiles(self) -> int:
        return math.prod(self.shape)

    def profiles(self) -> Iterator[Profile]:
        """All pure profiles in lexicographic order of action indices."""
        return itertools.product(*(range(m) for m in self.shape))

    def check_profile(self, profile: Sequence[int]) -> Profile:
        prof = tuple(int(k) for k in profile)
        if len(prof) != self.num_players:
            raise InvalidProfileError(f"profile {prof} has {len(prof)} entries for {self.num_players} players")
        for i, (k, m) in enumerate(zip(prof, self.shape)):
            if not 0 <= k < m:
                raise InvalidProfileError(f"action index {k} out of range for player {i + 1}")
        return prof

    def profile_from_names(self, names: Sequence[str]) -> Profile:
        if len(names) != self.num_players:
            raise InvalidProfileError(f"profile {list(names)} has wrong length")
        out = []
        for i, name in enumerate(names):
            try:
                out.append(self.actions[i].index(name))
            except ValueError:
                raise InvalidProfileError(f"unknown action {name!r} for player {i + 1}") from None
        return tuple(out)

    def profile_names(self, profile: Sequence[int]) -> tuple[str, ...]:
        prof = self.check_profile(profile)
        return tuple(self.actions[i][k] for i, k in enumerate(prof))

    def utility(self, profile: Sequence[int]) -> np.ndarray:
        """Utility vector of a pure profile."""
        return self.payoffs[self.check_profile(profile)]

    def matrix(self, player: int) -> np.ndarray:
        """Payoff array of one player (0-based), shape ``self.shape``."""
        return self.payoffs[..., player]

    @property
    def has_identical_actions(self) -> bool:
        return all(a == self.actions[0] for a in self.actions)

    def diagonal(self) -> list[Profile]:
        """Diagonal profiles ``(a, ..., a)``; empty unless action sets are identical."""
        if not self.has_identical_actions:
            return []
        return [(k,) * self.num_players for k in range(len(self.actions[0]))]

    def scaled(self, factor: float) -> Game:
        return Game(self.actions, self.payoffs * factor)

    def with_payoffs(self, payoffs: np.ndarray) -> Game:
        return Game(self.actions, payoffs)


@dataclass(frozen=True)
class JointDistribution:
    """A correlated distribution over pure profiles."""

    support: tuple[tuple[Profile, float], ...]

    def __post_init__(self) -> None:
        support = tuple((tuple(int(k) for k in prof), float(p)) for prof, p in self.support)
        seen = set()
        for prof, p in support:
            if not math.isfinite(p) or p < 0:
                raise InvalidProfileError(f"negative or non-finite probability {p} on {prof}")
            if prof in seen:
                raise InvalidProfileError(f"profile {prof} appears twice in the distribution")
            seen.add(prof)
        total = sum(p for _, p in support)
        if abs(total - 1.0) > PROB_TOL:
            raise InvalidProfileError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "support", support)

    @classmethod
    def point(cls, profile: Sequence[int]) -> JointDistribution:
        return cls(((tuple(profile), 1.0),))

    @classmethod
    def from_pairs(cls, pairs) -> JointDistribution:
        return cls(tuple((tuple(prof), p) for prof, p in pairs))

    @property
    def profiles(self) -> list[Profile]:
        return [prof for prof, _ in self.support]

    @property
    def weights(self) -> np.ndarray:
        return np.array([p for _, p in self.support])

    def prob(self, profile: Sequence[int]) -> float:
        key = tuple(profile)
        return sum(p for prof, p in self.support if prof == key)


def expected_utility(game: Game, dist: JointDistribution) -> np.ndarray:
    """Componentwise expectation of the utility vector under ``dist``."""
    total = np.zeros(game.num_players)
    for prof, p in dist.support:
        total += p * game.utility(prof)
    return total


def expected_utility_product(game: Game, strategies: Sequence[Sequence[float]]) -> np.ndarray:
    """Expected utilities when every player mixes independently."""
    if len(strategies) != game.num_players:
        raise InvalidProfileError(f"need {game.num_players} strategies, got {len(strategies)}")
    tensor = game.payoffs
    for i, s in enumerate(strategies):
        w = check_mixed(s, game.shape[i])
        # contract the leading player axis each time
        tensor = np.tensordot(w, tensor, axes=(0, 0))
    return np.asarray(tensor, dtype=float)


def check_mixed(weights: Sequence[float], size: int | None = None) -> np.ndarray:
    """Validate a mixed strategy and return it as a float array."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or (size is not None and w.shape[0] != size):
        raise InvalidProfileError(f"mixed strategy of length {w.shape} does not match {size} actions")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise InvalidProfileError("mixed strategy weights must be nonnegative")
    if abs(w.sum() - 1.0) > PROB_TOL:
        raise InvalidProfileError(f"mixed strategy sums to {w.sum()!r}")
    return w


class Dominance(enum.Enum):
    NONE = "none"
    WEAK = "weak"
    STRICT = "strict"


def dominates(u: Sequence[float], v: Sequence[float]) -> Dominance:
    """Compare two utility vectors: STRICT if u >= v with some >, WEAK if equal."""
    a = np.asarray(u, dtype=float)
    b = np.asarray(v, dtype=float)
    if a.shape != b.shape:
        raise InvalidProfileError(f"cannot compare vectors of lengths {a.shape} and {b.shape}")
    if not np.all(a >= b):
        return Dominance.NONE
    return Dominance.STRICT if np.any(a > b) else Dominance.WEAK


@dataclass(frozen=True)
class StructureReport:
    identical_actions: bool
    diagonal: bool
    coordination: bool
    symmetric_coordination: bool
    symmetric_two_player: bool


def is_symmetric_two_player(game: Game) -> bool:
    if game.num_players != 2 or not game.has_identical_actions:
        return False
    return bool(np.array_equal(game.matrix(1), game.matrix(0).T))


def classify(game: Game) -> StructureReport:
    identical = game.has_identical_actions
    diagonal = coordination = sym_coord = False
    if identical:
        diag = game.diagonal()
        diag_u = np.array([game.payoffs[d] for d in diag])
        flat = game.payoffs.reshape(-1, game.num_players)
        # every profile must be weakly dominated by some diagonal profile
        covered = (diag_u[None, :, :] >= flat[:, None, :]).all(axis=2).any(axis=1)
        diagonal = bool(covered.all())
        if diagonal:
            off = np.ones(game.shape, dtype=bool)
            for d in diag:
                off[d] = False
            coordination = bool(np.all(game.payoffs[off] == 0))
            sym_coord = coordination and bool(np.all(diag_u == diag_u[:, :1]))
    return StructureReport(
        identical_actions=identical,
        diagonal=diagonal,
        coordination=coordination,
        symmetric_coordination=sym_coord,
        symmetric_two_player=is_symmetric_two_player(game),
    )


def check_profile_cap(game_shape: Sequence[int]) -> None:
    count = math.prod(game_shape)
    cap = max_profiles()
    if count > cap:
        raise SizeLimitError(f"game has {count} pure profiles, above the cap of {cap} "
                             "(set KANTIAN_SOLVE_MAX_PROFILES to raise it)")
