"""Pareto-optimal pure profiles of a game."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .game import Game, Profile, check_profile_cap


@dataclass(frozen=True)
class ParetoSet:
    """Undominated pure profiles in lexicographic order, with aligned payoffs."""

    profiles: tuple[Profile, ...]
    payoffs: np.ndarray  # shape (len(profiles), num_players)

    def __len__(self) -> int:
        return len(self.profiles)

    def __contains__(self, profile) -> bool:
        return tuple(profile) in self.profiles

    def index(self, profile) -> int:
        return self.profiles.index(tuple(profile))


def undominated_mask(points: np.ndarray) -> np.ndarray:
    """Boolean mask of rows not strictly dominated by any other row.

    Skyline sweep: a row can only be strictly dominated by a row with a larger
    coordinate sum, so rows are visited by decreasing sum and compared against
    the frontier collected so far.  Payoff-tied rows are all kept.
    """
    pts = np.asarray(points, dtype=float)
    count = pts.shape[0]
    mask = np.zeros(count, dtype=bool)
    # ties in the float sum are ordered lexicographically so a dominator still comes first
    keys = [-pts[:, j] for j in reversed(range(pts.shape[1]))] + [-pts.sum(axis=1)]
    order = np.lexsort(keys)
    frontier = np.empty((0, pts.shape[1]))
    for idx in order:
        p = pts[idx]
        if frontier.shape[0]:
            ge = (frontier >= p).all(axis=1)
            gt = (frontier > p).any(axis=1)
            if np.any(ge & gt):
                continue
        mask[idx] = True
        frontier = np.vstack([frontier, p])
    return mask


def pareto_optimal_profiles(game: Game) -> ParetoSet:
    check_profile_cap(game.shape)
    flat = game.payoffs.reshape(-1, game.num_players)
    mask = undominated_mask(flat)
    idx = np.flatnonzero(mask)
    profiles = tuple(tuple(int(k) for k in np.unravel_index(i, game.shape)) for i in idx)
    return ParetoSet(profiles, flat[idx].copy())
