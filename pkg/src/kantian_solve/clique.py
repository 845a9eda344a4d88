"""Graphs as symmetric games: the quadratic optimum over the simplex and clique numbers."""

from __future__ import annotations

import itertools
from typing import Mapping, Sequence

import numpy as np

from .errors import GameFormatError
from .game import Game


def adjacency_matrix(graph: Sequence[Sequence[int]] | Mapping[str, Sequence[str]]) -> tuple[np.ndarray, list[str]]:
    """Adjacency matrix from neighbour lists (by index) or a name -> neighbours mapping."""
    if isinstance(graph, Mapping):
        names = [str(v) for v in graph]
        index = {v: k for k, v in enumerate(names)}
        lists = []
        for v in names:
            try:
                lists.append([index[str(w)] for w in graph[v]])
            except KeyError as exc:
                raise GameFormatError(f"vertex {v!r} lists unknown neighbour {exc.args[0]!r}") from None
    else:
        names = [str(k) for k in range(len(graph))]
        lists = [[int(w) for w in nbrs] for nbrs in graph]
    size = len(names)
    adj = np.zeros((size, size))
    for v, nbrs in enumerate(lists):
        for w in nbrs:
            if not 0 <= w < size:
                raise GameFormatError(f"neighbour index {w} out of range")
            if w != v:
                adj[v, w] = adj[w, v] = 1.0
    return adj, names


def adjacency_game(adj: np.ndarray, names: Sequence[str] | None = None) -> Game:
    return Game.symmetric(adj, None if names is None else list(names))


def max_clique_bruteforce(adj: np.ndarray) -> int:
    """Clique number by checking vertex subsets from the largest size down."""
    size = adj.shape[0]
    if size == 0:
        return 0
    for k in range(size, 1, -1):
        for subset in itertools.combinations(range(size), k):
            if all(adj[a, b] for a, b in itertools.combinations(subset, 2)):
                return k
    return 1


def clique_from_optimum(value: float) -> float:
    return 1.0 / (1.0 - value)
