from pathlib import Path

import numpy as np
import pytest

from kantian_solve import Game, io

DATA = Path(__file__).parent / "data"


def load_game(name: str) -> Game:
    return io.parse_game((DATA / name).read_text())


def random_symmetric_diagonal(rng: np.random.Generator, m: int, positive: bool = False) -> Game:
    """Symmetric two-player game whose off-diagonal payoffs never exceed the best diagonal payoff."""
    low = 1 if positive else 0
    diag = rng.integers(low, 10, m).astype(float)
    top = diag.max()
    a = rng.integers(low, int(top) + 1, (m, m)).astype(float)
    np.fill_diagonal(a, diag)
    return Game.symmetric(a)


def random_graph(rng: np.random.Generator, size: int, density: float) -> np.ndarray:
    upper = np.triu(rng.random((size, size)) < density, 1)
    return (upper | upper.T).astype(float)


@pytest.fixture
def data_dir() -> Path:
    return DATA


def pytest_terminal_summary(terminalreporter):
    module = __import__("sys").modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        ok, detail = results[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
