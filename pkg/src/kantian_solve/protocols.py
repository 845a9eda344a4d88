"""Shared-randomness Kantian protocols and the program-equilibrium verifier.

Each protocol is a single program run by every agent.  A trusted sampler draws
every agent's random value per trial and hands the full vector to all agents,
which then act on their own id and the shared draws.  Programs are written
with array arithmetic so one call evaluates all trials at once.

Randomness comes from numpy's PCG64 bit generator seeded with the run seed;
PCG64 is a documented, platform-independent algorithm, so a seed reproduces a
run bit for bit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import lp
from .errors import DomainError, InvalidProfileError, NumericalError
from .game import Game, JointDistribution, expected_utility
from .pareto import pareto_optimal_profiles

DOMINATION_TOL = 1e-7


@dataclass
class ProtocolRun:
    protocol: str
    n_agents: int
    seed: int
    trials: int
    exact_distribution: JointDistribution
    exact_utilities: np.ndarray
    empirical_means: np.ndarray | None = None
    standard_errors: np.ndarray | None = None
    action_names: tuple[tuple[str, ...], ...] = ()
    extra: dict = field(default_factory=dict)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def bos_program(agent_id, my_bit, other_bit):
    """Both play B (index 0) on even parity, S (index 1) otherwise."""
    return np.where((my_bit ^ other_bit) == 0, 0, 1)


def anticoord_program(agent_id, my_bit, other_bit):
    """Play C (index 0) when the parity equals the agent id mod 2, else S (index 1)."""
    return np.where((my_bit ^ other_bit) % 2 == agent_id % 2, 0, 1)


def choose_winner_program(agent_id, draws, n):
    """SUBMIT (True) iff the draw sum is congruent to the 1-based id mod n."""
    return np.sum(draws, axis=-1) % n == agent_id % n


def _two_agent_actions(game: Game, first: str, second: str) -> list[int]:
    if game.num_players != 2:
        raise InvalidProfileError("protocol needs a two-player game")
    idx = []
    for i, acts in enumerate(game.actions):
        if set(acts) != {first, second}:
            raise InvalidProfileError(f"player {i + 1} must have actions {{{first}, {second}}}, has {list(acts)}")
        idx.append((acts.index(first), acts.index(second)))
    return idx


def _bit_protocol(game: Game, program, names: tuple[str, str], protocol: str,
                  seed: int, trials: int) -> ProtocolRun:
    index = _two_agent_actions(game, *names)

    def play(bits: np.ndarray) -> np.ndarray:
        # bits: (..., 2); returns game action indices (..., 2)
        chosen = [program(i + 1, bits[..., i], bits[..., 1 - i]) for i in range(2)]
        return np.stack([np.choose(chosen[i], index[i]) for i in range(2)], axis=-1)

    all_bits = np.array(list(itertools.product((0, 1), repeat=2)))
    profiles = play(all_bits)
    exact: dict = {}
    for prof in map(tuple, profiles):
        exact[prof] = exact.get(prof, 0.0) + 1.0 / len(all_bits)
    dist = JointDistribution.from_pairs(sorted(exact.items()))
    run = ProtocolRun(protocol, 2, seed, trials, dist, expected_utility(game, dist), action_names=game.actions)
    if trials > 0:
        bits = make_rng(seed).integers(0, 2, size=(trials, 2))
        realized = play(bits)
        utils = game.payoffs[realized[:, 0], realized[:, 1]]
        _fill_stats(run, utils)
    return run


def _fill_stats(run: ProtocolRun, utils: np.ndarray) -> None:
    run.empirical_means = utils.mean(axis=0)
    if run.trials > 1:
        run.standard_errors = utils.std(axis=0, ddof=1) / np.sqrt(run.trials)
    else:
        run.standard_errors = np.full(utils.shape[1], np.nan)


def run_bos_protocol(game: Game, seed: int = 0, trials: int = 0) -> ProtocolRun:
    return _bit_protocol(game, bos_program, ("B", "S"), "bos_xor", seed, trials)


def run_anticoord_protocol(game: Game, seed: int = 0, trials: int = 0) -> ProtocolRun:
    return _bit_protocol(game, anticoord_program, ("C", "S"), "anticoord_xor", seed, trials)


def run_choose_winner(n: int, seed: int = 0, trials: int = 0, chunk: int = 50_000) -> ProtocolRun:
    """Platonia with n agents; exactly one agent submits in every trial.

    Profiles use action 0 = S(UBMIT), 1 = D(ON'T), matching ``catalog.platonia``.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError("choose-winner needs at least one agent")
    n = int(n)
    ids = np.arange(1, n + 1)
    # exact law of the draw sum mod n: convolve n uniform residues
    law = np.zeros(n)
    law[0] = 1.0
    uniform = np.full(n, 1.0 / n)
    for _ in range(n):
        law = sum(uniform[s] * np.roll(law, s) for s in range(n))
    pairs = []
    for residue in range(n):
        submit = choose_winner_program(ids, np.array([residue]), n)
        pairs.append((tuple(int(k) for k in np.where(submit, 0, 1)), float(law[residue])))
    pairs.sort()
    dist = JointDistribution.from_pairs(pairs)
    exact = np.zeros(n)
    for prof, p in dist.support:
        exact += p * np.array(_platonia_utility(prof))
    run = ProtocolRun("choose_winner", n, seed, trials, dist, exact,
                      action_names=(("S", "D"),) * n)
    if trials > 0:
        rng = make_rng(seed)
        totals = np.zeros(n)
        squares = np.zeros(n)
        submitters_ok = True
        done = 0
        while done < trials:
            size = min(chunk, trials - done)
            draws = rng.integers(0, n, size=(size, n))
            submit = choose_winner_program(ids[None, :], draws[:, None, :], n)
            counts = submit.sum(axis=1)
            submitters_ok &= bool(np.all(counts == 1))
            utils = (submit & (counts == 1)[:, None]).astype(float)
            totals += utils.sum(axis=0)
            squares += (utils ** 2).sum(axis=0)
            done += size
        mean = totals / trials
        run.empirical_means = mean
        if trials > 1:
            var = (squares - trials * mean ** 2) / (trials - 1)
            run.standard_errors = np.sqrt(np.clip(var, 0.0, None) / trials)
        else:
            run.standard_errors = np.full(n, np.nan)
        run.extra["exactly_one_submitter"] = submitters_ok
    return run


def _platonia_utility(profile) -> list[float]:
    submitters = [i for i, a in enumerate(profile) if a == 0]
    out = [0.0] * len(profile)
    if len(submitters) == 1:
        out[submitters[0]] = 1.0
    return out


@dataclass
class CandidateVerdict:
    supported_on_pareto: bool
    undominated: bool
    improvement: float
    witness: JointDistribution | None
    off_pareto: list = field(default_factory=list)
    common_program: str = "unchecked"
    diagnostics: dict = field(default_factory=dict)


def verify_candidate(game: Game, p: JointDistribution) -> CandidateVerdict:
    """Check support on the Pareto set and the absence of a dominating distribution.

    The dominance test maximizes the utility-sum gain over distributions q on
    the Pareto set whose expected utilities are all at least those of ``p``.
    Whether ``p`` is produced by a common program is not checked here.
    """
    for prof in p.profiles:
        game.check_profile(prof)
    pareto = pareto_optimal_profiles(game)
    off = [prof for prof in p.profiles if prof not in pareto]
    base = expected_utility(game, p)
    u = pareto.payoffs
    size = len(pareto)
    prob = lp.LinearProgram(u.sum(axis=1))
    prob.eq(np.ones(size), 1.0)
    for i in range(game.num_players):
        prob.ge(u[:, i], base[i] - 1e-9 * max(1.0, abs(base[i])))
    sol = lp.solve(prob, list(np.eye(size)))
    diagnostics = {"lp_status": sol.status.value, **sol.diagnostics}
    if sol.status is lp.Status.UNBOUNDED:
        raise NumericalError("domination LP unbounded")
    if not sol.optimal:
        # no distribution on the Pareto set even weakly dominates p
        return CandidateVerdict(not off, True, 0.0, None, off, diagnostics=diagnostics)
    gain = float(sol.value - base.sum())
    dominated = gain > DOMINATION_TOL
    witness = None
    if dominated:
        w = np.where(sol.x > 1e-12, sol.x, 0.0)
        w /= w.sum()
        witness = JointDistribution.from_pairs((pareto.profiles[k], float(w[k])) for k in np.flatnonzero(w))
    return CandidateVerdict(not off, not dominated, gain, witness, off, diagnostics=diagnostics)
