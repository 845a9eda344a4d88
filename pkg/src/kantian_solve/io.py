"""JSON documents for games, distributions, variation families and graphs, plus report encoding.

Game document::

    {"players": 2,
     "actions": [["C", "D"], ["C", "D"]],
     "payoffs": [{"profile": ["C", "C"], "u": [2, 2]}, ...]}

Distribution document: ``[{"profile": ["C", "D"], "p": 0.5}, ...]``.
Variation family document: ``{"maps": {"r1": {"C": "D", "D": "C"}, ...}}``.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from .errors import GameFormatError, InvalidProfileError
from .game import Game, JointDistribution, check_profile_cap
from .kantian import KantianResult, MiscoordinationReport, MixedKantianResult, VariationFamily
from .pareto import ParetoSet
from .protocols import CandidateVerdict, ProtocolRun
from .welfare import EquilibriumReport


def _load(text: str | bytes, what: str) -> Any:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise GameFormatError(f"{what}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def parse_game(text: str | bytes) -> Game:
    doc = _load(text, "game")
    if not isinstance(doc, dict):
        raise GameFormatError("game: top level must be an object")
    for key in ("players", "actions", "payoffs"):
        if key not in doc:
            raise GameFormatError(f"game: missing key {key!r}")
    n = doc["players"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise GameFormatError("game.players: must be a positive integer")
    actions = doc["actions"]
    if not isinstance(actions, list) or len(actions) != n:
        raise GameFormatError(f"game.actions: expected {n} action lists")
    for i, acts in enumerate(actions):
        if not isinstance(acts, list) or not acts or not all(isinstance(a, str) for a in acts):
            raise GameFormatError(f"game.actions[{i}]: must be a nonempty list of strings")
        if len(set(acts)) != len(acts):
            raise GameFormatError(f"game.actions[{i}]: duplicate action names")
    shape = tuple(len(a) for a in actions)
    check_profile_cap(shape)
    index = [{a: k for k, a in enumerate(acts)} for acts in actions]
    payoffs = np.zeros(shape + (n,))
    seen = np.zeros(shape, dtype=bool)
    entries = doc["payoffs"]
    if not isinstance(entries, list):
        raise GameFormatError("game.payoffs: must be a list")
    for e, entry in enumerate(entries):
        where = f"game.payoffs[{e}]"
        if not isinstance(entry, dict) or "profile" not in entry or "u" not in entry:
            raise GameFormatError(f"{where}: entries need 'profile' and 'u'")
        prof, u = entry["profile"], entry["u"]
        if not isinstance(prof, list) or len(prof) != n:
            raise GameFormatError(f"{where}.profile: expected {n} action names")
        if not isinstance(u, list) or len(u) != n:
            raise GameFormatError(f"{where}.u: expected {n} numbers")
        key = []
        for i, name in enumerate(prof):
            if name not in index[i]:
                raise GameFormatError(f"{where}.profile: unknown action {name!r} for player {i + 1}")
            key.append(index[i][name])
        key = tuple(key)
        if seen[key]:
            raise GameFormatError(f"{where}: duplicate entry for profile {prof}")
        values = [float(x) for x in u if isinstance(x, (int, float)) and not isinstance(x, bool)]
        if len(values) != n or not all(math.isfinite(x) for x in values):
            raise GameFormatError(f"{where}.u: utilities must be finite numbers")
        seen[key] = True
        payoffs[key] = values
    if not seen.all():
        missing = tuple(int(k) for k in np.argwhere(~seen)[0])
        names = [actions[i][k] for i, k in enumerate(missing)]
        raise GameFormatError(f"game.payoffs: no entry for profile {names} "
                              f"({int((~seen).sum())} profile(s) missing)")
    return Game(tuple(tuple(a) for a in actions), payoffs)


def game_to_dict(game: Game) -> dict:
    entries = []
    for prof in game.profiles():
        entries.append({"profile": list(game.profile_names(prof)),
                        "u": [float(x) for x in game.payoffs[prof]]})
    return {"players": game.num_players, "actions": [list(a) for a in game.actions], "payoffs": entries}


def serialize_game(game: Game) -> str:
    return dumps(game_to_dict(game))


def parse_distribution(game: Game, text: str | bytes) -> JointDistribution:
    doc = _load(text, "distribution")
    if not isinstance(doc, list):
        raise GameFormatError("distribution: top level must be a list")
    pairs = []
    for e, entry in enumerate(doc):
        if not isinstance(entry, dict) or "profile" not in entry or "p" not in entry:
            raise GameFormatError(f"distribution[{e}]: entries need 'profile' and 'p'")
        try:
            prof = game.profile_from_names(entry["profile"])
        except InvalidProfileError as exc:
            raise GameFormatError(f"distribution[{e}].profile: {exc}") from None
        pairs.append((prof, entry["p"]))
    try:
        return JointDistribution.from_pairs(pairs)
    except (InvalidProfileError, TypeError, ValueError) as exc:
        raise GameFormatError(f"distribution: {exc}") from None


def parse_family(text: str | bytes) -> VariationFamily:
    doc = _load(text, "family")
    maps = doc.get("maps") if isinstance(doc, dict) else None
    if not isinstance(maps, dict) or not maps:
        raise GameFormatError("family: expected an object with a nonempty 'maps' object")
    for r, table in maps.items():
        if not isinstance(table, dict):
            raise GameFormatError(f"family.maps[{r!r}]: must map action names to action names")
    return VariationFamily({str(r): dict(t) for r, t in maps.items()}, name=str(doc.get("name", "custom")))


def parse_graph(text: str | bytes):
    doc = _load(text, "graph")
    if isinstance(doc, dict) and "adjacency" in doc:
        doc = doc["adjacency"]
    if not isinstance(doc, (list, dict)):
        raise GameFormatError("graph: expected neighbour lists or a vertex -> neighbours object")
    return doc


# -- report encoding ---------------------------------------------------------

def jsonable(value: Any) -> Any:
    """Convert numpy values and non-finite floats into plain JSON values."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    return value


def dumps(obj: Any) -> str:
    # repr-based float output is the shortest string that round-trips exactly
    return json.dumps(jsonable(obj), indent=2, allow_nan=False)


def names(game: Game, profile) -> list[str]:
    return list(game.profile_names(profile))


def distribution_to_list(game: Game, dist: JointDistribution) -> list[dict]:
    return [{"profile": names(game, prof), "p": p} for prof, p in dist.support]


def pareto_to_dict(game: Game, pareto: ParetoSet) -> dict:
    return {"concept": "pareto_optimal_profiles",
            "profiles": [names(game, p) for p in pareto.profiles],
            "payoffs": pareto.payoffs,
            "size": len(pareto)}


def kantian_to_dict(game: Game, result: KantianResult, family: str) -> dict:
    return {"concept": "pure_kantian",
            "family": family,
            "equilibria": [names(game, p) for p in result.equilibria],
            "payoffs": result.payoffs}


def mixed_to_dict(game: Game, result: MixedKantianResult) -> dict:
    return {"concept": "mixed_kantian",
            "method": result.method,
            "strategy": {a: float(w) for a, w in zip(game.actions[0], result.strategy)},
            "weights": result.strategy,
            "value": result.value,
            "support": [game.actions[0][k] for k in result.support],
            "certificate": {"multiplier": result.multiplier, "max_off_support_violation": result.max_violation},
            "diagnostics": result.diagnostics}


def miscoordination_to_dict(game: Game, rep: MiscoordinationReport) -> dict:
    return {"concept": "price_of_miscoordination",
            "kantian_actions": [game.actions[0][k] for k in rep.kantian_actions],
            "kantian_payoff": rep.kantian_payoff,
            "worst_payoff": rep.worst_payoff,
            "worst_profile": names(game, rep.worst_profile),
            "price": rep.price,
            "common_mixture_price": rep.common_mixture_price,
            "common_mixture_worst_utilities": rep.common_mixture_worst,
            "theoretical_range": list(rep.theoretical_range),
            "uniform_mixing_utility": rep.uniform_mixing_utility}


def welfare_to_dict(game: Game, rep: EquilibriumReport) -> dict:
    out = {"concept": rep.kind.value,
           "support": [names(game, p) for p in rep.distribution.profiles],
           "weights": rep.distribution.weights,
           "distribution": distribution_to_list(game, rep.distribution),
           "expected_utilities": rep.expected_utilities,
           "stage1_value": rep.stage1_value}
    if rep.pareto is not None:
        out["pareto_set"] = [names(game, p) for p in rep.pareto.profiles]
    if "percentiles" in rep.extra:
        out["percentiles"] = rep.extra["percentiles"]
    if "nep" in rep.extra:
        out["natural_expectation_point"] = rep.extra["nep"]
        out["happy"] = rep.extra["happy"]
    out["diagnostics"] = rep.diagnostics
    return out


def protocol_to_dict(run: ProtocolRun) -> dict:
    def label(prof):
        return [run.action_names[i][k] for i, k in enumerate(prof)]

    return {"concept": "kantian_program_protocol",
            "protocol": run.protocol,
            "n_agents": run.n_agents,
            "seed": run.seed,
            "trials": run.trials,
            "exact_distribution": [{"profile": label(p), "p": w} for p, w in run.exact_distribution.support],
            "exact_utilities": run.exact_utilities,
            "empirical_means": run.empirical_means,
            "standard_errors": run.standard_errors,
            # every agent runs the same built-in program
            "common_program": "certified",
            **run.extra}


def verdict_to_dict(game: Game, verdict: CandidateVerdict) -> dict:
    return {"concept": "kantian_program_candidate",
            "supported_on_pareto": verdict.supported_on_pareto,
            "undominated": verdict.undominated,
            "improvement": verdict.improvement,
            "witness": None if verdict.witness is None else distribution_to_list(game, verdict.witness),
            "off_pareto_profiles": [names(game, p) for p in verdict.off_pareto],
            "common_program": verdict.common_program,
            "diagnostics": verdict.diagnostics}
