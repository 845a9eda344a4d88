"""Command-line entry point: ``kantian-solve <command> ...``.

Every command prints one JSON report on stdout.  Failures print
``{"error": ...}`` on stderr with exit status 2 (usage or input file), 3
(domain or unsupported game) or 4 (numerical failure).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Sequence

from . import clique, greed, io, kantian, pareto, protocols, welfare
from .errors import (DomainError, GameFormatError, InvalidProfileError, NumericalError,
                     SizeLimitError, UnsupportedGameError)

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_NUMERIC = 0, 2, 3, 4

WELFARE_KINDS = {
    "rawlsian": welfare.WelfareKind.RAWLSIAN,
    "bentham": welfare.WelfareKind.BENTHAM_HARSANYI,
    "bestoff": welfare.WelfareKind.BEST_OFF,
    "percentile": welfare.WelfareKind.RAWLSIAN_PERCENTILE,
    "aspiration": welfare.WelfareKind.ASPIRATION,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise UsageError(f"file not found: {path}") from None
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _game(args):
    if not args.game:
        raise UsageError("a game file is required (-g FILE)")
    return io.parse_game(_read(args.game))


def _lambdas(text: str) -> list[float]:
    out = []
    for part in text.split(","):
        part = part.strip().lower()
        try:
            out.append(math.inf if part in ("inf", "infinity") else float(part))
        except ValueError:
            raise UsageError(f"bad lambda value {part!r}") from None
    return out


def cmd_pareto(args):
    game = _game(args)
    return io.pareto_to_dict(game, pareto.pareto_optimal_profiles(game))


def cmd_kantian_pure(args):
    game = _game(args)
    family = io.parse_family(_read(args.family)) if args.family else None
    result = kantian.pure_kantian(game, family)
    return io.kantian_to_dict(game, result, family.name if family else "replace_all")


def cmd_kantian_mixed(args):
    game = _game(args)
    if args.method == "exact":
        result = kantian.mixed_kantian_exact(game)
    else:
        result = kantian.mixed_kantian_replicator(game, args.seed, args.restarts, args.iters)
    return io.mixed_to_dict(game, result)


def cmd_pom(args):
    game = _game(args)
    return io.miscoordination_to_dict(game, kantian.price_of_miscoordination(game))


def cmd_welfare(args):
    game = _game(args)
    return io.welfare_to_dict(game, welfare.solve_welfare(game, WELFARE_KINDS[args.kind]))


def cmd_greed(args):
    game = _game(args)
    lams = _lambdas(args.lambdas)
    transformed = greed.greed_transform(game, lams, per_cell=args.per_cell)
    tg = transformed.game
    return {"concept": "lambda_utilitarian",
            "rule": "per_cell" if args.per_cell else "agent",
            "lambdas": transformed.lambdas,
            "greed_indices": transformed.greed_indices,
            "kantian_actions": [game.actions[i][k] for i, k in enumerate(transformed.kantian_actions)],
            "kantian_payoffs": transformed.kantian_payoffs,
            "tempted": transformed.tempted,
            "transformed_game": io.game_to_dict(tg),
            "pure_nash": [io.names(tg, p) for p in greed.pure_nash(tg)]}


def cmd_nash(args):
    game = _game(args)
    return {"concept": "pure_nash", "equilibria": [io.names(game, p) for p in greed.pure_nash(game)]}


def cmd_platonia(args):
    p, payoff = kantian.platonia_mixed_kantian(args.n)
    return {"concept": "platonia_mixed_kantian", "n": args.n, "p": p, "expected_payoff": payoff}


def cmd_protocol(args):
    if args.name == "choose-winner":
        if args.n is None:
            raise UsageError("choose-winner needs --n N")
        run = protocols.run_choose_winner(args.n, args.seed, args.trials)
    else:
        game = _game(args)
        runner = protocols.run_bos_protocol if args.name == "bos" else protocols.run_anticoord_protocol
        run = runner(game, args.seed, args.trials)
    return io.protocol_to_dict(run)


def cmd_verify(args):
    game = _game(args)
    dist = io.parse_distribution(game, _read(args.dist))
    return io.verdict_to_dict(game, protocols.verify_candidate(game, dist))


def cmd_clique_demo(args):
    adj, labels = clique.adjacency_matrix(io.parse_graph(_read(args.graph)))
    if adj.shape[0] == 0:
        raise DomainError("graph has no vertices")
    result = kantian.mixed_kantian_exact(clique.adjacency_game(adj))
    brute = clique.max_clique_bruteforce(adj)
    implied = clique.clique_from_optimum(result.value)
    return {"concept": "motzkin_straus",
            "vertices": labels,
            "quadratic_optimum": result.value,
            "optimal_weights": result.strategy,
            "implied_clique_size": implied,
            "implied_clique_size_rounded": int(round(implied)),
            "bruteforce_clique_size": brute,
            "agree": int(round(implied)) == brute}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kantian-solve", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_game(name, func, help_text, required=True):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("-g", "--game", required=required, help="game JSON file")
        p.set_defaults(func=func)
        return p

    with_game("pareto", cmd_pareto, "Pareto-optimal pure profiles")
    p = with_game("kantian-pure", cmd_kantian_pure, "pure Kantian equilibria")
    p.add_argument("--family", help="variation family JSON file (default: replace-all)")
    p = with_game("kantian-mixed", cmd_kantian_mixed, "mixed Kantian equilibrium of a symmetric 2-player game")
    p.add_argument("--method", choices=["exact", "replicator"], default="exact")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--iters", type=int, default=10_000)
    with_game("pom", cmd_pom, "price of miscoordination")
    p = with_game("welfare", cmd_welfare, "other-regarding welfare equilibria")
    p.add_argument("--kind", choices=sorted(WELFARE_KINDS), required=True)
    p = with_game("greed", cmd_greed, "lambda-utilitarian transform and its pure Nash equilibria")
    p.add_argument("--lambda", dest="lambdas", required=True, help="comma-separated lambdas, one per player")
    p.add_argument("--per-cell", action="store_true", help="apply the threshold cell by cell")
    with_game("nash", cmd_nash, "pure Nash equilibria")
    p = sub.add_parser("platonia", help="closed-form mixed Kantian strategy in Platonia")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_platonia)
    p = with_game("protocol", cmd_protocol, "simulate a Kantian program protocol", required=False)
    p.add_argument("--name", choices=["bos", "anticoord", "choose-winner"], required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=0)
    p = with_game("verify", cmd_verify, "check a candidate distribution for Pareto support and undominatedness")
    p.add_argument("--dist", required=True, help="distribution JSON file")
    p = sub.add_parser("clique-demo", help="quadratic optimum of a graph vs its clique number")
    p.add_argument("--graph", required=True, help="adjacency-list JSON file")
    p.set_defaults(func=cmd_clique_demo)
    return parser


def _fail(message: str, code: int, kind: str) -> int:
    print(json.dumps({"error": message, "kind": kind, "exit_code": code}), file=sys.stderr)
    return code


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "trials", 0) and args.trials < 0:
            raise UsageError("--trials must be nonnegative")
        report = args.func(args)
    except (UsageError, GameFormatError) as exc:
        return _fail(str(exc), EXIT_USAGE, "usage")
    except (DomainError, UnsupportedGameError, InvalidProfileError, SizeLimitError) as exc:
        return _fail(str(exc), EXIT_DOMAIN, type(exc).__name__)
    except NumericalError as exc:
        return _fail(str(exc), EXIT_NUMERIC, "numerical")
    sys.stdout.write(io.dumps(report) + "\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
