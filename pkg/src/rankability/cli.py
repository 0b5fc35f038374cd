"""Command-line frontend: ingest CSVs, run solvers, emit reports.

JSON is the canonical output (stable key order, shortest round-trip
floats, no wall-clock fields), so identical inputs and configuration
produce byte-identical bytes regardless of worker count. CSV output is a
flattened projection of the same data.

Exit codes: 0 proven/ok, 1 input or usage error, 2 unproven result
(time limit), 3 oracle mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass

from .core import WeightMatrix, read_matrix_csv
from .errors import RankabilityError, UnprovenOptimumError
from .ktdiam import kappa_by_enumeration, solve_kt
from .lop import SolverConfig, enumerate_optima, solve_lop
from .rating import colley_ratings, massey_ratings, ranking_from_ratings
from .sports import (
    Stage,
    foresight_accuracy,
    read_alias_csv,
    read_feature_table,
    read_games_csv,
    season_report,
)

__all__ = ["CliConfig", "main"]

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_UNPROVEN = 2
EXIT_ORACLE = 3

_WORKERS_ENV = "RANKABILITY_WORKERS"
_MATRIX_KINDS = ("matrix", "features")


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit with the input-error code."""

    def error(self, message):
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class CliConfig:
    """Validated invocation: input location/kind, output shape, knobs."""

    command: str
    input_path: str
    kind: str
    format: str
    output: str | None
    tie_mode: str
    oracle: bool
    aliases_path: str | None
    solver: SolverConfig


def _build_parser() -> _Parser:
    parser = _Parser(prog="rankability", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "lop": "solve for an optimal ranking and the degree of linearity",
        "kappa": "maximal Kendall tau distance between optimal rankings",
        "enumerate": "list every optimal ranking",
        "season": "per-season rankability report from game data",
        "ratings": "Colley and Massey ratings from game data",
    }
    for name, help_text in commands.items():
        p = sub.add_parser(name, help=help_text)
        game_command = name in ("season", "ratings")
        p.add_argument("--input", required=True, help="input CSV path")
        p.add_argument(
            "--kind",
            choices=("matrix", "games", "features"),
            default="games" if game_command else "matrix",
            help="how to interpret the input file",
        )
        p.add_argument(
            "--format", choices=("json", "csv"), default="json",
            help="output format (JSON is canonical)",
        )
        p.add_argument("--output", default=None, help="output path (default stdout)")
        p.add_argument(
            "--time-limit", type=float, default=None, metavar="SEC",
            help="wall-clock budget; exceeding it returns unproven results",
        )
        p.add_argument(
            "--workers", type=int, default=None, metavar="N",
            help=f"worker count (default ${_WORKERS_ENV} or 1); "
            "results are identical for any value",
        )
        p.add_argument(
            "--cap", type=int, default=None, metavar="N",
            help="enumeration cap on the number of optimal rankings",
        )
        p.add_argument(
            "--tolerance", type=float, default=None, metavar="EPS",
            help="numeric tolerance for optimality comparisons",
        )
        p.add_argument(
            "--seed", type=int, default=None, metavar="N",
            help="seed for the heuristic's randomized restarts",
        )
        p.add_argument(
            "--tie-mode", choices=("half", "strict"), default="half",
            help="tie credit in accuracy metrics",
        )
        p.add_argument(
            "--oracle", action="store_true",
            help="cross-check kappa against full enumeration (exit 3 on mismatch)",
        )
        p.add_argument(
            "--aliases", default=None, metavar="PATH",
            help="team alias CSV (raw_name,canonical_name) for game data",
        )
    return parser


def _solver_config(args) -> SolverConfig:
    defaults = SolverConfig()
    workers = args.workers
    if workers is None:
        env = os.environ.get(_WORKERS_ENV)
        if env is not None:
            try:
                workers = int(env)
            except ValueError:
                raise ValueError(
                    f"{_WORKERS_ENV} must be an integer, got {env!r}"
                ) from None
    return SolverConfig(
        time_limit=args.time_limit,
        enumeration_cap=(
            args.cap if args.cap is not None else defaults.enumeration_cap
        ),
        tolerance=(
            args.tolerance if args.tolerance is not None else defaults.tolerance
        ),
        parallel_workers=(
            workers if workers is not None else defaults.parallel_workers
        ),
        rng_seed=args.seed if args.seed is not None else defaults.rng_seed,
    )


def _load_matrix(config: CliConfig) -> WeightMatrix:
    if config.kind == "matrix":
        return read_matrix_csv(config.input_path)
    if config.kind == "features":
        return read_feature_table(config.input_path)
    raise ValueError(
        f"the {config.command} command takes --kind matrix or features, "
        "not games (use the season or ratings command)"
    )


def _load_seasons(config: CliConfig):
    if config.kind != "games":
        raise ValueError(
            f"the {config.command} command takes --kind games"
        )
    aliases = read_alias_csv(config.aliases_path) if config.aliases_path else None
    return read_games_csv(config.input_path, aliases)


def _ranking_payload(ranking) -> list[int]:
    return [int(v) for v in ranking.order]


def _emit(config: CliConfig, text: str) -> None:
    if config.output is None:
        sys.stdout.write(text)
    else:
        with open(config.output, "w", encoding="utf-8") as handle:
            handle.write(text)


def _emit_json(config: CliConfig, payload) -> None:
    _emit(config, json.dumps(payload, indent=2) + "\n")


def _emit_csv(config: CliConfig, header, rows) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    _emit(config, buffer.getvalue())


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return value


def cmd_lop(config: CliConfig) -> int:
    matrix = _load_matrix(config)
    total = matrix.total_sum()
    if total == 0.0:
        raise ValueError("the degree of linearity is undefined for an all-zero matrix")
    result = solve_lop(matrix, config.solver)
    lambda_ = float(result.optimal_value / total)
    payload = {
        "command": "lop",
        "n": matrix.n,
        "labels": list(matrix.labels) if matrix.labels else None,
        "k_star": float(result.optimal_value),
        "lambda": lambda_,
        "ranking": _ranking_payload(result.ranking),
        "proven": result.proven,
        "stats": {
            "nodes": result.stats.nodes,
            "pruned": result.stats.pruned,
            "heuristic_value": float(result.stats.heuristic_value),
        },
    }
    if config.format == "json":
        _emit_json(config, payload)
    else:
        _emit_csv(
            config,
            ["k_star", "lambda", "proven", "ranking"],
            [[
                _csv_cell(payload["k_star"]),
                _csv_cell(payload["lambda"]),
                _csv_cell(payload["proven"]),
                " ".join(map(str, payload["ranking"])),
            ]],
        )
    return EXIT_OK if result.proven else EXIT_UNPROVEN


def cmd_kappa(config: CliConfig) -> int:
    matrix = _load_matrix(config)
    lop_result = solve_lop(matrix, config.solver)
    if not lop_result.proven:
        raise UnprovenOptimumError(
            "the optimal value was not proven within the time limit"
        )
    kt = solve_kt(matrix, lop_result.optimal_value, config.solver)
    payload = {
        "command": "kappa",
        "n": matrix.n,
        "labels": list(matrix.labels) if matrix.labels else None,
        "k_star": float(lop_result.optimal_value),
        "kappa": int(kt.kappa),
        "concordant_count": int(kt.concordant_count),
        "pair": [
            _ranking_payload(kt.pair[0]),
            _ranking_payload(kt.pair[1]),
        ],
        "proven": kt.proven,
    }
    oracle_exit = EXIT_OK
    if config.oracle:
        reference = kappa_by_enumeration(matrix, config.solver)
        payload["oracle_kappa"] = int(reference.kappa)
        if reference.kappa != kt.kappa:
            sys.stderr.write(
                f"oracle mismatch: search found kappa={kt.kappa}, "
                f"enumeration found kappa={reference.kappa}\n"
            )
            oracle_exit = EXIT_ORACLE
    if config.format == "json":
        _emit_json(config, payload)
    else:
        _emit_csv(
            config,
            ["kappa", "concordant_count", "proven", "first", "second"],
            [[
                payload["kappa"],
                payload["concordant_count"],
                _csv_cell(payload["proven"]),
                " ".join(map(str, payload["pair"][0])),
                " ".join(map(str, payload["pair"][1])),
            ]],
        )
    if oracle_exit != EXIT_OK:
        return oracle_exit
    return EXIT_OK if kt.proven else EXIT_UNPROVEN


def cmd_enumerate(config: CliConfig) -> int:
    matrix = _load_matrix(config)
    optima = enumerate_optima(matrix, config.solver)
    payload = {
        "command": "enumerate",
        "n": matrix.n,
        "labels": list(matrix.labels) if matrix.labels else None,
        "count": optima.count,
        "truncated": optima.truncated,
        "rankings": [_ranking_payload(r) for r in optima.rankings],
    }
    if config.format == "json":
        _emit_json(config, payload)
    else:
        _emit_csv(
            config,
            ["index", "ranking"],
            [
                [idx + 1, " ".join(map(str, ranking))]
                for idx, ranking in enumerate(payload["rankings"])
            ],
        )
    return EXIT_OK


def _season_payload(report) -> dict:
    return {
        "season": report.season,
        "teams": list(report.teams),
        "lambda": float(report.lambda_),
        "kappa": int(report.kappa),
        "k_star": float(report.k_star),
        "hindsight": {k: float(v) for k, v in report.hindsight.items()},
        "foresight": {k: float(v) for k, v in report.foresight.items()},
        "foresight_divergence": (
            None
            if report.foresight_divergence is None
            else float(report.foresight_divergence)
        ),
        "optimal_ranking": _ranking_payload(report.optimal_ranking),
        "colley_ranking": _ranking_payload(report.colley_ranking),
        "massey_ranking": _ranking_payload(report.massey_ranking),
        "witness_pair": [
            _ranking_payload(report.witness_pair[0]),
            _ranking_payload(report.witness_pair[1]),
        ],
        "optima_count": report.optima_count,
        "proven": report.proven,
        "truncated": report.truncated,
    }


def cmd_season(config: CliConfig) -> int:
    seasons = _load_seasons(config)
    reports = [
        season_report(gs, config.solver, tie_mode=config.tie_mode)
        for gs in seasons
    ]
    if config.format == "json":
        _emit_json(
            config,
            {
                "command": "season",
                "tie_mode": config.tie_mode,
                "seasons": [_season_payload(r) for r in reports],
            },
        )
    else:
        header = [
            "season", "lambda", "kappa", "k_star",
            "hind_opt", "hind_colley", "hind_massey",
            "fore_opt", "fore_colley", "fore_massey",
            "fore_opt_a", "fore_opt_b", "fore_abs_diff",
            "optima_count", "proven", "truncated",
        ]
        rows = []
        for gs, report in zip(seasons, reports):
            if report.foresight:
                fore_a = foresight_accuracy(
                    gs, report.witness_pair[0], config.tie_mode
                )
                fore_b = foresight_accuracy(
                    gs, report.witness_pair[1], config.tie_mode
                )
                rows_fore = [
                    _csv_cell(report.foresight["optimal"]),
                    _csv_cell(report.foresight["colley"]),
                    _csv_cell(report.foresight["massey"]),
                    _csv_cell(fore_a),
                    _csv_cell(fore_b),
                    _csv_cell(report.foresight_divergence),
                ]
            else:
                rows_fore = ["", "", "", "", "", ""]
            rows.append(
                [
                    report.season,
                    _csv_cell(report.lambda_),
                    report.kappa,
                    _csv_cell(report.k_star),
                    _csv_cell(report.hindsight["optimal"]),
                    _csv_cell(report.hindsight["colley"]),
                    _csv_cell(report.hindsight["massey"]),
                    *rows_fore,
                    _csv_cell(report.optima_count),
                    _csv_cell(report.proven),
                    _csv_cell(report.truncated),
                ]
            )
        _emit_csv(config, header, rows)
    return EXIT_OK if all(r.proven for r in reports) else EXIT_UNPROVEN


def cmd_ratings(config: CliConfig) -> int:
    seasons = _load_seasons(config)
    blocks = []
    for gs in seasons:
        regular = gs.filter_stage(Stage.REGULAR)
        colley = colley_ratings(regular)
        massey = massey_ratings(regular)
        blocks.append(
            {
                "season": gs.seasons[0],
                "teams": list(gs.teams),
                "colley": {
                    "values": [float(v) for v in colley.values],
                    "ranking": _ranking_payload(ranking_from_ratings(colley)),
                },
                "massey": {
                    "values": [float(v) for v in massey.values],
                    "ranking": _ranking_payload(ranking_from_ratings(massey)),
                    "connected": massey.connected,
                },
            }
        )
    if config.format == "json":
        _emit_json(config, {"command": "ratings", "seasons": blocks})
    else:
        rows = []
        for block in blocks:
            colley_rank = {team: pos for pos, team in enumerate(block["colley"]["ranking"], 1)}
            massey_rank = {team: pos for pos, team in enumerate(block["massey"]["ranking"], 1)}
            for idx, team in enumerate(block["teams"], 1):
                rows.append(
                    [
                        block["season"],
                        team,
                        _csv_cell(block["colley"]["values"][idx - 1]),
                        _csv_cell(block["massey"]["values"][idx - 1]),
                        colley_rank[idx],
                        massey_rank[idx],
                    ]
                )
        _emit_csv(
            config,
            ["season", "team", "colley_rating", "massey_rating",
             "colley_rank", "massey_rank"],
            rows,
        )
    return EXIT_OK


_COMMANDS = {
    "lop": cmd_lop,
    "kappa": cmd_kappa,
    "enumerate": cmd_enumerate,
    "season": cmd_season,
    "ratings": cmd_ratings,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        solver = _solver_config(args)
        config = CliConfig(
            command=args.command,
            input_path=args.input,
            kind=args.kind,
            format=args.format,
            output=args.output,
            tie_mode=args.tie_mode,
            oracle=args.oracle,
            aliases_path=args.aliases,
            solver=solver,
        )
        return _COMMANDS[args.command](config)
    except UnprovenOptimumError as exc:
        sys.stderr.write(f"rankability {args.command}: {exc}\n")
        return EXIT_UNPROVEN
    except (RankabilityError, ValueError, OSError) as exc:
        sys.stderr.write(f"rankability {args.command}: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
