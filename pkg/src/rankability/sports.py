"""Game-data ingestion, win matrices, and season rankability reports.

Bridges raw game results and the solvers: builds the win matrix with the
half-point tie convention, measures how well a ranking explains played
games (hindsight) or predicts playoff games (foresight), and assembles
per-season reports with optimal, Colley, and Massey rankings side by
side.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np

from .core import Ranking, WeightMatrix
from .errors import (
    DimensionMismatchError,
    EmptyDataError,
    MalformedInputError,
    UndefinedMetricError,
)
from .ktdiam import KtResult, solve_kt
from .lop import DEFAULT_CONFIG, SolverConfig, enumerate_optima, solve_lop
from .rating import colley_ratings, massey_ratings, ranking_from_ratings

__all__ = [
    "Stage",
    "GameRecord",
    "GameSet",
    "SeasonReport",
    "game_set_from_records",
    "read_games_csv",
    "read_alias_csv",
    "read_feature_table",
    "build_win_matrix",
    "hindsight_accuracy",
    "foresight_accuracy",
    "foresight_divergence",
    "pearson_correlation",
    "season_report",
]

_TIE_MODES = ("half", "strict")


class Stage(str, Enum):
    REGULAR = "regular"
    PLAYOFF = "playoff"


@dataclass(frozen=True)
class GameRecord:
    """One played game; scores are final, equal scores mean a tie."""

    season: int
    stage: Stage
    team_a: str
    team_b: str
    score_a: int
    score_b: int
    date: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "stage", Stage(self.stage))
        if self.team_a == self.team_b:
            raise MalformedInputError(
                f"a game needs two distinct teams, got {self.team_a!r} twice"
            )
        if self.score_a < 0 or self.score_b < 0:
            raise MalformedInputError(
                f"scores must be nonnegative, got {self.score_a}:{self.score_b}"
            )

    @property
    def tied(self) -> bool:
        return self.score_a == self.score_b


@dataclass(frozen=True)
class GameSet:
    """A schedule: unique team identifiers plus the games between them.

    Teams are kept in lexicographic order and indexed 1..n; rankings and
    rating vectors produced from a GameSet refer to teams through that
    index. The team list may include teams without games, but every
    game's teams must be listed.
    """

    teams: tuple[str, ...]
    games: tuple[GameRecord, ...]
    _index: dict[str, int] = field(
        init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self):
        teams = tuple(self.teams)
        games = tuple(self.games)
        if not teams:
            raise EmptyDataError("a game set needs at least one team")
        if list(teams) != sorted(set(teams)):
            raise MalformedInputError(
                "teams must be unique and in lexicographic order"
            )
        index = {team: pos + 1 for pos, team in enumerate(teams)}
        for record in games:
            for team in (record.team_a, record.team_b):
                if team not in index:
                    raise MalformedInputError(
                        f"game references unknown team {team!r}"
                    )
        object.__setattr__(self, "teams", teams)
        object.__setattr__(self, "games", games)
        object.__setattr__(self, "_index", index)

    @property
    def team_count(self) -> int:
        return len(self.teams)

    def index(self, team: str) -> int:
        """1-based index of a team in the lexicographic team order."""
        try:
            return self._index[team]
        except KeyError:
            raise MalformedInputError(f"unknown team {team!r}") from None

    def games_at(self, stage: Stage | str) -> tuple[GameRecord, ...]:
        stage = Stage(stage)
        return tuple(g for g in self.games if g.stage is stage)

    def filter_stage(self, stage: Stage | str) -> GameSet:
        """Same teams and indices, games restricted to one stage."""
        return GameSet(teams=self.teams, games=self.games_at(stage))

    def game_count(self, stage: Stage | str | None = None) -> int:
        return len(self.games if stage is None else self.games_at(stage))

    def tie_count(self, stage: Stage | str | None = None) -> int:
        games = self.games if stage is None else self.games_at(stage)
        return sum(1 for g in games if g.tied)

    @property
    def seasons(self) -> tuple[int, ...]:
        return tuple(sorted({g.season for g in self.games}))


def game_set_from_records(records) -> GameSet:
    """GameSet over exactly the teams appearing in the records."""
    records = tuple(records)
    if not records:
        raise EmptyDataError("no game records supplied")
    teams = sorted({t for r in records for t in (r.team_a, r.team_b)})
    return GameSet(teams=tuple(teams), games=records)


_REQUIRED_GAME_COLUMNS = (
    "season",
    "stage",
    "team_a",
    "team_b",
    "score_a",
    "score_b",
)


def read_games_csv(path, aliases: dict[str, str] | None = None) -> tuple[GameSet, ...]:
    """Parse a games CSV into one GameSet per season, ascending.

    Expected header: season,stage,team_a,team_b,score_a,score_b[,date];
    stage is regular or playoff; unknown columns are ignored. Team names
    are passed through the alias map before teams are collected, so a
    renamed franchise can be folded into one identifier.

    Raises:
        MalformedInputError: missing columns or an unparsable row, with
            the line number.
        EmptyDataError: no data rows.
    """
    aliases = aliases or {}
    by_season: dict[int, list[GameRecord]] = {}
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            raise EmptyDataError(f"{path}: empty file")
        fields = [name.strip() for name in reader.fieldnames]
        missing = [c for c in _REQUIRED_GAME_COLUMNS if c not in fields]
        if missing:
            raise MalformedInputError(
                f"{path}: header is missing columns {', '.join(missing)}"
            )
        for row in reader:
            line = reader.line_num
            values = {
                (k.strip() if k else k): (v.strip() if v else "")
                for k, v in row.items()
                if k is not None
            }
            if not any(values.values()):
                continue
            try:
                name_a = values["team_a"]
                name_b = values["team_b"]
                record = GameRecord(
                    season=int(values["season"]),
                    stage=Stage(values["stage"].lower()),
                    team_a=aliases.get(name_a, name_a),
                    team_b=aliases.get(name_b, name_b),
                    score_a=int(values["score_a"]),
                    score_b=int(values["score_b"]),
                    date=values.get("date") or None,
                )
            except (KeyError, ValueError, MalformedInputError) as exc:
                raise MalformedInputError(f"{path}: line {line}: {exc}") from exc
            by_season.setdefault(record.season, []).append(record)
    if not by_season:
        raise EmptyDataError(f"{path}: no game rows")
    return tuple(
        game_set_from_records(by_season[season]) for season in sorted(by_season)
    )


def read_alias_csv(path) -> dict[str, str]:
    """Parse a raw_name,canonical_name alias map.

    Raises:
        MalformedInputError: bad header, short row, or two rows mapping
            the same raw name to different canonical names.
    """
    aliases: dict[str, str] = {}
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None:
            raise EmptyDataError(f"{path}: empty file")
        names = [cell.strip().lower() for cell in header[:2]]
        if names != ["raw_name", "canonical_name"]:
            raise MalformedInputError(
                f"{path}: expected header raw_name,canonical_name"
            )
        for row in reader:
            if not any(cell.strip() for cell in row):
                continue
            if len(row) < 2:
                raise MalformedInputError(
                    f"{path}: line {reader.line_num}: expected two columns"
                )
            raw, canonical = row[0].strip(), row[1].strip()
            if raw in aliases and aliases[raw] != canonical:
                raise MalformedInputError(
                    f"{path}: line {reader.line_num}: {raw!r} mapped to both "
                    f"{aliases[raw]!r} and {canonical!r}"
                )
            aliases[raw] = canonical
    return aliases


def read_feature_table(path) -> WeightMatrix:
    """Build a win matrix from per-item feature ranks.

    Expected header: item,<feature1>,...; each feature cell holds a rank
    as an integer or a ratio like 9/1, lower meaning better. Items keep
    their file order. Entry (i, j) counts the features where item i
    outranks item j, plus 0.5 per tied feature.

    Raises:
        MalformedInputError: bad header, duplicate item, ragged row, or
            an unparsable rank, with the line number.
        EmptyDataError: fewer than two items.
    """
    names: list[str] = []
    rows: list[list[Fraction]] = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None:
            raise EmptyDataError(f"{path}: empty file")
        if not header or header[0].strip().lower() != "item" or len(header) < 2:
            raise MalformedInputError(
                f"{path}: expected header item,<feature>,..."
            )
        width = len(header)
        for row in reader:
            if not any(cell.strip() for cell in row):
                continue
            line = reader.line_num
            if len(row) != width:
                raise MalformedInputError(
                    f"{path}: line {line}: expected {width} cells, got {len(row)}"
                )
            name = row[0].strip()
            if name in names:
                raise MalformedInputError(
                    f"{path}: line {line}: duplicate item {name!r}"
                )
            try:
                ranks = [Fraction(cell.strip()) for cell in row[1:]]
            except (ValueError, ZeroDivisionError) as exc:
                raise MalformedInputError(
                    f"{path}: line {line}: {exc}"
                ) from exc
            names.append(name)
            rows.append(ranks)
    if len(names) < 2:
        raise EmptyDataError(f"{path}: a feature table needs at least two items")
    n = len(names)
    weights = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for mine, theirs in zip(rows[i], rows[j]):
                if mine < theirs:
                    weights[i, j] += 1.0
                elif mine == theirs:
                    weights[i, j] += 0.5
    return WeightMatrix(weights, labels=tuple(names))


def build_win_matrix(gs: GameSet, stage: Stage | str) -> WeightMatrix:
    """Win matrix over one stage: wins plus half a point per tie.

    The total sum equals the stage's game count, teams keep the
    GameSet's lexicographic index, and labels carry the team names.

    Raises:
        EmptyDataError: no games at the stage.
    """
    stage = Stage(stage)
    games = gs.games_at(stage)
    if not games:
        raise EmptyDataError(f"no {stage.value} games in the schedule")
    n = gs.team_count
    weights = np.zeros((n, n))
    for record in games:
        i = gs.index(record.team_a) - 1
        j = gs.index(record.team_b) - 1
        if record.score_a > record.score_b:
            weights[i, j] += 1.0
        elif record.score_b > record.score_a:
            weights[j, i] += 1.0
        else:
            weights[i, j] += 0.5
            weights[j, i] += 0.5
    return WeightMatrix(weights, labels=gs.teams)


def _ranking_accuracy(
    gs: GameSet,
    games: tuple[GameRecord, ...],
    sigma: Ranking,
    tie_mode: str,
) -> float:
    if tie_mode not in _TIE_MODES:
        raise ValueError(f"tie_mode must be one of {_TIE_MODES}, got {tie_mode!r}")
    if sigma.n != gs.team_count:
        raise DimensionMismatchError(
            f"ranking covers {sigma.n} items, schedule has {gs.team_count} teams"
        )
    credit = 0.0
    for record in games:
        i = gs.index(record.team_a)
        j = gs.index(record.team_b)
        if record.tied:
            if tie_mode == "half":
                credit += 0.5
        else:
            winner, loser = (i, j) if record.score_a > record.score_b else (j, i)
            if sigma.rank_of(winner) < sigma.rank_of(loser):
                credit += 1.0
    return credit / len(games)


def hindsight_accuracy(
    gs: GameSet, stage: Stage | str, sigma: Ranking, tie_mode: str = "half"
) -> float:
    """Fraction of a stage's games explained by a ranking.

    A game counts when the higher-ranked team won. With tie_mode "half",
    ties add half a point — under that convention the hindsight accuracy
    of any optimal ranking equals the degree of linearity exactly; with
    "strict" they count as misses.

    Raises:
        EmptyDataError: no games at the stage.
        DimensionMismatchError: ranking size differs from team count.
    """
    games = gs.games_at(stage)
    if not games:
        raise EmptyDataError(f"no {Stage(stage).value} games to score against")
    return _ranking_accuracy(gs, games, sigma, tie_mode)


def foresight_accuracy(
    gs: GameSet, sigma: Ranking, tie_mode: str = "half"
) -> float:
    """Fraction of playoff games predicted by a (regular-season) ranking.

    Raises:
        EmptyDataError: no playoff games.
        DimensionMismatchError: ranking size differs from team count.
    """
    games = gs.games_at(Stage.PLAYOFF)
    if not games:
        raise EmptyDataError("no playoff games to predict")
    return _ranking_accuracy(gs, games, sigma, tie_mode)


def foresight_divergence(
    gs: GameSet, cfg: SolverConfig | None = None, tie_mode: str = "half"
) -> tuple[float, KtResult]:
    """Foresight gap between two maximally distant optimal rankings.

    Solves the regular-season win matrix, finds the optimal pair at
    maximal Kendall tau distance, and returns the absolute difference of
    their playoff prediction accuracies together with the distance
    certificate. Note the returned pair maximizes rank distance, not
    necessarily the accuracy difference itself.

    Raises:
        EmptyDataError: no regular or no playoff games.
    """
    cfg = cfg or DEFAULT_CONFIG
    matrix = build_win_matrix(gs, Stage.REGULAR)
    result = solve_lop(matrix, cfg)
    kt = solve_kt(matrix, result.optimal_value, cfg)
    first = foresight_accuracy(gs, kt.pair[0], tie_mode)
    second = foresight_accuracy(gs, kt.pair[1], tie_mode)
    return abs(first - second), kt


def pearson_correlation(xs, ys) -> float:
    """Pearson correlation coefficient of two equal-length series.

    Raises:
        DimensionMismatchError: unequal lengths.
        UndefinedMetricError: fewer than two points, or a series with
            zero variance.
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionMismatchError(
            f"series differ in shape: {x.shape} vs {y.shape}"
        )
    if x.size < 2:
        raise UndefinedMetricError("correlation needs at least two points")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = float(np.sqrt((dx * dx).sum()))
    sy = float(np.sqrt((dy * dy).sum()))
    if sx == 0.0 or sy == 0.0:
        raise UndefinedMetricError(
            "correlation is undefined for a zero-variance series"
        )
    return float(np.clip((dx * dy).sum() / (sx * sy), -1.0, 1.0))


@dataclass(frozen=True)
class SeasonReport:
    """Season-level rankability summary.

    hindsight and foresight map ranking names (optimal, colley, massey)
    to accuracies; foresight entries exist only when playoff games do.
    Every hindsight accuracy is bounded above by lambda_, with equality
    for the optimal ranking under the half tie credit. optima_count is
    None when enumeration was truncated.
    """

    season: int
    teams: tuple[str, ...]
    lambda_: float
    kappa: int
    k_star: float
    hindsight: dict[str, float]
    foresight: dict[str, float]
    foresight_divergence: float | None
    optimal_ranking: Ranking
    colley_ranking: Ranking
    massey_ranking: Ranking
    witness_pair: tuple[Ranking, Ranking]
    optima_count: int | None
    proven: bool
    truncated: bool


def season_report(
    gs: GameSet, cfg: SolverConfig | None = None, tie_mode: str = "half"
) -> SeasonReport:
    """Full rankability analysis of one season.

    Solves the regular-season win matrix for k*, the degree of
    linearity, the optima count, and the maximally distant optimal pair,
    then scores optimal, Colley, and Massey rankings in hindsight and —
    when playoff games exist — foresight.

    Raises:
        EmptyDataError: no regular-season games.
        MalformedInputError: games from more than one season.
    """
    cfg = cfg or DEFAULT_CONFIG
    seasons = gs.seasons
    if len(seasons) > 1:
        raise MalformedInputError(
            f"one season per report, got seasons {', '.join(map(str, seasons))}"
        )
    matrix = build_win_matrix(gs, Stage.REGULAR)
    regular = gs.filter_stage(Stage.REGULAR)

    lop_result = solve_lop(matrix, cfg)
    k_star = lop_result.optimal_value
    lambda_ = k_star / matrix.total_sum()
    optima = enumerate_optima(matrix, cfg)
    kt = solve_kt(matrix, k_star, cfg)

    rankings = {
        "optimal": lop_result.ranking,
        "colley": ranking_from_ratings(colley_ratings(regular)),
        "massey": ranking_from_ratings(massey_ratings(regular)),
    }
    hindsight = {
        name: hindsight_accuracy(gs, Stage.REGULAR, sigma, tie_mode)
        for name, sigma in rankings.items()
    }
    if gs.games_at(Stage.PLAYOFF):
        foresight = {
            name: foresight_accuracy(gs, sigma, tie_mode)
            for name, sigma in rankings.items()
        }
        divergence = abs(
            foresight_accuracy(gs, kt.pair[0], tie_mode)
            - foresight_accuracy(gs, kt.pair[1], tie_mode)
        )
    else:
        foresight = {}
        divergence = None

    return SeasonReport(
        season=seasons[0],
        teams=gs.teams,
        lambda_=lambda_,
        kappa=kt.kappa,
        k_star=k_star,
        hindsight=hindsight,
        foresight=foresight,
        foresight_divergence=divergence,
        optimal_ranking=lop_result.ranking,
        colley_ranking=rankings["colley"],
        massey_ranking=rankings["massey"],
        witness_pair=kt.pair,
        optima_count=None if optima.truncated else optima.count,
        proven=lop_result.proven and kt.proven,
        truncated=optima.truncated,
    )
