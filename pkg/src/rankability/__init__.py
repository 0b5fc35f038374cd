"""Exact rankability toolkit: linear ordering solver, optima diversity, ratings."""

from __future__ import annotations

from .core import (
    LinearOrder,
    PairSet,
    Ranking,
    WeightMatrix,
    concordant_discordant,
    kendall_tau_distance,
    linear_order_from_ranking,
    objective_value,
    permute_matrix,
    ranking_from_linear_order,
    ranking_from_order,
    ranking_from_position,
    read_matrix_csv,
    reverse_ranking,
    upper_triangular_sum,
    validate_linear_order,
    write_matrix_csv,
)
from .errors import (
    DimensionMismatchError,
    EmptyDataError,
    InfeasibleSolutionError,
    InvalidKStarError,
    MalformedInputError,
    MalformedPermutationError,
    RankabilityError,
    TruncatedOptimaError,
    UndefinedMetricError,
    UnprovenOptimumError,
)
from .ktdiam import (
    KtResult,
    KtSolution,
    KtValidationReport,
    kappa_by_enumeration,
    kt_solution_from_rankings,
    solve_kt,
    validate_kt_solution,
)
from .lop import (
    DEFAULT_CONFIG,
    LopResult,
    OptimaSet,
    SearchStats,
    SolverConfig,
    degree_of_linearity,
    enumerate_optima,
    heuristic_ranking,
    prefix_upper_bound,
    solve_lop,
)
from .rating import (
    RatingMethod,
    RatingVector,
    colley_ratings,
    massey_ratings,
    ranking_from_ratings,
)
from .sports import (
    GameRecord,
    GameSet,
    SeasonReport,
    Stage,
    build_win_matrix,
    foresight_accuracy,
    foresight_divergence,
    game_set_from_records,
    hindsight_accuracy,
    pearson_correlation,
    read_alias_csv,
    read_feature_table,
    read_games_csv,
    season_report,
)

__version__ = "0.1.0"

__all__ = [
    "WeightMatrix",
    "Ranking",
    "LinearOrder",
    "PairSet",
    "ranking_from_order",
    "ranking_from_position",
    "reverse_ranking",
    "objective_value",
    "upper_triangular_sum",
    "permute_matrix",
    "kendall_tau_distance",
    "concordant_discordant",
    "linear_order_from_ranking",
    "ranking_from_linear_order",
    "validate_linear_order",
    "read_matrix_csv",
    "write_matrix_csv",
    "SolverConfig",
    "DEFAULT_CONFIG",
    "SearchStats",
    "LopResult",
    "OptimaSet",
    "solve_lop",
    "enumerate_optima",
    "degree_of_linearity",
    "heuristic_ranking",
    "prefix_upper_bound",
    "KtResult",
    "KtSolution",
    "KtValidationReport",
    "solve_kt",
    "kappa_by_enumeration",
    "kt_solution_from_rankings",
    "validate_kt_solution",
    "RatingMethod",
    "RatingVector",
    "colley_ratings",
    "massey_ratings",
    "ranking_from_ratings",
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
    "RankabilityError",
    "DimensionMismatchError",
    "MalformedPermutationError",
    "InfeasibleSolutionError",
    "UndefinedMetricError",
    "MalformedInputError",
    "EmptyDataError",
    "InvalidKStarError",
    "TruncatedOptimaError",
    "UnprovenOptimumError",
    "__version__",
]
