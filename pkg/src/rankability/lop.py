"""Exact solver for the linear ordering problem.

Finds a permutation maximizing the sum of pairwise weights ranked in
agreement, by depth-first branch and bound over ranking prefixes with an
admissible pairwise bound and dominance memoization on the set of
unplaced items. Also provides the insertion heuristic used for
incumbents, enumeration of all optimal rankings, and the degree of
linearity.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Ranking, WeightMatrix, ranking_from_order
from .errors import (
    MalformedPermutationError,
    UndefinedMetricError,
    UnprovenOptimumError,
)

__all__ = [
    "SolverConfig",
    "SearchStats",
    "LopResult",
    "OptimaSet",
    "DEFAULT_CONFIG",
    "solve_lop",
    "heuristic_ranking",
    "prefix_upper_bound",
    "enumerate_optima",
    "degree_of_linearity",
]

# Exact completion tables take n * 2^n floats; 18 keeps that under 40 MB.
_TABLE_MAX_N = 18

# Dominance memo entries are dropped beyond this to bound memory on large n.
_MEMO_CAP = 1 << 22


@dataclass(frozen=True)
class SolverConfig:
    """Knobs shared by every exact search in the package.

    rng_seed fully determines heuristic randomization; parallel_workers is
    accepted for interface stability but the search is single-threaded,
    which makes reported witnesses and statistics reproducible by
    construction.
    """

    time_limit: float | None = None
    enumeration_cap: int = 1_000_000
    tolerance: float = 1e-9
    parallel_workers: int = 1
    heuristic_restarts: int = 16
    rng_seed: int = 0

    def __post_init__(self):
        if self.time_limit is not None and not self.time_limit > 0:
            raise ValueError("time_limit must be positive when set")
        if self.enumeration_cap < 1:
            raise ValueError("enumeration_cap must be at least 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.parallel_workers < 1:
            raise ValueError("parallel_workers must be at least 1")
        if self.heuristic_restarts < 0:
            raise ValueError("heuristic_restarts must be nonnegative")


DEFAULT_CONFIG = SolverConfig()


@dataclass(frozen=True)
class SearchStats:
    """Search effort counters; wall_time covers the whole public call."""

    nodes: int
    pruned: int
    wall_time: float
    heuristic_value: float


@dataclass(frozen=True)
class LopResult:
    optimal_value: float
    ranking: Ranking
    proven: bool
    stats: SearchStats


@dataclass(frozen=True)
class OptimaSet:
    """All optimal rankings, sorted lexicographically by order form.

    truncated is set when the enumeration cap or the time limit stopped
    the search before it was exhausted.
    """

    rankings: tuple[Ranking, ...]
    truncated: bool

    @property
    def count(self) -> int:
        return len(self.rankings)


class _Timeout(Exception):
    pass


class _CapReached(Exception):
    pass


def _float_rows(a: WeightMatrix) -> list[list[float]]:
    return [[float(x) for x in row] for row in a.weights]


def _order_value(w: list[list[float]], order: Sequence[int]) -> float:
    total = 0.0
    n = len(order)
    for p in range(n):
        wrow = w[order[p]]
        for q in range(p + 1, n):
            total += wrow[order[q]]
    return total


class _Search:
    """Prefix DFS state with O(n) incremental bound updates per move.

    f is the weight already decided (prefix-prefix plus prefix-remaining
    pairs), u is the sum of max(a_ij, a_ji) over remaining pairs; f + u is
    an admissible upper bound on any completion of the current prefix.
    """

    def __init__(self, a: WeightMatrix, cfg: SolverConfig):
        n = a.n
        w = _float_rows(a)
        self.n = n
        self.w = w
        self.eps = cfg.tolerance
        self.deadline: float | None = None
        self.nodes = 0
        self.pruned = 0
        self.pair_max = [
            [w[i][j] if w[i][j] >= w[j][i] else w[j][i] for j in range(n)]
            for i in range(n)
        ]
        self.child_order = list(range(n))
        self.memo: dict[int, float] = {}
        self.best_val = float("-inf")
        self.best_order: list[int] = []
        self.reset()

    def reset(self) -> None:
        n = self.n
        self.in_rem = [True] * n
        self.rem_mask = (1 << n) - 1
        self.rem_count = n
        self.prefix: list[int] = []
        self.s_a = [
            sum(self.w[v][r] for r in range(n) if r != v) for v in range(n)
        ]
        self.s_m = [
            sum(self.pair_max[v][r] for r in range(n) if r != v) for v in range(n)
        ]
        self.u = sum(self.s_m) / 2.0
        self.f = 0.0

    def apply(self, v: int) -> None:
        w = self.w
        pm = self.pair_max
        in_rem = self.in_rem
        s_a = self.s_a
        s_m = self.s_m
        self.f += s_a[v]
        self.u -= s_m[v]
        in_rem[v] = False
        self.rem_mask ^= 1 << v
        self.rem_count -= 1
        for r in range(self.n):
            if in_rem[r]:
                s_a[r] -= w[r][v]
                s_m[r] -= pm[r][v]
        self.prefix.append(v)

    def undo(self) -> None:
        v = self.prefix.pop()
        w = self.w
        pm = self.pair_max
        in_rem = self.in_rem
        s_a = self.s_a
        s_m = self.s_m
        for r in range(self.n):
            if in_rem[r]:
                s_a[r] += w[r][v]
                s_m[r] += pm[r][v]
        in_rem[v] = True
        self.rem_mask |= 1 << v
        self.rem_count += 1
        self.f -= s_a[v]
        self.u += s_m[v]

    def _tick(self) -> None:
        if (
            self.deadline is not None
            and (self.nodes & 255) == 0
            and time.monotonic() > self.deadline
        ):
            raise _Timeout

    def _tick_now(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise _Timeout

    # -- optimal value ---------------------------------------------------

    def run_value(
        self, start_order: list[int], start_value: float
    ) -> tuple[float, list[int], bool]:
        """Prove the maximum objective, starting from a known incumbent."""
        self.best_val = start_value
        self.best_order = list(start_order)
        self.child_order = list(start_order)
        try:
            self._rec_value()
            return self.best_val, self.best_order, False
        except _Timeout:
            return self.best_val, self.best_order, True

    def _rec_value(self) -> None:
        self.nodes += 1
        self._tick()
        if self.rem_count == 0:
            if self.f > self.best_val + self.eps:
                self.best_val = self.f
                self.best_order = self.prefix.copy()
            return
        # Dominance: an earlier visit of the same remaining set with at
        # least this much decided weight already covered every completion.
        seen = self.memo.get(self.rem_mask)
        if seen is not None and self.f <= seen + 1e-12:
            self.pruned += 1
            return
        if len(self.memo) < _MEMO_CAP:
            self.memo[self.rem_mask] = self.f
        for v in self.child_order:
            if self.in_rem[v]:
                bound = self.f + self.s_a[v] + self.u - self.s_m[v]
                if bound <= self.best_val + self.eps:
                    self.pruned += 1
                else:
                    self.apply(v)
                    self._rec_value()
                    self.undo()

    # -- exact completion values (bitmask dynamic program) ----------------

    def build_completion_table(self) -> list[float]:
        """table[S] = best objective an ordering of item set S can add."""
        n = self.n
        w = self.w
        full = (1 << n) - 1
        table = [0.0] * (full + 1)
        rowsum = [[0.0] * (full + 1) for _ in range(n)]
        for v in range(n):
            rv = rowsum[v]
            wv = w[v]
            for s in range(1, full + 1):
                low = s & -s
                rv[s] = rv[s ^ low] + wv[low.bit_length() - 1]
            self._tick_now()
        for s in range(1, full + 1):
            best = -1.0
            t = s
            while t:
                low = t & -t
                t ^= low
                v = low.bit_length() - 1
                val = rowsum[v][s ^ low] + table[s ^ low]
                if val > best:
                    best = val
            table[s] = best
            if (s & 65535) == 0:
                self._tick_now()
        return table

    # -- canonical witness -------------------------------------------------

    def lex_min_witness(self, k_star: float, use_table: bool) -> list[int] | None:
        """Lexicographically smallest order attaining k_star, or None on timeout."""
        self.reset()
        target = k_star - self.eps
        try:
            table = self.build_completion_table() if use_table else None
            for _ in range(self.n):
                placed = False
                for v in range(self.n):
                    if not self.in_rem[v]:
                        continue
                    if table is not None:
                        bound = self.f + self.s_a[v] + table[self.rem_mask ^ (1 << v)]
                        if bound >= target:
                            self.apply(v)
                            placed = True
                            break
                        continue
                    bound = self.f + self.s_a[v] + self.u - self.s_m[v]
                    if bound < target:
                        continue
                    self.apply(v)
                    if self.rem_count == 0 or self._exists_completion(target):
                        placed = True
                        break
                    self.undo()
                if not placed:
                    return None
            return self.prefix.copy()
        except _Timeout:
            return None

    def _exists_completion(self, target: float) -> bool:
        self.nodes += 1
        self._tick()
        if self.rem_count == 0:
            return self.f >= target
        for v in self.child_order:
            if self.in_rem[v]:
                if self.f + self.s_a[v] + self.u - self.s_m[v] < target:
                    self.pruned += 1
                    continue
                self.apply(v)
                ok = self._exists_completion(target)
                self.undo()
                if ok:
                    return True
        return False

    # -- enumeration -------------------------------------------------------

    def enumerate_leaves(
        self, k_star: float, cap: int, use_table: bool
    ) -> tuple[list[tuple[int, ...]], bool]:
        """All optimal orders in lexicographic sequence, up to cap."""
        self.reset()
        found: list[tuple[int, ...]] = []
        try:
            table = self.build_completion_table() if use_table else None
            self._rec_enum(k_star, k_star - self.eps, cap, found, table)
            return found, False
        except (_CapReached, _Timeout):
            return found, True

    def _rec_enum(
        self,
        k_star: float,
        target: float,
        cap: int,
        found: list[tuple[int, ...]],
        table: list[float] | None,
    ) -> None:
        self.nodes += 1
        self._tick()
        if self.rem_count == 0:
            if abs(self.f - k_star) <= self.eps:
                found.append(tuple(self.prefix))
                if len(found) >= cap:
                    raise _CapReached
            return
        for v in range(self.n):
            if self.in_rem[v]:
                decided = self.f + self.s_a[v]
                if table is not None:
                    bound = decided + table[self.rem_mask ^ (1 << v)]
                else:
                    bound = decided + self.u - self.s_m[v]
                if bound >= target:
                    self.apply(v)
                    self._rec_enum(k_star, target, cap, found, table)
                    self.undo()
                else:
                    self.pruned += 1


def _greedy_insertion(w: list[list[float]], items: Sequence[int]) -> list[int]:
    order: list[int] = []
    for v in items:
        delta = sum(w[v][u] for u in order)
        best_delta = delta
        best_p = 0
        for p, u in enumerate(order):
            delta += w[u][v] - w[v][u]
            if delta > best_delta:
                best_delta = delta
                best_p = p + 1
        order.insert(best_p, v)
    return order


def _insertion_local_search(w: list[list[float]], order: list[int]) -> list[int]:
    n = len(order)
    improved = True
    while improved:
        improved = False
        for idx in range(n):
            v = order[idx]
            rest = order[:idx] + order[idx + 1 :]
            current = sum(w[u][v] for u in order[:idx]) + sum(
                w[v][u] for u in order[idx + 1 :]
            )
            delta = sum(w[v][u] for u in rest)
            best_delta = current
            best_p = idx
            if delta > best_delta:
                best_delta = delta
                best_p = 0
            for p, u in enumerate(rest):
                delta += w[u][v] - w[v][u]
                if delta > best_delta:
                    best_delta = delta
                    best_p = p + 1
            if best_p != idx:
                rest.insert(best_p, v)
                order = rest
                improved = True
    return order


def heuristic_ranking(a: WeightMatrix, cfg: SolverConfig | None = None) -> Ranking:
    """Strong feasible ranking: greedy insertion plus insertion local search.

    Deterministic for a fixed cfg.rng_seed. The returned ranking's
    objective is at least total_sum(a) / 2, by taking the better of the
    final order and its reverse.
    """
    cfg = cfg or DEFAULT_CONFIG
    n = a.n
    w = _float_rows(a)
    rng = np.random.default_rng(cfg.rng_seed)
    net_wins = sorted(
        range(n),
        key=lambda v: (-(sum(w[v]) - sum(w[r][v] for r in range(n))), v),
    )
    starts: list[list[int]] = [net_wins]
    for _ in range(cfg.heuristic_restarts):
        starts.append([int(x) for x in rng.permutation(n)])
    best_order: list[int] | None = None
    best_val = float("-inf")
    for start in starts:
        order = _insertion_local_search(w, _greedy_insertion(w, start))
        val = _order_value(w, order)
        if (
            best_order is None
            or val > best_val + 1e-12
            or (abs(val - best_val) <= 1e-12 and order < best_order)
        ):
            best_val = val
            best_order = order
    assert best_order is not None
    reverse = best_order[::-1]
    if _order_value(w, reverse) > best_val:
        best_order = reverse
    return ranking_from_order([v + 1 for v in best_order])


def prefix_upper_bound(a: WeightMatrix, partial: Sequence[int]) -> float:
    """Admissible bound on any ranking starting with the given items.

    partial lists 1-based items occupying the top positions in order.
    The bound adds the weight already decided by the prefix to
    max(a_ij, a_ji) for every still-undecided pair, so it never falls
    below the best completion and never increases as the prefix grows.
    """
    n = a.n
    prefix = [int(p) - 1 for p in partial]
    if len(set(prefix)) != len(prefix) or any(v < 0 or v >= n for v in prefix):
        raise MalformedPermutationError(
            f"prefix must list distinct items in 1..{n}, got {tuple(partial)}"
        )
    w = a.weights
    in_prefix = set(prefix)
    rest = [v for v in range(n) if v not in in_prefix]
    decided = 0.0
    for idx, p in enumerate(prefix):
        for q in prefix[idx + 1 :]:
            decided += w[p][q]
        for r in rest:
            decided += w[p][r]
    undecided = 0.0
    for idx, i in enumerate(rest):
        for j in rest[idx + 1 :]:
            undecided += max(w[i][j], w[j][i])
    return float(decided + undecided)


def solve_lop(a: WeightMatrix, cfg: SolverConfig | None = None) -> LopResult:
    """Maximize the decided pairwise weight over all rankings, exactly.

    Proves optimality by exhausting the branch-and-bound tree. When the
    configured time limit expires first, the best incumbent is returned
    with proven=False; the reported value is always attained by the
    reported ranking. The proven witness is the lexicographically
    smallest optimal order.
    """
    cfg = cfg or DEFAULT_CONFIG
    start = time.monotonic()
    heur = heuristic_ranking(a, cfg)
    search = _Search(a, cfg)
    if cfg.time_limit is not None:
        search.deadline = start + cfg.time_limit
    heur_order = [v - 1 for v in heur.order]
    heur_val = _order_value(search.w, heur_order)
    best_val, best_order, timed_out = search.run_value(heur_order, heur_val)
    proven = not timed_out
    if proven:
        witness = search.lex_min_witness(best_val, use_table=a.n <= _TABLE_MAX_N)
        if witness is not None:
            best_order = witness
    ranking = ranking_from_order([v + 1 for v in best_order])
    stats = SearchStats(
        nodes=search.nodes,
        pruned=search.pruned,
        wall_time=time.monotonic() - start,
        heuristic_value=heur_val,
    )
    return LopResult(
        optimal_value=best_val, ranking=ranking, proven=proven, stats=stats
    )


def enumerate_optima(a: WeightMatrix, cfg: SolverConfig | None = None) -> OptimaSet:
    """Collect every ranking whose objective equals the proven optimum.

    Depth-first search keeps a branch only while its upper bound stays
    within tolerance of the optimal value; children are tried in
    ascending item order, so the output arrives already sorted
    lexicographically. The cap and the time limit both set truncated.

    Raises:
        UnprovenOptimumError: when the optimal value itself could not be
            proven within the time limit.
    """
    cfg = cfg or DEFAULT_CONFIG
    result = solve_lop(a, cfg)
    if not result.proven:
        raise UnprovenOptimumError(
            "enumeration requires a proven optimal value; the solve timed out"
        )
    search = _Search(a, cfg)
    if cfg.time_limit is not None:
        search.deadline = time.monotonic() + cfg.time_limit
    orders, truncated = search.enumerate_leaves(
        result.optimal_value, cfg.enumeration_cap, use_table=a.n <= _TABLE_MAX_N
    )
    rankings = tuple(
        ranking_from_order([v + 1 for v in order]) for order in orders
    )
    return OptimaSet(rankings=rankings, truncated=truncated)


def degree_of_linearity(a: WeightMatrix, cfg: SolverConfig | None = None) -> float:
    """Fraction of total pairwise weight a best ranking agrees with.

    Always in [1/2, 1]: at least half by the reversal argument, at most 1
    because the optimum counts a subset of the nonnegative weights.

    Raises:
        UndefinedMetricError: when all weights are zero.
        UnprovenOptimumError: when the optimum is not proven in time.
    """
    total = a.total_sum()
    if total <= 0.0:
        raise UndefinedMetricError(
            "degree of linearity is undefined for an all-zero matrix"
        )
    result = solve_lop(a, cfg)
    if not result.proven:
        raise UnprovenOptimumError(
            "degree of linearity requires a proven optimal value"
        )
    return result.optimal_value / total
