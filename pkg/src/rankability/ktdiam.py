"""Maximal Kendall tau distance between optimal rankings.

Realizes the coupled binary program over two linear orders x and y that
must both attain the optimal objective value, with the concordance
indicators z implied by the orientation pair rather than branched on.
The joint branch and bound grows both orders position by position, so
every generated orientation set is transitively closed and the 3-dicycle
constraints hold by construction. A node is pruned when the prefix bound
of either side drops below the optimal value, or when the pairs not yet
ordered by both sides cannot lift the discordance past the best distance
found.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .core import (
    LinearOrder,
    Ranking,
    WeightMatrix,
    kendall_tau_distance,
    linear_order_from_ranking,
    ranking_from_order,
    validate_linear_order,
)
from .errors import InvalidKStarError, TruncatedOptimaError, UnprovenOptimumError
from .lop import (
    DEFAULT_CONFIG,
    SolverConfig,
    _Search,
    _TABLE_MAX_N,
    _Timeout as _LopTimeout,
)

__all__ = [
    "KtResult",
    "KtSolution",
    "KtValidationReport",
    "solve_kt",
    "kappa_by_enumeration",
    "kt_solution_from_rankings",
    "validate_kt_solution",
]


@dataclass(frozen=True)
class KtResult:
    """Maximal-distance certificate over the optimal rankings.

    kappa + concordant_count = C(n, 2); both witnesses attain the
    optimal objective value; their distance equals kappa.
    """

    kappa: int
    pair: tuple[Ranking, Ranking]
    concordant_count: int
    proven: bool


@dataclass(frozen=True)
class KtSolution:
    """A full assignment of the coupled program's decision variables."""

    x: LinearOrder
    y: LinearOrder
    z: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.z, dtype=np.int8).copy()
        np.fill_diagonal(z, 0)
        z.flags.writeable = False
        object.__setattr__(self, "z", z)


@dataclass(frozen=True)
class KtValidationReport:
    """Constraint-by-constraint audit of a claimed solution.

    constraint_violations covers the program's own constraints;
    optimality_violations covers the two optimally valid inequalities,
    which every optimal solution satisfies but feasible ones may not.
    """

    constraint_violations: tuple[str, ...]
    optimality_violations: tuple[str, ...]

    @property
    def feasible(self) -> bool:
        return not self.constraint_violations

    @property
    def passes_optimality_cuts(self) -> bool:
        return not self.optimality_violations


def kt_solution_from_rankings(sigma1: Ranking, sigma2: Ranking) -> KtSolution:
    """Assemble (x, y, z) from two rankings, with z_ij = x_ij * y_ij."""
    x = linear_order_from_ranking(sigma1)
    y = linear_order_from_ranking(sigma2)
    z = (x.x & y.x).astype(np.int8)
    return KtSolution(x=x, y=y, z=z)


class _PairSearch:
    """Joint search for two maximally distant optimal rankings.

    Both rankings are built position by position in lockstep, so each
    side's partial solution is a prefix of a linear order and the
    3-dicycle constraints hold by construction. A side is pruned as soon
    as its prefix bound falls below the optimal value; the pair is pruned
    when the not-yet-doubly-decided pairs cannot lift the discordance
    past the incumbent. Discordance is counted exactly: an item pair is
    scored at the first moment both rankings have decided its order.
    """

    def __init__(self, a: WeightMatrix, k_star: float, cfg: SolverConfig):
        n = a.n
        self.n = n
        self.eps = cfg.tolerance
        self.k_star = float(k_star)
        self.sides = (_Search(a, cfg), _Search(a, cfg))
        self.pos = ([-1] * n, [-1] * n)
        self.table: list[float] | None = None
        self.total_pairs = n * (n - 1) // 2
        self.counted = 0
        self.discordant = 0
        self.best_kappa = -1
        self.best_pair: tuple[tuple[int, ...], tuple[int, ...]] | None = None
        self.deadline: float | None = None
        self.timed_out = False
        self.nodes = 0
        self.order1 = list(range(n))
        self.order2 = list(range(n - 1, -1, -1))

    def _tick(self) -> bool:
        if (
            self.deadline is not None
            and (self.nodes & 127) == 0
            and time.monotonic() > self.deadline
        ):
            self.timed_out = True
            return True
        return False

    def _bound_ok(self, side_idx: int, v: int) -> bool:
        s = self.sides[side_idx]
        target = self.k_star - self.eps
        if self.table is not None:
            return s.f + s.s_a[v] + self.table[s.rem_mask ^ (1 << v)] >= target
        return s.f + s.s_a[v] + s.u - s.s_m[v] >= target

    def _place(self, side_idx: int, v: int) -> tuple[int, int]:
        """Extend one prefix and score pairs now decided on both sides."""
        s = self.sides[side_idx]
        s.apply(v)
        self.pos[side_idx][v] = len(s.prefix) - 1
        pos_o = self.pos[1 - side_idx]
        in_rem_s = s.in_rem
        o_in_rem = self.sides[1 - side_idx].in_rem
        cd = 0
        dd = 0
        v_placed_other = not o_in_rem[v]
        pos_ov = pos_o[v]
        for r in range(self.n):
            if in_rem_s[r]:
                if v_placed_other:
                    cd += 1
                    if not o_in_rem[r] and pos_o[r] < pos_ov:
                        dd += 1
                elif not o_in_rem[r]:
                    cd += 1
                    dd += 1
        self.counted += cd
        self.discordant += dd
        return cd, dd

    def _unplace(self, side_idx: int, delta: tuple[int, int]) -> None:
        self.counted -= delta[0]
        self.discordant -= delta[1]
        s = self.sides[side_idx]
        self.pos[side_idx][s.prefix[-1]] = -1
        s.undo()

    def run(self) -> None:
        if self.n <= _TABLE_MAX_N:
            self.sides[0].deadline = self.deadline
            try:
                self.table = self.sides[0].build_completion_table()
            except _LopTimeout:
                self.timed_out = True
                return
        self._rec(True)

    def _rec(self, symmetric: bool) -> None:
        self.nodes += 1
        if self.timed_out or self._tick():
            return
        s1, s2 = self.sides
        if s1.rem_count == 0:
            if (
                self.discordant > self.best_kappa
                and abs(s1.f - self.k_star) <= self.eps
                and abs(s2.f - self.k_star) <= self.eps
            ):
                self.best_kappa = self.discordant
                self.best_pair = (
                    tuple(v + 1 for v in s1.prefix),
                    tuple(v + 1 for v in s2.prefix),
                )
            return
        if self.discordant + (self.total_pairs - self.counted) <= self.best_kappa:
            return
        for v1 in self.order1:
            if not s1.in_rem[v1] or not self._bound_ok(0, v1):
                continue
            d1 = self._place(0, v1)
            for v2 in self.order2:
                if (
                    not s2.in_rem[v2]
                    or (symmetric and v2 < v1)
                    or not self._bound_ok(1, v2)
                ):
                    continue
                d2 = self._place(1, v2)
                self._rec(symmetric and v2 == v1)
                self._unplace(1, d2)
                if self.timed_out:
                    break
            self._unplace(0, d1)
            if self.timed_out:
                return


def _pack_pair_masks(orders: list[tuple[int, ...]], n: int) -> np.ndarray:
    """One bit per unordered pair, set when the earlier item ranks higher."""
    count = len(orders)
    total_pairs = n * (n - 1) // 2
    bits = np.zeros((count, total_pairs), dtype=np.uint8)
    for row, order in enumerate(orders):
        pos = [0] * n
        for idx, item in enumerate(order):
            pos[item - 1] = idx
        bit = 0
        for i in range(n):
            for j in range(i + 1, n):
                if pos[i] < pos[j]:
                    bits[row, bit] = 1
                bit += 1
    return np.packbits(bits, axis=1)


def _max_distance_pair(
    orders: list[tuple[int, ...]], n: int
) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
    """Maximal Kendall tau distance and its lexicographically first pair.

    orders must be sorted ascending; the scan keeps the first pair that
    attains each strictly larger distance, which makes the returned pair
    the smallest (first, second) witness under tuple comparison.
    """
    packed = _pack_pair_masks(orders, n)
    ceiling = n * (n - 1) // 2
    best = 0
    best_pair = (orders[0], orders[0])
    for a in range(len(orders)):
        dist = np.bitwise_count(packed[a:] ^ packed[a]).sum(axis=1)
        b_rel = int(np.argmax(dist))
        d = int(dist[b_rel])
        if d > best:
            # argmax returns the first maximizer, the lex-smallest partner;
            # scanning a ascending makes the overall pair lex-smallest.
            best = d
            best_pair = (orders[a], orders[a + b_rel])
        if best == ceiling:
            break
    return best, best_pair[0], best_pair[1]


def _first_optimal_order(
    a: WeightMatrix, k_star: float, cfg: SolverConfig, deadline: float | None
) -> tuple[int, ...]:
    search = _Search(a, cfg)
    search.deadline = deadline
    orders, truncated = search.enumerate_leaves(
        k_star, 1, use_table=a.n <= _TABLE_MAX_N
    )
    if orders:
        return tuple(v + 1 for v in orders[0])
    if truncated:
        raise UnprovenOptimumError(
            "time limit expired before any optimal ranking was recovered"
        )
    raise InvalidKStarError(
        f"no ranking attains the objective value {k_star!r} within tolerance"
    )


def solve_kt(
    a: WeightMatrix, k_star: float, cfg: SolverConfig | None = None
) -> KtResult:
    """Two optimal rankings as far apart as possible in Kendall tau.

    Runs the joint branch and bound over prefix pairs. On proven
    completion the witness pair is canonicalized to the lexicographically
    smallest (first, second) pair among all maximal-distance pairs,
    recovered from the enumerated optima when enumeration fits the cap.
    On timeout the best pair found so far is returned with proven=False.

    Raises:
        InvalidKStarError: when no ranking attains k_star.
        UnprovenOptimumError: when the time limit expires before even one
            ranking attaining k_star is found, so no pair can be reported.
    """
    cfg = cfg or DEFAULT_CONFIG
    start = time.monotonic()
    deadline = None if cfg.time_limit is None else start + cfg.time_limit
    sigma0 = _first_optimal_order(a, k_star, cfg, deadline)
    total_pairs = a.n * (a.n - 1) // 2

    search = _PairSearch(a, k_star, cfg)
    search.deadline = deadline
    search.best_kappa = 0
    search.best_pair = (sigma0, sigma0)
    search.run()
    kappa = search.best_kappa
    assert search.best_pair is not None
    first, second = search.best_pair
    proven = not search.timed_out

    if proven and kappa > 0:
        # Canonical witness: smallest (first, second) among maximal pairs.
        enum_search = _Search(a, cfg)
        enum_search.deadline = deadline
        orders, truncated = enum_search.enumerate_leaves(
            k_star, cfg.enumeration_cap, use_table=a.n <= _TABLE_MAX_N
        )
        if not truncated:
            one_based = [tuple(v + 1 for v in o) for o in orders]
            best, first, second = _max_distance_pair(one_based, a.n)
            assert best == kappa
    if first > second:
        first, second = second, first
    pair = (ranking_from_order(first), ranking_from_order(second))
    return KtResult(
        kappa=kappa,
        pair=pair,
        concordant_count=total_pairs - kappa,
        proven=proven,
    )


def kappa_by_enumeration(
    a: WeightMatrix, cfg: SolverConfig | None = None
) -> KtResult:
    """Exact maximal distance by enumerating every optimal ranking.

    The reference route the branch and bound is checked against; only
    usable when the full optima set fits the enumeration cap.

    Raises:
        TruncatedOptimaError: when enumeration hit the cap or time limit.
    """
    from .lop import enumerate_optima

    cfg = cfg or DEFAULT_CONFIG
    optima = enumerate_optima(a, cfg)
    if optima.truncated:
        raise TruncatedOptimaError(
            "optima enumeration was truncated; the maximal distance needs "
            "the complete set"
        )
    orders = [r.order for r in optima.rankings]
    kappa, first, second = _max_distance_pair(orders, a.n)
    total_pairs = a.n * (a.n - 1) // 2
    return KtResult(
        kappa=kappa,
        pair=(ranking_from_order(first), ranking_from_order(second)),
        concordant_count=total_pairs - kappa,
        proven=True,
    )


def _check_side(
    name: str, lo: LinearOrder, w: np.ndarray, k_star: float, eps: float
) -> list[str]:
    issues = [f"{name}: {v}" for v in validate_linear_order(lo)]
    value = float((w * lo.x).sum())
    if abs(value - k_star) > eps:
        issues.append(
            f"{name}: objective {value!r} differs from the optimal value {k_star!r}"
        )
    return issues


def validate_kt_solution(
    a: WeightMatrix, k_star: float, s: KtSolution, tolerance: float = 1e-9
) -> KtValidationReport:
    """Audit every constraint family of a claimed solution.

    Reports violations instead of raising. The two optimally valid
    inequalities are listed separately: a merely feasible solution may
    break them, an optimal one never does.
    """
    n = a.n
    w = np.asarray(a.weights, dtype=float)
    violations: list[str] = []
    if s.x.n != n or s.y.n != n or s.z.shape != (n, n):
        return KtValidationReport(
            constraint_violations=(
                f"shape mismatch: matrix has n={n}, solution has "
                f"x:{s.x.n} y:{s.y.n} z:{s.z.shape}",
            ),
            optimality_violations=(),
        )
    violations.extend(_check_side("x", s.x, w, k_star, tolerance))
    violations.extend(_check_side("y", s.y, w, k_star, tolerance))
    x, y, z = s.x.x, s.y.x, s.z
    for i in range(n):
        for j in range(n):
            if i != j and x[i, j] + y[i, j] - z[i, j] > 1:
                violations.append(
                    f"linking constraint x[{i + 1},{j + 1}] + y[{i + 1},{j + 1}]"
                    f" - z[{i + 1},{j + 1}] <= 1 violated"
                )
    optimality: list[str] = []
    for i in range(n):
        for j in range(i + 1, n):
            if z[i, j] + z[j, i] > 1:
                optimality.append(
                    f"optimally valid inequality z[{i + 1},{j + 1}]"
                    f" + z[{j + 1},{i + 1}] <= 1 violated"
                )
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(i + 1, n):
                if j != k and z[i, j] + z[j, k] + z[k, i] > 2:
                    optimality.append(
                        f"optimally valid inequality z[{i + 1},{j + 1}]"
                        f" + z[{j + 1},{k + 1}] + z[{k + 1},{i + 1}] <= 2 violated"
                    )
    return KtValidationReport(
        constraint_violations=tuple(violations),
        optimality_violations=tuple(optimality),
    )
