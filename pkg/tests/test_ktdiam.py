"""Tests for the maximal-distance search over optimal rankings."""

from __future__ import annotations

import numpy as np
import pytest

from rankability.core import (
    WeightMatrix,
    kendall_tau_distance,
    objective_value,
    ranking_from_order,
)
from rankability.errors import (
    InvalidKStarError,
    TruncatedOptimaError,
    UnprovenOptimumError,
)
from rankability.ktdiam import (
    KtResult,
    KtSolution,
    kappa_by_enumeration,
    kt_solution_from_rankings,
    solve_kt,
    validate_kt_solution,
)
from rankability.lop import SolverConfig, enumerate_optima, solve_lop

from tests.conftest import (
    COLLEGE_K_STAR,
    COLLEGE_OPTIMA_ORDERS,
    DIGRAPH_KAPPA,
    random_half_integer_matrix,
)
from tests.oracles import brute_force_kappa


class TestSolveKt:
    def test_digraph_kappa_values(self, digraphs):
        for num, a in digraphs.items():
            k_star = solve_lop(a).optimal_value
            result = solve_kt(a, k_star)
            assert result.proven
            assert result.kappa == DIGRAPH_KAPPA[num]

    def test_unique_optimum_has_identical_pair(self, digraphs):
        result = solve_kt(digraphs[1], 3.0)
        assert result.kappa == 0
        assert result.pair[0] == result.pair[1]
        assert result.pair[0].order == (1, 2, 3)

    def test_symmetric_three_cycle_witness(self, digraphs):
        result = solve_kt(digraphs[3], 2.0)
        assert result.kappa == 2
        assert (result.pair[0].order, result.pair[1].order) == (
            (1, 2, 3),
            (2, 3, 1),
        )

    def test_college_kappa(self, college_matrix, college_optima):
        result = solve_kt(college_matrix, COLLEGE_K_STAR)
        assert result.proven
        assert result.kappa == 3
        assert result.concordant_count == 45 - 3
        first, second = result.pair
        assert first in college_optima and second in college_optima
        assert kendall_tau_distance(first, second) == 3

    def test_college_pair_is_lex_smallest(self, college_matrix):
        _, _, _, oracle_pair = brute_force_kappa(
            np.asarray(college_matrix.weights), orders=list(COLLEGE_OPTIMA_ORDERS)
        )
        result = solve_kt(college_matrix, COLLEGE_K_STAR)
        assert (result.pair[0].order, result.pair[1].order) == oracle_pair

    def test_pair_is_ordered_and_counts_are_complementary(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            n = int(rng.integers(3, 7))
            a = random_half_integer_matrix(rng, n)
            k_star = solve_lop(a).optimal_value
            result = solve_kt(a, k_star)
            assert result.pair[0].order <= result.pair[1].order
            assert result.kappa + result.concordant_count == n * (n - 1) // 2

    def test_matches_brute_force_on_random_instances(self):
        rng = np.random.default_rng(11)
        for _ in range(30):
            n = int(rng.integers(3, 8))
            a = random_half_integer_matrix(rng, n)
            k_star, _, kappa, pair = brute_force_kappa(np.asarray(a.weights))
            result = solve_kt(a, k_star)
            assert result.proven
            assert result.kappa == kappa
            assert (result.pair[0].order, result.pair[1].order) == pair

    def test_pair_members_attain_optimum(self):
        rng = np.random.default_rng(23)
        for _ in range(10):
            a = random_half_integer_matrix(rng, 6)
            k_star = solve_lop(a).optimal_value
            result = solve_kt(a, k_star)
            for ranking in result.pair:
                assert objective_value(a, ranking) == pytest.approx(k_star)
            assert (
                kendall_tau_distance(*result.pair) == result.kappa
            )

    def test_kappa_zero_iff_unique_optimum(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            n = int(rng.integers(3, 7))
            a = random_half_integer_matrix(rng, n)
            k_star = solve_lop(a).optimal_value
            result = solve_kt(a, k_star)
            count = enumerate_optima(a).count
            assert (result.kappa == 0) == (count == 1)

    def test_infeasible_k_star_is_rejected(self, college_matrix):
        with pytest.raises(InvalidKStarError):
            solve_kt(college_matrix, 1000.0)

    def test_timeout_yields_unproven_incumbent(self):
        rng = np.random.default_rng(2024)
        n = 16
        wins = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                w = int(rng.binomial(4, 0.5))
                wins[i, j] = w
                wins[j, i] = 4 - w
        a = WeightMatrix(wins)
        k_star = solve_lop(a).optimal_value
        try:
            result = solve_kt(a, k_star, SolverConfig(time_limit=0.45))
        except UnprovenOptimumError:
            pytest.skip("host too slow to recover even one optimum in the limit")
        if result.proven:
            pytest.skip("instance solved within the tiny limit on this host")
        assert result.kappa >= 0
        for ranking in result.pair:
            assert objective_value(a, ranking) == pytest.approx(k_star)

    def test_no_time_for_any_optimum_raises(self, college_matrix):
        with pytest.raises(UnprovenOptimumError):
            solve_kt(college_matrix, COLLEGE_K_STAR, SolverConfig(time_limit=1e-9))


class TestKappaByEnumeration:
    def test_matches_solve_kt_on_random_instances(self):
        rng = np.random.default_rng(17)
        for _ in range(30):
            n = int(rng.integers(3, 8))
            a = random_half_integer_matrix(rng, n)
            k_star = solve_lop(a).optimal_value
            direct = solve_kt(a, k_star)
            via_enum = kappa_by_enumeration(a)
            assert direct.kappa == via_enum.kappa
            assert (
                (direct.pair[0].order, direct.pair[1].order)
                == (via_enum.pair[0].order, via_enum.pair[1].order)
            )

    def test_college(self, college_matrix):
        result = kappa_by_enumeration(college_matrix)
        assert result.kappa == 3 and result.proven

    def test_truncated_enumeration_is_refused(self, digraphs):
        with pytest.raises(TruncatedOptimaError):
            kappa_by_enumeration(digraphs[4], SolverConfig(enumeration_cap=2))


class TestKtSolution:
    def test_z_is_elementwise_and(self):
        sigma1 = ranking_from_order((1, 2, 3))
        sigma2 = ranking_from_order((2, 3, 1))
        solution = kt_solution_from_rankings(sigma1, sigma2)
        expected = solution.x.x & solution.y.x
        assert (solution.z == expected).all()
        assert not solution.z.flags.writeable

    def test_z_diagonal_zeroed(self):
        sigma = ranking_from_order((1, 2))
        solution = KtSolution(
            x=kt_solution_from_rankings(sigma, sigma).x,
            y=kt_solution_from_rankings(sigma, sigma).y,
            z=np.ones((2, 2), dtype=np.int8),
        )
        assert solution.z[0, 0] == 0 and solution.z[1, 1] == 0


class TestValidateKtSolution:
    def test_optimal_pair_passes_everything(self, college_matrix, college_optima):
        solution = kt_solution_from_rankings(college_optima[0], college_optima[5])
        report = validate_kt_solution(college_matrix, COLLEGE_K_STAR, solution)
        assert report.feasible
        assert report.passes_optimality_cuts
        assert report.constraint_violations == ()
        assert report.optimality_violations == ()

    def test_every_solver_witness_validates(self):
        rng = np.random.default_rng(41)
        for _ in range(10):
            a = random_half_integer_matrix(rng, 6)
            k_star = solve_lop(a).optimal_value
            result = solve_kt(a, k_star)
            solution = kt_solution_from_rankings(*result.pair)
            report = validate_kt_solution(a, k_star, solution)
            assert report.feasible and report.passes_optimality_cuts
            assert int(solution.z.sum()) == result.concordant_count

    def test_suboptimal_side_is_a_constraint_violation(
        self, college_matrix, college_optima
    ):
        bad = ranking_from_order(tuple(reversed(college_optima[0].order)))
        solution = kt_solution_from_rankings(college_optima[0], bad)
        report = validate_kt_solution(college_matrix, COLLEGE_K_STAR, solution)
        assert not report.feasible
        assert any("optimal value" in v for v in report.constraint_violations)

    def test_double_set_z_breaks_optimality_cut_only(
        self, college_matrix, college_optima
    ):
        base = kt_solution_from_rankings(college_optima[0], college_optima[1])
        z = np.array(base.z)
        z[0, 1] = 1
        z[1, 0] = 1
        solution = KtSolution(x=base.x, y=base.y, z=z)
        report = validate_kt_solution(college_matrix, COLLEGE_K_STAR, solution)
        assert any(
            "z[1,2] + z[2,1]" in v for v in report.optimality_violations
        )

    def test_z_exceeding_orientations_breaks_linking(
        self, college_matrix, college_optima
    ):
        base = kt_solution_from_rankings(college_optima[0], college_optima[1])
        z = np.zeros_like(np.array(base.z))
        mask = (base.x.x + base.y.x) == 0
        z[mask] = 1
        np.fill_diagonal(z, 0)
        solution = KtSolution(x=base.x, y=base.y, z=z)
        report = validate_kt_solution(college_matrix, COLLEGE_K_STAR, solution)
        assert not report.feasible
        assert any("linking" in v for v in report.constraint_violations)

    def test_shape_mismatch_is_reported(self, college_matrix, digraphs):
        solution = kt_solution_from_rankings(
            ranking_from_order((1, 2, 3)), ranking_from_order((1, 2, 3))
        )
        report = validate_kt_solution(college_matrix, COLLEGE_K_STAR, solution)
        assert not report.feasible
        assert "shape mismatch" in report.constraint_violations[0]


class TestMediumInstances:
    def test_bernoulli_wins_upper_size(self):
        rng = np.random.default_rng(1001)
        n = 12
        wins = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                w = int(rng.binomial(4, 0.5))
                wins[i, j] = w
                wins[j, i] = 4 - w
        a = WeightMatrix(wins)
        k_star = solve_lop(a).optimal_value
        direct = solve_kt(a, k_star)
        via_enum = kappa_by_enumeration(a)
        assert direct.proven
        assert direct.kappa == via_enum.kappa
        assert (
            (direct.pair[0].order, direct.pair[1].order)
            == (via_enum.pair[0].order, via_enum.pair[1].order)
        )
