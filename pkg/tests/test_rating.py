"""Tests for the Colley and Massey rating systems."""

from __future__ import annotations

import numpy as np
import pytest

from rankability.errors import EmptyDataError
from rankability.rating import (
    RatingMethod,
    RatingVector,
    colley_ratings,
    massey_ratings,
    ranking_from_ratings,
)
from rankability.sports import GameRecord, GameSet, game_set_from_records

from tests.conftest import random_game_set


def _game(team_a, team_b, score_a, score_b, stage="regular"):
    return GameRecord(
        season=2000,
        stage=stage,
        team_a=team_a,
        team_b=team_b,
        score_a=score_a,
        score_b=score_b,
    )


class TestRatingVector:
    def test_values_are_read_only(self):
        vector = RatingVector(values=[0.5, 0.5], method="colley")
        assert vector.method is RatingMethod.COLLEY
        with pytest.raises(ValueError):
            vector.values[0] = 1.0

    def test_rejects_empty_vector(self):
        with pytest.raises(ValueError):
            RatingVector(values=[], method="massey")


class TestColley:
    def test_two_teams_one_game(self):
        games = game_set_from_records([_game("A", "B", 10, 3)])
        vector = colley_ratings(games)
        assert vector.values == pytest.approx([0.625, 0.375])
        assert vector.connected

    def test_mean_is_half(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            teams = int(rng.integers(2, 13))
            games = random_game_set(rng, teams, int(rng.integers(1, 40)))
            vector = colley_ratings(games)
            assert vector.values.mean() == pytest.approx(0.5, abs=1e-8)

    def test_margins_do_not_matter(self):
        close = game_set_from_records(
            [_game("A", "B", 10, 9), _game("B", "C", 3, 0)]
        )
        blowout = game_set_from_records(
            [_game("A", "B", 50, 0), _game("B", "C", 21, 20)]
        )
        assert colley_ratings(close).values == pytest.approx(
            colley_ratings(blowout).values
        )

    def test_tie_counts_half_win_half_loss(self):
        tied = game_set_from_records([_game("A", "B", 7, 7)])
        vector = colley_ratings(tied)
        assert vector.values == pytest.approx([0.5, 0.5])

    def test_registered_team_without_games(self):
        games = GameSet(
            teams=("A", "B", "C"),
            games=(_game("A", "B", 10, 3),),
        )
        vector = colley_ratings(games)
        assert vector.values[2] == pytest.approx(0.5)
        assert vector.values.mean() == pytest.approx(0.5, abs=1e-8)

    def test_empty_schedule_is_rejected(self):
        with pytest.raises(EmptyDataError):
            colley_ratings(GameSet(teams=("A", "B"), games=()))


class TestMassey:
    def test_two_teams_margin_seven(self):
        games = game_set_from_records([_game("A", "B", 10, 3)])
        vector = massey_ratings(games)
        assert vector.values == pytest.approx([3.5, -3.5])
        assert vector.connected

    def test_all_tied_round_robin_is_zero(self):
        games = game_set_from_records(
            [_game("A", "B", 7, 7), _game("B", "C", 0, 0), _game("A", "C", 3, 3)]
        )
        assert massey_ratings(games).values == pytest.approx([0.0, 0.0, 0.0])

    def test_zero_sum_and_residual(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            teams = int(rng.integers(2, 13))
            games = random_game_set(rng, teams, int(rng.integers(1, 40)))
            vector = massey_ratings(games)
            n = games.team_count
            m = np.zeros((n, n))
            p = np.zeros(n)
            for g in games.games:
                i = games.index(g.team_a) - 1
                j = games.index(g.team_b) - 1
                m[i, i] += 1
                m[j, j] += 1
                m[i, j] -= 1
                m[j, i] -= 1
                p[i] += g.score_a - g.score_b
                p[j] -= g.score_a - g.score_b
            residual = np.abs(m @ vector.values - p).max()
            assert residual <= 1e-8

    def test_score_shift_invariance(self):
        base = [_game("A", "B", 10, 3), _game("B", "C", 14, 20)]
        shifted = [
            _game("A", "B", 15, 8),
            _game("B", "C", 19, 25),
        ]
        assert massey_ratings(game_set_from_records(base)).values == pytest.approx(
            massey_ratings(game_set_from_records(shifted)).values
        )

    def test_disconnected_schedule_per_component(self):
        games = game_set_from_records(
            [_game("A", "B", 10, 3), _game("C", "D", 14, 7)]
        )
        vector = massey_ratings(games)
        assert not vector.connected
        assert vector.values[0] + vector.values[1] == pytest.approx(0.0, abs=1e-8)
        assert vector.values[2] + vector.values[3] == pytest.approx(0.0, abs=1e-8)
        assert vector.values == pytest.approx([3.5, -3.5, 3.5, -3.5])

    def test_empty_schedule_is_rejected(self):
        with pytest.raises(EmptyDataError):
            massey_ratings(GameSet(teams=("A", "B"), games=()))


class TestPermutationEquivariance:
    def test_relabeling_permutes_ratings(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            games = random_game_set(rng, 6, 15)
            relabel = {
                team: f"Z{len(games.teams) - idx:02d}"
                for idx, team in enumerate(games.teams)
            }
            renamed = game_set_from_records(
                [
                    GameRecord(
                        season=g.season,
                        stage=g.stage,
                        team_a=relabel[g.team_a],
                        team_b=relabel[g.team_b],
                        score_a=g.score_a,
                        score_b=g.score_b,
                    )
                    for g in games.games
                ]
            )
            for method in (colley_ratings, massey_ratings):
                original = method(games)
                permuted = method(renamed)
                for team in games.teams:
                    assert permuted.values[
                        renamed.index(relabel[team]) - 1
                    ] == pytest.approx(original.values[games.index(team) - 1])


class TestRankingFromRatings:
    def test_descending_order(self):
        vector = RatingVector(values=[3.5, -3.5, 0.0], method="massey")
        assert ranking_from_ratings(vector).order == (1, 3, 2)

    def test_ties_break_by_team_index(self):
        vector = RatingVector(values=[0.5, 0.5, 0.5], method="colley")
        assert ranking_from_ratings(vector).order == (1, 2, 3)

    def test_two_team_example(self):
        vector = RatingVector(values=[0.625, 0.375], method="colley")
        assert ranking_from_ratings(vector).order == (1, 2)
