import math
import random

import numpy
import pytest

from lexevo.dataset import schedule_windows
from lexevo.errors import DataError
from lexevo.experiments import (
    AblationSpec,
    interpret_model,
    interpretation_tables,
    run_ablation,
    run_cycle_sweep,
    run_nbcp,
    welch_t_test,
)
from lexevo.features import FEATURE_NAMES, SCALAR_FEATURES
from lexevo.model import fit
from tests.test_model import make_vector, random_vectors


def t_density(x, df):
    return (
        math.gamma((df + 1) / 2)
        / (math.sqrt(df * math.pi) * math.gamma(df / 2))
        * (1 + x * x / df) ** (-(df + 1) / 2)
    )


def tail_probability(t, df):
    """Two-tailed p by numerical integration of the t density."""
    hi = abs(t) + 60.0
    grid = numpy.linspace(abs(t), hi, 200_001)
    one_tail = numpy.trapezoid(numpy.array([t_density(x, df) for x in grid]), grid)
    return 2.0 * float(one_tail)


class TestWelchTTest:
    def test_identical_groups(self):
        t, df, p, significant = welch_t_test(1.0, 0.5, 10, 1.0, 0.5, 10)
        assert t == 0.0
        assert p == pytest.approx(1.0)
        assert not significant

    def test_symmetric_in_sign(self):
        t1, _, p1, _ = welch_t_test(2.0, 1.0, 8, 1.0, 1.0, 8)
        t2, _, p2, _ = welch_t_test(1.0, 1.0, 8, 2.0, 1.0, 8)
        assert t1 == -t2
        assert p1 == pytest.approx(p2)

    def test_degrees_of_freedom_formula(self):
        _, df, _, _ = welch_t_test(0.0, 2.0, 5, 1.0, 3.0, 7)
        se1, se2 = 2.0 / 5, 3.0 / 7
        expected = (se1 + se2) ** 2 / (se1 ** 2 / 4 + se2 ** 2 / 6)
        assert df == pytest.approx(expected, rel=1e-12)

    def test_p_matches_numerical_integration(self):
        cases = [
            (0.3, 0.8, 12, 0.1, 0.6, 15),
            (5.0, 1.0, 30, 3.0, 2.0, 25),
            (0.0, 1.0, 5, 0.2, 1.0, 5),
            (-1.0, 0.3, 9, 1.0, 0.4, 4),
        ]
        for case in cases:
            t, df, p, _ = welch_t_test(*case)
            assert p == pytest.approx(tail_probability(t, df), abs=1e-6)

    def test_degenerate_zero_variance(self):
        t, df, p, significant = welch_t_test(1.0, 0.0, 5, 1.0, 0.0, 5)
        assert (t, p, significant) == (0.0, 1.0, False)
        assert df == 8.0
        t, _, p, significant = welch_t_test(2.0, 0.0, 5, 1.0, 0.0, 5)
        assert t == math.inf
        assert (p, significant) == (0.0, True)

    def test_small_groups_rejected(self):
        with pytest.raises(DataError):
            welch_t_test(0.0, 1.0, 1, 0.0, 1.0, 5)

    def test_negative_variance_rejected(self):
        with pytest.raises(DataError):
            welch_t_test(0.0, -1.0, 5, 0.0, 1.0, 5)


class TestInterpretModel:
    def fitted_model(self, seed=21, n=30):
        rng = random.Random(seed)
        return random_vectors(rng, n), fit(random_vectors(rng, n))

    def test_differences_match_class_means(self):
        rng = random.Random(22)
        vectors = random_vectors(rng, 30)
        model = fit(vectors)
        scalar_rows, trigram_rows = interpret_model(model)
        losers = [v for v in vectors if v.target_class == 0]
        winners = [v for v in vectors if v.target_class == 1]
        for row in scalar_rows:
            loser_mean = sum(v.scalar(row.dimension) for v in losers) / len(losers)
            winner_mean = sum(v.scalar(row.dimension) for v in winners) / len(winners)
            assert row.loser_mean == pytest.approx(loser_mean, abs=1e-12)
            assert row.winner_mean == pytest.approx(winner_mean, abs=1e-12)
            assert row.difference == pytest.approx(
                winner_mean - loser_mean, abs=1e-12
            )
        for row in trigram_rows:
            loser_mean = sum(
                1 for v in losers if row.dimension in v.unique_ngrams
            ) / len(losers)
            assert row.loser_mean == pytest.approx(loser_mean, abs=1e-12)

    def test_scalar_rows_cover_model_features(self):
        _, model = self.fitted_model()
        scalar_rows, _ = interpret_model(model)
        assert [r.dimension for r in scalar_rows] == list(SCALAR_FEATURES)

    def test_trigram_rows_sorted_by_gap(self):
        _, model = self.fitted_model()
        _, trigram_rows = interpret_model(model, top_k=100)
        gaps = [abs(r.difference) for r in trigram_rows]
        assert gaps == sorted(gaps, reverse=True)

    def test_top_k_truncates(self):
        _, model = self.fitted_model()
        _, trigram_rows = interpret_model(model, top_k=2)
        assert len(trigram_rows) <= 2

    def test_planted_marker_ranks_first(self):
        # the marker trigram appears in every winner and no loser
        vectors = []
        rng = random.Random(23)
        for i in range(24):
            base = random_vectors(rng, 1)[0]
            target = i % 2
            trigrams = ("zzz",) if target else ("|ab",)
            vectors.append(make_vector(
                i,
                [base.normalized_length, base.syllable_count, base.shared_ngrams,
                 base.categorial_variations, base.relative_growth,
                 base.linear_extrapolation, base.present_age],
                trigrams, target,
            ))
        model = fit(vectors)
        _, trigram_rows = interpret_model(model)
        assert trigram_rows[0].dimension in ("zzz", "|ab")
        assert abs(trigram_rows[0].difference) == pytest.approx(1.0)
        assert trigram_rows[0].significant

    def test_tables_shape(self):
        _, model = self.fitted_model()
        tables = interpretation_tables(model, top_k=3)
        assert set(tables) == {"scalar_features", "top_trigrams"}
        for row in tables["top_trigrams"]:
            assert row["suggests"] in ("winner", "loser")
            expected = "winner" if row["difference"] > 0 else "loser"
            assert row["suggests"] == expected


class TestRunNbcp:
    def test_synthetic_end_to_end(self, synthetic_inputs):
        train_window, test_window = schedule_windows(50)[1]
        run = run_nbcp(train_window, test_window, synthetic_inputs)
        report = run["report"]
        assert report["counts"]["synsets"] == 50
        assert report["metrics"]["f_score"] >= 0.95
        assert report["features"] == list(FEATURE_NAMES)
        assert report["train"]["window"] == [
            train_window.past, train_window.present, train_window.future,
        ]
        assert "seed" in report["random"]

    def test_worker_invariance(self, synthetic_inputs):
        train_window, test_window = schedule_windows(50)[1]
        reference = run_nbcp(train_window, test_window, synthetic_inputs)
        for workers in (2, 8):
            run = run_nbcp(train_window, test_window, synthetic_inputs,
                           workers=workers)
            assert run["report"] == reference["report"]
            assert run["outcomes"] == reference["outcomes"]

    def test_feature_subset_runs(self, synthetic_inputs):
        train_window, test_window = schedule_windows(50)[1]
        run = run_nbcp(train_window, test_window, synthetic_inputs,
                       features=("relative_growth",))
        assert run["report"]["features"] == ["relative_growth"]
        assert run["model"].trigram_dims == ()


class TestRunAblation:
    def test_spec_validation(self):
        with pytest.raises(DataError):
            AblationSpec("bogus", "present_age")
        with pytest.raises(DataError):
            AblationSpec("drop_one", "bogus")

    def test_drop_one_delta(self, synthetic_inputs):
        train_window, test_window = schedule_windows(50)[1]
        result = run_ablation(
            AblationSpec("drop_one", "syllable_count"),
            train_window, test_window, synthetic_inputs,
        )
        assert result["mode"] == "drop_one"
        baseline = run_nbcp(train_window, test_window, synthetic_inputs)
        assert result["f_baseline"] == baseline["report"]["metrics"]["f_score"]
        assert result["delta"] == pytest.approx(
            result["f_variant"] - result["f_baseline"]
        )

    def test_single_only_uses_random_baseline(self, synthetic_inputs):
        train_window, test_window = schedule_windows(50)[1]
        result = run_ablation(
            AblationSpec("single_only", "relative_growth"),
            train_window, test_window, synthetic_inputs, seed=0,
        )
        variant = run_nbcp(train_window, test_window, synthetic_inputs,
                           features=("relative_growth",), seed=0)
        assert result["f_baseline"] == variant["report"]["random"]["f_score"]


class TestRunCycleSweep:
    def test_rows_keyed_by_future_period(self, synthetic_inputs):
        sweep = run_cycle_sweep([50], synthetic_inputs)
        futures = [row["future"] for row in sweep["rows"]]
        assert futures == [1950, 2000]
        assert sweep["skipped"] == []
        for row in sweep["rows"]:
            assert row["cycle"] == 50
            assert 0 <= row["f_nbcp"] <= 100
            assert row["synsets"] > 0

    def test_invalid_cycle_is_skipped_not_fatal(self, synthetic_inputs):
        sweep = run_cycle_sweep([50, 10], synthetic_inputs)
        assert len(sweep["skipped"]) == 1
        assert sweep["skipped"][0]["cycle"] == 10
        assert [row["cycle"] for row in sweep["rows"]] == [50, 50]
