"""Lag-mean features and the seeded train/test split."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from agrifield.damageml import DamageRecord, add_lag_features, split_matrix
from agrifield.damageml.features import FeatureMatrix, FeatureSpec, rolling_lag_mean
from agrifield.errors import DomainError


def records_from_counts(counts, labels=None):
    labels = labels if labels is not None else [0] * len(counts)
    return [
        DamageRecord(
            id=i + 1,
            estimated_insect_count=float(c),
            crop_type=0,
            soil_type=1,
            pesticide_use_category=1,
            number_doses_week=0.0,
            number_weeks_used=0.0,
            number_weeks_quit=0.0,
            season=2,
            crop_damage=labels[i],
        )
        for i, (c, _) in enumerate(zip(counts, labels))
    ]


class TestRollingLagMean:
    def test_lag_one_window_five(self):
        # mean of rows 0..4 lands on row 5; earlier rows keep the sentinel
        out = rolling_lag_mean(np.array([1.0, 2, 3, 4, 5, 6, 7]), lag=1, window=5, fill_value=-999)
        assert list(out[:5]) == [-999.0] * 5
        assert out[5] == pytest.approx(3.0)  # mean(1..5)
        assert out[6] == pytest.approx(4.0)  # mean(2..6)

    def test_lag_two_window_five(self):
        out = rolling_lag_mean(np.array([1.0, 2, 3, 4, 5, 6, 7]), lag=2, window=5, fill_value=-999)
        assert list(out[:6]) == [-999.0] * 6
        assert out[6] == pytest.approx(3.0)  # mean(1..5)

    @given(st.floats(min_value=-50, max_value=50, allow_nan=False), st.integers(8, 40))
    def test_constant_series_yields_constant_feature(self, c, n):
        out = rolling_lag_mean(np.full(n, c), lag=1, window=5, fill_value=-999)
        assert all(v == pytest.approx(c) for v in out[5:])

    def test_short_series_is_all_sentinel(self):
        out = rolling_lag_mean(np.array([1.0, 2.0]), lag=1, window=5, fill_value=-999)
        assert list(out) == [-999.0, -999.0]


class TestAddLagFeatures:
    def test_columns_and_row_count(self):
        matrix = add_lag_features(records_from_counts(range(10)), FeatureSpec())
        assert matrix.n_rows == 10
        assert matrix.columns[:4] == [
            "estimated_insect_count",
            "number_doses_week",
            "number_weeks_used",
            "number_weeks_quit",
        ]
        assert "lagmean_1" in matrix.columns and "lagmean_2" in matrix.columns
        assert matrix.categorical_columns == [
            "crop_type",
            "soil_type",
            "pesticide_use_category",
            "season",
        ]

    def test_lag_values_in_matrix(self):
        matrix = add_lag_features(records_from_counts([1, 2, 3, 4, 5, 6, 7]), FeatureSpec())
        lag1 = matrix.X[:, matrix.columns.index("lagmean_1")]
        assert lag1[5] == pytest.approx(3.0)
        assert lag1[0] == -999.0

    def test_no_missing_cells_after_build(self):
        matrix = add_lag_features(records_from_counts(range(20)), FeatureSpec())
        assert np.isfinite(matrix.X).all()

    def test_labels_aligned(self):
        labels = [0, 1, 2, 0, 1, 2]
        matrix = add_lag_features(records_from_counts(range(6), labels), FeatureSpec())
        assert list(matrix.y) == labels

    def test_missing_label_anywhere_drops_vector(self):
        records = records_from_counts(range(3))
        records[1] = DamageRecord(id=2, estimated_insect_count=1.0)
        matrix = add_lag_features(records, FeatureSpec())
        assert matrix.y is None

    def test_string_categories_get_stable_codes(self):
        records = [
            DamageRecord(id=1, estimated_insect_count=1.0, season="kharif"),
            DamageRecord(id=2, estimated_insect_count=2.0, season="rabi"),
            DamageRecord(id=3, estimated_insect_count=3.0, season="kharif"),
        ]
        matrix = add_lag_features(records, FeatureSpec())
        season = matrix.X[:, matrix.columns.index("season")]
        assert season[0] == season[2] != season[1]


class TestFeatureSpecValidation:
    def test_bad_window(self):
        with pytest.raises(DomainError):
            FeatureSpec(window=0)

    def test_empty_lags(self):
        with pytest.raises(DomainError):
            FeatureSpec(lags=())


class TestSplitMatrix:
    def make_matrix(self, n):
        X = np.arange(n, dtype=float).reshape(-1, 1)
        return FeatureMatrix(X=X, columns=["x"], y=np.arange(n) % 3, categorical_columns=[])

    def test_hundred_rows_split_75_25(self):
        train, test = split_matrix(self.make_matrix(100), seed=0)
        assert (train.n_rows, test.n_rows) == (75, 25)

    def test_four_rows_split_3_1(self):
        train, test = split_matrix(self.make_matrix(4), seed=0)
        assert (train.n_rows, test.n_rows) == (3, 1)

    def test_rounding_ties_away_from_zero(self):
        train, test = split_matrix(self.make_matrix(6), seed=0)  # 4.5 -> 5
        assert (train.n_rows, test.n_rows) == (5, 1)

    def test_partition_is_disjoint_and_complete(self):
        matrix = self.make_matrix(40)
        train, test = split_matrix(matrix, seed=3)
        combined = sorted(np.concatenate([train.X[:, 0], test.X[:, 0]]).tolist())
        assert combined == list(range(40))

    def test_same_seed_same_partition(self):
        matrix = self.make_matrix(50)
        a_train, a_test = split_matrix(matrix, seed=11)
        b_train, b_test = split_matrix(matrix, seed=11)
        assert np.array_equal(a_train.X, b_train.X)
        assert np.array_equal(a_test.X, b_test.X)

    def test_different_seed_shuffles(self):
        matrix = self.make_matrix(50)
        a_train, _ = split_matrix(matrix, seed=1)
        b_train, _ = split_matrix(matrix, seed=2)
        assert not np.array_equal(a_train.X, b_train.X)

    def test_empty_matrix_rejected(self):
        with pytest.raises(DomainError):
            split_matrix(self.make_matrix(0))
