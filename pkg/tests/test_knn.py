"""Nearest-neighbour voting, standardization and one-hot category handling."""

import numpy as np
import pytest

from agrifield.damageml import KnnClassifier
from agrifield.errors import DomainError


class TestVoting:
    def test_single_training_point_always_wins(self):
        model = KnnClassifier(k=1).fit(np.array([[3.0]]), np.array([7]))
        queries = np.array([[-100.0], [0.0], [99.0]])
        assert list(model.predict(queries)) == [7, 7, 7]

    def test_k_equals_n_gives_global_majority(self):
        X = np.arange(5, dtype=float).reshape(-1, 1)
        y = np.array([1, 1, 1, 0, 0])
        model = KnnClassifier(k=5).fit(X, y)
        assert list(model.predict(np.array([[100.0], [-100.0]]))) == [1, 1]

    def test_two_point_train_nearest_wins(self):
        X = np.array([[0.0], [10.0]])
        y = np.array([0, 1])
        model = KnnClassifier(k=1).fit(X, y)
        assert model.predict(np.array([[4.0]]))[0] == 0

    def test_vote_tie_breaks_on_distance(self):
        # two votes each; class 1's neighbours are closer in sum
        X = np.array([[0.0], [1.0], [10.0], [11.0]])
        y = np.array([1, 1, 0, 0])
        model = KnnClassifier(k=4).fit(X, y)
        assert model.predict(np.array([[2.0]]))[0] == 1

    def test_exact_tie_takes_smallest_label(self):
        X = np.array([[0.0], [10.0]])
        y = np.array([1, 0])
        model = KnnClassifier(k=2).fit(X, y)
        # equidistant query, one vote each, symmetric distances
        assert model.predict(np.array([[5.0]]))[0] == 0

    def test_k_larger_than_train_rejected(self):
        with pytest.raises(DomainError):
            KnnClassifier(k=3).fit(np.zeros((2, 1)), np.array([0, 1]))


class TestStandardization:
    def test_feature_scaling_is_neutralized(self):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(60, 2))
        y = (X[:, 0] > 0).astype(int)
        queries = rng.normal(size=(20, 2))

        base = KnnClassifier(k=5).fit(X, y).predict(queries)
        blown_up = X.copy()
        blown_up[:, 1] *= 1e6  # would dominate unstandardized distances
        q2 = queries.copy()
        q2[:, 1] *= 1e6
        scaled = KnnClassifier(k=5).fit(blown_up, y).predict(q2)
        assert np.array_equal(base, scaled)

    def test_constant_column_is_harmless(self):
        X = np.array([[0.0, 3.0], [10.0, 3.0]])
        model = KnnClassifier(k=1).fit(X, np.array([0, 1]))
        assert model.predict(np.array([[2.0, 3.0]]))[0] == 0


class TestOneHotCategories:
    def test_codes_carry_no_ordering(self):
        # categories 0 and 3 in training; query has category 2. Raw codes
        # would call it closer to 3; one-hot makes both equally foreign, so
        # the tie falls to the smallest label.
        X = np.array([[0.0], [3.0]])
        y = np.array([0, 1])
        query = np.array([[2.0]])

        raw = KnnClassifier(k=1).fit(X, y)
        assert raw.predict(query)[0] == 1

        one_hot = KnnClassifier(k=1, categorical_idx=[0]).fit(X, y)
        assert one_hot.predict(query)[0] == 0

    def test_seen_category_matches_exactly(self):
        X = np.array([[0.0, 1.0], [0.0, 2.0], [9.0, 1.0]])
        y = np.array([0, 1, 2])
        model = KnnClassifier(k=1, categorical_idx=[1]).fit(X, y)
        assert model.predict(np.array([[0.1, 2.0]]))[0] == 1

    def test_mixed_numeric_and_categorical(self):
        rng = np.random.default_rng(4)
        X = np.column_stack([rng.normal(size=40), rng.integers(0, 3, size=40)])
        y = (X[:, 1] == 2).astype(int)
        model = KnnClassifier(k=3, categorical_idx=[1]).fit(X, y)
        preds = model.predict(X)
        assert float(np.mean(preds == y)) >= 0.9
