"""Bagged ensemble of decision trees with majority voting."""

from __future__ import annotations

from typing import Optional

import numpy as np

from ..errors import DomainError
from .tree import DecisionTree


class RandomForest:
    """Bootstrap-aggregated trees with per-split feature subsampling.

    Per-tree RNG streams are spawned deterministically from the master seed,
    so a forest is reproducible regardless of how tree training is scheduled.
    With one tree, no bootstrap and the full feature set it degenerates to a
    plain DecisionTree, prediction for prediction.
    """

    def __init__(
        self,
        n_trees: int = 50,
        bootstrap: bool = True,
        feature_fraction: float = 0.5,
        max_depth: Optional[int] = 12,
        min_samples_split: int = 2,
        seed: int = 0,
    ) -> None:
        if n_trees < 1:
            raise DomainError(f"n_trees must be >= 1, got {n_trees}")
        if not 0.0 < feature_fraction <= 1.0:
            raise DomainError(f"feature_fraction must lie in (0, 1], got {feature_fraction}")
        self.n_trees = n_trees
        self.bootstrap = bootstrap
        self.feature_fraction = feature_fraction
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.seed = seed
        self.trees: list[DecisionTree] = []
        self.classes_: Optional[np.ndarray] = None

    def fit(self, X, y) -> "RandomForest":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y)
        if X.ndim != 2 or X.shape[0] != y.shape[0] or X.shape[0] == 0:
            raise DomainError("X must be 2-D and aligned with a non-empty y")
        self.classes_ = np.unique(y)
        n = X.shape[0]

        self.trees = []
        for child_seq in np.random.SeedSequence(self.seed).spawn(self.n_trees):
            rng = np.random.default_rng(child_seq)
            if self.bootstrap:
                idx = rng.integers(0, n, size=n)
                X_fit, y_fit = X[idx], y[idx]
            else:
                X_fit, y_fit = X, y
            tree = DecisionTree(
                max_depth=self.max_depth,
                min_samples_split=self.min_samples_split,
                feature_fraction=self.feature_fraction,
                rng=rng if self.feature_fraction < 1.0 else None,
            )
            tree.fit(X_fit, y_fit)
            self.trees.append(tree)
        return self

    def predict(self, X) -> np.ndarray:
        if not self.trees:
            raise DomainError("predict called before fit")
        X = np.asarray(X, dtype=float)
        votes = np.zeros((X.shape[0], len(self.classes_)), dtype=int)
        rows = np.arange(X.shape[0])
        for tree in self.trees:
            cols = np.searchsorted(self.classes_, tree.predict(X))
            votes[rows, cols] += 1
        # argmax takes the first maximum, i.e. the smallest label on ties
        return self.classes_[np.argmax(votes, axis=1)]
