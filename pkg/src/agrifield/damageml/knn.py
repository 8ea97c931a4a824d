"""K-nearest-neighbours on standardized features.

Categorical columns are one-hot encoded before standardization so the
euclidean distance does not read an artificial ordering into category
codes. Mean and variance come from the training set only.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from ..errors import DomainError


class KnnClassifier:
    def __init__(self, k: int = 5, categorical_idx: Sequence[int] = ()) -> None:
        if k < 1:
            raise DomainError(f"k must be >= 1, got {k}")
        self.k = k
        self.categorical_idx = tuple(categorical_idx)
        self._categories: dict[int, np.ndarray] = {}
        self._mean: Optional[np.ndarray] = None
        self._std: Optional[np.ndarray] = None
        self._train: Optional[np.ndarray] = None
        self._labels: Optional[np.ndarray] = None

    def _expand(self, X: np.ndarray) -> np.ndarray:
        """One-hot categorical columns (training categories), keep the rest."""
        blocks = []
        for j in range(X.shape[1]):
            col = X[:, j]
            if j in self.categorical_idx:
                cats = self._categories[j]
                blocks.append((col[:, None] == cats[None, :]).astype(float))
            else:
                blocks.append(col[:, None])
        return np.hstack(blocks)

    def fit(self, X, y) -> "KnnClassifier":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y)
        if X.ndim != 2 or X.shape[0] != y.shape[0] or X.shape[0] == 0:
            raise DomainError("X must be 2-D and aligned with a non-empty y")
        if self.k > X.shape[0]:
            raise DomainError(f"k={self.k} exceeds training size {X.shape[0]}")
        self._categories = {j: np.unique(X[:, j]) for j in self.categorical_idx}
        expanded = self._expand(X)
        self._mean = expanded.mean(axis=0)
        std = expanded.std(axis=0)
        std[std == 0.0] = 1.0  # constant columns carry no distance
        self._std = std
        self._train = (expanded - self._mean) / self._std
        self._labels = y
        return self

    def predict(self, X) -> np.ndarray:
        if self._train is None:
            raise DomainError("predict called before fit")
        X = np.asarray(X, dtype=float)
        queries = (self._expand(X) - self._mean) / self._std
        out = np.empty(X.shape[0], dtype=self._labels.dtype)
        # chunked distance matrix keeps memory bounded on large query sets
        chunk = max(1, int(2_000_000 // max(1, self._train.shape[0])))
        for start in range(0, queries.shape[0], chunk):
            block = queries[start : start + chunk]
            d2 = (
                np.sum(block**2, axis=1)[:, None]
                + np.sum(self._train**2, axis=1)[None, :]
                - 2.0 * block @ self._train.T
            )
            for i, row in enumerate(d2):
                out[start + i] = self._vote(row)
        return out

    def _vote(self, dist2: np.ndarray) -> int:
        """Majority of the k nearest; ties break on summed distance, then label."""
        nearest = np.argsort(dist2, kind="stable")[: self.k]
        labels = self._labels[nearest]
        candidates, counts = np.unique(labels, return_counts=True)
        top = counts == counts.max()
        if np.sum(top) == 1:
            return candidates[np.argmax(top)]
        tied = candidates[top]
        sums = np.array([dist2[nearest[labels == c]].sum() for c in tied])
        best = tied[sums == sums.min()]
        return best.min()  # closest class wins; equal distance -> smallest label
