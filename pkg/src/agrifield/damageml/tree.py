"""CART-style decision tree grown on gini impurity.

Splits are binary on numeric thresholds taken at midpoints between
consecutive distinct sorted feature values. The search scans features in
index order and thresholds in ascending order, keeping the first split
that strictly minimises the weighted child impurity, so training is fully
deterministic. Growth stops at max_depth, below min_samples_split, on pure
nodes, or when no split improves the parent impurity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import DomainError


def gini(labels) -> float:
    """Impurity 1 - sum(p_c^2); 0 for a pure node, at most 1 - 1/C."""
    labels = np.asarray(labels)
    if labels.size == 0:
        raise DomainError("gini of an empty label set is undefined")
    _, counts = np.unique(labels, return_counts=True)
    probs = counts / labels.size
    return float(1.0 - np.sum(probs**2))


@dataclass
class Node:
    feature: int = -1
    threshold: float = 0.0
    left: Optional["Node"] = None
    right: Optional["Node"] = None
    value: int = 0  # majority label at this node
    n_samples: int = 0
    impurity: float = 0.0

    def is_leaf(self) -> bool:
        return self.left is None


def _majority_label(y: np.ndarray) -> int:
    """Most frequent label; ties go to the smallest label."""
    values, counts = np.unique(y, return_counts=True)
    return int(values[np.argmax(counts)])


def _best_split_for_feature(
    col: np.ndarray, y_codes: np.ndarray, n_classes: int
) -> tuple[float, float]:
    """Return (weighted child impurity, threshold) of the best cut on one column.

    Sorted-sweep with cumulative class counts: O(n log n) per column. Returns
    (inf, nan) when the column is constant.
    """
    n = col.size
    order = np.argsort(col, kind="stable")
    sorted_vals = col[order]
    sorted_y = y_codes[order]

    boundaries = np.nonzero(sorted_vals[:-1] != sorted_vals[1:])[0]
    if boundaries.size == 0:
        return np.inf, np.nan

    one_hot = np.zeros((n, n_classes))
    one_hot[np.arange(n), sorted_y] = 1.0
    cum = np.cumsum(one_hot, axis=0)

    left_counts = cum[boundaries]
    right_counts = cum[-1] - left_counts
    n_left = (boundaries + 1).astype(float)
    n_right = n - n_left

    gini_left = 1.0 - np.sum((left_counts / n_left[:, None]) ** 2, axis=1)
    gini_right = 1.0 - np.sum((right_counts / n_right[:, None]) ** 2, axis=1)
    weighted = (n_left * gini_left + n_right * gini_right) / n

    best = int(np.argmin(weighted))  # first index wins ties -> lowest threshold
    i = boundaries[best]
    threshold = (sorted_vals[i] + sorted_vals[i + 1]) / 2.0
    return float(weighted[best]), float(threshold)


class DecisionTree:
    """Greedy gini-impurity classifier.

    feature_fraction below 1.0 samples that share of the columns at every
    split (requires rng); it exists for forest use and defaults to the full
    feature set, which keeps training entirely deterministic.
    """

    def __init__(
        self,
        max_depth: Optional[int] = 12,
        min_samples_split: int = 2,
        feature_fraction: float = 1.0,
        rng: Optional[np.random.Generator] = None,
    ) -> None:
        if max_depth is not None and max_depth < 1:
            raise DomainError(f"max_depth must be >= 1 or None, got {max_depth}")
        if min_samples_split < 2:
            raise DomainError(f"min_samples_split must be >= 2, got {min_samples_split}")
        if not 0.0 < feature_fraction <= 1.0:
            raise DomainError(f"feature_fraction must lie in (0, 1], got {feature_fraction}")
        if feature_fraction < 1.0 and rng is None:
            raise DomainError("feature_fraction < 1 requires an rng")
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.feature_fraction = feature_fraction
        self.rng = rng
        self.root: Optional[Node] = None
        self.classes_: Optional[np.ndarray] = None

    def fit(self, X, y) -> "DecisionTree":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y)
        if X.ndim != 2 or X.shape[0] != y.shape[0] or X.shape[0] == 0:
            raise DomainError("X must be 2-D and aligned with a non-empty y")
        self.classes_, y_codes = np.unique(y, return_inverse=True)
        self.root = self._grow(X, y_codes, depth=0)
        return self

    def _candidate_features(self, n_features: int) -> np.ndarray:
        if self.feature_fraction >= 1.0:
            return np.arange(n_features)
        m = max(1, int(np.floor(self.feature_fraction * n_features + 0.5)))
        chosen = self.rng.choice(n_features, size=m, replace=False)
        return np.sort(chosen)  # keep index-order tie-breaking within the subset

    def _grow(self, X: np.ndarray, y_codes: np.ndarray, depth: int) -> Node:
        n = y_codes.size
        counts = np.bincount(y_codes, minlength=len(self.classes_))
        value = int(self.classes_[np.argmax(counts)])
        impurity = float(1.0 - np.sum((counts / n) ** 2))
        node = Node(value=value, n_samples=n, impurity=impurity)

        if (
            impurity == 0.0
            or n < self.min_samples_split
            or (self.max_depth is not None and depth >= self.max_depth)
        ):
            return node

        best_impurity, best_feature, best_threshold = np.inf, -1, np.nan
        for feat in self._candidate_features(X.shape[1]):
            weighted, threshold = _best_split_for_feature(
                X[:, feat], y_codes, len(self.classes_)
            )
            if weighted < best_impurity:
                best_impurity, best_feature, best_threshold = weighted, int(feat), threshold

        if best_feature < 0 or best_impurity >= impurity:
            return node  # nothing splittable or no strict improvement

        left_mask = X[:, best_feature] <= best_threshold
        node.feature = best_feature
        node.threshold = best_threshold
        node.left = self._grow(X[left_mask], y_codes[left_mask], depth + 1)
        node.right = self._grow(X[~left_mask], y_codes[~left_mask], depth + 1)
        return node

    def predict(self, X) -> np.ndarray:
        if self.root is None:
            raise DomainError("predict called before fit")
        X = np.asarray(X, dtype=float)
        return np.array([self._traverse(row) for row in X])

    def _traverse(self, row: np.ndarray) -> int:
        node = self.root
        while not node.is_leaf():
            node = node.left if row[node.feature] <= node.threshold else node.right
        return node.value

    def depth(self) -> int:
        def walk(node: Optional[Node]) -> int:
            if node is None or node.is_leaf():
                return 0
            return 1 + max(walk(node.left), walk(node.right))

        return walk(self.root)
