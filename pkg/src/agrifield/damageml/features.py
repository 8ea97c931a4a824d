"""Feature engineering: trailing-window lag means and the train/test split."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..errors import DomainError


@dataclass(frozen=True)
class FeatureSpec:
    """Lag-feature parameters.

    For lag l and window w, the feature at row i is the mean of the w source
    values ending l rows back (indices i-l-w+1 .. i-l); rows without a full
    window get fill_value, the same sentinel used for missing cells.
    """

    window: int = 5
    lags: tuple[int, ...] = (1, 2)
    fill_value: float = -999.0
    source_column: str = "estimated_insect_count"

    def __post_init__(self) -> None:
        if self.window < 1:
            raise DomainError(f"window must be >= 1, got {self.window}")
        if not self.lags or any(l < 1 for l in self.lags):
            raise DomainError(f"lags must be non-empty positive integers, got {self.lags}")


@dataclass
class FeatureMatrix:
    """Dense numeric design matrix with aligned labels.

    categorical_columns names the integer-encoded columns so distance-based
    models can one-hot them instead of treating codes as ordered.
    """

    X: np.ndarray
    columns: list[str]
    y: Optional[np.ndarray]
    categorical_columns: list[str]

    def __post_init__(self) -> None:
        if self.X.ndim != 2 or self.X.shape[1] != len(self.columns):
            raise DomainError("matrix shape does not match column names")
        if self.y is not None and len(self.y) != self.X.shape[0]:
            raise DomainError("label vector length does not match row count")

    @property
    def n_rows(self) -> int:
        return self.X.shape[0]

    def take(self, idx: np.ndarray) -> "FeatureMatrix":
        return FeatureMatrix(
            X=self.X[idx],
            columns=self.columns,
            y=None if self.y is None else self.y[idx],
            categorical_columns=self.categorical_columns,
        )


def _encode_categorical(values: list) -> tuple[np.ndarray, dict]:
    """Map category values to stable integer codes (sorted unique order)."""
    def sort_key(v):
        return (v is None, isinstance(v, str), v if not isinstance(v, str) else 0, str(v))

    mapping = {v: code for code, v in enumerate(sorted(set(values), key=sort_key))}
    return np.array([mapping[v] for v in values], dtype=float), mapping


def rolling_lag_mean(source: np.ndarray, lag: int, window: int, fill_value: float) -> np.ndarray:
    """Trailing mean of `window` values ending `lag` rows before each row."""
    n = len(source)
    out = np.full(n, fill_value, dtype=float)
    first = lag + window - 1  # earliest row with a complete window
    if n <= first:
        return out
    csum = np.concatenate(([0.0], np.cumsum(source, dtype=float)))
    ends = np.arange(first, n) - lag + 1  # exclusive window ends
    out[first:] = (csum[ends] - csum[ends - window]) / window
    return out


def add_lag_features(records: Sequence, spec: FeatureSpec) -> FeatureMatrix:
    """Build the design matrix: raw columns, encoded categories, lag means.

    Records are taken in the given (id-sorted) order; lag means run over that
    global order. Labels come from crop_damage when every record has one.
    """
    from .dataset import CATEGORICAL_COLUMNS, LABEL_COLUMN, NUMERIC_COLUMNS

    n = len(records)
    columns: list[str] = []
    data: list[np.ndarray] = []

    for col in NUMERIC_COLUMNS:
        raw = [getattr(r, col) for r in records]
        vals = np.array(
            [spec.fill_value if v is None else float(v) for v in raw], dtype=float
        )
        columns.append(col)
        data.append(vals)

    categorical: list[str] = []
    for col in CATEGORICAL_COLUMNS:
        codes, _ = _encode_categorical([getattr(r, col) for r in records])
        columns.append(col)
        data.append(codes)
        categorical.append(col)

    source = data[columns.index(spec.source_column)]
    for lag in spec.lags:
        columns.append(f"lagmean_{lag}")
        data.append(rolling_lag_mean(source, lag, spec.window, spec.fill_value))

    labels = [getattr(r, LABEL_COLUMN) for r in records]
    y = np.array(labels, dtype=int) if all(l is not None for l in labels) else None

    X = np.column_stack(data) if data else np.empty((n, 0))
    return FeatureMatrix(X=X, columns=columns, y=y, categorical_columns=categorical)


def split_matrix(
    matrix: FeatureMatrix, fraction: float = 0.75, seed: int = 0
) -> tuple[FeatureMatrix, FeatureMatrix]:
    """Shuffle rows by seed and split; train size is round(fraction * n),
    ties away from zero. The partition is row-disjoint and deterministic."""
    n = matrix.n_rows
    if n == 0:
        raise DomainError("cannot split an empty matrix")
    if not 0.0 < fraction < 1.0:
        raise DomainError(f"fraction must lie in (0, 1), got {fraction}")
    n_train = int(math.floor(fraction * n + 0.5))
    n_train = min(max(n_train, 1), n)
    perm = np.random.default_rng(seed).permutation(n)
    return matrix.take(perm[:n_train]), matrix.take(perm[n_train:])
