"""End-to-end experiment: fill nulls, add lag features, split 75:25,
train one classifier and score it on the held-out rows."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..errors import DomainError
from .dataset import DamageRecord, fill_missing
from .features import FeatureMatrix, FeatureSpec, add_lag_features, split_matrix
from .forest import RandomForest
from .knn import KnnClassifier
from .metrics import ConfusionCounts, MetricsReport, evaluate
from .tree import DecisionTree

MODEL_KINDS = ("dt", "rf", "knn")


@dataclass(frozen=True)
class DtParams:
    # a lone tree needs the stronger stop rules to ride out label noise
    max_depth: Optional[int] = 10
    min_samples_split: int = 20


@dataclass(frozen=True)
class RfParams:
    n_trees: int = 50
    bootstrap: bool = True
    feature_fraction: float = 0.5
    max_depth: Optional[int] = 12
    min_samples_split: int = 20


@dataclass(frozen=True)
class KnnParams:
    k: int = 5


@dataclass(frozen=True)
class ModelSpec:
    kind: str = "rf"
    dt: DtParams = field(default_factory=DtParams)
    rf: RfParams = field(default_factory=RfParams)
    knn: KnnParams = field(default_factory=KnnParams)

    def __post_init__(self) -> None:
        if self.kind not in MODEL_KINDS:
            raise DomainError(f"model kind must be one of {MODEL_KINDS}, got {self.kind!r}")


@dataclass
class ExperimentResult:
    model_kind: str
    report: MetricsReport
    confusion: ConfusionCounts
    n_train: int
    n_test: int
    y_test: np.ndarray
    y_pred: np.ndarray


def build_model(spec: ModelSpec, seed: int, categorical_idx: Sequence[int] = ()):
    if spec.kind == "dt":
        return DecisionTree(
            max_depth=spec.dt.max_depth, min_samples_split=spec.dt.min_samples_split
        )
    if spec.kind == "rf":
        return RandomForest(
            n_trees=spec.rf.n_trees,
            bootstrap=spec.rf.bootstrap,
            feature_fraction=spec.rf.feature_fraction,
            max_depth=spec.rf.max_depth,
            min_samples_split=spec.rf.min_samples_split,
            seed=seed,
        )
    return KnnClassifier(k=spec.knn.k, categorical_idx=categorical_idx)


def prepare_matrix(
    records: Sequence[DamageRecord], feature_spec: FeatureSpec | None = None
) -> FeatureMatrix:
    """fill_missing then add_lag_features, the canonical preprocessing order."""
    spec = feature_spec or FeatureSpec()
    matrix = add_lag_features(fill_missing(records, spec), spec)
    if matrix.y is None:
        raise DomainError("training requires a damage label on every record")
    return matrix


def run_experiment(
    records: Sequence[DamageRecord],
    model_spec: ModelSpec,
    seed: int = 0,
    feature_spec: FeatureSpec | None = None,
    split_fraction: float = 0.75,
) -> ExperimentResult:
    matrix = prepare_matrix(records, feature_spec)
    train, test = split_matrix(matrix, fraction=split_fraction, seed=seed)

    categorical_idx = [matrix.columns.index(c) for c in matrix.categorical_columns]
    model = build_model(model_spec, seed=seed, categorical_idx=categorical_idx)
    model.fit(train.X, train.y)
    y_pred = model.predict(test.X)
    confusion, report = evaluate(test.y, y_pred)
    return ExperimentResult(
        model_kind=model_spec.kind,
        report=report,
        confusion=confusion,
        n_train=train.n_rows,
        n_test=test.n_rows,
        y_test=test.y,
        y_pred=y_pred,
    )
