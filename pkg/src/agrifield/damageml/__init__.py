"""Crop-damage prediction: dataset handling, feature engineering,
from-scratch classifiers (decision tree, random forest, KNN) and
per-class evaluation metrics."""

from .dataset import DamageRecord, fill_missing, load_records, synth_generate
from .features import FeatureMatrix, FeatureSpec, add_lag_features, split_matrix
from .forest import RandomForest
from .knn import KnnClassifier
from .metrics import ConfusionCounts, MetricsReport, evaluate
from .pipeline import ExperimentResult, ModelSpec, run_experiment
from .tree import DecisionTree, gini

__all__ = [
    "DamageRecord",
    "load_records",
    "fill_missing",
    "synth_generate",
    "FeatureSpec",
    "FeatureMatrix",
    "add_lag_features",
    "split_matrix",
    "gini",
    "DecisionTree",
    "RandomForest",
    "KnnClassifier",
    "ConfusionCounts",
    "MetricsReport",
    "evaluate",
    "ModelSpec",
    "ExperimentResult",
    "run_experiment",
]
