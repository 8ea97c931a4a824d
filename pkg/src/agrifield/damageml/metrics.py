"""One-vs-rest confusion counting and the derived classification scores.

precision = Tp/(Tp+Fp), recall = Tp/(Tp+Fn), f1 their harmonic mean, all per
class; accuracy is the overall exact-match rate. Zero denominators score 0
and are flagged rather than raising.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError


@dataclass(frozen=True)
class ClassCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class ConfusionCounts:
    per_class: dict[int, ClassCounts]


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    zero_division: tuple[str, ...] = ()  # which scores hit a 0/0


@dataclass(frozen=True)
class MetricsReport:
    per_class: dict[int, ClassMetrics]
    accuracy: float
    macro_precision: float
    macro_recall: float
    macro_f1: float


def evaluate(y_true, y_pred) -> tuple[ConfusionCounts, MetricsReport]:
    """Score predictions against truth over the union of observed classes."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise DomainError("y_true and y_pred must be equal-length 1-D arrays")
    n = y_true.size
    if n == 0:
        raise DomainError("cannot evaluate empty label vectors")

    classes = np.unique(np.concatenate([y_true, y_pred]))
    counts: dict[int, ClassCounts] = {}
    metrics: dict[int, ClassMetrics] = {}
    for c in classes:
        tp = int(np.sum((y_true == c) & (y_pred == c)))
        fp = int(np.sum((y_true != c) & (y_pred == c)))
        fn = int(np.sum((y_true == c) & (y_pred != c)))
        tn = n - tp - fp - fn
        counts[int(c)] = ClassCounts(tp=tp, fp=fp, fn=fn, tn=tn)

        flags = []
        if tp + fp > 0:
            precision = tp / (tp + fp)
        else:
            precision = 0.0
            flags.append("precision")
        if tp + fn > 0:
            recall = tp / (tp + fn)
        else:
            recall = 0.0
            flags.append("recall")
        if precision + recall > 0:
            f1 = 2.0 * precision * recall / (precision + recall)
        else:
            f1 = 0.0
            flags.append("f1")
        metrics[int(c)] = ClassMetrics(precision, recall, f1, tuple(flags))

    accuracy = float(np.mean(y_true == y_pred))
    report = MetricsReport(
        per_class=metrics,
        accuracy=accuracy,
        macro_precision=float(np.mean([m.precision for m in metrics.values()])),
        macro_recall=float(np.mean([m.recall for m in metrics.values()])),
        macro_f1=float(np.mean([m.f1 for m in metrics.values()])),
    )
    return ConfusionCounts(per_class=counts), report


def report_rows(model: str, report: MetricsReport) -> list[dict]:
    """Flatten a report to one record per class (for CSV export)."""
    return [
        {
            "model": model,
            "class": c,
            "precision": m.precision,
            "recall": m.recall,
            "f1": m.f1,
            "accuracy": report.accuracy,
        }
        for c, m in sorted(report.per_class.items())
    ]


def render_table(reports: dict[str, MetricsReport]) -> str:
    """Aligned per-model, per-class score table with one accuracy per model."""
    lines = [f"{'Model':<8}{'Class':>6}{'Prec':>8}{'Rec':>8}{'F1':>8}{'Acc':>8}"]
    for model, report in reports.items():
        classes = sorted(report.per_class)
        mid = len(classes) // 2
        for i, c in enumerate(classes):
            m = report.per_class[c]
            acc = f"{report.accuracy:.2f}" if i == mid else ""
            name = model if i == mid else ""
            lines.append(
                f"{name:<8}{c:>6}{m.precision:>8.2f}{m.recall:>8.2f}{m.f1:>8.2f}{acc:>8}"
            )
    return "\n".join(lines)
