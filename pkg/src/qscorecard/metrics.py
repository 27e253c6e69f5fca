"""Scorecard evaluation: confusion counts, AUC, KS, recall, precision, ROC.

Scores are probabilities of default and the positive class is label 1.
A sample is predicted positive when its score is >= the threshold. AUC is
computed as the fraction of (positive, negative) pairs ranked correctly with
ties worth 0.5, which equals the trapezoidal area under the ROC curve. KS is
the largest TPR - FPR over all thresholds; its maximizing threshold doubles
as the default operating point for recall and precision reports.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .exceptions import DegenerateDataError
from .validation import check_scores_labels

REPORT_FIELDS = ("auc", "ks", "recall", "precision", "threshold")


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def to_dict(self) -> dict:
        return {"tp": self.tp, "fp": self.fp, "tn": self.tn, "fn": self.fn}


def confusion_at_threshold(scores, labels, threshold: float) -> ConfusionMatrix:
    """Count the four quadrants with positives predicted at score >= threshold."""
    scores, labels = check_scores_labels(scores, labels, require_both_classes=False)
    predicted = scores >= threshold
    actual = labels == 1
    return ConfusionMatrix(
        tp=int(np.sum(predicted & actual)),
        fp=int(np.sum(predicted & ~actual)),
        tn=int(np.sum(~predicted & ~actual)),
        fn=int(np.sum(~predicted & actual)),
    )


def auc(scores, labels) -> float:
    """Probability a random positive outscores a random negative, ties at 0.5.

    Computed from average ranks, so it is O(n log n) and exactly matches the
    pairwise count.
    """
    scores, labels = check_scores_labels(scores, labels)
    pos = labels == 1
    n_pos = int(pos.sum())
    n_neg = labels.size - n_pos
    ranks = rankdata(scores)
    pos_rank_sum = float(ranks[pos].sum())
    return (pos_rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def _sweep_rates(scores, labels):
    """Cumulative TPR and FPR at thresholds descending through unique scores.

    Returns (thresholds, tpr, fpr) where entry k corresponds to predicting
    positive at score >= thresholds[k].
    """
    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_pos = (labels[order] == 1).astype(np.int64)
    # last index of each tie group, so counts include every equal score
    last_in_group = np.nonzero(
        np.append(sorted_scores[1:] != sorted_scores[:-1], True)
    )[0]
    cum_pos = np.cumsum(sorted_pos)[last_in_group]
    cum_all = last_in_group + 1
    n_pos = int(sorted_pos.sum())
    n_neg = labels.size - n_pos
    tpr = cum_pos / n_pos
    fpr = (cum_all - cum_pos) / n_neg
    return sorted_scores[last_in_group], tpr, fpr


def ks(scores, labels) -> float:
    """Kolmogorov-Smirnov separation: max over thresholds of TPR - FPR."""
    statistic, _ = ks_with_threshold(scores, labels)
    return statistic


def ks_with_threshold(scores, labels) -> tuple[float, float]:
    """KS statistic plus the score threshold achieving it.

    Ties on the statistic resolve to the highest threshold, the first one
    reached sweeping scores downward. The empty cut (nothing predicted
    positive) counts as TPR = FPR = 0, so KS is never negative.
    """
    scores, labels = check_scores_labels(scores, labels)
    thresholds, tpr, fpr = _sweep_rates(scores, labels)
    gaps = tpr - fpr
    k = int(np.argmax(gaps))
    statistic = max(float(gaps[k]), 0.0)
    if statistic == 0.0:
        return 0.0, float(thresholds[0])
    return statistic, float(thresholds[k])


def recall(cm: ConfusionMatrix) -> float:
    """Fraction of actual positives that were flagged: TP / (TP + FN)."""
    if cm.tp + cm.fn == 0:
        raise DegenerateDataError("recall undefined without positive samples")
    return cm.tp / (cm.tp + cm.fn)


def precision(cm: ConfusionMatrix) -> float:
    """Fraction of flagged samples that are truly positive: TP / (TP + FP)."""
    if cm.tp + cm.fp == 0:
        raise DegenerateDataError("precision undefined without predicted positives")
    return cm.tp / (cm.tp + cm.fp)


def roc_curve(scores, labels) -> list[tuple[float, float]]:
    """(FPR, TPR) points from (0,0) through each unique score down to (1,1)."""
    scores, labels = check_scores_labels(scores, labels)
    _, tpr, fpr = _sweep_rates(scores, labels)
    points = [(0.0, 0.0)]
    points.extend((float(x), float(y)) for x, y in zip(fpr, tpr))
    return points


def trapezoid_area(points) -> float:
    """Area under a piecewise-linear curve given as (x, y) points."""
    pts = np.asarray(points, dtype=np.float64)
    x, y = pts[:, 0], pts[:, 1]
    return float(np.sum(np.diff(x) * (y[1:] + y[:-1]) / 2.0))


@dataclass(frozen=True)
class MetricsReport:
    """The four scorecard metrics plus the threshold behind recall/precision."""

    auc: float
    ks: float
    recall: float
    precision: float
    threshold: float

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in REPORT_FIELDS}

    def to_csv_row(self, partition_id: int) -> list[str]:
        return [str(partition_id)] + [repr(getattr(self, name)) for name in REPORT_FIELDS]

    @classmethod
    def from_dict(cls, data: dict) -> "MetricsReport":
        return cls(**{name: float(data[name]) for name in REPORT_FIELDS})


def compute_report(scores, labels, threshold: float | None = None) -> MetricsReport:
    """Evaluate all four metrics at once.

    When ``threshold`` is omitted the KS-maximizing threshold is used for the
    confusion-based metrics; that cut always flags at least one sample, so
    recall and precision are well defined whenever both classes are present.
    """
    scores, labels = check_scores_labels(scores, labels)
    ks_stat, ks_thr = ks_with_threshold(scores, labels)
    used = ks_thr if threshold is None else float(threshold)
    cm = confusion_at_threshold(scores, labels, used)
    return MetricsReport(
        auc=auc(scores, labels),
        ks=ks_stat,
        recall=recall(cm),
        precision=precision(cm),
        threshold=used,
    )
