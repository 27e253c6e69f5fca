import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qscorecard import (
    ConfusionMatrix,
    DegenerateDataError,
    MetricsReport,
    auc,
    compute_report,
    confusion_at_threshold,
    ks,
    ks_with_threshold,
    precision,
    recall,
    roc_curve,
    trapezoid_area,
)

from oracles import auc_pairwise_oracle, ks_sweep_oracle


def random_scored_labels(rng, with_ties=True):
    n = int(rng.integers(4, 50))
    if with_ties and rng.random() < 0.5:
        scores = rng.integers(0, 6, size=n).astype(float)
    else:
        scores = rng.standard_normal(n)
    labels = rng.integers(0, 2, size=n)
    labels[0], labels[1] = 0, 1
    return scores, labels


def test_confusion_worked_example():
    scores = [0.9, 0.8, 0.4, 0.2]
    labels = [1, 0, 1, 0]
    cm = confusion_at_threshold(scores, labels, 0.5)
    assert (cm.tp, cm.fp, cm.tn, cm.fn) == (1, 1, 1, 1)
    assert cm.total == 4


def test_confusion_threshold_is_inclusive():
    cm = confusion_at_threshold([0.5, 0.5], [1, 0], 0.5)
    assert (cm.tp, cm.fp, cm.tn, cm.fn) == (1, 1, 0, 0)


def test_confusion_extreme_thresholds():
    scores = [0.1, 0.6, 0.7]
    labels = [0, 1, 1]
    everything = confusion_at_threshold(scores, labels, -np.inf)
    assert (everything.tp, everything.fp) == (2, 1)
    nothing = confusion_at_threshold(scores, labels, 2.0)
    assert (nothing.tn, nothing.fn) == (1, 2)


def test_confusion_rejects_mismatched_lengths():
    with pytest.raises(ValueError):
        confusion_at_threshold([0.5], [1, 0], 0.5)


def test_auc_worked_examples():
    assert auc([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1]) == pytest.approx(0.75)
    assert auc([0.9, 0.8, 0.1], [1, 1, 0]) == pytest.approx(1.0)
    assert auc([0.1, 0.2, 0.9], [1, 1, 0]) == pytest.approx(0.0)
    assert auc([0.5, 0.5, 0.5, 0.5], [1, 0, 1, 0]) == pytest.approx(0.5)


def test_auc_requires_both_classes():
    with pytest.raises(DegenerateDataError):
        auc([0.2, 0.4], [1, 1])


def test_auc_matches_pairwise_oracle():
    rng = np.random.default_rng(101)
    for _ in range(100):
        scores, labels = random_scored_labels(rng)
        assert auc(scores, labels) == pytest.approx(
            auc_pairwise_oracle(scores, labels), abs=1e-12
        )


@settings(max_examples=60, deadline=None)
@given(
    scores=st.lists(st.integers(-50, 50), min_size=4, max_size=30, unique=True),
    data=st.data(),
)
def test_auc_invariant_under_monotone_transform(scores, data):
    labels = data.draw(
        st.lists(st.integers(0, 1), min_size=len(scores), max_size=len(scores))
    )
    if 0 not in labels or 1 not in labels:
        labels[0], labels[-1] = 0, 1
    base = auc(np.array(scores, dtype=float), labels)
    stretched = auc(np.array([3 * s + 7 for s in scores], dtype=float), labels)
    assert stretched == pytest.approx(base, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_auc_reversal(data):
    n = data.draw(st.integers(4, 30))
    scores = data.draw(
        st.lists(
            st.floats(-100, 100, allow_nan=False), min_size=n, max_size=n
        )
    )
    labels = data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    if 0 not in labels or 1 not in labels:
        labels[0], labels[-1] = 0, 1
    forward = auc(np.array(scores), labels)
    backward = auc(-np.array(scores), labels)
    assert forward + backward == pytest.approx(1.0, abs=1e-12)


def test_ks_worked_examples():
    assert ks([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0]) == pytest.approx(1.0)
    assert ks([0.9, 0.1, 0.9, 0.1], [1, 0, 0, 1]) == pytest.approx(0.0)
    assert ks([0.9, 0.7, 0.6, 0.4], [1, 0, 1, 0]) == pytest.approx(0.5)


def test_ks_threshold_reports_highest_tie():
    # both 0.9 and 0.6 cuts give TPR-FPR = 0.5; the sweep stops at 0.9 first
    statistic, threshold = ks_with_threshold([0.9, 0.7, 0.6, 0.4], [1, 0, 1, 0])
    assert statistic == pytest.approx(0.5)
    assert threshold == pytest.approx(0.9)


def test_ks_matches_sweep_oracle():
    rng = np.random.default_rng(303)
    for _ in range(100):
        scores, labels = random_scored_labels(rng)
        assert ks(scores, labels) == pytest.approx(
            ks_sweep_oracle(scores, labels), abs=1e-12
        )


def test_ks_bounds_and_perfect_separation():
    rng = np.random.default_rng(7)
    scores, labels = random_scored_labels(rng)
    assert 0.0 <= ks(scores, labels) <= 1.0
    separated = np.concatenate([np.zeros(5), np.ones(5)])
    assert ks(separated, np.array([0] * 5 + [1] * 5)) == pytest.approx(1.0)
    # non-separable data stays strictly below 1
    assert ks([0.3, 0.7, 0.3, 0.7], [1, 0, 0, 1]) < 1.0


def test_recall_precision_worked_values():
    cm = ConfusionMatrix(tp=3, fp=1, tn=4, fn=2)
    assert recall(cm) == pytest.approx(0.6)
    assert precision(cm) == pytest.approx(0.75)


def test_recall_precision_degenerate_errors():
    with pytest.raises(DegenerateDataError):
        recall(ConfusionMatrix(tp=0, fp=2, tn=3, fn=0))
    with pytest.raises(DegenerateDataError):
        precision(ConfusionMatrix(tp=0, fp=0, tn=3, fn=2))


def test_roc_curve_endpoints_and_shape():
    scores = [0.9, 0.8, 0.4, 0.2]
    labels = [1, 0, 1, 0]
    points = roc_curve(scores, labels)
    assert points[0] == (0.0, 0.0)
    assert points[-1] == (1.0, 1.0)
    assert len(points) == 5
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    assert xs == sorted(xs)
    assert ys == sorted(ys)


def test_roc_curve_perfect_classifier_hits_corner():
    points = roc_curve([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0])
    assert (0.0, 1.0) in points


def test_roc_curve_single_unique_score():
    assert roc_curve([0.5, 0.5, 0.5], [1, 0, 1]) == [(0.0, 0.0), (1.0, 1.0)]


def test_roc_area_equals_auc():
    rng = np.random.default_rng(404)
    for _ in range(100):
        scores, labels = random_scored_labels(rng)
        area = trapezoid_area(roc_curve(scores, labels))
        assert area == pytest.approx(auc(scores, labels), abs=1e-12)


def test_trapezoid_area_of_unit_triangle():
    assert trapezoid_area([(0.0, 0.0), (1.0, 1.0)]) == pytest.approx(0.5)
    assert trapezoid_area([(0.0, 0.0), (0.0, 1.0), (1.0, 1.0)]) == pytest.approx(1.0)


def test_compute_report_defaults_to_ks_threshold():
    scores = np.array([0.9, 0.7, 0.6, 0.4, 0.3, 0.2])
    labels = np.array([1, 1, 0, 1, 0, 0])
    report = compute_report(scores, labels)
    statistic, threshold = ks_with_threshold(scores, labels)
    assert report.ks == pytest.approx(statistic)
    assert report.threshold == pytest.approx(threshold)
    cm = confusion_at_threshold(scores, labels, threshold)
    assert report.recall == pytest.approx(recall(cm))
    assert report.precision == pytest.approx(precision(cm))
    assert report.auc == pytest.approx(auc(scores, labels))


def test_compute_report_respects_explicit_threshold():
    scores = [0.9, 0.7, 0.6, 0.4]
    labels = [1, 0, 1, 0]
    report = compute_report(scores, labels, threshold=0.65)
    assert report.threshold == pytest.approx(0.65)
    cm = confusion_at_threshold(scores, labels, 0.65)
    assert report.recall == pytest.approx(recall(cm))


def test_compute_report_metrics_in_unit_interval():
    rng = np.random.default_rng(55)
    for _ in range(20):
        scores, labels = random_scored_labels(rng)
        report = compute_report(scores, labels)
        for value in (report.auc, report.ks, report.recall, report.precision):
            assert 0.0 <= value <= 1.0


def test_report_serialization_round_trips():
    report = compute_report([0.9, 0.4, 0.8, 0.1], [1, 0, 1, 0])
    assert MetricsReport.from_dict(report.to_dict()) == report
    cells = report.to_csv_row(3)
    assert cells[0] == "3"
    assert float(cells[1]) == report.auc
    assert len(cells) == 6
