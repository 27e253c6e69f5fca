"""Input validation helpers used by estimators, metrics, and the pipeline."""

from __future__ import annotations

import numpy as np

from .exceptions import DegenerateDataError


def check_binary_labels(y, require_both_classes: bool = False) -> np.ndarray:
    """Validate and return labels as an int array of 0s and 1s.

    Raises DegenerateDataError when ``require_both_classes`` is set and only
    one class is present.
    """
    y = np.asarray(y)
    if y.ndim != 1:
        raise ValueError(f"labels must be 1-dimensional, got shape {y.shape}")
    values = np.unique(y)
    if not np.isin(values, (0, 1)).all():
        raise ValueError(f"labels must be 0 or 1, got values {values}")
    if require_both_classes and values.size < 2:
        raise DegenerateDataError(
            "data contains a single class; both classes are required"
        )
    return y.astype(np.intp)


def check_feature_matrix(X, num_features: int | None = None) -> np.ndarray:
    """Validate and return a finite 2-D float feature matrix."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"feature matrix must be 2-dimensional, got shape {X.shape}")
    if not np.isfinite(X).all():
        raise ValueError("feature matrix must be finite")
    if num_features is not None and X.shape[1] != num_features:
        raise ValueError(f"expected {num_features} features, got {X.shape[1]}")
    return X


def check_training_data(X, y, require_both_classes: bool = True):
    """Validate an (X, y) training pair and return float X with int labels."""
    X = check_feature_matrix(X)
    y = check_binary_labels(y, require_both_classes=require_both_classes)
    if X.shape[0] != y.shape[0]:
        raise ValueError(
            f"features and labels disagree in length: {X.shape[0]} vs {y.shape[0]}"
        )
    return X, y


def check_scores_labels(scores, labels, require_both_classes: bool = True):
    """Validate a (scores, labels) pair for metric computations."""
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 1:
        raise ValueError(f"scores must be 1-dimensional, got shape {scores.shape}")
    labels = check_binary_labels(labels, require_both_classes=require_both_classes)
    if scores.shape[0] != labels.shape[0]:
        raise ValueError(
            f"scores and labels disagree in length: {scores.shape[0]} vs {labels.shape[0]}"
        )
    if not np.isfinite(scores).all():
        raise ValueError("scores must be finite")
    return scores, labels
