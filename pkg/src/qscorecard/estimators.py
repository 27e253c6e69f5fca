"""Scikit-learn style estimator wrappers around the functional core.

Each wrapper follows the standard conventions: hyperparameters are stored
verbatim in ``__init__`` (so ``get_params`` and ``clone`` work), fitting
creates trailing-underscore attributes, and classifiers expose
``predict_proba`` with columns ordered as ``classes_``. The positive class
is always the default indicator 1, and ``predict`` cuts at probability 0.5.
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .ansatz import AnsatzConfig, build_ansatz, qnn_forward_batch
from .classical import build_tree, train_boosted, train_forest, train_logistic
from .pipeline import (
    StackingConfig,
    TrainConfig,
    fit_base_models,
    stack_probabilities,
    train_qnn,
)
from .validation import check_binary_labels


class _ProbaClassifierMixin(ClassifierMixin):
    """Shared predict/predict_proba plumbing on top of a score_samples hook."""

    def predict_proba(self, X) -> np.ndarray:
        check_is_fitted(self)
        X = check_array(X)
        p1 = self._default_probability(X)
        return np.column_stack([1.0 - p1, p1])

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X)[:, 1] >= 0.5).astype(np.intp)

    def _fit_labels(self, X, y):
        X, y = check_X_y(X, y)
        y = check_binary_labels(np.asarray(y), require_both_classes=True)
        self.classes_ = np.array([0, 1])
        self.n_features_in_ = X.shape[1]
        return X, y


class LogisticScorecard(_ProbaClassifierMixin, BaseEstimator):
    """Logistic regression scorecard trained by full-batch gradient descent."""

    def __init__(self, lr: float = 0.5, max_iters: int = 2000, tol: float = 1e-6):
        self.lr = lr
        self.max_iters = max_iters
        self.tol = tol

    def fit(self, X, y):
        X, y = self._fit_labels(X, y)
        self.model_ = train_logistic(
            X, y, lr=self.lr, max_iters=self.max_iters, tol=self.tol
        )
        self.intercept_ = self.model_.alpha
        self.coef_ = self.model_.beta.copy()
        return self

    def _default_probability(self, X):
        return self.model_.predict_proba(X)


class DecisionTreeScorecard(_ProbaClassifierMixin, BaseEstimator):
    """Greedy information-gain decision tree."""

    def __init__(self, max_depth: int = 4, min_leaf: int = 5):
        self.max_depth = max_depth
        self.min_leaf = min_leaf

    def fit(self, X, y):
        X, y = self._fit_labels(X, y)
        self.tree_ = build_tree(X, y, max_depth=self.max_depth, min_leaf=self.min_leaf)
        return self

    def _default_probability(self, X):
        return self.tree_.predict(X)


class RandomForestScorecard(_ProbaClassifierMixin, BaseEstimator):
    """Bagged information-gain trees with per-split feature subsampling."""

    def __init__(
        self,
        n_trees: int = 100,
        max_depth: int = 5,
        min_leaf: int = 5,
        feature_fraction: float | None = None,
        seed: int = 0,
        bootstrap: bool = True,
    ):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.feature_fraction = feature_fraction
        self.seed = seed
        self.bootstrap = bootstrap

    def fit(self, X, y):
        X, y = self._fit_labels(X, y)
        self.forest_ = train_forest(
            X, y, n_trees=self.n_trees, max_depth=self.max_depth,
            min_leaf=self.min_leaf, feature_fraction=self.feature_fraction,
            seed=self.seed, bootstrap=self.bootstrap,
        )
        return self

    def _default_probability(self, X):
        return self.forest_.predict_proba(X)


class GradientBoostingScorecard(_ProbaClassifierMixin, BaseEstimator):
    """First-order gradient boosting on logistic loss."""

    def __init__(
        self, n_rounds: int = 100, max_depth: int = 3, learning_rate: float = 0.1
    ):
        self.n_rounds = n_rounds
        self.max_depth = max_depth
        self.learning_rate = learning_rate

    def fit(self, X, y):
        X, y = self._fit_labels(X, y)
        self.model_ = train_boosted(
            X, y, n_rounds=self.n_rounds, max_depth=self.max_depth,
            learning_rate=self.learning_rate,
        )
        return self

    def _default_probability(self, X):
        return self.model_.predict_proba(X)


class StackingTransformer(BaseEstimator, TransformerMixin):
    """Maps raw features to the three base-model default probabilities."""

    def __init__(self, config: StackingConfig | None = None):
        self.config = config

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        y = check_binary_labels(np.asarray(y), require_both_classes=True)
        self.n_features_in_ = X.shape[1]
        self.models_ = fit_base_models(X, y, self.config)
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self)
        X = check_array(X)
        return stack_probabilities(self.models_, X)


class QNNClassifier(_ProbaClassifierMixin, BaseEstimator):
    """Quantum neural network classifier on angle-encoded features.

    Features are expected in [0, 1] (one per qubit); `num_qubits=None` sizes
    the circuit from the data. Training follows the mini-batch BCE protocol
    with parameter-shift gradients and AdamW.
    """

    def __init__(
        self,
        variant: str = "simulation",
        num_qubits: int | None = None,
        angle_scale: float = math.pi,
        epochs: int = 50,
        learning_rate: float = 0.05,
        betas: tuple[float, float] = (0.9, 0.999),
        eps: float = 1e-8,
        weight_decay: float = 0.01,
        init_range: float = math.pi,
        batch_size: int = 64,
        seed: int = 0,
    ):
        self.variant = variant
        self.num_qubits = num_qubits
        self.angle_scale = angle_scale
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.betas = betas
        self.eps = eps
        self.weight_decay = weight_decay
        self.init_range = init_range
        self.batch_size = batch_size
        self.seed = seed

    def fit(self, X, y):
        X, y = self._fit_labels(X, y)
        n_qubits = self.num_qubits if self.num_qubits is not None else X.shape[1]
        ansatz_config = AnsatzConfig(
            variant=self.variant, num_qubits=n_qubits, angle_scale=self.angle_scale
        )
        self.circuit_ = build_ansatz(ansatz_config)
        config = TrainConfig(
            epochs=self.epochs, learning_rate=self.learning_rate, betas=self.betas,
            eps=self.eps, weight_decay=self.weight_decay,
            init_range=self.init_range, batch_size=self.batch_size, seed=self.seed,
        )
        result = train_qnn(X, y, self.circuit_, config, self.angle_scale)
        self.theta_ = result.best_params
        self.final_theta_ = result.final_params
        self.best_epoch_ = result.best_epoch
        self.trace_ = result.trace
        return self

    def _default_probability(self, X):
        return qnn_forward_batch(self.circuit_, X, self.theta_, self.angle_scale)
