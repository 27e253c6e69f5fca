"""Classical scorecard models built from scratch on numpy.

Four model families, each producing default probabilities:

* logistic regression trained by full-batch gradient descent,
* a decision tree grown greedily on information gain (entropy base 2),
* a random forest of such trees with bootstrap resampling and per-split
  feature subsampling,
* first-order gradient boosting on logistic loss, with regression trees fit
  to residuals on the log-odds scale.

These serve both as stacking feature generators and as benchmarks, so the
emphasis is on deterministic, reproducible fits rather than speed on large
data. All models serialize to plain dicts for JSON round-trips.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DegenerateDataError
from .validation import check_feature_matrix, check_training_data

GAIN_EPS = 1e-12


def sigmoid(z):
    """Numerically stable logistic function, elementwise on arrays."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    expz = np.exp(z[~pos])
    out[~pos] = expz / (1.0 + expz)
    return float(out) if out.ndim == 0 else out


def _logistic_loss(p, y):
    p = np.clip(p, 1e-12, 1.0 - 1e-12)
    return float(-np.mean(y * np.log(p) + (1 - y) * np.log1p(-p)))


@dataclass
class LogisticModel:
    """Linear log-odds scorer: p = sigmoid(beta . x + alpha)."""

    alpha: float
    beta: np.ndarray

    def __post_init__(self):
        self.beta = np.asarray(self.beta, dtype=np.float64).reshape(-1)
        self.alpha = float(self.alpha)

    def predict_proba(self, X) -> np.ndarray:
        X = check_feature_matrix(X, num_features=self.beta.size)
        return sigmoid(X @ self.beta + self.alpha)

    def to_dict(self) -> dict:
        return {"kind": "logistic", "alpha": self.alpha, "beta": self.beta.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "LogisticModel":
        return cls(alpha=data["alpha"], beta=np.asarray(data["beta"]))


def train_logistic(
    X,
    y,
    lr: float = 0.5,
    max_iters: int = 2000,
    tol: float = 1e-6,
) -> LogisticModel:
    """Fit logistic regression by full-batch gradient descent on mean BCE.

    Features are standardized internally as a preconditioner and the learned
    weights mapped back to the raw scale, so convergence does not depend on
    feature units. A step that would increase the loss is retried at half the
    rate, which keeps the loss non-increasing across accepted iterations.
    Stops once the (standardized) gradient infinity norm drops below ``tol``.
    """
    X, y = check_training_data(X, y)
    m, d = X.shape
    mu = X.mean(axis=0)
    sd = X.std(axis=0)
    sd[sd == 0.0] = 1.0
    Xs = (X - mu) / sd
    yf = y.astype(np.float64)

    alpha, beta = 0.0, np.zeros(d)
    loss = _logistic_loss(np.full(m, 0.5), yf)
    step = float(lr)
    for _ in range(max_iters):
        p = sigmoid(Xs @ beta + alpha)
        resid = p - yf
        grad_beta = Xs.T @ resid / m
        grad_alpha = float(resid.mean())
        if max(np.abs(grad_beta).max(initial=0.0), abs(grad_alpha)) < tol:
            break
        while True:
            new_beta = beta - step * grad_beta
            new_alpha = alpha - step * grad_alpha
            new_loss = _logistic_loss(sigmoid(Xs @ new_beta + new_alpha), yf)
            if new_loss <= loss:
                break
            step *= 0.5
            if step < 1e-12:
                new_alpha, new_beta, new_loss = alpha, beta, loss
                break
        if step < 1e-12:
            break
        alpha, beta, loss = new_alpha, new_beta, new_loss

    raw_beta = beta / sd
    raw_alpha = alpha - float((beta * mu / sd).sum())
    return LogisticModel(alpha=raw_alpha, beta=raw_beta)


def entropy(class_proportions) -> float:
    """Shannon entropy in bits of a discrete distribution, with 0 log 0 = 0."""
    p = np.asarray(class_proportions, dtype=np.float64).reshape(-1)
    if (p < 0).any():
        raise ValueError("proportions must be non-negative")
    if abs(p.sum() - 1.0) > 1e-9:
        raise ValueError(f"proportions must sum to 1, got {p.sum()}")
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum())


def _label_entropy(labels: np.ndarray) -> float:
    if labels.size == 0:
        return 0.0
    _, counts = np.unique(labels, return_counts=True)
    return entropy(counts / labels.size)


def information_gain(parent_labels, partition_of_labels) -> float:
    """Entropy drop from splitting ``parent_labels`` into the given subsets."""
    parent = np.asarray(parent_labels).reshape(-1)
    parts = [np.asarray(p).reshape(-1) for p in partition_of_labels]
    combined = np.concatenate(parts) if parts else np.empty(0, dtype=parent.dtype)
    if combined.size != parent.size or not np.array_equal(
        np.sort(combined), np.sort(parent)
    ):
        raise ValueError("partition does not cover the parent labels exactly")
    total = parent.size
    child_term = sum(p.size / total * _label_entropy(p) for p in parts)
    return _label_entropy(parent) - child_term


@dataclass
class TreeNode:
    """Binary tree node: a leaf holds a predicted value, a split routes on x[feature] <= threshold.

    Classification trees store the default fraction of training samples
    reaching the leaf; the regression trees used inside boosting store mean
    residuals, so ``value`` is not bounded to [0, 1] there.
    """

    value: float | None = None
    feature: int | None = None
    threshold: float | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.value is not None

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        out = np.empty(X.shape[0])
        self._fill(X, np.arange(X.shape[0]), out)
        return out

    def _fill(self, X, idx, out):
        if self.is_leaf:
            out[idx] = self.value
            return
        mask = X[idx, self.feature] <= self.threshold
        self.left._fill(X, idx[mask], out)
        self.right._fill(X, idx[~mask], out)

    def to_dict(self) -> dict:
        if self.is_leaf:
            return {"value": self.value}
        return {
            "feature": self.feature,
            "threshold": self.threshold,
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TreeNode":
        if "value" in data:
            return cls(value=data["value"])
        return cls(
            feature=data["feature"],
            threshold=data["threshold"],
            left=cls.from_dict(data["left"]),
            right=cls.from_dict(data["right"]),
        )


def _binary_entropy_vec(pos: np.ndarray, count: np.ndarray) -> np.ndarray:
    """Entropy in bits of binary sets given positive counts and sizes."""
    with np.errstate(divide="ignore", invalid="ignore"):
        q = pos / count
        terms = np.zeros_like(q)
        for r in (q, 1.0 - q):
            t = np.where(r > 0, r * np.log2(np.where(r > 0, r, 1.0)), 0.0)
            terms -= t
    return terms


def _best_gain_split(X, y, feature_indices, min_leaf):
    """Highest information-gain (feature, threshold) over midpoint candidates.

    Returns (gain, feature, threshold) or None when no split satisfies
    ``min_leaf`` on both sides. Ties resolve to the lowest feature index and
    then the lowest threshold because strictly better gains are required to
    displace the incumbent and candidates are scanned in ascending order.
    """
    m = y.size
    parent_entropy = _label_entropy(y)
    best = None
    for f in feature_indices:
        order = np.argsort(X[:, f], kind="stable")
        xs, ys = X[order, f], y[order]
        boundaries = np.nonzero(xs[1:] != xs[:-1])[0]
        if boundaries.size == 0:
            continue
        left_n = boundaries + 1
        right_n = m - left_n
        ok = (left_n >= min_leaf) & (right_n >= min_leaf)
        if not ok.any():
            continue
        left_n, right_n, boundaries = left_n[ok], right_n[ok], boundaries[ok]
        cum_pos = np.cumsum(ys)
        left_pos = cum_pos[boundaries]
        right_pos = cum_pos[-1] - left_pos
        children = (
            left_n * _binary_entropy_vec(left_pos, left_n)
            + right_n * _binary_entropy_vec(right_pos, right_n)
        ) / m
        gains = parent_entropy - children
        k = int(np.argmax(gains))
        if best is None or gains[k] > best[0]:
            threshold = 0.5 * (xs[boundaries[k]] + xs[boundaries[k] + 1])
            best = (float(gains[k]), int(f), float(threshold))
    return best


def _grow_classification(X, y, depth, max_depth, min_leaf, feature_sampler):
    node_value = float(y.mean())
    if depth >= max_depth or y.size < 2 * min_leaf or np.all(y == y[0]):
        return TreeNode(value=node_value)
    best = _best_gain_split(X, y, feature_sampler(), min_leaf)
    if best is None or best[0] <= GAIN_EPS:
        return TreeNode(value=node_value)
    _, f, threshold = best
    mask = X[:, f] <= threshold
    return TreeNode(
        feature=f,
        threshold=threshold,
        left=_grow_classification(X[mask], y[mask], depth + 1, max_depth, min_leaf, feature_sampler),
        right=_grow_classification(X[~mask], y[~mask], depth + 1, max_depth, min_leaf, feature_sampler),
    )


def build_tree(X, y, max_depth: int = 4, min_leaf: int = 5) -> TreeNode:
    """Grow a greedy information-gain tree.

    Split candidates are midpoints of consecutive sorted unique values per
    feature. Growth stops at ``max_depth``, when a child would fall below
    ``min_leaf`` samples, or when the best gain is zero; data too small to
    split legally becomes a single leaf rather than an error.
    """
    X, y = check_training_data(X, y, require_both_classes=False)
    all_features = np.arange(X.shape[1])
    return _grow_classification(X, y, 0, max_depth, min_leaf, lambda: all_features)


@dataclass
class ForestModel:
    """Bagged information-gain trees; prediction is the mean leaf probability."""

    trees: list = field(default_factory=list)

    def predict_proba(self, X) -> np.ndarray:
        X = check_feature_matrix(X)
        return np.mean([tree.predict(X) for tree in self.trees], axis=0)

    def to_dict(self) -> dict:
        return {"kind": "forest", "trees": [t.to_dict() for t in self.trees]}

    @classmethod
    def from_dict(cls, data: dict) -> "ForestModel":
        return cls(trees=[TreeNode.from_dict(t) for t in data["trees"]])


def train_forest(
    X,
    y,
    n_trees: int = 100,
    max_depth: int = 5,
    min_leaf: int = 5,
    feature_fraction: float | None = None,
    seed: int = 0,
    bootstrap: bool = True,
) -> ForestModel:
    """Fit a random forest: bootstrap resamples plus per-split feature subsampling.

    ``feature_fraction`` defaults to sqrt(d)/d. With ``bootstrap=False``,
    one tree, and ``feature_fraction=1.0`` the forest reduces exactly to
    ``build_tree``. Deterministic for a fixed seed.
    """
    X, y = check_training_data(X, y, require_both_classes=False)
    if n_trees < 1:
        raise ValueError(f"n_trees must be >= 1, got {n_trees}")
    m, d = X.shape
    if feature_fraction is None:
        feature_fraction = np.sqrt(d) / d
    if not 0.0 < feature_fraction <= 1.0:
        raise ValueError(f"feature_fraction must be in (0, 1], got {feature_fraction}")
    n_sub = max(1, int(round(feature_fraction * d)))
    rng = np.random.default_rng(seed)
    trees = []
    for _ in range(n_trees):
        idx = rng.integers(0, m, size=m) if bootstrap else np.arange(m)
        Xb, yb = X[idx], y[idx]
        if n_sub == d:
            sampler = lambda: np.arange(d)
        else:
            sampler = lambda: np.sort(rng.choice(d, size=n_sub, replace=False))
        trees.append(_grow_classification(Xb, yb, 0, max_depth, min_leaf, sampler))
    return ForestModel(trees=trees)


def _best_sse_split(X, r, min_leaf):
    """Largest squared-error reduction split for a regression target."""
    m = r.size
    best = None
    for f in range(X.shape[1]):
        order = np.argsort(X[:, f], kind="stable")
        xs, rs = X[order, f], r[order]
        boundaries = np.nonzero(xs[1:] != xs[:-1])[0]
        if boundaries.size == 0:
            continue
        left_n = boundaries + 1
        right_n = m - left_n
        ok = (left_n >= min_leaf) & (right_n >= min_leaf)
        if not ok.any():
            continue
        left_n, right_n, boundaries = left_n[ok], right_n[ok], boundaries[ok]
        cum = np.cumsum(rs)
        cum2 = np.cumsum(rs * rs)
        left_sum, left_sq = cum[boundaries], cum2[boundaries]
        right_sum, right_sq = cum[-1] - left_sum, cum2[-1] - left_sq
        sse = (
            np.maximum(left_sq - left_sum**2 / left_n, 0.0)
            + np.maximum(right_sq - right_sum**2 / right_n, 0.0)
        )
        parent_sse = max(cum2[-1] - cum[-1] ** 2 / m, 0.0)
        reductions = parent_sse - sse
        k = int(np.argmax(reductions))
        if best is None or reductions[k] > best[0]:
            threshold = 0.5 * (xs[boundaries[k]] + xs[boundaries[k] + 1])
            best = (float(reductions[k]), int(f), float(threshold))
    return best


def _grow_regression(X, r, depth, max_depth, min_leaf):
    node_value = float(r.mean())
    if depth >= max_depth or r.size < 2 * min_leaf or np.all(r == r[0]):
        return TreeNode(value=node_value)
    best = _best_sse_split(X, r, min_leaf)
    if best is None or best[0] <= GAIN_EPS:
        return TreeNode(value=node_value)
    _, f, threshold = best
    mask = X[:, f] <= threshold
    return TreeNode(
        feature=f,
        threshold=threshold,
        left=_grow_regression(X[mask], r[mask], depth + 1, max_depth, min_leaf),
        right=_grow_regression(X[~mask], r[~mask], depth + 1, max_depth, min_leaf),
    )


@dataclass
class BoostedModel:
    """Additive trees on the log-odds scale: p = sigmoid(F0 + lr * sum of trees)."""

    base_log_odds: float
    learning_rate: float
    trees: list = field(default_factory=list)

    def decision_function(self, X) -> np.ndarray:
        X = check_feature_matrix(X)
        margin = np.full(X.shape[0], self.base_log_odds)
        for tree in self.trees:
            margin += self.learning_rate * tree.predict(X)
        return margin

    def predict_proba(self, X) -> np.ndarray:
        return sigmoid(self.decision_function(X))

    def to_dict(self) -> dict:
        return {
            "kind": "boosted",
            "base_log_odds": self.base_log_odds,
            "learning_rate": self.learning_rate,
            "trees": [t.to_dict() for t in self.trees],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BoostedModel":
        return cls(
            base_log_odds=data["base_log_odds"],
            learning_rate=data["learning_rate"],
            trees=[TreeNode.from_dict(t) for t in data["trees"]],
        )


def train_boosted(
    X,
    y,
    n_rounds: int = 100,
    max_depth: int = 3,
    learning_rate: float = 0.1,
    seed: int = 0,
) -> BoostedModel:
    """First-order gradient boosting on logistic loss.

    Each round fits a regression tree to the residual y - p and adds its
    scaled output to the log-odds margin, starting from the base-rate
    log-odds. ``n_rounds=0`` yields the prior-only model. The fit itself is
    deterministic; ``seed`` is accepted for interface symmetry with the
    forest trainer.
    """
    del seed
    X, y = check_training_data(X, y)
    if n_rounds < 0:
        raise ValueError(f"n_rounds must be >= 0, got {n_rounds}")
    yf = y.astype(np.float64)
    base_rate = float(yf.mean())
    model = BoostedModel(
        base_log_odds=float(np.log(base_rate / (1.0 - base_rate))),
        learning_rate=learning_rate,
    )
    margin = np.full(X.shape[0], model.base_log_odds)
    for _ in range(n_rounds):
        residual = yf - sigmoid(margin)
        tree = _grow_regression(X, residual, 0, max_depth, 1)
        model.trees.append(tree)
        margin += learning_rate * tree.predict(X)
    return model


MODEL_DECODERS = {
    "logistic": LogisticModel.from_dict,
    "forest": ForestModel.from_dict,
    "boosted": BoostedModel.from_dict,
}


def model_from_dict(data: dict):
    """Rebuild any serialized scorecard model (trees arrive as raw node dicts)."""
    kind = data.get("kind")
    if kind in MODEL_DECODERS:
        return MODEL_DECODERS[kind](data)
    return TreeNode.from_dict(data)
