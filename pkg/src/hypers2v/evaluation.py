"""Downstream evaluation tasks: hyperedge-size regression, hyperedge
prediction, and k-means clustering of the embeddings.

Candidate hyperedges are embedded by mean-pooling their member-node vectors.
Models are deliberately small and self-contained: closed-form ridge
regression, full-batch gradient-descent logistic regression, and Lloyd's
k-means with k-means++ seeding. Splits are stratified by hyperedge size and
seed-deterministic; every report records its seed and hyperparameters.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from sklearn.base import BaseEstimator

from .hypergraph import Hypergraph

logger = logging.getLogger(__name__)


# -- metrics ---------------------------------------------------------------


def rmse(pred: Sequence[float], truth: Sequence[float]) -> float:
    """Root of the mean squared error."""
    p = np.asarray(pred, dtype=float)
    t = np.asarray(truth, dtype=float)
    if p.size == 0 or p.shape != t.shape:
        raise ValueError("rmse needs non-empty arrays of matching length")
    return float(np.sqrt(np.mean((p - t) ** 2)))


def _average_ranks(x: np.ndarray) -> np.ndarray:
    """1-based ranks with ties averaged."""
    order = np.argsort(x, kind="mergesort")
    ranks = np.empty(x.size, dtype=float)
    sx = x[order]
    i = 0
    while i < x.size:
        j = i
        while j + 1 < x.size and sx[j + 1] == sx[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def auc_score(scores: Sequence[float], labels: Sequence[int]) -> float:
    """Rank-based ROC-AUC with average-rank tie handling."""
    s = np.asarray(scores, dtype=float)
    y = np.asarray(labels)
    if s.size == 0 or s.shape != y.shape:
        raise ValueError("auc needs non-empty arrays of matching length")
    n_pos = int(np.sum(y == 1))
    n_neg = int(np.sum(y == 0))
    if n_pos == 0 or n_neg == 0:
        raise ValueError("auc undefined for single-class labels")
    ranks = _average_ranks(s)
    pos_rank_sum = float(ranks[y == 1].sum())
    return (pos_rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


# -- small models ------------------------------------------------------------


class RidgeRegression(BaseEstimator):
    """Closed-form ridge with an unpenalized intercept (via centering)."""

    def __init__(self, alpha: float = 1.0):
        self.alpha = alpha

    def fit(self, X, y) -> "RidgeRegression":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        x_mean = X.mean(axis=0)
        y_mean = y.mean()
        Xc = X - x_mean
        a = Xc.T @ Xc + self.alpha * np.eye(X.shape[1])
        self.coef_ = np.linalg.solve(a, Xc.T @ (y - y_mean))
        self.intercept_ = float(y_mean - x_mean @ self.coef_)
        return self

    def predict(self, X) -> np.ndarray:
        return np.asarray(X, dtype=float) @ self.coef_ + self.intercept_


class LogisticRegressionGD(BaseEstimator):
    """L2-regularized logistic regression fit by full-batch gradient descent."""

    def __init__(self, l2: float = 1e-4, lr: float = 0.1, epochs: int = 500, seed: int = 0):
        self.l2 = l2
        self.lr = lr
        self.epochs = epochs
        self.seed = seed

    def fit(self, X, y) -> "LogisticRegressionGD":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        if set(np.unique(y)) - {0.0, 1.0}:
            raise ValueError("labels must be 0/1")
        rng = np.random.default_rng(self.seed)
        w = rng.normal(0.0, 0.01, size=X.shape[1])
        b = 0.0
        n = X.shape[0]
        for _ in range(self.epochs):
            z = X @ w + b
            p = 1.0 / (1.0 + np.exp(-z))
            err = p - y
            gw = X.T @ err / n + self.l2 * w
            gb = float(err.mean())
            w -= self.lr * gw
            b -= self.lr * gb
        self.coef_ = w
        self.intercept_ = b
        return self

    def decision_function(self, X) -> np.ndarray:
        return np.asarray(X, dtype=float) @ self.coef_ + self.intercept_

    def predict_proba(self, X) -> np.ndarray:
        p = 1.0 / (1.0 + np.exp(-self.decision_function(X)))
        return np.column_stack([1.0 - p, p])

    def predict(self, X) -> np.ndarray:
        return (self.decision_function(X) >= 0.0).astype(int)


class KMeans(BaseEstimator):
    """Lloyd's algorithm with k-means++ initialization.

    Runs ``n_init`` seeded initializations and keeps the lowest-inertia fit;
    a run stops when the total centroid shift drops below ``tol`` (1e-8) or
    after ``max_iter`` (300) iterations.
    """

    def __init__(self, n_clusters: int = 6, n_init: int = 10, max_iter: int = 300,
                 tol: float = 1e-8, seed: int = 0):
        self.n_clusters = n_clusters
        self.n_init = n_init
        self.max_iter = max_iter
        self.tol = tol
        self.seed = seed

    def fit(self, X) -> "KMeans":
        X = np.asarray(X, dtype=float)
        if self.n_clusters > X.shape[0]:
            raise ValueError(
                f"n_clusters={self.n_clusters} exceeds number of points {X.shape[0]}"
            )
        best = None
        for run in range(self.n_init):
            rng = np.random.default_rng((self.seed, run))
            centers = self._kmeanspp(X, rng)
            labels, centers, inertia, history = self._lloyd(X, centers)
            if best is None or inertia < best[2]:
                best = (labels, centers, inertia, history)
        self.labels_, self.cluster_centers_, self.inertia_, self.inertia_history_ = best
        return self

    def predict(self, X) -> np.ndarray:
        d = self._distances(np.asarray(X, dtype=float), self.cluster_centers_)
        return np.argmin(d, axis=1)

    def fit_predict(self, X) -> np.ndarray:
        return self.fit(X).labels_

    @staticmethod
    def _distances(X, centers) -> np.ndarray:
        return ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)

    def _kmeanspp(self, X, rng) -> np.ndarray:
        n = X.shape[0]
        centers = np.empty((self.n_clusters, X.shape[1]))
        centers[0] = X[rng.integers(n)]
        d2 = ((X - centers[0]) ** 2).sum(axis=1)
        for c in range(1, self.n_clusters):
            total = d2.sum()
            if total <= 0:
                centers[c] = X[rng.integers(n)]
            else:
                centers[c] = X[np.searchsorted(np.cumsum(d2 / total), rng.random())]
            d2 = np.minimum(d2, ((X - centers[c]) ** 2).sum(axis=1))
        return centers

    def _lloyd(self, X, centers):
        history = []
        labels = np.zeros(X.shape[0], dtype=int)
        for _ in range(self.max_iter):
            d = self._distances(X, centers)
            labels = np.argmin(d, axis=1)
            history.append(float(d[np.arange(X.shape[0]), labels].sum()))
            new_centers = centers.copy()
            for c in range(self.n_clusters):
                mask = labels == c
                if mask.any():
                    new_centers[c] = X[mask].mean(axis=0)
            shift = float(np.sqrt(((new_centers - centers) ** 2).sum()))
            centers = new_centers
            if shift < self.tol:
                break
        d = self._distances(X, centers)
        labels = np.argmin(d, axis=1)
        inertia = float(d[np.arange(X.shape[0]), labels].sum())
        history.append(inertia)
        return labels, centers, inertia, history


# -- task plumbing -----------------------------------------------------------


@dataclass
class EvalReport:
    """Flat record of one evaluation run."""

    task: str
    seed: int
    metric_name: str
    metric_value: float
    params: dict = field(default_factory=dict)

    def to_text(self) -> str:
        lines = [f"task={self.task}", f"seed={self.seed}",
                 f"metric={self.metric_name}", f"value={self.metric_value:.6f}"]
        lines += [f"{k}={v}" for k, v in sorted(self.params.items())]
        return "\n".join(lines) + "\n"

    def csv_row(self) -> dict:
        row = {"task": self.task, "seed": self.seed,
               "metric": self.metric_name, "value": self.metric_value}
        row.update(self.params)
        return row


def write_reports_csv(path, reports: Sequence[EvalReport]) -> None:
    keys: list[str] = []
    for r in reports:
        for k in r.csv_row():
            if k not in keys:
                keys.append(k)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=keys)
        writer.writeheader()
        for r in reports:
            writer.writerow(r.csv_row())


def mean_pool(vectors: np.ndarray, node_sets: Iterable[Iterable[int]]) -> np.ndarray:
    """Candidate-hyperedge embeddings: mean of the member nodes' vectors."""
    return np.array([vectors[list(s)].mean(axis=0) for s in node_sets])


def stratified_split(
    groups: Sequence, train_frac: float, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Seed-deterministic split keeping each group's train share near train_frac.

    Groups too small to contribute a test item go entirely to train; if that
    leaves the test side empty, one seeded-random item is moved over.
    """
    if not 0.0 < train_frac < 1.0:
        raise ValueError("train_frac must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    by_group: dict = {}
    for i, gkey in enumerate(groups):
        by_group.setdefault(gkey, []).append(i)
    train: list[int] = []
    test: list[int] = []
    for gkey in sorted(by_group, key=str):
        idx = np.array(by_group[gkey])
        rng.shuffle(idx)
        n_test = int(round(len(idx) * (1.0 - train_frac)))
        test.extend(idx[:n_test].tolist())
        train.extend(idx[n_test:].tolist())
    if not test:
        k = int(rng.integers(len(train)))
        test.append(train.pop(k))
    return np.array(sorted(train)), np.array(sorted(test))


def _check_coverage(vectors: np.ndarray, g: Hypergraph) -> None:
    if vectors.shape[0] < g.n_nodes:
        raise ValueError(
            f"embedding has {vectors.shape[0]} rows but hypergraph has {g.n_nodes} nodes"
        )


def size_regression(
    vectors: np.ndarray,
    g: Hypergraph,
    train_frac: float = 0.8,
    ridge_lambda: float = 1.0,
    seed: int = 0,
) -> EvalReport:
    """Hyperedge-size prediction: ridge on mean-pooled embeddings, RMSE on the
    held-out fraction; the split is stratified by size."""
    _check_coverage(vectors, g)
    if g.n_edges < 5:
        raise ValueError("need at least 5 hyperedges to define a split")
    X = mean_pool(vectors, g.hyperedges)
    y = g.edge_sizes().astype(float)
    train, test = stratified_split(y.astype(int), train_frac, seed)
    model = RidgeRegression(alpha=ridge_lambda).fit(X[train], y[train])
    value = rmse(model.predict(X[test]), y[test])
    return EvalReport(
        task="size-regression", seed=seed, metric_name="rmse", metric_value=value,
        params={"train_frac": train_frac, "ridge_lambda": ridge_lambda,
                "n_train": len(train), "n_test": len(test)},
    )


def sample_negative_hyperedges(
    g: Hypergraph, seed: int = 0, max_tries_per_edge: int = 200
) -> list[frozenset[int]]:
    """Non-existent hyperedges matching the per-size counts of existing ones.

    For each occurring size s with m existing edges, draws m uniform node
    sets of size s that are neither existing edges nor earlier samples. A
    size whose pool is exhausted (bounded retries, or fewer possible sets
    than needed) is skipped with a warning.
    """
    rng = np.random.default_rng(seed)
    existing = {frozenset(e) for e in g.hyperedges}
    sizes = sorted({len(e) for e in g.hyperedges})
    n = g.n_nodes
    out: list[frozenset[int]] = []
    for s in sizes:
        m = sum(1 for e in g.hyperedges if len(e) == s)
        possible = math.comb(n, s)
        if possible <= m:
            logger.warning("size %d skipped: only %d possible sets for %d positives",
                           s, possible, m)
            continue
        got: list[frozenset[int]] = []
        tries = 0
        budget = max_tries_per_edge * m
        while len(got) < m and tries < budget:
            cand = frozenset(rng.choice(n, size=s, replace=False).tolist())
            tries += 1
            if cand in existing:
                continue
            existing.add(cand)
            got.append(cand)
        if len(got) < m:
            logger.warning("size %d: sampled %d of %d negatives before retry budget",
                           s, len(got), m)
        out.extend(got)
    return out


def hyperedge_prediction(
    vectors: np.ndarray,
    g: Hypergraph,
    negatives: Sequence[frozenset[int]],
    train_frac: float = 0.8,
    seed: int = 0,
    l2: float = 1e-4,
    lr: float = 0.1,
    epochs: int = 500,
) -> EvalReport:
    """Existing-vs-sampled hyperedge classification: logistic regression on
    mean-pooled embeddings, ROC-AUC on the held-out fraction."""
    _check_coverage(vectors, g)
    pos_sets = [frozenset(e) for e in g.hyperedges]
    neg_sets = list(negatives)
    overlap = set(pos_sets) & set(neg_sets)
    if overlap:
        raise ValueError(f"{len(overlap)} negatives collide with existing hyperedges")
    all_sets = pos_sets + neg_sets
    y = np.array([1] * len(pos_sets) + [0] * len(neg_sets))
    X = mean_pool(vectors, all_sets)
    strata = [(len(s), lab) for s, lab in zip(all_sets, y)]
    train, test = stratified_split(strata, train_frac, seed)
    if len(set(y[train])) < 2 or len(set(y[test])) < 2:
        raise ValueError("split produced a single-class side; cannot evaluate AUC")
    model = LogisticRegressionGD(l2=l2, lr=lr, epochs=epochs, seed=seed)
    model.fit(X[train], y[train])
    value = auc_score(model.decision_function(X[test]), y[test])
    return EvalReport(
        task="hyperedge-prediction", seed=seed, metric_name="auc", metric_value=value,
        params={"train_frac": train_frac, "l2": l2, "lr": lr, "epochs": epochs,
                "n_train": len(train), "n_test": len(test),
                "n_pos": len(pos_sets), "n_neg": len(neg_sets)},
    )


def kmeans_cluster(vectors: np.ndarray, k: int = 6, seed: int = 0) -> np.ndarray:
    """Cluster the embeddings into k groups; returns per-node assignments."""
    model = KMeans(n_clusters=k, seed=seed)
    return model.fit_predict(vectors)
