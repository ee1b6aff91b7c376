"""Scikit-learn style estimator wiring the full embedding pipeline."""

from __future__ import annotations

import logging
import time

import numpy as np
from sklearn.base import BaseEstimator

from .distances import MODES, cumulative_distances
from .hypergraph import Hypergraph
from .layers import build_multilayer
from .skipgram import EmbeddingMatrix, train_skipgram
from .validation import as_hypergraph, check_positive_int, check_probability
from .walks import generate_walks

logger = logging.getLogger(__name__)


class HyperS2V(BaseEstimator):
    """Structure-based node embeddings for hyper networks.

    ``fit`` runs hyper-degree extraction, the per-hop cumulative distance
    table, the multilayer similarity graph, biased random walks, and
    skip-gram training; ``transform`` returns the learned vectors. Embeddings
    are transductive: ``transform`` only answers for nodes of the fitted
    hypergraph.

    Parameters
    ----------
    dim : embedding dimensionality (2 for visualization, 64 for evaluation)
    k_max : deepest neighborhood hop / highest similarity layer
    walks_per_node, walk_length, window : corpus and skip-gram geometry
    stay_prob : probability of an in-layer move per walk step
    exponent : exponent of the magnitude-position distance
    mode : "collapsed" (frequency-aware distances) or "uncollapsed" ablation
    epochs, negative, lr, min_lr, seed : skip-gram training controls
    workers : >1 enables threaded distance/walk/training paths; training is
        bit-deterministic only with workers=1
    """

    def __init__(self, dim: int = 64, k_max: int = 5, walks_per_node: int = 100,
                 walk_length: int = 80, window: int = 5, stay_prob: float = 0.3,
                 exponent: int = 2, mode: str = "collapsed", epochs: int = 5,
                 negative: int = 5, lr: float = 0.025, min_lr: float = 1e-4,
                 seed: int = 0, workers: int = 1):
        self.dim = dim
        self.k_max = k_max
        self.walks_per_node = walks_per_node
        self.walk_length = walk_length
        self.window = window
        self.stay_prob = stay_prob
        self.exponent = exponent
        self.mode = mode
        self.epochs = epochs
        self.negative = negative
        self.lr = lr
        self.min_lr = min_lr
        self.seed = seed
        self.workers = workers

    def _validate_params(self) -> None:
        check_positive_int("dim", self.dim)
        check_positive_int("k_max", self.k_max, minimum=0)
        check_positive_int("walks_per_node", self.walks_per_node)
        check_positive_int("walk_length", self.walk_length)
        check_positive_int("window", self.window)
        check_positive_int("epochs", self.epochs)
        check_positive_int("negative", self.negative)
        check_positive_int("workers", self.workers)
        check_probability("stay_prob", self.stay_prob)
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")

    def fit(self, X, y=None) -> "HyperS2V":
        """Learn embeddings for every node of the hypergraph ``X``.

        ``X`` may be a Hypergraph, a hyperedge-list path, or an iterable of
        label collections.
        """
        self._validate_params()
        g = as_hypergraph(X)
        t0 = time.perf_counter()
        self.graph_ = g
        self.labels_ = g.labels
        self.distances_ = cumulative_distances(
            g, k_max=self.k_max, mode=self.mode, exponent=self.exponent,
            threads=self.workers,
        )
        t1 = time.perf_counter()
        self.multilayer_ = build_multilayer(self.distances_)
        self.corpus_ = generate_walks(
            self.multilayer_, walks_per_node=self.walks_per_node,
            walk_length=self.walk_length, stay_prob=self.stay_prob,
            seed=self.seed, threads=self.workers,
        )
        t2 = time.perf_counter()
        vectors, losses = train_skipgram(
            self.corpus_.walks, g.n_nodes, dim=self.dim, window=self.window,
            epochs=self.epochs, negative=self.negative, lr=self.lr,
            min_lr=self.min_lr, seed=self.seed, workers=self.workers,
        )
        t3 = time.perf_counter()
        logger.info(
            "fit timings: distances %.2fs, walks %.2fs, skipgram %.2fs",
            t1 - t0, t2 - t1, t3 - t2,
        )
        self.embedding_ = vectors
        self.loss_history_ = losses
        return self

    def transform(self, X=None) -> np.ndarray:
        """Vectors for the fitted nodes.

        ``X=None`` or the fitted hypergraph returns all rows in node-id
        order; an iterable of labels returns the corresponding rows.
        """
        if not hasattr(self, "embedding_"):
            raise RuntimeError("HyperS2V instance is not fitted yet")
        if X is None:
            return self.embedding_.copy()
        if isinstance(X, Hypergraph):
            if X.labels != self.labels_:
                raise ValueError("transform expects the fitted hypergraph (transductive)")
            return self.embedding_.copy()
        labels = [str(lab) for lab in X]
        missing = [lab for lab in labels if lab not in self.graph_._label_to_id]
        if missing:
            raise ValueError(f"labels not in fitted hypergraph: {missing}")
        rows = [self.graph_.id_of(lab) for lab in labels]
        return self.embedding_[rows]

    def fit_transform(self, X, y=None, **fit_params) -> np.ndarray:
        return self.fit(X).transform()

    def embedding_matrix(self) -> EmbeddingMatrix:
        """Labelled view of the learned vectors (word2vec-format IO)."""
        return EmbeddingMatrix(self.embedding_, self.labels_)
