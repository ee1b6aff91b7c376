"""Skip-gram with negative sampling, trained on walk corpora.

Sequential stochastic gradient descent over (center, context) pairs inside a
fixed symmetric window, with ``negative`` noise words per pair drawn from the
unigram^0.75 distribution via a precomputed table. Single-worker training is
bit-deterministic for a given seed; multi-worker training shares the weight
matrices between threads without locks (benign races, faster, not
deterministic).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np
from numba import njit
from sklearn.base import BaseEstimator

NOISE_TABLE_SIZE = 1 << 20
NOISE_POWER = 0.75


class EmbeddingMatrix:
    """Dense node embeddings plus the label map; word2vec text IO."""

    def __init__(self, vectors: np.ndarray, labels: Sequence[str]):
        if vectors.ndim != 2 or vectors.shape[0] != len(labels):
            raise ValueError("vectors must be (n_labels, dim)")
        if not np.all(np.isfinite(vectors)):
            raise ValueError("embedding contains non-finite entries")
        self.vectors = vectors
        self.labels = tuple(labels)
        self._index = {lab: i for i, lab in enumerate(self.labels)}

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return self.vectors.shape[0]

    def vector(self, label: str) -> np.ndarray:
        return self.vectors[self._index[label]]

    def has_label(self, label: str) -> bool:
        return label in self._index

    def save(self, path) -> None:
        """word2vec text layout: header "|V| dim", then "label v1 ... v_dim"."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"{len(self)} {self.dim}\n")
            for lab, row in zip(self.labels, self.vectors):
                fh.write(lab + " " + " ".join(f"{x:.8g}" for x in row) + "\n")

    @classmethod
    def load(cls, path) -> "EmbeddingMatrix":
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().split()
            if len(header) != 2:
                raise ValueError("bad embedding header (want '|V| dim')")
            n, dim = int(header[0]), int(header[1])
            labels: list[str] = []
            vecs = np.empty((n, dim))
            for i in range(n):
                parts = fh.readline().split()
                if len(parts) != dim + 1:
                    raise ValueError(f"bad embedding row {i + 1}")
                labels.append(parts[0])
                vecs[i] = [float(x) for x in parts[1:]]
        return cls(vecs, labels)


def sgns_pair_loss(v_c: np.ndarray, u_o: np.ndarray, u_neg: np.ndarray) -> float:
    """Negative log-likelihood of one (center, context, negatives) triple."""
    pos = -np.log(_sigmoid(float(v_c @ u_o)))
    neg = -np.sum(np.log(_sigmoid(-(u_neg @ v_c))))
    return float(pos + neg)


def sgns_pair_grads(
    v_c: np.ndarray, u_o: np.ndarray, u_neg: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Analytic gradients of :func:`sgns_pair_loss` w.r.t. (v_c, u_o, u_neg)."""
    s_pos = _sigmoid(float(v_c @ u_o))
    s_neg = _sigmoid(u_neg @ v_c)
    g_c = (s_pos - 1.0) * u_o + s_neg @ u_neg
    g_o = (s_pos - 1.0) * v_c
    g_neg = s_neg[:, None] * v_c[None, :]
    return g_c, g_o, g_neg


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def build_vocab(walks: Sequence[np.ndarray], n_nodes: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vocabulary over node ids, ordered by (count desc, first occurrence asc).

    The ordering depends only on the token sequence, so relabeling the corpus
    permutes the embedding rows without changing the training trajectory.
    Returns (node_to_vocab, vocab_to_node, counts_in_vocab_order).
    """
    flat = np.concatenate(walks) if len(walks) > 1 else walks[0]
    counts = np.bincount(flat, minlength=n_nodes)
    first = np.full(n_nodes, flat.size, dtype=np.int64)
    np.minimum.at(first, flat, np.arange(flat.size))
    present = counts > 0
    order = np.lexsort((first, -counts))
    order = order[present[order]]
    node_to_vocab = np.full(n_nodes, -1, dtype=np.int64)
    node_to_vocab[order] = np.arange(order.size)
    return node_to_vocab, order, counts[order]


def unigram_noise_table(counts: np.ndarray, size: int = NOISE_TABLE_SIZE) -> np.ndarray:
    """word2vec-style sampling table for the unigram^0.75 noise distribution."""
    p = counts.astype(np.float64) ** NOISE_POWER
    p /= p.sum()
    bounds = np.rint(np.cumsum(p) * size).astype(np.int64)
    reps = np.diff(np.concatenate([[0], bounds]))
    reps[reps < 0] = 0
    table = np.repeat(np.arange(counts.size, dtype=np.int32), reps)
    if table.size < size:
        table = np.concatenate([table, np.full(size - table.size, counts.size - 1, np.int32)])
    return table[:size]


@njit(cache=True)
def _seed_rng(seed):
    np.random.seed(seed)


@njit(cache=True, nogil=True)
def _train_span(flat, offs, w_first, w_last, window, w_in, w_out, negative,
                table, lr0, lr_min, total_pairs, done_start):
    dim = w_in.shape[1]
    tsize = table.shape[0]
    buf = np.empty(dim)
    done = done_start
    for w in range(w_first, w_last):
        s = offs[w]
        length = offs[w + 1] - s
        for i in range(length):
            c = flat[s + i]
            lo = i - window
            if lo < 0:
                lo = 0
            hi = i + window
            if hi > length - 1:
                hi = length - 1
            for j in range(lo, hi + 1):
                if j == i:
                    continue
                o = flat[s + j]
                lr = lr0 * (1.0 - done / total_pairs)
                if lr < lr_min:
                    lr = lr_min
                for d in range(dim):
                    buf[d] = 0.0
                # positive sample: label 1
                dot = 0.0
                for d in range(dim):
                    dot += w_in[c, d] * w_out[o, d]
                g = lr * (1.0 / (1.0 + math.exp(-dot)) - 1.0)
                for d in range(dim):
                    buf[d] += g * w_out[o, d]
                    w_out[o, d] -= g * w_in[c, d]
                # noise samples: label 0; collisions with the context are skipped
                for t in range(negative):
                    nv = table[int(np.random.random() * tsize)]
                    if nv == o:
                        continue
                    dot = 0.0
                    for d in range(dim):
                        dot += w_in[c, d] * w_out[nv, d]
                    g = lr * (1.0 / (1.0 + math.exp(-dot)))
                    for d in range(dim):
                        buf[d] += g * w_out[nv, d]
                        w_out[nv, d] -= g * w_in[c, d]
                for d in range(dim):
                    w_in[c, d] -= buf[d]
                done += 1
    return done


def _count_pairs(offs: np.ndarray, window: int) -> int:
    total = 0
    lengths = np.diff(offs)
    for length in lengths:
        length = int(length)
        for i in range(length):
            total += min(i + window, length - 1) - max(i - window, 0)
    return total


class SkipGram(BaseEstimator):
    """SGNS trainer over tokenized walks.

    Parameters mirror the embedding pipeline defaults: ``dim`` 64 for
    evaluation runs (2 for visualization), window 5, 5 epochs, 5 negatives,
    linear learning-rate decay 0.025 -> 0.0001.
    """

    def __init__(self, dim: int = 64, window: int = 5, epochs: int = 5,
                 negative: int = 5, lr: float = 0.025, min_lr: float = 1e-4,
                 seed: int = 0, workers: int = 1):
        self.dim = dim
        self.window = window
        self.epochs = epochs
        self.negative = negative
        self.lr = lr
        self.min_lr = min_lr
        self.seed = seed
        self.workers = workers

    def fit(self, walks: Sequence[np.ndarray], n_nodes: int) -> "SkipGram":
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if len(walks) == 0 or all(w.size == 0 for w in walks):
            raise ValueError("empty corpus")
        node_to_vocab, vocab_to_node, counts = build_vocab(walks, n_nodes)
        if np.any(node_to_vocab < 0):
            missing = np.flatnonzero(node_to_vocab < 0)
            raise ValueError(f"corpus does not cover nodes {missing.tolist()}")
        flat = node_to_vocab[np.concatenate(walks)].astype(np.int64)
        offs = np.zeros(len(walks) + 1, dtype=np.int64)
        offs[1:] = np.cumsum([w.size for w in walks])
        table = unigram_noise_table(counts)

        n_vocab = vocab_to_node.size
        rng = np.random.default_rng(self.seed)
        w_in = (rng.random((n_vocab, self.dim)) - 0.5) / self.dim
        w_out = np.zeros((n_vocab, self.dim))

        pairs_per_epoch = _count_pairs(offs, self.window)
        total_pairs = max(1, pairs_per_epoch * self.epochs)
        probe_c, probe_o, probe_neg = self._probe_pairs(flat, offs, table, rng)

        _seed_rng(self.seed)
        done = 0
        self.loss_history_ = [self._probe_loss(w_in, w_out, probe_c, probe_o, probe_neg)]
        for epoch in range(self.epochs):
            if self.workers <= 1:
                done = _train_span(flat, offs, 0, len(walks), self.window, w_in,
                                   w_out, self.negative, table, self.lr,
                                   self.min_lr, total_pairs, done)
            else:
                bounds = np.linspace(0, len(walks), self.workers + 1).astype(int)
                chunk = pairs_per_epoch // self.workers

                def shard(i):
                    return _train_span(flat, offs, bounds[i], bounds[i + 1],
                                       self.window, w_in, w_out, self.negative,
                                       table, self.lr, self.min_lr, total_pairs,
                                       done + i * chunk)

                with ThreadPoolExecutor(max_workers=self.workers) as ex:
                    list(ex.map(shard, range(self.workers)))
                done += pairs_per_epoch
            self.loss_history_.append(self._probe_loss(w_in, w_out, probe_c, probe_o, probe_neg))

        self.w_in_ = w_in
        self.w_out_ = w_out
        self.node_to_vocab_ = node_to_vocab
        self.vocab_to_node_ = vocab_to_node
        return self

    def node_vectors(self) -> np.ndarray:
        """Input-side vectors re-indexed by node id."""
        return self.w_in_[self.node_to_vocab_]

    def _probe_pairs(self, flat, offs, table, rng, max_pairs: int = 20000):
        """Frozen (center, context, negatives) probe batch for loss tracking."""
        centers = []
        contexts = []
        for w in range(min(len(offs) - 1, 2000)):
            s, e = int(offs[w]), int(offs[w + 1])
            for i in range(s, e):
                lo = max(s, i - self.window)
                hi = min(e - 1, i + self.window)
                for j in range(lo, hi + 1):
                    if j != i:
                        centers.append(flat[i])
                        contexts.append(flat[j])
                if len(centers) >= max_pairs:
                    break
            if len(centers) >= max_pairs:
                break
        c = np.array(centers[:max_pairs], dtype=np.int64)
        o = np.array(contexts[:max_pairs], dtype=np.int64)
        neg = table[rng.integers(0, table.size, size=(c.size, max(1, self.negative)))]
        return c, o, neg.astype(np.int64)

    @staticmethod
    def _probe_loss(w_in, w_out, c, o, neg) -> float:
        v = w_in[c]
        pos = np.einsum("ij,ij->i", v, w_out[o])
        ls = -np.log(np.clip(_sigmoid(pos), 1e-12, None))
        nd = np.einsum("ijk,ik->ij", w_out[neg], v)
        ls = ls - np.log(np.clip(_sigmoid(-nd), 1e-12, None)).sum(axis=1)
        return float(ls.mean())


def train_skipgram(
    walks: Sequence[np.ndarray],
    n_nodes: int,
    dim: int = 64,
    window: int = 5,
    epochs: int = 5,
    negative: int = 5,
    lr: float = 0.025,
    min_lr: float = 1e-4,
    seed: int = 0,
    workers: int = 1,
) -> tuple[np.ndarray, list[float]]:
    """Train SGNS on walks; returns (vectors indexed by node id, loss history)."""
    model = SkipGram(dim=dim, window=window, epochs=epochs, negative=negative,
                     lr=lr, min_lr=min_lr, seed=seed, workers=workers)
    model.fit(walks, n_nodes)
    return model.node_vectors(), model.loss_history_
