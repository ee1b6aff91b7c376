"""Biased random walks over the multilayer similarity graph.

Each step either stays in the current layer (probability ``stay_prob``) and
moves to a similar node sampled proportionally to exp(-dis^k), or changes
layer (up with probability w_up/(w_up + w_down), clamped at the bounds).
Layer changes keep the current node and emit no token; a walk ends after
``walk_length`` emitted tokens. Every walk has its own RNG stream derived
from (seed, start node, walk index), so generation is deterministic and
thread-count invariant.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .layers import MultilayerGraph


@dataclass
class WalkCorpus:
    """Generated walk sequences (node ids only; layer information stripped)."""

    walks: list[np.ndarray]
    walks_per_node: int
    walk_length: int
    stay_prob: float
    seed: int
    n_node_moves: int = 0
    n_layer_moves: int = 0
    start_nodes: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))

    def __len__(self) -> int:
        return len(self.walks)

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter(self.walks)

    def total_tokens(self) -> int:
        return int(sum(w.size for w in self.walks))

    def save(self, path, labels: Sequence[str]) -> None:
        """One walk per line, space-separated node labels."""
        with open(path, "w", encoding="utf-8") as fh:
            for w in self.walks:
                fh.write(" ".join(labels[v] for v in w) + "\n")


def _walk_rng(seed: int, node: int, walk_index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, node, walk_index])))


def _single_walk(mg: MultilayerGraph, node: int, walk_length: int, stay_prob: float,
                 rng: np.random.Generator) -> tuple[np.ndarray, int, int]:
    tokens = np.empty(walk_length, dtype=np.int64)
    tokens[0] = node
    count = 1
    if mg.top_layer[node] < 0 or walk_length == 1:
        return tokens[:count], 0, 0
    u = node
    k = 0
    node_moves = 0
    layer_moves = 0
    candidates = mg.candidates
    cum_weights = mg.cum_weights
    up_p = mg.up_given_change
    top = mg.top_layer
    while count < walk_length:
        if rng.random() < stay_prob:
            cum = cum_weights[k][u]
            cand = candidates[k][u]
            i = int(cum.searchsorted(rng.random() * cum[-1], side="right"))
            if i >= cand.shape[0]:
                i = cand.shape[0] - 1
            u = int(cand[i])
            tokens[count] = u
            count += 1
            node_moves += 1
        else:
            if top[u] == 0:
                continue  # single usable layer: the change draw is a no-op
            if rng.random() < up_p[k, u]:
                k += 1
            else:
                # up_given_change is 1 at layer 0, so a down move implies k > 0
                k -= 1
            layer_moves += 1
    return tokens, node_moves, layer_moves


def generate_walks(
    mg: MultilayerGraph,
    walks_per_node: int = 100,
    walk_length: int = 80,
    stay_prob: float = 0.3,
    seed: int = 0,
    threads: int = 1,
) -> WalkCorpus:
    """Start ``walks_per_node`` walks at layer 0 from every node.

    Output is bit-identical for a given seed regardless of ``threads``.
    """
    if not 0.0 < stay_prob < 1.0:
        raise ValueError("stay_prob must be in (0, 1)")
    if walks_per_node < 1 or walk_length < 1:
        raise ValueError("walks_per_node and walk_length must be >= 1")
    if seed < 0:
        raise ValueError("seed must be >= 0")
    n = mg.n_nodes
    specs = [(v, w) for v in range(n) for w in range(walks_per_node)]

    def job(spec: tuple[int, int]) -> tuple[np.ndarray, int, int]:
        v, w = spec
        return _single_walk(mg, v, walk_length, stay_prob, _walk_rng(seed, v, w))

    if threads <= 1:
        results = [job(s) for s in specs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(job, specs, chunksize=256))

    walks = [r[0] for r in results]
    return WalkCorpus(
        walks=walks,
        walks_per_node=walks_per_node,
        walk_length=walk_length,
        stay_prob=stay_prob,
        seed=seed,
        n_node_moves=sum(r[1] for r in results),
        n_layer_moves=sum(r[2] for r in results),
        start_nodes=np.array([s[0] for s in specs], dtype=np.int64),
    )
