"""Multilayer similarity graph built from the cumulative distance tables.

Layer k connects every pair that is valid at hop k with weight
w^k(u, v) = exp(-dis^k(u, v)); the same node in consecutive layers is linked
by an up-weight ln(Gamma^k(u) + e) and a down-weight of 1, where Gamma^k(u)
counts u's layer-k edges whose weight strictly exceeds the layer's mean edge
weight. The structure is built once and read concurrently by walkers.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from .distances import LayerDistances

logger = logging.getLogger(__name__)


class MultilayerGraph:
    """Walk-ready view of the layered similarity graph.

    Attributes
    ----------
    weights : list of (n, n) arrays, exp(-dis^k), NaN on invalid pairs
    gamma : list of per-node counts of above-mean edges per layer
    mean_weight : per-layer mean over the edge multiset (each pair once)
    candidates : candidates[k][u] = partner ids of u in layer k
    cum_weights : cumulative weights aligned with candidates (sampling)
    up_given_change : (n_layers, n) probability of moving up conditioned on a
        layer change; encodes boundary clamps (1 at layer 0, 0 at a node's
        top layer)
    top_layer : per-node highest layer with at least one candidate (-1 if none)
    """

    def __init__(self, ld: LayerDistances):
        n = ld.n_nodes
        kept = []
        for k in range(ld.k_max + 1):
            if int(ld.node_valid[k].sum()) >= 2:
                kept.append(k)
            else:
                break
        dropped = ld.k_max + 1 - len(kept)
        if dropped:
            logger.warning(
                "dropping %d empty layer(s): no valid pairs beyond hop %d",
                dropped,
                len(kept) - 1,
            )
        self.n_nodes = n
        self.n_layers = len(kept)
        self.weights: list[np.ndarray] = []
        self.gamma: list[np.ndarray] = []
        self.mean_weight: list[float] = []
        self.candidates: list[list[np.ndarray]] = []
        self.cum_weights: list[list[np.ndarray]] = []
        self.top_layer = np.full(n, -1, dtype=np.int64)
        self.up_given_change = np.zeros((self.n_layers, n))

        for k in kept:
            w = np.exp(-ld.dis[k])
            np.fill_diagonal(w, np.nan)
            valid = np.isfinite(w)
            iu = np.triu_indices(n, k=1)
            edge_w = w[iu][valid[iu]]
            mean = float(edge_w.mean())
            above = np.where(valid & (w > mean), 1, 0)
            gam = above.sum(axis=1).astype(np.int64)
            self.weights.append(w)
            self.gamma.append(gam)
            self.mean_weight.append(mean)

            cands: list[np.ndarray] = []
            cums: list[np.ndarray] = []
            for u in range(n):
                ids = np.flatnonzero(valid[u])
                cands.append(ids)
                cums.append(np.cumsum(w[u, ids]) if ids.size else np.empty(0))
                if ids.size:
                    self.top_layer[u] = k
            self.candidates.append(cands)
            self.cum_weights.append(cums)

        for k in range(self.n_layers):
            gam = self.gamma[k]
            up_w = np.log(gam + math.e)
            p_up = up_w / (up_w + 1.0)
            for u in range(self.n_nodes):
                if self.candidates[k][u].size == 0:
                    self.up_given_change[k, u] = 0.0
                elif k == self.top_layer[u]:
                    self.up_given_change[k, u] = 0.0
                elif k == 0:
                    self.up_given_change[k, u] = 1.0
                else:
                    self.up_given_change[k, u] = p_up[u]

    def up_weight(self, k: int, u: int) -> float:
        """ln(Gamma^k(u) + e); defined for layers below a node's top layer."""
        return float(np.log(self.gamma[k][u] + math.e))

    def dump_weight_histograms(self, path, bins: int = 20) -> None:
        """Debug CSV of per-layer edge-weight histograms."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("layer,bin_lo,bin_hi,count\n")
            for k in range(self.n_layers):
                w = self.weights[k]
                iu = np.triu_indices(self.n_nodes, k=1)
                vals = w[iu]
                vals = vals[np.isfinite(vals)]
                hist, edges = np.histogram(vals, bins=bins, range=(0.0, 1.0))
                for i, c in enumerate(hist):
                    fh.write(f"{k},{edges[i]:.6f},{edges[i + 1]:.6f},{c}\n")


def build_multilayer(ld: LayerDistances) -> MultilayerGraph:
    """Construct the multilayer similarity graph from cumulative distances."""
    return MultilayerGraph(ld)
