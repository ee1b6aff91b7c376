"""Independent oracles used by the test suite.

These deliberately avoid the implementation paths they check: DTW by
exhaustive alignment enumeration, k-hop sets via networkx shortest paths,
cumulative distances by composing the public element-level operations, and
gradients by central finite differences.
"""

from __future__ import annotations

import math

import networkx as nx
import numpy as np

from hypers2v.distances import (
    collapse_hyper_degree,
    d0,
    d0_uncollapsed,
    dk,
    hyper_degree,
    neighborhood_signature,
)
from hypers2v.hypergraph import Hypergraph
from hypers2v.skipgram import sgns_pair_loss


def dtw_bruteforce(dist_fn, a, b) -> float:
    """Minimum alignment cost over every monotone path (no dynamic program).

    Element distances are tabulated once; the exponential path enumeration
    itself shares nothing with the DP recurrence it checks.
    """
    n, m = len(a), len(b)
    cost = [[dist_fn(x, y) for y in b] for x in a]
    best = math.inf
    stack = [(0, 0, cost[0][0])]
    while stack:
        i, j, acc = stack.pop()
        if i == n - 1 and j == m - 1:
            best = min(best, acc)
            continue
        for di, dj in ((1, 0), (0, 1), (1, 1)):
            ni, nj = i + di, j + dj
            if ni < n and nj < m:
                stack.append((ni, nj, acc + cost[ni][nj]))
    return best


def nx_rings(g: Hypergraph, v: int, k_max: int) -> list[set[int]]:
    """Hop sets from networkx shortest-path lengths on the clique expansion."""
    gx = nx.Graph()
    gx.add_nodes_from(range(g.n_nodes))
    for e in g.hyperedges:
        for i, u in enumerate(e):
            for w in e[i + 1 :]:
                gx.add_edge(u, w)
    lengths = nx.single_source_shortest_path_length(gx, v)
    return [{u for u, d in lengths.items() if d == k} for k in range(1, k_max + 1)]


def cumulative_naive(g: Hypergraph, k_max: int, mode: str = "collapsed",
                     exponent: int = 2) -> np.ndarray:
    """dis^k built pair by pair from the public operations."""
    n = g.n_nodes
    dis = np.full((k_max + 1, n, n), np.nan)
    hds = [hyper_degree(g, v) for v in range(n)]
    chds = [collapse_hyper_degree(h) for h in hds]

    def base(u, v):
        if mode == "collapsed":
            return d0(chds[u], chds[v], n=exponent)
        return d0_uncollapsed(hds[u], hds[v], n=exponent)

    for u in range(n):
        dis[0, u, u] = 0.0
        for v in range(u + 1, n):
            dis[0, u, v] = dis[0, v, u] = base(u, v)

    rings = {v: g.bfs_rings(v, k_max) for v in range(n)}
    for k in range(1, k_max + 1):
        if mode == "collapsed":
            sigs = {v: neighborhood_signature(g, v, k) for v in range(n)}
        else:
            sigs = {
                v: sorted((hds[int(w)] for w in rings[v][k - 1]), reverse=True)
                for v in range(n)
            }
        for u in range(n):
            if len(sigs[u]) and np.isfinite(dis[k - 1, u, u]):
                dis[k, u, u] = 0.0
            for v in range(u + 1, n):
                if not len(sigs[u]) or not len(sigs[v]):
                    continue
                if mode == "collapsed":
                    step = dk(sigs[u], sigs[v], n=exponent)
                else:
                    from hypers2v.distances import dtw

                    step = dtw(
                        lambda x, y: d0_uncollapsed(x, y, n=exponent),
                        sigs[u], sigs[v],
                    )
                val = dis[k - 1, u, v] + step
                dis[k, u, v] = dis[k, v, u] = val
    return dis


def finite_diff_grad(f, x: np.ndarray, eps: float = 1e-6) -> np.ndarray:
    """Central finite differences of a scalar function."""
    g = np.zeros_like(x, dtype=float)
    flat = x.ravel()
    out = g.ravel()
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + eps
        hi = f(x)
        flat[i] = orig - eps
        lo = f(x)
        flat[i] = orig
        out[i] = (hi - lo) / (2 * eps)
    return g


def sgns_fd_grads(v_c, u_o, u_neg, eps: float = 1e-6):
    """Finite-difference gradients of the SGNS pair loss."""
    g_c = finite_diff_grad(lambda x: sgns_pair_loss(x, u_o, u_neg), v_c.copy(), eps)
    g_o = finite_diff_grad(lambda x: sgns_pair_loss(v_c, x, u_neg), u_o.copy(), eps)
    g_n = finite_diff_grad(lambda x: sgns_pair_loss(v_c, u_o, x), u_neg.copy(), eps)
    return g_c, g_o, g_n


def random_hypergraph(rng: np.random.Generator, n_nodes: int = 10,
                      n_extra_edges: int = 8, max_size: int = 5) -> Hypergraph:
    """Connected-ish random hypergraph covering every node."""
    labels = [f"v{i}" for i in range(n_nodes)]
    perm = rng.permutation(n_nodes)
    edges = [[labels[perm[i]], labels[perm[i + 1]]] for i in range(n_nodes - 1)]
    for _ in range(n_extra_edges):
        size = min(int(rng.integers(2, max_size + 1)), n_nodes)
        members = rng.choice(n_nodes, size=size, replace=False)
        edges.append([labels[int(v)] for v in members])
    return Hypergraph.from_edges(edges, dedupe=True)
