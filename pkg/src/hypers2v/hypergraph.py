"""Hypergraph data model, neighborhood queries, and file IO.

A hypergraph is a set of nodes plus a list of hyperedges, each hyperedge a
set of >= 2 nodes. Nodes carry external string labels and are indexed
internally by dense integer ids assigned in first-seen order; all matrices
downstream index by those ids. Instances are immutable after construction
and safe for concurrent reads.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

import numpy as np


class HyperedgeFileError(ValueError):
    """Malformed hyperedge-list file (carries the offending line number)."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Hypergraph:
    """Immutable hypergraph over dense integer node ids.

    Parameters
    ----------
    hyperedges : sequence of node-id collections, each of size >= 2
    labels : external label per node id, ``labels[i]`` names node ``i``
    """

    def __init__(self, hyperedges: Sequence[Iterable[int]], labels: Sequence[str]):
        self._labels = tuple(str(x) for x in labels)
        if len(set(self._labels)) != len(self._labels):
            raise ValueError("duplicate node labels")
        n = len(self._labels)
        edges = []
        for e in hyperedges:
            canon = tuple(sorted(set(int(v) for v in e)))
            if len(canon) < 2:
                raise ValueError(f"hyperedge {tuple(e)} has size < 2")
            if canon[0] < 0 or canon[-1] >= n:
                raise ValueError(f"hyperedge {canon} has node id out of range")
            edges.append(canon)
        self._edges = tuple(edges)
        incident: list[list[int]] = [[] for _ in range(n)]
        for j, e in enumerate(self._edges):
            for v in e:
                incident[v].append(j)
        if any(not lst for lst in incident):
            orphans = [self._labels[v] for v, lst in enumerate(incident) if not lst]
            raise ValueError(f"nodes without any incident hyperedge: {orphans}")
        self._node_to_edges = tuple(tuple(lst) for lst in incident)
        self._label_to_id = {lab: i for i, lab in enumerate(self._labels)}
        self._adjacency: tuple[np.ndarray, ...] | None = None

    @classmethod
    def from_edges(cls, edges: Iterable[Iterable[str]], dedupe: bool = True) -> "Hypergraph":
        """Build from an iterable of label collections, assigning dense ids."""
        label_to_id: dict[str, int] = {}
        labels: list[str] = []
        id_edges: list[tuple[int, ...]] = []
        seen: set[tuple[int, ...]] = set()
        for e in edges:
            members: list[int] = []
            for lab in e:
                lab = str(lab)
                if lab not in label_to_id:
                    label_to_id[lab] = len(labels)
                    labels.append(lab)
                members.append(label_to_id[lab])
            canon = tuple(sorted(set(members)))
            if len(canon) < 2:
                raise ValueError(f"hyperedge {tuple(e)} has fewer than 2 distinct nodes")
            if dedupe:
                if canon in seen:
                    continue
                seen.add(canon)
            id_edges.append(canon)
        return cls(id_edges, labels)

    # -- basic accessors -------------------------------------------------

    @property
    def n_nodes(self) -> int:
        return len(self._labels)

    @property
    def n_edges(self) -> int:
        return len(self._edges)

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    @property
    def hyperedges(self) -> tuple[tuple[int, ...], ...]:
        return self._edges

    @property
    def node_to_edges(self) -> tuple[tuple[int, ...], ...]:
        return self._node_to_edges

    def label_of(self, v: int) -> str:
        return self._labels[v]

    def id_of(self, label: str) -> int:
        return self._label_to_id[label]

    def edge_size(self, j: int) -> int:
        return len(self._edges[j])

    def edge_sizes(self) -> np.ndarray:
        return np.array([len(e) for e in self._edges], dtype=np.int64)

    def degree(self, v: int) -> int:
        """Number of hyperedges incident to ``v`` (column sum of the incidence matrix)."""
        if not 0 <= v < self.n_nodes:
            raise ValueError(f"node id {v} out of range [0, {self.n_nodes})")
        return len(self._node_to_edges[v])

    def degrees(self) -> np.ndarray:
        return np.array([len(es) for es in self._node_to_edges], dtype=np.int64)

    # -- neighborhoods ---------------------------------------------------

    def adjacency(self) -> tuple[np.ndarray, ...]:
        """Clique-expansion adjacency: u ~ w iff they share >= 1 hyperedge.

        Returns one sorted int64 array of neighbor ids per node. Computed once
        and cached (the object is immutable).
        """
        if self._adjacency is None:
            neigh: list[set[int]] = [set() for _ in range(self.n_nodes)]
            for e in self._edges:
                for u in e:
                    neigh[u].update(e)
            for v in range(self.n_nodes):
                neigh[v].discard(v)
            self._adjacency = tuple(
                np.fromiter(sorted(s), dtype=np.int64, count=len(s)) for s in neigh
            )
        return self._adjacency

    def bfs_rings(self, v: int, k_max: int) -> list[np.ndarray]:
        """Nodes at shortest-path distance exactly 1..k_max from ``v``.

        Distance is measured on the clique expansion. ``rings[k-1]`` holds hop
        k; rings beyond the eccentricity of ``v`` are empty arrays.
        """
        adj = self.adjacency()
        dist = np.full(self.n_nodes, -1, dtype=np.int64)
        dist[v] = 0
        queue: deque[int] = deque([v])
        rings: list[list[int]] = [[] for _ in range(k_max)]
        while queue:
            u = queue.popleft()
            d = dist[u]
            if d >= k_max:
                continue
            for w in adj[u]:
                if dist[w] < 0:
                    dist[w] = d + 1
                    rings[d].append(w)
                    queue.append(w)
        return [np.array(r, dtype=np.int64) for r in rings]

    def k_hop_neighbors(self, v: int, k: int) -> set[int]:
        """Set of nodes at co-membership shortest-path distance exactly ``k``."""
        if not 0 <= v < self.n_nodes:
            raise ValueError(f"node id {v} out of range [0, {self.n_nodes})")
        if k < 1:
            raise ValueError("k must be >= 1")
        return set(self.bfs_rings(v, k)[k - 1].tolist())

    # -- IO ----------------------------------------------------------------

    def save(self, path) -> None:
        """Write the hyperedge-list text format (one edge per line, labels)."""
        with open(path, "w", encoding="utf-8") as fh:
            for e in self._edges:
                fh.write(" ".join(self._labels[v] for v in e) + "\n")

    def __repr__(self) -> str:
        return f"Hypergraph(n_nodes={self.n_nodes}, n_edges={self.n_edges})"


def load_hyperedge_list(path, dedupe: bool = True) -> Hypergraph:
    """Parse the hyperedge-list text format.

    UTF-8, one hyperedge per line, whitespace-separated node labels; blank
    lines and ``#``-prefixed comment lines are ignored. Duplicate hyperedges
    (same node set) are dropped when ``dedupe`` is on. A line with fewer than
    two distinct labels is rejected with its line number.
    """
    edges: list[list[str]] = []
    line_nos: list[int] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            toks = line.split()
            if len(set(toks)) < 2:
                raise HyperedgeFileError(
                    f"hyperedge needs >= 2 distinct nodes, got {toks!r}", line=lineno
                )
            edges.append(toks)
            line_nos.append(lineno)
    try:
        return Hypergraph.from_edges(edges, dedupe=dedupe)
    except ValueError as exc:  # pragma: no cover - from_edges re-validation
        raise HyperedgeFileError(str(exc)) from exc


def clique_expansion(g: Hypergraph) -> tuple[np.ndarray, ...]:
    """Simple-graph adjacency of the clique expansion (see Hypergraph.adjacency)."""
    return g.adjacency()


def expansion_edges(g: Hypergraph) -> list[tuple[int, int]]:
    """Undirected expansion edges as (u, v) id pairs with u < v, sorted."""
    adj = g.adjacency()
    return [(u, int(w)) for u in range(g.n_nodes) for w in adj[u] if u < w]


def save_expansion(g: Hypergraph, path) -> None:
    """Export the clique expansion: one "u v" label pair per line, u < v by id."""
    with open(path, "w", encoding="utf-8") as fh:
        for u, w in expansion_edges(g):
            fh.write(f"{g.labels[u]} {g.labels[w]}\n")
