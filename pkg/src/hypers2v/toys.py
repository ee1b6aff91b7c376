"""Toy hyper networks with exact structural-equivalence ground truth.

Five frozen topologies (star, circle, mesh, tower, twin). Node "colors" are
automorphism orbits computed by an exact search at generation time, so two
nodes share a color iff some hypergraph automorphism maps one to the other;
the twin topology is two disjoint isomorphic copies of the star, whose
orbits span components.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .hypergraph import Hypergraph

TOPOLOGIES = ("star", "circle", "mesh", "tower", "twin")

# frozen preset parameters (the published figures give no counts); the star
# ships with a 2-node core so that every color class has at least two
# members, which plain skip-gram needs to co-locate a class (a singleton
# class has no twin to co-occur with)
PRESETS = {
    "star": {"core": 2, "arms": 3, "leaves_per_arm": 2},
    "circle": {"links": 4, "link_size": 3},
    "mesh": {"rows": 3, "cols": 3},
    "tower": {"levels": 4, "width": 2},
    "twin": {"core": 2, "arms": 3, "leaves_per_arm": 2},
}


# -- automorphism oracle -----------------------------------------------------


def _refinement_classes(g: Hypergraph) -> list[int]:
    """Iterated color refinement; an upper bound on the orbit partition."""
    color = [
        tuple(sorted((len(g.hyperedges[j]) for j in g.node_to_edges[v]), reverse=True))
        for v in range(g.n_nodes)
    ]
    code = _compress(color)
    while True:
        edge_color = [tuple(sorted(code[v] for v in e)) for e in g.hyperedges]
        nxt = [
            (code[v], tuple(sorted(edge_color[j] for j in g.node_to_edges[v])))
            for v in range(g.n_nodes)
        ]
        nxt_code = _compress(nxt)
        if nxt_code == code:
            return code
        code = nxt_code


def _compress(values) -> list[int]:
    table = {v: i for i, v in enumerate(sorted(set(values), key=repr))}
    return [table[v] for v in values]


def _shared_edge_counts(g: Hypergraph) -> np.ndarray:
    share = np.zeros((g.n_nodes, g.n_nodes), dtype=np.int64)
    for e in g.hyperedges:
        for u, v in combinations(e, 2):
            share[u, v] += 1
            share[v, u] += 1
    return share


def find_automorphism(g: Hypergraph, forced: dict[int, int] | None = None) -> list[int] | None:
    """Backtracking search for a hypergraph automorphism honoring ``forced``.

    Returns the permutation as a list (sigma[v] = image of v) or None.
    Intended for small graphs (toy scale); prunes with refinement classes
    and pairwise shared-edge counts, and verifies the full hyperedge
    multiset at the leaves.
    """
    n = g.n_nodes
    classes = _refinement_classes(g)
    share = _shared_edge_counts(g)
    edge_multiset = sorted(g.hyperedges)
    sigma = [-1] * n
    used = [False] * n
    if forced:
        for u, v in forced.items():
            if classes[u] != classes[v]:
                return None
            sigma[u] = v
            used[v] = True
    order = sorted((v for v in range(n) if sigma[v] == -1),
                   key=lambda v: (classes.count(classes[v]), v))

    def backtrack(pos: int) -> bool:
        if pos == len(order):
            mapped = sorted(tuple(sorted(sigma[v] for v in e)) for e in g.hyperedges)
            return mapped == edge_multiset
        u = order[pos]
        for w in range(n):
            if used[w] or classes[w] != classes[u]:
                continue
            ok = True
            for v in range(n):
                if sigma[v] >= 0 and share[u, v] != share[w, sigma[v]]:
                    ok = False
                    break
            if not ok:
                continue
            sigma[u] = w
            used[w] = True
            if backtrack(pos + 1):
                return True
            sigma[u] = -1
            used[w] = False
        return False

    return sigma if backtrack(0) else None


def automorphism_orbits(g: Hypergraph) -> np.ndarray:
    """Orbit id per node under the full automorphism group (exact, small graphs)."""
    n = g.n_nodes
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    classes = _refinement_classes(g)
    by_class: dict[int, list[int]] = {}
    for v in range(n):
        by_class.setdefault(classes[v], []).append(v)
    for members in by_class.values():
        anchor = members[0]
        for v in members[1:]:
            if find(v) == find(anchor):
                continue
            sigma = find_automorphism(g, forced={anchor: v})
            if sigma is not None:
                for w in range(n):
                    union(w, sigma[w])
    roots = sorted({find(v) for v in range(n)})
    rank = {r: i for i, r in enumerate(roots)}
    return np.array([rank[find(v)] for v in range(n)], dtype=np.int64)


# -- generators --------------------------------------------------------------


def _star_edges(core: int, arms: int, leaves_per_arm: int, prefix: str = "n") -> list[list[str]]:
    """Arm hyperedges sharing a common core: each edge = core nodes + fresh leaves."""
    if core < 1 or arms < 1 or leaves_per_arm < 1:
        raise ValueError("star needs core >= 1, arms >= 1 and leaves_per_arm >= 1")
    hubs = [f"{prefix}{i}" for i in range(core)]
    edges = []
    nxt = core
    for _ in range(arms):
        edge = list(hubs)
        for _ in range(leaves_per_arm):
            edge.append(f"{prefix}{nxt}")
            nxt += 1
        edges.append(edge)
    return edges


def _circle_edges(links: int, link_size: int) -> list[list[str]]:
    if links < 3 or link_size < 2:
        raise ValueError("circle needs links >= 3 and link_size >= 2")
    n = links * (link_size - 1)
    edges = []
    for i in range(links):
        start = i * (link_size - 1)
        edges.append([f"n{(start + j) % n}" for j in range(link_size)])
    return edges


def _mesh_edges(rows: int, cols: int) -> list[list[str]]:
    if rows < 2 or cols < 2:
        raise ValueError("mesh needs rows >= 2 and cols >= 2")
    edges = []
    for r in range(rows - 1):
        for c in range(cols - 1):
            edges.append([
                f"n{r * cols + c}", f"n{r * cols + c + 1}",
                f"n{(r + 1) * cols + c}", f"n{(r + 1) * cols + c + 1}",
            ])
    return edges


def _tower_edges(levels: int, width: int) -> list[list[str]]:
    if levels < 2 or width < 1 or levels * width < 4:
        raise ValueError("tower needs levels >= 2 and width >= 1 (and >= 4 nodes)")
    edges = []
    for lv in range(levels - 1):
        edge = [f"n{lv * width + i}" for i in range(width)]
        edge += [f"n{(lv + 1) * width + i}" for i in range(width)]
        edges.append(edge)
    return edges


def generate_toy(topology: str, seed: int = 0, **params) -> tuple[Hypergraph, np.ndarray]:
    """Build a toy hypergraph and its exact color classes.

    ``params`` default to the frozen presets; construction is deterministic
    (``seed`` is accepted for interface uniformity). Colors are automorphism
    orbits found by :func:`automorphism_orbits`.
    """
    if topology not in TOPOLOGIES:
        raise ValueError(f"unknown topology {topology!r}, want one of {TOPOLOGIES}")
    opts = dict(PRESETS[topology])
    opts.update(params)
    if topology == "star":
        edges = _star_edges(**opts)
    elif topology == "circle":
        edges = _circle_edges(**opts)
    elif topology == "mesh":
        edges = _mesh_edges(**opts)
    elif topology == "tower":
        edges = _tower_edges(**opts)
    else:  # twin: two disjoint isomorphic copies of the star motif
        edges = _star_edges(prefix="a", **opts) + _star_edges(prefix="b", **opts)
    g = Hypergraph.from_edges(edges, dedupe=True)
    colors = automorphism_orbits(g)
    return g, colors


def save_colors(path, labels, colors) -> None:
    """Color sidecar: one "label class_id" per line."""
    with open(path, "w", encoding="utf-8") as fh:
        for lab, c in zip(labels, colors):
            fh.write(f"{lab} {int(c)}\n")
