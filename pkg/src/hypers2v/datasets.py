"""Deterministic builders for the shipped benchmark hypergraphs.

The original Zoo (UCI) and Les Misérables (Stanford GraphBase) sources are
not redistributable here, so `data/` ships synthetic stand-ins that
reproduce the published summary statistics exactly (Zoo: 101 nodes, 43
attribute-group hyperedges, max degree 17, max edge size 93; Lesmis: 77
nodes, 157 deduplicated scene hyperedges, max degree 39, max edge size 9)
and follow the same construction style. The co-authorship network is a
~1,000-node synthetic benchmark for hyperedge prediction. All builders are
seeded and reproduce the shipped files byte for byte.
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

from .hypergraph import Hypergraph

ZOO_CLASS_SIZES = {
    "mammal": 41, "bird": 20, "fish": 13, "invertebrate": 10,
    "insect": 8, "reptile": 5, "amphibian": 4,
}

# (attribute, true counts per class in ZOO_CLASS_SIZES order)
# Totals keep every group size in [8, 93] so the complement never exceeds the
# published max edge size of 93; "venomous" hits 8/93 exactly.
ZOO_BINARY_ATTRS = [
    ("hair", (39, 0, 0, 2, 2, 0, 0)),
    ("feathers", (0, 19, 0, 0, 1, 0, 0)),
    ("eggs", (1, 20, 13, 10, 8, 4, 4)),
    ("milk", (40, 0, 0, 0, 0, 1, 0)),
    ("airborne", (2, 16, 0, 0, 6, 0, 0)),
    ("aquatic", (6, 6, 13, 6, 0, 1, 4)),
    ("predator", (22, 10, 9, 8, 1, 4, 3)),
    ("toothed", (40, 0, 13, 2, 0, 4, 3)),
    ("backbone", (41, 20, 13, 0, 0, 5, 4)),
    ("breathes", (41, 20, 0, 6, 8, 4, 4)),
    ("venomous", (1, 0, 2, 2, 1, 2, 0)),
    ("fins", (2, 0, 13, 1, 0, 0, 0)),
    ("tail", (35, 20, 13, 1, 1, 5, 0)),
    ("domestic", (8, 4, 1, 0, 0, 0, 0)),
    ("catsize", (33, 4, 3, 1, 0, 2, 1)),
]

# legs value -> count per class (columns sum to the class sizes)
ZOO_LEGS = {
    0: (1, 0, 13, 5, 0, 2, 2),
    2: (7, 20, 0, 0, 0, 0, 0),
    4: (32, 0, 0, 1, 0, 3, 2),
    5: (0, 0, 0, 2, 0, 0, 0),
    6: (1, 0, 0, 0, 7, 0, 0),
    8: (0, 0, 0, 2, 1, 0, 0),
}


def make_zoo(seed: int = 20240 ) -> Hypergraph:
    """Zoo-style hypergraph: one hyperedge per shared attribute value.

    101 animals, 17 attributes (15 binary + legs + class), 43 groups of
    size >= 2; every animal belongs to one group per attribute, so all
    degrees are 17.
    """
    rng = np.random.default_rng(seed)
    classes = list(ZOO_CLASS_SIZES)
    sizes = [ZOO_CLASS_SIZES[c] for c in classes]
    n = sum(sizes)
    class_of = np.repeat(np.arange(len(classes)), sizes)
    labels = [f"a{i:03d}" for i in range(n)]
    members = {c: np.flatnonzero(class_of == c) for c in range(len(classes))}

    edges: list[list[str]] = []
    for _attr, trues in ZOO_BINARY_ATTRS:
        true_set: list[int] = []
        for c, count in enumerate(trues):
            pick = rng.choice(members[c], size=count, replace=False)
            true_set.extend(int(v) for v in pick)
        true_mask = np.zeros(n, dtype=bool)
        true_mask[true_set] = True
        edges.append([labels[v] for v in np.flatnonzero(true_mask)])
        edges.append([labels[v] for v in np.flatnonzero(~true_mask)])

    legs_of = np.full(n, -1, dtype=int)
    for value, counts in ZOO_LEGS.items():
        for c, count in enumerate(counts):
            pool = members[c][legs_of[members[c]] < 0]
            pick = rng.choice(pool, size=count, replace=False)
            legs_of[pick] = value
    for value in sorted(ZOO_LEGS):
        edges.append([labels[v] for v in np.flatnonzero(legs_of == value)])

    for c in range(len(classes)):
        edges.append([labels[v] for v in members[c]])

    g = Hypergraph.from_edges(edges, dedupe=True)
    assert g.n_nodes == 101 and g.n_edges == 43, (g.n_nodes, g.n_edges)
    assert int(g.degrees().max()) == 17
    assert int(g.edge_sizes().max()) == 93
    return g


def make_lesmis(seed: int = 1862) -> Hypergraph:
    """Scene-co-appearance style hypergraph with the published Lesmis stats.

    77 characters, 157 unique scenes of 2..9 members, a protagonist with
    degree exactly 39, single connected component.
    """
    rng = np.random.default_rng(seed)
    n, n_edges, protagonist, max_deg_other = 77, 157, 0, 34
    labels = [chr(ord("A") + i // 26) + chr(ord("A") + i % 26) for i in range(n)]
    weights = 1.0 / (np.arange(n) + 1.5) ** 0.9
    weights[protagonist] = 0.0  # protagonist scenes are scheduled explicitly
    size_values = np.arange(2, 10)
    size_probs = np.array([0.40, 0.22, 0.13, 0.09, 0.06, 0.045, 0.03, 0.025])
    size_probs = size_probs / size_probs.sum()

    degrees = np.zeros(n, dtype=int)
    seen: set[tuple[int, ...]] = set()
    edges: list[tuple[int, ...]] = []

    def try_add(edge: list[int]) -> bool:
        canon = tuple(sorted(set(edge)))
        if len(canon) < 2 or canon in seen:
            return False
        others = [v for v in canon if v != protagonist]
        if any(degrees[v] >= max_deg_other for v in others):
            return False
        seen.add(canon)
        edges.append(canon)
        for v in canon:
            degrees[v] += 1
        return True

    # backbone: connect every character to the already covered part
    order = rng.permutation(np.arange(1, n))
    covered = [protagonist]
    i = 0
    while i < len(order):
        take = int(rng.integers(1, 4))
        group = [int(v) for v in order[i : i + take]]
        anchor = int(covered[int(rng.integers(len(covered)))])
        if try_add(group + [anchor]):
            covered.extend(group)
            i += take

    # one scene of the maximum size 9
    while True:
        big = rng.choice(n, size=9, replace=False)
        if try_add([int(v) for v in big]):
            break

    n_protagonist = 39
    while len(edges) < n_edges:
        need_prot = n_protagonist - int(degrees[protagonist])
        remaining = n_edges - len(edges)
        size = int(rng.choice(size_values, p=size_probs))
        p = weights / weights.sum()
        cast = [int(v) for v in rng.choice(n, size=size, replace=False, p=p)]
        if need_prot >= remaining or (need_prot > 0 and rng.random() < 0.35):
            cast = cast[:-1] + [protagonist]
        try_add(cast)

    g = Hypergraph([list(e) for e in edges], labels)
    assert g.n_nodes == 77 and g.n_edges == 157, (g.n_nodes, g.n_edges)
    assert int(g.degrees().max()) == 39 and int(np.argmax(g.degrees())) == protagonist
    assert int(g.edge_sizes().max()) == 9
    assert len(g.bfs_rings(0, n)[0]) + sum(
        len(r) for r in g.bfs_rings(0, n)[1:]
    ) == n - 1, "graph must be connected"
    return g


def make_coauthorship(seed: int = 7, n_nodes: int = 1000, n_communities: int = 25,
                      n_papers: int = 1700) -> Hypergraph:
    """Synthetic co-authorship hypergraph: papers are hyperedges of 2..6
    authors drawn from skewed per-community prolificness."""
    rng = np.random.default_rng(seed)
    labels = [f"r{i:04d}" for i in range(n_nodes)]
    community = np.repeat(np.arange(n_communities), n_nodes // n_communities)
    prolific = 1.0 / (rng.permutation(n_nodes % len(labels) + np.arange(n_nodes)) + 1.0) ** 1.1
    members = {c: np.flatnonzero(community == c) for c in range(n_communities)}

    seen: set[tuple[int, ...]] = set()
    edges: list[tuple[int, ...]] = []

    def add_paper(cast: list[int]) -> None:
        canon = tuple(sorted(set(cast)))
        if len(canon) >= 2 and canon not in seen:
            seen.add(canon)
            edges.append(canon)

    size_probs = np.array([0.38, 0.30, 0.17, 0.10, 0.05])
    while len(edges) < n_papers:
        c = int(rng.integers(n_communities))
        pool = members[c]
        w = prolific[pool] / prolific[pool].sum()
        size = int(rng.choice(np.arange(2, 7), p=size_probs))
        size = min(size, pool.size)
        cast = [int(v) for v in rng.choice(pool, size=size, replace=False, p=w)]
        if rng.random() < 0.08:  # cross-community bridge author
            cast[-1] = int(rng.integers(n_nodes))
        add_paper(cast)

    uncovered = np.flatnonzero(np.isin(np.arange(n_nodes), np.unique(np.concatenate(
        [np.array(e) for e in edges])), invert=True))
    for v in uncovered:
        c = int(community[v])
        pool = members[c]
        w = prolific[pool] / prolific[pool].sum()
        partner = int(rng.choice(pool, p=w))
        while partner == int(v):
            partner = int(rng.choice(pool, p=w))
        add_paper([int(v), partner])

    g = Hypergraph([list(e) for e in edges], labels)
    assert g.n_nodes == n_nodes
    return g


DATASETS = {
    "zoo": make_zoo,
    "lesmis": make_lesmis,
    "coauthorship_1k": make_coauthorship,
}


def write_all(out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, make in DATASETS.items():
        path = out / f"{name}.hyperedges"
        make().save(path)
        written.append(path)
    return written


if __name__ == "__main__":
    target = sys.argv[1] if len(sys.argv) > 1 else "data"
    for p in write_all(target):
        print(p)
