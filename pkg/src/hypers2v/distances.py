"""Hyper-degrees and the magnitude-position structural distance family.

Element level: ``mpd`` compares two hyper-degree entries by size ratio and
positional bias; ``cmpd`` is its frequency-aware form over collapsed
hyper-degree entries (``mpd`` is exactly ``cmpd`` with both frequencies 1).
Sequence level: exact dynamic time warping composes element distances into
``d0`` (0-hop, between two collapsed hyper-degrees), ``cncmpd`` / ``dk``
(hop k > 0, between neighborhood signatures), and ``cumulative_distances``
accumulates them into the per-hop table ``dis^k`` that feeds the multilayer
graph.

The quadratic table is computed on interned representations (distinct
collapsed hyper-degrees and distinct signatures) with numba kernels; the
Python functions here are the authoritative definitions.
"""

from __future__ import annotations

import math
import struct
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _kernels
from .hypergraph import Hypergraph

# A hyper-degree (HD) is a descending tuple of incident edge sizes.
# A collapsed hyper-degree (CHD) is a tuple of (size, freq) with sizes
# strictly decreasing. A hop-k signature is a tuple of (CHD, freq) in
# canonical (descending-lexicographic CHD) order.

MODES = ("collapsed", "uncollapsed")


def hyper_degree(g: Hypergraph, v: int) -> tuple[int, ...]:
    """Sizes of the hyperedges incident to ``v``, sorted descending."""
    if not 0 <= v < g.n_nodes:
        raise ValueError(f"node id {v} out of range [0, {g.n_nodes})")
    return tuple(sorted((len(g.hyperedges[j]) for j in g.node_to_edges[v]), reverse=True))


def collapse_hyper_degree(hd: Sequence[int]) -> tuple[tuple[int, int], ...]:
    """Compress a descending hyper-degree into (size, frequency) pairs."""
    if not hd:
        raise ValueError("empty hyper-degree")
    entries: list[tuple[int, int]] = []
    for s in hd:
        if entries and entries[-1][0] == s:
            entries[-1] = (s, entries[-1][1] + 1)
        else:
            entries.append((s, 1))
    return tuple(entries)


def expand_collapsed(chd: Iterable[tuple[int, int]]) -> tuple[int, ...]:
    """Inverse of collapse: repeat each size by its frequency."""
    out: list[int] = []
    for s, f in chd:
        out.extend([s] * f)
    return tuple(out)


def positional_bias(hd_sizes: Iterable[int], s: int) -> float:
    """Importance weight of size ``s`` within a hyper-degree: 1/(max - s + 1).

    The largest size gets bias 1; biases are always computed against the
    owning node's own maximum size.
    """
    mx = max(hd_sizes)
    if s > mx:
        raise ValueError(f"size {s} exceeds max size {mx}")
    return 1.0 / (mx - s + 1)


def chd_with_biases(chd: Sequence[tuple[int, int]]) -> tuple[tuple[int, int, float], ...]:
    """Attach per-entry biases to a collapsed hyper-degree: (size, freq, bias)."""
    mx = chd[0][0]
    return tuple((s, f, 1.0 / (mx - s + 1)) for s, f in chd)


def cmpd(
    e_u: tuple[int, int, float], e_v: tuple[int, int, float], n: int = 2
) -> float:
    """Collapsed magnitude-position distance between two (size, freq, bias) entries.

    max(f_u, f_v) * (exp(((1 - min/max)^n + |b_u/f_u - b_v/f_v|^n)^(1/n)) - 1).
    """
    s_u, f_u, b_u = e_u
    s_v, f_v, b_v = e_v
    if f_u < 1 or f_v < 1:
        raise ValueError("frequencies must be >= 1")
    mn = s_u if s_u < s_v else s_v
    mx = s_u if s_u > s_v else s_v
    mag = 1.0 - mn / mx
    pos = abs(b_u / f_u - b_v / f_v)
    if n == 2:
        r = math.sqrt(mag * mag + pos * pos)
    elif n == 1:
        r = mag + pos
    else:
        r = (mag**n + pos**n) ** (1.0 / n)
    return max(f_u, f_v) * (math.exp(r) - 1.0)


def mpd(s_u: int, b_u: float, s_v: int, b_v: float, n: int = 2) -> float:
    """Magnitude-position distance between two plain hyper-degree entries."""
    return cmpd((s_u, 1, b_u), (s_v, 1, b_v), n=n)


def dtw(dist_fn: Callable, a: Sequence, b: Sequence) -> float:
    """Exact dynamic time warping cost between sequences ``a`` and ``b``.

    Classic full dynamic program: monotone alignment with first<->first and
    last<->last boundary conditions and {match, insert, delete} moves; the
    cost is the sum of ``dist_fn`` over aligned element pairs. No
    approximation window.
    """
    n, m = len(a), len(b)
    if n == 0 or m == 0:
        raise ValueError("dtw requires non-empty sequences")
    prev = [0.0] * m
    prev[0] = dist_fn(a[0], b[0])
    for j in range(1, m):
        prev[j] = prev[j - 1] + dist_fn(a[0], b[j])
    for i in range(1, n):
        cur = [0.0] * m
        cur[0] = prev[0] + dist_fn(a[i], b[0])
        for j in range(1, m):
            cur[j] = min(prev[j], cur[j - 1], prev[j - 1]) + dist_fn(a[i], b[j])
        prev = cur
    return prev[m - 1]


def d0(
    chd_u: Sequence[tuple[int, int]], chd_v: Sequence[tuple[int, int]], n: int = 2
) -> float:
    """Overall 0-hop distance: DTW of CMPD over two collapsed hyper-degrees.

    Biases are computed per node, against each hyper-degree's own maximum.
    """
    if not chd_u or not chd_v:
        raise ValueError("d0 requires non-empty collapsed hyper-degrees")
    eu = chd_with_biases(chd_u)
    ev = chd_with_biases(chd_v)
    return dtw(lambda x, y: cmpd(x, y, n=n), eu, ev)


def d0_uncollapsed(hd_u: Sequence[int], hd_v: Sequence[int], n: int = 2) -> float:
    """0-hop distance of the no-collapse ablation: DTW of MPD over raw HDs."""
    if not hd_u or not hd_v:
        raise ValueError("empty hyper-degree")
    mx_u, mx_v = hd_u[0], hd_v[0]
    eu = [(s, 1, 1.0 / (mx_u - s + 1)) for s in hd_u]
    ev = [(s, 1, 1.0 / (mx_v - s + 1)) for s in hd_v]
    return dtw(lambda x, y: cmpd(x, y, n=n), eu, ev)


def cncmpd(
    a: tuple[Sequence[tuple[int, int]], int],
    b: tuple[Sequence[tuple[int, int]], int],
    n: int = 2,
) -> float:
    """Distance between two (CHD, freq) signature entries: max(f_a, f_b) * d0."""
    chd_a, f_a = a
    chd_b, f_b = b
    if f_a < 1 or f_b < 1:
        raise ValueError("frequencies must be >= 1")
    return max(f_a, f_b) * d0(chd_a, chd_b, n=n)


def dk(
    sig_u: Sequence[tuple[Sequence[tuple[int, int]], int]],
    sig_v: Sequence[tuple[Sequence[tuple[int, int]], int]],
    n: int = 2,
) -> float:
    """Hop-k distance: DTW of cncmpd over two canonical neighborhood signatures.

    Returns NaN when either signature is empty (the pair is undefined at this
    hop and drops out of the corresponding layer).
    """
    if len(sig_u) == 0 or len(sig_v) == 0:
        return math.nan
    return dtw(lambda x, y: cncmpd(x, y, n=n), sig_u, sig_v)


def neighborhood_signature(
    g: Hypergraph, v: int, k: int
) -> tuple[tuple[tuple[tuple[int, int], ...], int], ...]:
    """Canonical hop-k signature of ``v``: frequency-collapsed CHDs of N^k(v).

    Entries are sorted by CHD in descending lexicographic order of their
    (size, freq) lists; frequencies sum to |N^k(v)|. Empty when v has no
    hop-k neighbors.
    """
    ring = g.bfs_rings(v, k)[k - 1]
    counts: dict[tuple[tuple[int, int], ...], int] = {}
    for w in ring:
        chd = collapse_hyper_degree(hyper_degree(g, int(w)))
        counts[chd] = counts.get(chd, 0) + 1
    return tuple((chd, counts[chd]) for chd in sorted(counts, reverse=True))


class LayerDistances:
    """Per-hop cumulative structural distance tables dis^k(u, v).

    ``dis`` is a (k_max+1, n, n) float64 stack; NaN marks pairs that are
    undefined at that hop (a node with an empty hop-k neighborhood carries no
    layer-k pairs). Valid entries are symmetric, have zero diagonal, and are
    non-decreasing in k.
    """

    MAGIC = b"HS2VDST1"

    def __init__(self, dis: np.ndarray, node_valid: np.ndarray, mode: str, exponent: int):
        self.dis = dis
        self.node_valid = node_valid
        self.mode = mode
        self.exponent = exponent

    @property
    def k_max(self) -> int:
        return self.dis.shape[0] - 1

    @property
    def n_nodes(self) -> int:
        return self.dis.shape[1]

    def layer(self, k: int) -> np.ndarray:
        return self.dis[k]

    def pair_valid(self, k: int) -> np.ndarray:
        """Boolean mask of pairs defined at hop k."""
        nv = self.node_valid[k]
        return nv[:, None] & nv[None, :]

    def save(self, path) -> None:
        """Versioned binary cache: header, per-layer validity bitmap, then
        little-endian doubles for the valid upper-triangular entries."""
        mode_flag = MODES.index(self.mode)
        with open(path, "wb") as fh:
            fh.write(self.MAGIC)
            fh.write(struct.pack("<HBHIQ", 1, mode_flag, self.exponent, self.k_max, self.n_nodes))
            for k in range(self.k_max + 1):
                nv = self.node_valid[k]
                fh.write(np.packbits(nv).tobytes())
                ids = np.flatnonzero(nv)
                if ids.size >= 2:
                    sub = self.dis[k][np.ix_(ids, ids)]
                    iu = np.triu_indices(ids.size, k=1)
                    fh.write(sub[iu].astype("<f8").tobytes())

    @classmethod
    def load(cls, path) -> "LayerDistances":
        with open(path, "rb") as fh:
            magic = fh.read(8)
            if magic != cls.MAGIC:
                raise ValueError(f"not a distance cache (bad magic {magic!r})")
            version, mode_flag, exponent, k_max, n = struct.unpack("<HBHIQ", fh.read(17))
            if version != 1:
                raise ValueError(f"unsupported distance cache version {version}")
            dis = np.full((k_max + 1, n, n), np.nan)
            node_valid = np.zeros((k_max + 1, n), dtype=bool)
            nbytes = (n + 7) // 8
            for k in range(k_max + 1):
                bits = np.unpackbits(
                    np.frombuffer(fh.read(nbytes), dtype=np.uint8), count=n
                ).astype(bool)
                node_valid[k] = bits
                ids = np.flatnonzero(bits)
                if ids.size >= 2:
                    cnt = ids.size * (ids.size - 1) // 2
                    vals = np.frombuffer(fh.read(8 * cnt), dtype="<f8")
                    sub = np.zeros((ids.size, ids.size))
                    iu = np.triu_indices(ids.size, k=1)
                    sub[iu] = vals
                    sub = sub + sub.T
                    dis[k][np.ix_(ids, ids)] = sub
        return cls(dis, node_valid, MODES[mode_flag], exponent)


def _intern_atoms(g: Hypergraph, mode: str):
    """Map every node to a code over the distinct (possibly collapsed) HDs.

    Returns (codes per node, flattened size/freq/bias arrays + offsets).
    Codes follow the canonical descending-lexicographic atom order, so
    sorting signature entries by code gives the canonical signature order.
    """
    atoms: list[tuple[tuple[int, int], ...]] = []
    seen: dict[tuple[tuple[int, int], ...], int] = {}
    raw_codes = np.empty(g.n_nodes, dtype=np.int64)
    for v in range(g.n_nodes):
        hd = hyper_degree(g, v)
        if mode == "collapsed":
            atom = collapse_hyper_degree(hd)
        else:
            atom = tuple((s, 1) for s in hd)
        idx = seen.get(atom)
        if idx is None:
            idx = len(atoms)
            seen[atom] = idx
            atoms.append(atom)
        raw_codes[v] = idx
    order = sorted(range(len(atoms)), key=lambda i: atoms[i], reverse=True)
    rank = np.empty(len(atoms), dtype=np.int64)
    for r, i in enumerate(order):
        rank[i] = r
    codes = rank[raw_codes]
    atoms = [atoms[i] for i in order]

    sizes: list[float] = []
    freqs: list[float] = []
    biases: list[float] = []
    offs = np.zeros(len(atoms) + 1, dtype=np.int64)
    for i, atom in enumerate(atoms):
        mx = atom[0][0]
        for s, f in atom:
            sizes.append(float(s))
            freqs.append(float(f))
            biases.append(1.0 / (mx - s + 1))
        offs[i + 1] = len(sizes)
    return (
        codes,
        np.array(sizes),
        np.array(freqs),
        np.array(biases),
        offs,
    )


def cumulative_distances(
    g: Hypergraph,
    k_max: int = 5,
    mode: str = "collapsed",
    exponent: int = 2,
    threads: int | None = None,
) -> LayerDistances:
    """Compute dis^k(u, v) for all pairs and hops 0..k_max.

    dis^k = dis^(k-1) + D^k, with D^0 the 0-hop CHD distance and D^k the
    signature distance over hop-k neighborhoods; ``mode="uncollapsed"``
    switches the whole pipeline to the no-collapse MPD ablation. Pairs where
    either node has an empty hop-k neighborhood are NaN from hop k on.
    Deterministic regardless of thread count.
    """
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if exponent < 1:
        raise ValueError("exponent must be >= 1")
    if threads is not None:
        import numba

        numba.set_num_threads(min(max(1, threads), numba.config.NUMBA_NUM_THREADS))

    n = g.n_nodes
    codes, a_sizes, a_freqs, a_biases, a_offs = _intern_atoms(g, mode)
    n_atoms = a_offs.shape[0] - 1
    base = np.empty((n_atoms, n_atoms))
    _kernels.pairwise_atom_distances(a_sizes, a_freqs, a_biases, a_offs, exponent, base)

    dis = np.full((k_max + 1, n, n), np.nan)
    node_valid = np.zeros((k_max + 1, n), dtype=bool)
    node_valid[0] = True
    dis[0] = base[codes[:, None], codes[None, :]]

    if k_max == 0:
        return LayerDistances(dis, node_valid, mode, exponent)

    rings = [g.bfs_rings(v, k_max) for v in range(n)]
    for k in range(1, k_max + 1):
        sig_seen: dict[tuple, int] = {}
        sig_list: list[tuple] = []
        node_sig = np.full(n, -1, dtype=np.int64)
        for v in range(n):
            ring = rings[v][k - 1]
            if ring.size == 0:
                continue
            ring_codes = codes[ring]
            if mode == "collapsed":
                uniq, cnt = np.unique(ring_codes, return_counts=True)
                sig = (tuple(uniq.tolist()), tuple(cnt.tolist()))
            else:
                srt = np.sort(ring_codes)
                sig = (tuple(srt.tolist()), (1,) * srt.size)
            idx = sig_seen.get(sig)
            if idx is None:
                idx = len(sig_list)
                sig_seen[sig] = idx
                sig_list.append(sig)
            node_sig[v] = idx
        if not sig_list:
            break
        s_codes = np.concatenate([np.array(s[0], dtype=np.int64) for s in sig_list])
        s_freqs = np.concatenate([np.array(s[1], dtype=np.float64) for s in sig_list])
        s_offs = np.zeros(len(sig_list) + 1, dtype=np.int64)
        s_offs[1:] = np.cumsum([len(s[0]) for s in sig_list])
        sig_d = np.empty((len(sig_list), len(sig_list)))
        _kernels.pairwise_signature_distances(s_codes, s_freqs, s_offs, base, sig_d)

        valid = node_sig >= 0
        node_valid[k] = valid
        ids = np.flatnonzero(valid)
        dk_table = np.full((n, n), np.nan)
        sub = node_sig[ids]
        dk_table[np.ix_(ids, ids)] = sig_d[np.ix_(sub, sub)]
        dis[k] = dis[k - 1] + dk_table

    return LayerDistances(dis, node_valid, mode, exponent)
