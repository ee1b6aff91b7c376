"""Numba kernels for the quadratic pairwise-distance tables.

The pure-Python operations in :mod:`hypers2v.distances` define the semantics;
these kernels are the throughput path used by ``cumulative_distances``. They
work on interned, flattened representations: every distinct collapsed
hyper-degree ("atom") is a slice of shared size/freq/bias arrays, and every
distinct hop-k neighborhood signature is a slice of shared code/freq arrays
referencing atoms. Tests assert the kernels agree with the Python reference
composition to 1e-12.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit, prange


@njit(cache=True, inline="always")
def _cmpd_cell(s_u, f_u, b_u, s_v, f_v, b_v, n_exp):
    # magnitude-position distance between two (size, freq, bias) entries;
    # frequency 1 everywhere recovers the uncollapsed variant
    mn = s_u if s_u < s_v else s_v
    mx = s_u if s_u > s_v else s_v
    mag = 1.0 - mn / mx
    pos = abs(b_u / f_u - b_v / f_v)
    if n_exp == 2:
        r = math.sqrt(mag * mag + pos * pos)
    elif n_exp == 1:
        r = mag + pos
    else:
        r = (mag ** n_exp + pos ** n_exp) ** (1.0 / n_exp)
    fmax = f_u if f_u > f_v else f_v
    return fmax * (math.exp(r) - 1.0)


@njit(cache=True)
def _dtw_atoms(sizes, freqs, biases, a0, a1, b0, b1, n_exp):
    """DTW cost between atom slices [a0:a1) and [b0:b1) under the entry distance."""
    n = a1 - a0
    m = b1 - b0
    prev = np.empty(m, dtype=np.float64)
    cur = np.empty(m, dtype=np.float64)
    prev[0] = _cmpd_cell(
        sizes[a0], freqs[a0], biases[a0], sizes[b0], freqs[b0], biases[b0], n_exp
    )
    for j in range(1, m):
        prev[j] = prev[j - 1] + _cmpd_cell(
            sizes[a0], freqs[a0], biases[a0],
            sizes[b0 + j], freqs[b0 + j], biases[b0 + j], n_exp,
        )
    for i in range(1, n):
        su = sizes[a0 + i]
        fu = freqs[a0 + i]
        bu = biases[a0 + i]
        cur[0] = prev[0] + _cmpd_cell(su, fu, bu, sizes[b0], freqs[b0], biases[b0], n_exp)
        for j in range(1, m):
            best = prev[j]
            if cur[j - 1] < best:
                best = cur[j - 1]
            if prev[j - 1] < best:
                best = prev[j - 1]
            cur[j] = best + _cmpd_cell(
                su, fu, bu, sizes[b0 + j], freqs[b0 + j], biases[b0 + j], n_exp
            )
        tmp = prev
        prev = cur
        cur = tmp
    return prev[m - 1]


@njit(cache=True, parallel=True)
def pairwise_atom_distances(sizes, freqs, biases, offs, n_exp, out):
    """Fill the symmetric table of 0-hop distances between all distinct atoms."""
    n_atoms = offs.shape[0] - 1
    for p in prange(n_atoms):
        out[p, p] = 0.0
        for q in range(p + 1, n_atoms):
            v = _dtw_atoms(sizes, freqs, biases, offs[p], offs[p + 1], offs[q], offs[q + 1], n_exp)
            out[p, q] = v
            out[q, p] = v


@njit(cache=True)
def _dtw_signature(codes, freqs, a0, a1, b0, b1, base):
    """DTW cost between signature slices; cell cost = max(f_i, f_j) * base[c_i, c_j]."""
    n = a1 - a0
    m = b1 - b0
    prev = np.empty(m, dtype=np.float64)
    cur = np.empty(m, dtype=np.float64)
    ca = codes[a0]
    fa = freqs[a0]
    fm = fa if fa > freqs[b0] else freqs[b0]
    prev[0] = fm * base[ca, codes[b0]]
    for j in range(1, m):
        fb = freqs[b0 + j]
        fm = fa if fa > fb else fb
        prev[j] = prev[j - 1] + fm * base[ca, codes[b0 + j]]
    for i in range(1, n):
        ca = codes[a0 + i]
        fa = freqs[a0 + i]
        fb = freqs[b0]
        fm = fa if fa > fb else fb
        cur[0] = prev[0] + fm * base[ca, codes[b0]]
        for j in range(1, m):
            best = prev[j]
            if cur[j - 1] < best:
                best = cur[j - 1]
            if prev[j - 1] < best:
                best = prev[j - 1]
            fb = freqs[b0 + j]
            fm = fa if fa > fb else fb
            cur[j] = best + fm * base[ca, codes[b0 + j]]
        tmp = prev
        prev = cur
        cur = tmp
    return prev[m - 1]


@njit(cache=True, parallel=True)
def pairwise_signature_distances(codes, freqs, offs, base, out):
    """Fill the symmetric table of hop-k distances between all distinct signatures."""
    n_sigs = offs.shape[0] - 1
    for p in prange(n_sigs):
        out[p, p] = 0.0
        for q in range(p + 1, n_sigs):
            v = _dtw_signature(codes, freqs, offs[p], offs[p + 1], offs[q], offs[q + 1], base)
            out[p, q] = v
            out[q, p] = v
