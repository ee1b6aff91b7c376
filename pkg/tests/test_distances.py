from __future__ import annotations

import math

import numpy as np
import pytest

from hypers2v.distances import (
    LayerDistances,
    chd_with_biases,
    cmpd,
    cncmpd,
    collapse_hyper_degree,
    cumulative_distances,
    d0,
    d0_uncollapsed,
    dk,
    dtw,
    expand_collapsed,
    hyper_degree,
    mpd,
    neighborhood_signature,
    positional_bias,
)
from hypers2v.hypergraph import Hypergraph
from hypers2v.toys import find_automorphism, generate_toy

from _oracles import cumulative_naive, dtw_bruteforce, random_hypergraph

# frozen oracle values (independent scalar evaluation of the formulas)
MPD_6_3 = 0.6487212707001282  # e^0.5 - 1
MPD_2_3 = 0.3956124250860895  # e^(1/3) - 1
CMPD_22_23 = 0.5440812385969376  # 3 * (e^(1/6) - 1)


def abs_diff(x, y):
    return abs(x - y)


# -- hyper-degrees -----------------------------------------------------------


def test_hyper_degree_descending(small_mixed_graph):
    g = small_mixed_graph
    assert hyper_degree(g, g.id_of("a")) == (3, 2, 2)
    assert hyper_degree(g, g.id_of("d")) == (4,)


def test_chd_worked_example():
    assert collapse_hyper_degree((4, 4, 3, 2, 2, 2)) == ((4, 2), (3, 1), (2, 3))


def test_chd_roundtrip_random():
    rng = np.random.default_rng(0)
    for _ in range(200):
        hd = tuple(sorted(rng.integers(2, 12, size=rng.integers(1, 15)), reverse=True))
        chd = collapse_hyper_degree(hd)
        assert expand_collapsed(chd) == hd
        sizes = [s for s, _ in chd]
        assert sizes == sorted(set(sizes), reverse=True)
        assert all(f >= 1 for _, f in chd)


def test_simple_network_degeneration_chd():
    # a node of degree d in a simple network collapses to [(2, d)]
    assert collapse_hyper_degree((2,) * 7) == ((2, 7),)


# -- positional bias ---------------------------------------------------------


def test_bias_largest_is_one():
    sizes = list(range(11, 1, -1))
    assert positional_bias(sizes, 11) == 1.0
    assert positional_bias(sizes, 2) == pytest.approx(1.0 / 10)
    assert positional_bias([5], 5) == 1.0


def test_bias_monotone_in_size():
    sizes = [9, 7, 4, 2]
    biases = [positional_bias(sizes, s) for s in sizes]
    assert biases == sorted(biases, reverse=True)


# -- element distances -------------------------------------------------------


def test_mpd_identical_zero():
    assert mpd(4, 0.5, 4, 0.5) == 0.0


def test_mpd_frozen_values():
    assert abs_diff(mpd(6, 1.0, 3, 1.0), MPD_6_3) < 1e-12
    assert abs_diff(mpd(2, 1.0, 3, 1.0), MPD_2_3) < 1e-12


def test_mpd_monotone_in_size_ratio():
    prev = -1.0
    for s in range(3, 12):
        val = mpd(s, 1.0, 2, 0.5)
        assert val > prev
        prev = val


def test_mpd_equals_cmpd_with_unit_freqs():
    rng = np.random.default_rng(5)
    for _ in range(100):
        s_u, s_v = rng.integers(2, 15, size=2)
        b_u, b_v = rng.random(2)
        assert mpd(int(s_u), b_u, int(s_v), b_v) == cmpd((int(s_u), 1, b_u), (int(s_v), 1, b_v))


def test_cmpd_identical_zero_and_symmetry():
    assert cmpd((3, 2, 0.5), (3, 2, 0.5)) == 0.0
    rng = np.random.default_rng(6)
    for _ in range(100):
        e1 = (int(rng.integers(2, 9)), int(rng.integers(1, 5)), float(rng.random()))
        e2 = (int(rng.integers(2, 9)), int(rng.integers(1, 5)), float(rng.random()))
        assert cmpd(e1, e2) == cmpd(e2, e1)
        assert cmpd(e1, e2) >= 0.0


def test_cmpd_duplicate_fix_worked_example():
    # HD [2,2] vs [2,2,2]: plain MPD sees nothing, CMPD is strictly positive
    value = cmpd((2, 2, 1.0), (2, 3, 1.0))
    assert abs_diff(value, CMPD_22_23) < 1e-12
    assert value > 0.0
    assert mpd(2, 1.0, 2, 1.0) == 0.0


def test_cmpd_rejects_bad_freq():
    with pytest.raises(ValueError):
        cmpd((2, 0, 1.0), (2, 1, 1.0))


# -- dtw ----------------------------------------------------------------------


def test_dtw_identity_zero():
    a = [(3, 1, 1.0), (2, 2, 0.5)]
    assert dtw(cmpd, a, a) == 0.0


def test_dtw_single_cell():
    assert abs_diff(dtw(cmpd, [(2, 2, 1.0)], [(2, 3, 1.0)]), CMPD_22_23) < 1e-12


def test_dtw_empty_raises():
    with pytest.raises(ValueError):
        dtw(cmpd, [], [(2, 1, 1.0)])


def test_dtw_matches_bruteforce_enumeration():
    rng = np.random.default_rng(11)
    scalar = lambda x, y: abs(x - y)
    for _ in range(300):
        a = rng.random(int(rng.integers(1, 7))).tolist()
        b = rng.random(int(rng.integers(1, 7))).tolist()
        assert abs_diff(dtw(scalar, a, b), dtw_bruteforce(scalar, a, b)) < 1e-12


def test_dtw_upper_bound_diagonal_padding():
    # cost of aligning the diagonal then padding the tail never beats the DP
    rng = np.random.default_rng(12)
    scalar = lambda x, y: abs(x - y)
    for _ in range(200):
        a = rng.random(int(rng.integers(1, 8))).tolist()
        b = rng.random(int(rng.integers(1, 8))).tolist()
        if len(a) > len(b):
            a, b = b, a
        ub = sum(scalar(a[i], b[i]) for i in range(len(a)))
        ub += sum(scalar(a[-1], b[j]) for j in range(len(a), len(b)))
        assert dtw(scalar, a, b) <= ub + 1e-12


# -- d0 / cncmpd / dk ---------------------------------------------------------


def test_d0_worked_example():
    val = d0(((2, 2),), ((2, 3),))
    assert abs_diff(val, CMPD_22_23) < 1e-12
    assert val > 0.0
    assert d0_uncollapsed((2, 2), (2, 2, 2)) == 0.0


def test_d0_identical_zero():
    chd = ((5, 2), (3, 1), (2, 4))
    assert d0(chd, chd) == 0.0


def test_d0_simple_network_closed_form():
    # degeneration: d0([(2,du)], [(2,dv)]) = max(du,dv) * (e^{|1/du - 1/dv|} - 1)
    for du in range(1, 9):
        for dv in range(1, 9):
            got = d0(((2, du),), ((2, dv),))
            want = max(du, dv) * (math.exp(abs(1.0 / du - 1.0 / dv)) - 1.0)
            assert abs_diff(got, want) < 1e-12
            assert (got == 0.0) == (du == dv)


def test_d0_used_per_node_biases():
    # [(4,1),(2,1)] vs [(2,1)]: biases 1 and 1/3 on the left, 1 on the right
    left = chd_with_biases(((4, 1), (2, 1)))
    assert left[0][2] == 1.0 and left[1][2] == pytest.approx(1.0 / 3)
    val = d0(((4, 1), (2, 1)), ((2, 1),))
    by_hand = dtw(cmpd, list(left), [(2, 1, 1.0)])
    assert val == by_hand


def test_cncmpd_composition():
    a = (((2, 2),), 1)
    b = (((2, 3),), 2)
    assert abs_diff(cncmpd(a, b), 2 * CMPD_22_23) < 1e-12
    assert cncmpd(a, b) == cncmpd(b, a)
    assert cncmpd((((3, 1),), 4), (((3, 1),), 9)) == 0.0


def test_dk_star_leaves_equal():
    g, _ = generate_toy("star", core=1, arms=3, leaves_per_arm=2)
    l1, l2 = g.id_of("n1"), g.id_of("n3")
    sig1 = neighborhood_signature(g, l1, 1)
    sig2 = neighborhood_signature(g, l2, 1)
    assert sig1 == sig2
    assert dk(sig1, sig2) == 0.0


def test_dk_singleton_signatures_reduce_to_d0():
    a = ((4, 2),)
    b = ((3, 1), (2, 2))
    assert dk(((a, 1),), ((b, 1),)) == d0(a, b)


def test_dk_empty_signature_nan():
    assert math.isnan(dk((), ((((2, 1),), 1),)))


def test_neighborhood_signature_canonical(small_mixed_graph):
    g = small_mixed_graph
    for v in range(g.n_nodes):
        sig = neighborhood_signature(g, v, 1)
        chds = [c for c, _ in sig]
        assert chds == sorted(chds, reverse=True)
        assert sum(f for _, f in sig) == len(g.k_hop_neighbors(v, 1))


# -- cumulative_distances ------------------------------------------------------


def test_cumulative_matches_naive_composition():
    rng = np.random.default_rng(21)
    for mode in ("collapsed", "uncollapsed"):
        for _ in range(6):
            g = random_hypergraph(rng, n_nodes=int(rng.integers(5, 11)), n_extra_edges=6)
            k_max = 3
            fast = cumulative_distances(g, k_max, mode=mode).dis
            naive = cumulative_naive(g, k_max, mode=mode)
            assert fast.shape == naive.shape
            both = np.isfinite(fast) & np.isfinite(naive)
            assert np.array_equal(np.isfinite(fast), np.isfinite(naive))
            assert np.allclose(fast[both], naive[both], atol=1e-12, rtol=1e-12)


def test_cumulative_symmetry_and_zero_diagonal():
    rng = np.random.default_rng(22)
    g = random_hypergraph(rng, n_nodes=12)
    ld = cumulative_distances(g, 4)
    for k in range(5):
        layer = ld.layer(k)
        mask = np.isfinite(layer)
        assert np.array_equal(mask, mask.T)
        assert np.allclose(layer[mask], layer.T[mask])
        diag = np.diag(layer)
        assert np.all((diag[np.isfinite(diag)] == 0.0))


def test_cumulative_monotone_in_k():
    rng = np.random.default_rng(23)
    g = random_hypergraph(rng, n_nodes=12)
    ld = cumulative_distances(g, 4)
    for k in range(1, 5):
        prev, cur = ld.layer(k - 1), ld.layer(k)
        both = np.isfinite(prev) & np.isfinite(cur)
        assert np.all(cur[both] >= prev[both] - 1e-15)


def test_cumulative_validity_is_ring_nonempty():
    g, _ = generate_toy("star", core=1, arms=3, leaves_per_arm=2)  # diameter 2
    ld = cumulative_distances(g, 5)
    hub = 0
    assert ld.node_valid[1, hub] and not ld.node_valid[2, hub]
    leaf = 1
    assert ld.node_valid[2, leaf] and not ld.node_valid[3, leaf]
    # hub-leaf pair defined at k<=1 only
    assert np.isfinite(ld.dis[1, hub, leaf])
    assert np.isnan(ld.dis[2, hub, leaf])


def test_cumulative_automorphic_pairs_zero_on_toys():
    for topo in ("star", "circle", "mesh", "tower", "twin"):
        g, colors = generate_toy(topo)
        ld = cumulative_distances(g, 5)
        for u in range(g.n_nodes):
            for v in range(u + 1, g.n_nodes):
                vals = ld.dis[:, u, v]
                vals = vals[np.isfinite(vals)]
                if colors[u] == colors[v]:
                    assert vals.size and np.all(vals == 0.0)
                else:
                    assert vals[-1] > 0.0


def test_cumulative_twin_cross_component_zero():
    g, colors = generate_toy("twin")
    ld = cumulative_distances(g, 5)
    mirror = {g.id_of(f"a{i}"): g.id_of(f"b{i}") for i in range(g.n_nodes // 2)}
    for u, v in mirror.items():
        vals = ld.dis[:, u, v]
        assert np.all(vals[np.isfinite(vals)] == 0.0)


def test_cumulative_relabel_invariance():
    # recompute under an automorphic relabeling; tables must match exactly
    g, _ = generate_toy("mesh")
    sigma = find_automorphism(g, forced={0: g.n_nodes - 1})
    assert sigma is not None
    relabeled = Hypergraph(
        [[sigma[v] for v in e] for e in g.hyperedges], g.labels
    )
    a = cumulative_distances(g, 3).dis
    b = cumulative_distances(relabeled, 3).dis
    perm = np.array(sigma)
    for k in range(4):
        bk = b[k][np.ix_(perm, perm)]
        both = np.isfinite(a[k]) & np.isfinite(bk)
        assert np.array_equal(np.isfinite(a[k]), np.isfinite(bk))
        assert np.array_equal(a[k][both], bk[both])


def test_cumulative_uncollapsed_flaw_reproduced():
    # degree-2 vs degree-3 nodes in a simple network: uncollapsed 0-hop is 0
    g = Hypergraph.from_edges(
        [["u", "x"], ["u", "y"], ["v", "p"], ["v", "q"], ["v", "r"], ["x", "p"]]
    )
    u, v = g.id_of("u"), g.id_of("v")
    plain = cumulative_distances(g, 0, mode="uncollapsed").dis[0, u, v]
    fixed = cumulative_distances(g, 0, mode="collapsed").dis[0, u, v]
    assert plain == 0.0
    assert abs_diff(fixed, CMPD_22_23) < 1e-12


def test_cumulative_k_max_zero_and_errors():
    g = Hypergraph.from_edges([["a", "b"]])
    ld = cumulative_distances(g, 0)
    assert ld.k_max == 0 and ld.dis.shape == (1, 2, 2)
    with pytest.raises(ValueError):
        cumulative_distances(g, -1)
    with pytest.raises(ValueError):
        cumulative_distances(g, 1, mode="bogus")


def test_layerdistances_cache_roundtrip(tmp_path):
    rng = np.random.default_rng(31)
    g = random_hypergraph(rng, n_nodes=11)
    ld = cumulative_distances(g, 3)
    path = tmp_path / "cache.dist"
    ld.save(path)
    back = LayerDistances.load(path)
    assert back.k_max == ld.k_max and back.n_nodes == ld.n_nodes
    assert back.mode == ld.mode and back.exponent == ld.exponent
    assert np.array_equal(back.node_valid, ld.node_valid)
    both = np.isfinite(ld.dis)
    assert np.array_equal(both, np.isfinite(back.dis))
    assert np.array_equal(ld.dis[both], back.dis[both])


def test_layerdistances_cache_bad_magic(tmp_path):
    p = tmp_path / "junk.dist"
    p.write_bytes(b"NOTADIST" + b"\x00" * 32)
    with pytest.raises(ValueError, match="magic"):
        LayerDistances.load(p)


def test_exponent_parameter_changes_distance():
    v1 = d0(((5, 1),), ((3, 2),), n=1)
    v2 = d0(((5, 1),), ((3, 2),), n=2)
    v3 = d0(((5, 1),), ((3, 2),), n=3)
    assert v1 > v2 > v3  # higher exponent relaxes the combined distance
    # a: one size-5 edge; b: two size-3 edges -> both distance terms non-zero
    g = Hypergraph.from_edges(
        [["a", "p", "q", "r", "s"], ["b", "x", "y"], ["b", "y", "z"]]
    )
    a, b = g.id_of("a"), g.id_of("b")
    d_n1 = cumulative_distances(g, 0, exponent=1).dis[0, a, b]
    d_n2 = cumulative_distances(g, 0, exponent=2).dis[0, a, b]
    assert d_n1 > d_n2
