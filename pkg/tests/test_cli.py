from __future__ import annotations

import numpy as np
import pytest

from hypers2v.cli import EMBED_DEFAULTS, build_parser, main
from hypers2v.hypergraph import load_hyperedge_list
from hypers2v.skipgram import EmbeddingMatrix
from hypers2v.toys import generate_toy

FAST = ["--walks", "4", "--walk-length", "12", "--epochs", "1", "--k-max", "2"]


@pytest.fixture()
def star_file(tmp_path):
    g, _ = generate_toy("star")
    p = tmp_path / "star.hyperedges"
    g.save(p)
    return p


def run(argv) -> int:
    return main([str(a) for a in argv])


def test_defaults_match_published_hyperparameters():
    assert EMBED_DEFAULTS["walks"] == 100
    assert EMBED_DEFAULTS["walk_length"] == 80
    assert EMBED_DEFAULTS["window"] == 5
    assert EMBED_DEFAULTS["k_max"] == 5
    assert EMBED_DEFAULTS["exponent"] == 2
    assert EMBED_DEFAULTS["stay_prob"] == 0.3
    assert EMBED_DEFAULTS["mode"] == "collapsed"


def test_embed_writes_embedding_and_manifest(tmp_path, star_file):
    out = tmp_path / "run"
    assert run(["embed", star_file, "-o", out, "--dim", "2", "--seed", "1"] + FAST) == 0
    emb = EmbeddingMatrix.load(out.with_suffix(".emb"))
    assert len(emb) == 8 and emb.dim == 2
    manifest = out.with_suffix(".manifest").read_text()
    assert "command=embed" in manifest
    assert "walks=4" in manifest
    assert "sha256.run.emb=" in manifest
    assert "input_sha256=" in manifest


def test_embed_deterministic_byte_identical(tmp_path, star_file):
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    args = ["embed", star_file, "--dim", "2", "--seed", "7", "--save-walks"] + FAST
    assert run(args + ["-o", out1]) == 0
    assert run(args + ["-o", out2]) == 0
    assert out1.with_suffix(".emb").read_bytes() == out2.with_suffix(".emb").read_bytes()
    assert out1.with_suffix(".walks").read_bytes() == out2.with_suffix(".walks").read_bytes()
    # manifests differ only in the file names they record
    m1 = out1.with_suffix(".manifest").read_text().replace("r1", "rX")
    m2 = out2.with_suffix(".manifest").read_text().replace("r2", "rX")
    assert m1 == m2


def test_embed_thread_count_invariant_corpus(tmp_path, star_file):
    out1, out2 = tmp_path / "t1", tmp_path / "t2"
    args = ["embed", star_file, "--dim", "2", "--seed", "3", "--save-walks"] + FAST
    assert run(args + ["-o", out1, "--threads", "1"]) == 0
    assert run(args + ["-o", out2, "--threads", "4"]) == 0
    assert out1.with_suffix(".walks").read_bytes() == out2.with_suffix(".walks").read_bytes()
    # deterministic mode keeps training single-worker: embeddings match too
    assert out1.with_suffix(".emb").read_bytes() == out2.with_suffix(".emb").read_bytes()


def test_embed_distance_cache_roundtrip(tmp_path, star_file):
    out1 = tmp_path / "c1"
    assert run(["embed", star_file, "-o", out1, "--dim", "2", "--save-distances"] + FAST) == 0
    out2 = tmp_path / "c2"
    assert run(["embed", star_file, "-o", out2, "--dim", "2",
                "--load-distances", out1.with_suffix(".dist")] + FAST) == 0
    assert out1.with_suffix(".emb").read_bytes() == out2.with_suffix(".emb").read_bytes()


def test_embed_xy_output(tmp_path, star_file):
    out = tmp_path / "xy"
    assert run(["embed", star_file, "-o", out, "--dim", "2", "--xy"] + FAST) == 0
    lines = out.with_suffix(".xy").read_text().splitlines()
    assert len(lines) == 8
    assert len(lines[0].split()) == 3


def test_embed_xy_requires_dim2(tmp_path, star_file):
    out = tmp_path / "xybad"
    assert run(["embed", star_file, "-o", out, "--dim", "3", "--xy"] + FAST) == 3
    assert not out.with_suffix(".emb").exists()  # partial outputs removed


def test_config_file_and_flag_precedence(tmp_path, star_file):
    cfg = tmp_path / "conf.txt"
    cfg.write_text("# comment\nwalks=6\ndim=4\n")
    out = tmp_path / "cfg"
    assert run(["embed", star_file, "-o", out, "--config", cfg, "--dim", "2",
                "--walk-length", "12", "--epochs", "1", "--k-max", "2"]) == 0
    manifest = out.with_suffix(".manifest").read_text()
    assert "walks=6" in manifest  # from config
    assert "dim=2" in manifest  # flag overrides config


def test_config_unknown_key_rejected(tmp_path, star_file):
    cfg = tmp_path / "conf.txt"
    cfg.write_text("bogus=1\n")
    assert run(["embed", star_file, "-o", tmp_path / "x", "--config", cfg] + FAST) == 3


def test_usage_error_exit_code():
    assert main(["embed"]) == 2  # missing required arguments
    assert main(["no-such-command"]) == 2


def test_data_error_exit_code(tmp_path):
    missing = tmp_path / "nope.hyperedges"
    assert run(["embed", missing, "-o", tmp_path / "x"] + FAST) == 3
    bad = tmp_path / "bad.hyperedges"
    bad.write_text("only_one_label\n")
    assert run(["embed", bad, "-o", tmp_path / "y"] + FAST) == 3


def test_export_expansion(tmp_path, star_file):
    out = tmp_path / "exp.edges"
    assert run(["export-expansion", star_file, "-o", out]) == 0
    lines = out.read_text().splitlines()
    g = load_hyperedge_list(star_file)
    assert len(lines) == len({(u, v) for u in range(g.n_nodes)
                              for v in g.adjacency()[u] if u < v})
    assert (tmp_path / "exp.edges.manifest").exists()


def test_toygen_outputs(tmp_path):
    out = tmp_path / "toy"
    assert run(["toygen", "twin", "-o", out]) == 0
    g = load_hyperedge_list(out.with_suffix(".hyperedges"))
    assert g.n_nodes == 16
    colors = out.with_suffix(".colors").read_text().splitlines()
    assert len(colors) == 16
    assert run(["toygen", "star", "-o", tmp_path / "toy2", "--set", "arms=5"]) == 0
    g2 = load_hyperedge_list((tmp_path / "toy2").with_suffix(".hyperedges"))
    assert g2.n_edges == 5


def test_cluster_command(tmp_path, star_file):
    out = tmp_path / "emb"
    assert run(["embed", star_file, "-o", out, "--dim", "2"] + FAST) == 0
    cl = tmp_path / "cl"
    assert run(["cluster", out.with_suffix(".emb"), "-o", cl, "--k", "2"]) == 0
    lines = cl.with_suffix(".clusters").read_text().splitlines()
    assert len(lines) == 8
    assert cl.with_suffix(".xy").exists()  # dim==2 side output
    assert set(int(line.split()[1]) for line in lines) <= {0, 1}


def test_cluster_k_too_large(tmp_path, star_file):
    out = tmp_path / "emb2"
    assert run(["embed", star_file, "-o", out, "--dim", "2"] + FAST) == 0
    assert run(["cluster", out.with_suffix(".emb"), "-o", tmp_path / "cl2",
                "--k", "50"]) == 3


def test_eval_size_reports(tmp_path):
    g, _ = generate_toy("mesh", rows=4, cols=4)  # 9 hyperedges
    gp = tmp_path / "mesh.hyperedges"
    g.save(gp)
    out = tmp_path / "memb"
    assert run(["embed", gp, "-o", out, "--dim", "3"] + FAST) == 0
    rep = tmp_path / "rep"
    assert run(["eval-size", out.with_suffix(".emb"), gp, "-o", rep,
                "--seeds", "0,1,2"]) == 0
    text = rep.with_suffix(".report.txt").read_text()
    assert text.count("task=size-regression") == 3
    assert "median_rmse=" in text
    assert "manifest=rep.manifest" in text
    csv_lines = rep.with_suffix(".report.csv").read_text().splitlines()
    assert len(csv_lines) == 4


def test_eval_link_single_class_error(tmp_path):
    # triangle: every pair exists, no negatives can be sampled -> explicit error
    gp = tmp_path / "tri.hyperedges"
    gp.write_text("a b\nb c\na c\n")
    out = tmp_path / "temb"
    assert run(["embed", gp, "-o", out, "--dim", "2"] + FAST) == 0
    assert run(["eval-link", out.with_suffix(".emb"), gp, "-o", tmp_path / "lr"]) == 3


def test_eval_rejects_missing_labels(tmp_path, star_file):
    out = tmp_path / "semb"
    assert run(["embed", star_file, "-o", out, "--dim", "2"] + FAST) == 0
    bigger = tmp_path / "bigger.hyperedges"
    bigger.write_text(load_hyperedge_list(star_file).labels[0] + " extra_node\n"
                      + (star_file).read_text())
    code = run(["eval-size", out.with_suffix(".emb"), bigger, "-o", tmp_path / "r2"])
    assert code == 3


def test_parser_surface():
    parser = build_parser()
    help_text = parser.format_help()
    for cmd in ("embed", "eval-size", "eval-link", "cluster", "toygen", "export-expansion"):
        assert cmd in help_text
