"""Command-line interface: embed, eval-size, eval-link, cluster, toygen,
export-expansion.

Every command writes a ``<out>.manifest`` recording the effective parameters,
the input digest, and the sha256 of each output; report files reference the
manifest by name, and formats without a metadata channel (embedding, corpus)
share the manifest's path stem. Exit codes: 0 success, 2 usage, 3 data error,
4 internal error.
"""

from __future__ import annotations

import argparse
import hashlib
import logging
import statistics
import sys
import traceback
from pathlib import Path

import numpy as np

from . import __version__
from .distances import LayerDistances, cumulative_distances
from .estimator import HyperS2V
from .evaluation import (
    EvalReport,
    hyperedge_prediction,
    kmeans_cluster,
    sample_negative_hyperedges,
    size_regression,
    write_reports_csv,
)
from .hypergraph import HyperedgeFileError, load_hyperedge_list, save_expansion
from .layers import build_multilayer
from .skipgram import EmbeddingMatrix, train_skipgram
from .toys import PRESETS, TOPOLOGIES, generate_toy, save_colors
from .walks import generate_walks

logger = logging.getLogger("hypers2v")

# flag defaults; the walk/window/layer values are the published defaults
EMBED_DEFAULTS = {
    "dim": 64,
    "k_max": 5,
    "walks": 100,
    "walk_length": 80,
    "window": 5,
    "stay_prob": 0.3,
    "exponent": 2,
    "mode": "collapsed",
    "epochs": 5,
    "negative": 5,
    "lr": 0.025,
    "min_lr": 1e-4,
    "seed": 0,
    "threads": 1,
    "deterministic": True,
}


class StageError(Exception):
    """Wraps a pipeline failure with the stage that produced it."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}': {cause}")
        self.stage = stage
        self.cause = cause


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _read_config(path: str | None) -> dict:
    if not path:
        return {}
    cfg = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"config line {lineno}: expected key=value, got {line!r}")
            key, value = line.split("=", 1)
            cfg[key.strip()] = value.strip()
    return cfg


def _coerce(value: str, like) -> object:
    if isinstance(like, bool):
        low = value.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"expected boolean, got {value!r}")
    return type(like)(value)


def _resolve_params(args, defaults: dict) -> dict:
    """Flags override config-file values, which override defaults."""
    cfg = _read_config(getattr(args, "config", None))
    unknown = set(cfg) - set(defaults)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    out = {}
    for key, default in defaults.items():
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            out[key] = flag_value
        elif key in cfg:
            out[key] = _coerce(cfg[key], default)
        else:
            out[key] = default
    return out


def _write_manifest(path: Path, entries: dict, outputs: list[Path]) -> None:
    entries = dict(entries)
    entries["package"] = f"hypers2v {__version__}"
    entries["outputs"] = ",".join(p.name for p in outputs)
    for p in outputs:
        entries[f"sha256.{p.name}"] = _sha256(p)
    with open(path, "w", encoding="utf-8") as fh:
        for key in sorted(entries):
            fh.write(f"{key}={entries[key]}\n")


class _OutputTracker:
    """Collects written paths so a failed run leaves no partial outputs."""

    def __init__(self):
        self.paths: list[Path] = []

    def add(self, path) -> Path:
        p = Path(path)
        self.paths.append(p)
        return p

    def cleanup(self) -> None:
        for p in self.paths:
            try:
                p.unlink(missing_ok=True)
            except OSError:  # pragma: no cover
                pass


# -- commands ----------------------------------------------------------------


def _cmd_embed(args) -> int:
    params = _resolve_params(args, EMBED_DEFAULTS)
    out_prefix = Path(args.out)
    tracker = _OutputTracker()
    stage = "load-input"
    try:
        g = load_hyperedge_list(args.input, dedupe=not args.no_dedupe)
        workers = max(1, int(params["threads"]))
        train_workers = 1 if params["deterministic"] else workers

        stage = "distances"
        if args.load_distances:
            ld = LayerDistances.load(args.load_distances)
            if ld.n_nodes != g.n_nodes:
                raise ValueError(
                    f"distance cache holds {ld.n_nodes} nodes, graph has {g.n_nodes}"
                )
        else:
            ld = cumulative_distances(
                g, k_max=params["k_max"], mode=params["mode"],
                exponent=params["exponent"], threads=workers,
            )
        stage = "multilayer"
        mg = build_multilayer(ld)
        stage = "walks"
        corpus = generate_walks(
            mg, walks_per_node=params["walks"], walk_length=params["walk_length"],
            stay_prob=params["stay_prob"], seed=params["seed"], threads=workers,
        )
        stage = "skipgram"
        vectors, _ = train_skipgram(
            corpus.walks, g.n_nodes, dim=params["dim"], window=params["window"],
            epochs=params["epochs"], negative=params["negative"], lr=params["lr"],
            min_lr=params["min_lr"], seed=params["seed"], workers=train_workers,
        )
        emb = EmbeddingMatrix(vectors, g.labels)

        stage = "write-outputs"
        outputs = []
        emb_path = tracker.add(out_prefix.with_suffix(".emb"))
        emb.save(emb_path)
        outputs.append(emb_path)
        if args.save_walks:
            walks_path = tracker.add(out_prefix.with_suffix(".walks"))
            corpus.save(walks_path, g.labels)
            outputs.append(walks_path)
        if args.save_distances:
            dist_path = tracker.add(out_prefix.with_suffix(".dist"))
            ld.save(dist_path)
            outputs.append(dist_path)
        if args.xy:
            if params["dim"] != 2:
                raise ValueError("--xy requires dim=2")
            xy_path = tracker.add(out_prefix.with_suffix(".xy"))
            with open(xy_path, "w", encoding="utf-8") as fh:
                for lab, row in zip(g.labels, vectors):
                    fh.write(f"{lab} {row[0]:.8g} {row[1]:.8g}\n")
            outputs.append(xy_path)

        manifest = tracker.add(out_prefix.with_suffix(".manifest"))
        entries = {"command": "embed", "input": str(args.input),
                   "input_sha256": _sha256(Path(args.input))}
        entries.update({k: params[k] for k in EMBED_DEFAULTS})
        _write_manifest(manifest, entries, outputs)
    except Exception as exc:
        tracker.cleanup()
        raise StageError(stage, exc) from exc
    print(f"wrote {out_prefix.with_suffix('.emb')} ({g.n_nodes} nodes, dim={params['dim']})")
    return 0


def _load_eval_inputs(emb_path, graph_path):
    emb = EmbeddingMatrix.load(emb_path)
    g = load_hyperedge_list(graph_path)
    missing = [lab for lab in g.labels if not emb.has_label(lab)]
    if missing:
        raise ValueError(f"embedding is missing {len(missing)} node labels: "
                         f"{missing[:10]}{'...' if len(missing) > 10 else ''}")
    vectors = np.array([emb.vector(lab) for lab in g.labels])
    return emb, g, vectors


def _emit_reports(args, reports: list[EvalReport], manifest_entries: dict) -> None:
    out_prefix = Path(args.out)
    tracker = _OutputTracker()
    try:
        txt_path = tracker.add(out_prefix.with_suffix(".report.txt"))
        manifest = out_prefix.with_suffix(".manifest")
        values = [r.metric_value for r in reports]
        with open(txt_path, "w", encoding="utf-8") as fh:
            for r in reports:
                r.params["manifest"] = manifest.name
                fh.write(r.to_text() + "\n")
            fh.write(f"median_{reports[0].metric_name}={statistics.median(values):.6f}\n")
        csv_path = tracker.add(out_prefix.with_suffix(".report.csv"))
        write_reports_csv(csv_path, reports)
        tracker.add(manifest)
        _write_manifest(manifest, manifest_entries, [txt_path, csv_path])
    except Exception:
        tracker.cleanup()
        raise
    for r in reports:
        print(f"seed={r.seed} {r.metric_name}={r.metric_value:.6f}")
    print(f"median_{reports[0].metric_name}={statistics.median(values):.6f}")


def _parse_seeds(spec: str) -> list[int]:
    return [int(tok) for tok in spec.replace(",", " ").split()]


def _cmd_eval_size(args) -> int:
    stage = "load-input"
    try:
        _, g, vectors = _load_eval_inputs(args.embedding, args.graph)
        stage = "evaluate"
        reports = [
            size_regression(vectors, g, train_frac=args.train_frac,
                            ridge_lambda=args.ridge_lambda, seed=s)
            for s in _parse_seeds(args.seeds)
        ]
        stage = "write-outputs"
        _emit_reports(args, reports, {
            "command": "eval-size", "embedding": str(args.embedding),
            "graph": str(args.graph), "train_frac": args.train_frac,
            "ridge_lambda": args.ridge_lambda, "seeds": args.seeds,
            "input_sha256": _sha256(Path(args.graph)),
        })
    except StageError:
        raise
    except Exception as exc:
        raise StageError(stage, exc) from exc
    return 0


def _cmd_eval_link(args) -> int:
    stage = "load-input"
    try:
        _, g, vectors = _load_eval_inputs(args.embedding, args.graph)
        stage = "evaluate"
        reports = []
        for s in _parse_seeds(args.seeds):
            negatives = sample_negative_hyperedges(g, seed=s)
            reports.append(hyperedge_prediction(
                vectors, g, negatives, train_frac=args.train_frac, seed=s,
                l2=args.l2, lr=args.lr, epochs=args.epochs))
        stage = "write-outputs"
        _emit_reports(args, reports, {
            "command": "eval-link", "embedding": str(args.embedding),
            "graph": str(args.graph), "train_frac": args.train_frac,
            "l2": args.l2, "lr": args.lr, "epochs": args.epochs,
            "seeds": args.seeds, "input_sha256": _sha256(Path(args.graph)),
        })
    except StageError:
        raise
    except Exception as exc:
        raise StageError(stage, exc) from exc
    return 0


def _cmd_cluster(args) -> int:
    stage = "load-input"
    tracker = _OutputTracker()
    try:
        emb = EmbeddingMatrix.load(args.embedding)
        stage = "cluster"
        assignments = kmeans_cluster(emb.vectors, k=args.k, seed=args.seed)
        stage = "write-outputs"
        out_prefix = Path(args.out)
        outputs = []
        cl_path = tracker.add(out_prefix.with_suffix(".clusters"))
        with open(cl_path, "w", encoding="utf-8") as fh:
            for lab, c in zip(emb.labels, assignments):
                fh.write(f"{lab} {int(c)}\n")
        outputs.append(cl_path)
        if emb.dim == 2:
            xy_path = tracker.add(out_prefix.with_suffix(".xy"))
            with open(xy_path, "w", encoding="utf-8") as fh:
                for lab, row, c in zip(emb.labels, emb.vectors, assignments):
                    fh.write(f"{lab} {row[0]:.8g} {row[1]:.8g} {int(c)}\n")
            outputs.append(xy_path)
        manifest = tracker.add(out_prefix.with_suffix(".manifest"))
        _write_manifest(manifest, {
            "command": "cluster", "embedding": str(args.embedding),
            "k": args.k, "seed": args.seed,
            "input_sha256": _sha256(Path(args.embedding)),
        }, outputs)
    except Exception as exc:
        tracker.cleanup()
        raise StageError(stage, exc) from exc
    counts = np.bincount(assignments, minlength=args.k)
    print(f"wrote {len(assignments)} assignments over {args.k} clusters "
          f"(sizes {counts.tolist()})")
    return 0


def _cmd_toygen(args) -> int:
    stage = "generate"
    tracker = _OutputTracker()
    try:
        overrides = {}
        for spec in args.set or []:
            key, _, value = spec.partition("=")
            if not value:
                raise ValueError(f"--set expects key=value, got {spec!r}")
            overrides[key] = int(value)
        g, colors = generate_toy(args.topology, seed=args.seed, **overrides)
        stage = "write-outputs"
        out_prefix = Path(args.out)
        edges_path = tracker.add(out_prefix.with_suffix(".hyperedges"))
        g.save(edges_path)
        colors_path = tracker.add(out_prefix.with_suffix(".colors"))
        save_colors(colors_path, g.labels, colors)
        manifest = tracker.add(out_prefix.with_suffix(".manifest"))
        params = dict(PRESETS[args.topology])
        params.update(overrides)
        _write_manifest(manifest, {
            "command": "toygen", "topology": args.topology, "seed": args.seed,
            **{f"param.{k}": v for k, v in params.items()},
        }, [edges_path, colors_path])
    except Exception as exc:
        tracker.cleanup()
        raise StageError(stage, exc) from exc
    print(f"wrote {args.topology}: {g.n_nodes} nodes, {g.n_edges} hyperedges, "
          f"{int(colors.max()) + 1} color classes")
    return 0


def _cmd_export_expansion(args) -> int:
    stage = "load-input"
    tracker = _OutputTracker()
    try:
        g = load_hyperedge_list(args.input)
        stage = "write-outputs"
        out = tracker.add(Path(args.out))
        save_expansion(g, out)
        manifest = tracker.add(Path(str(args.out) + ".manifest"))
        _write_manifest(manifest, {
            "command": "export-expansion", "input": str(args.input),
            "input_sha256": _sha256(Path(args.input)),
        }, [out])
    except Exception as exc:
        tracker.cleanup()
        raise StageError(stage, exc) from exc
    print(f"wrote clique expansion of {g.n_nodes} nodes to {args.out}")
    return 0


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypers2v",
        description="Structure-based node embeddings for hyper networks.",
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed", help="run the full embedding pipeline")
    p.add_argument("input", help="hyperedge-list file")
    p.add_argument("--out", "-o", required=True, help="output path prefix")
    p.add_argument("--config", help="key=value config file (flags override it)")
    p.add_argument("--dim", type=int, help="embedding dimension (default 64; use 2 for plots)")
    p.add_argument("--k-max", type=int, dest="k_max", help="maximum layer (default 5)")
    p.add_argument("--walks", type=int, help="walks per node (default 100)")
    p.add_argument("--walk-length", type=int, dest="walk_length",
                   help="tokens per walk (default 80)")
    p.add_argument("--window", type=int, help="skip-gram window (default 5)")
    p.add_argument("--stay-prob", "--q", type=float, dest="stay_prob",
                   help="probability of an in-layer move; the paper leaves q "
                        "unstated, default 0.3")
    p.add_argument("--exponent", "--n", type=int, dest="exponent",
                   help="distance exponent (default 2)")
    p.add_argument("--mode", choices=("collapsed", "uncollapsed"),
                   help="distance variant (default collapsed)")
    p.add_argument("--epochs", type=int, help="skip-gram epochs (default 5)")
    p.add_argument("--negative", type=int, help="negative samples (default 5)")
    p.add_argument("--lr", type=float, help="initial learning rate (default 0.025)")
    p.add_argument("--min-lr", type=float, dest="min_lr",
                   help="final learning rate (default 1e-4)")
    p.add_argument("--seed", type=int, help="RNG seed (default 0)")
    p.add_argument("--threads", type=int, help="worker threads (default 1)")
    p.add_argument("--deterministic", dest="deterministic", action="store_true",
                   default=None, help="single-worker training (default)")
    p.add_argument("--no-deterministic", dest="deterministic", action="store_false",
                   default=None, help="threaded lock-free training; layer changes "
                   "emit no token either way")
    p.add_argument("--no-dedupe", action="store_true",
                   help="keep duplicate hyperedges on load")
    p.add_argument("--save-walks", action="store_true", help="also write <out>.walks")
    p.add_argument("--save-distances", action="store_true", help="also write <out>.dist")
    p.add_argument("--load-distances", help="reuse a distance cache file")
    p.add_argument("--xy", action="store_true", help="write 'label x y' (dim=2 only)")
    p.set_defaults(func=_cmd_embed)

    p = sub.add_parser("eval-size", help="hyperedge size regression (RMSE)")
    p.add_argument("embedding")
    p.add_argument("graph")
    p.add_argument("--out", "-o", required=True)
    p.add_argument("--seeds", default="0,1,2,3,4", help="comma-separated split seeds")
    p.add_argument("--train-frac", type=float, default=0.8, dest="train_frac")
    p.add_argument("--ridge-lambda", type=float, default=1.0, dest="ridge_lambda")
    p.set_defaults(func=_cmd_eval_size)

    p = sub.add_parser("eval-link", help="hyperedge prediction (AUC)")
    p.add_argument("embedding")
    p.add_argument("graph")
    p.add_argument("--out", "-o", required=True)
    p.add_argument("--seeds", default="0,1,2,3,4")
    p.add_argument("--train-frac", type=float, default=0.8, dest="train_frac")
    p.add_argument("--l2", type=float, default=1e-4)
    p.add_argument("--lr", type=float, default=0.1)
    p.add_argument("--epochs", type=int, default=500)
    p.set_defaults(func=_cmd_eval_link)

    p = sub.add_parser("cluster", help="k-means over an embedding file")
    p.add_argument("embedding")
    p.add_argument("--out", "-o", required=True)
    p.add_argument("--k", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("toygen", help="generate a toy hypergraph with colors")
    p.add_argument("topology", choices=TOPOLOGIES)
    p.add_argument("--out", "-o", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="override a preset parameter (repeatable)")
    p.set_defaults(func=_cmd_toygen)

    p = sub.add_parser("export-expansion", help="write the clique expansion edge list")
    p.add_argument("input")
    p.add_argument("--out", "-o", required=True)
    p.set_defaults(func=_cmd_export_expansion)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles usage errors with code 2
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except StageError as exc:
        if isinstance(exc.cause, (HyperedgeFileError, ValueError, OSError)):
            print(f"error: {exc}", file=sys.stderr)
            return 3
        traceback.print_exc()
        return 4
    except (HyperedgeFileError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except Exception:  # pragma: no cover - internal failure path
        traceback.print_exc()
        return 4


if __name__ == "__main__":
    sys.exit(main())
