"""HyperS2V: structure-based node embeddings for hyper networks."""

__version__ = "0.1.0"

from .distances import (
    LayerDistances,
    cmpd,
    cncmpd,
    collapse_hyper_degree,
    cumulative_distances,
    d0,
    d0_uncollapsed,
    dk,
    dtw,
    hyper_degree,
    mpd,
    neighborhood_signature,
    positional_bias,
)
from .estimator import HyperS2V
from .evaluation import (
    EvalReport,
    KMeans,
    LogisticRegressionGD,
    RidgeRegression,
    auc_score,
    hyperedge_prediction,
    kmeans_cluster,
    mean_pool,
    rmse,
    sample_negative_hyperedges,
    size_regression,
)
from .hypergraph import (
    Hypergraph,
    HyperedgeFileError,
    clique_expansion,
    expansion_edges,
    load_hyperedge_list,
    save_expansion,
)
from .layers import MultilayerGraph, build_multilayer
from .skipgram import EmbeddingMatrix, SkipGram, train_skipgram
from .toys import PRESETS, TOPOLOGIES, automorphism_orbits, generate_toy
from .walks import WalkCorpus, generate_walks

__all__ = [
    "EmbeddingMatrix",
    "EvalReport",
    "HyperS2V",
    "Hypergraph",
    "HyperedgeFileError",
    "KMeans",
    "LayerDistances",
    "LogisticRegressionGD",
    "MultilayerGraph",
    "PRESETS",
    "RidgeRegression",
    "SkipGram",
    "TOPOLOGIES",
    "WalkCorpus",
    "auc_score",
    "automorphism_orbits",
    "build_multilayer",
    "clique_expansion",
    "cmpd",
    "cncmpd",
    "collapse_hyper_degree",
    "cumulative_distances",
    "d0",
    "d0_uncollapsed",
    "dk",
    "dtw",
    "expansion_edges",
    "generate_toy",
    "generate_walks",
    "hyper_degree",
    "hyperedge_prediction",
    "kmeans_cluster",
    "load_hyperedge_list",
    "mean_pool",
    "mpd",
    "neighborhood_signature",
    "positional_bias",
    "rmse",
    "sample_negative_hyperedges",
    "save_expansion",
    "size_regression",
    "train_skipgram",
]
