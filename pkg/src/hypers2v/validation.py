"""Input validation helpers shared by the estimator and the CLI."""

from __future__ import annotations

import os
from typing import Iterable

from .hypergraph import Hypergraph, load_hyperedge_list


def as_hypergraph(X, dedupe: bool = True) -> Hypergraph:
    """Coerce estimator input to a Hypergraph.

    Accepts a Hypergraph, a path to a hyperedge-list file, or an iterable of
    label collections (one hyperedge each).
    """
    if isinstance(X, Hypergraph):
        return X
    if isinstance(X, (str, os.PathLike)):
        return load_hyperedge_list(X, dedupe=dedupe)
    if isinstance(X, Iterable):
        return Hypergraph.from_edges(X, dedupe=dedupe)
    raise TypeError(f"cannot interpret {type(X).__name__} as a hypergraph")


def check_positive_int(name: str, value, minimum: int = 1) -> int:
    value = int(value)
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_probability(name: str, value, open_interval: bool = True) -> float:
    value = float(value)
    ok = 0.0 < value < 1.0 if open_interval else 0.0 <= value <= 1.0
    if not ok:
        raise ValueError(f"{name} must lie in (0, 1), got {value}")
    return value


def check_fraction(name: str, value) -> float:
    value = float(value)
    if not 0.0 < value < 1.0:
        raise ValueError(f"{name} must lie in (0, 1), got {value}")
    return value
