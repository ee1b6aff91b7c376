from __future__ import annotations

from pathlib import Path

import pytest

from hypers2v.hypergraph import Hypergraph

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture()
def triangle_path_graph() -> Hypergraph:
    # path of hyperedges {a,b}, {b,c}, {c,d}
    return Hypergraph.from_edges([["a", "b"], ["b", "c"], ["c", "d"]])


@pytest.fixture()
def small_mixed_graph() -> Hypergraph:
    return Hypergraph.from_edges(
        [["a", "b", "c"], ["a", "b"], ["c", "d", "e", "f"], ["e", "f"], ["a", "f"]]
    )
