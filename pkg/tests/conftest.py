"""Shared fixtures: small graphs with hand-checkable vote patterns."""

from __future__ import annotations

import numpy as np
import pytest

import votebands as vb


def make_document(populations, dem, rep, edges):
    """Graph document with integer ids 0..n-1."""
    nodes = [{"id": i, "population": int(p), "dem": int(d), "rep": int(r)}
             for i, (p, d, r) in enumerate(zip(populations, dem, rep))]
    return {"nodes": nodes, "edges": [list(e) for e in edges]}


def path_document(populations, dem, rep):
    n = len(populations)
    return make_document(populations, dem, rep,
                         [(i, i + 1) for i in range(n - 1)])


@pytest.fixture
def path8_graph():
    # Eight equal-turnout districts-to-be with Dem shares
    # 0.22 x5, 0.495, 0.80, 0.80. Turnout 1000 keeps every count integral.
    dem = [220] * 5 + [495, 800, 800]
    rep = [1000 - d for d in dem]
    doc = path_document([1] * 8, dem, rep)
    return vb.load_graph(doc)


@pytest.fixture
def path8_partition(path8_graph):
    # One node per district, districts in path order.
    assignment = {i: i for i in range(8)}
    return vb.Partition.from_assignment(path8_graph, 8, assignment,
                                        votes=path8_graph.votes())


@pytest.fixture
def grid44_graph():
    return vb.load_graph(vb.synth_grid(4, 4, "uniform"))


@pytest.fixture
def grid66_graph():
    return vb.load_graph(vb.synth_grid(6, 6, "gradient"))


@pytest.fixture
def two_cluster_graph():
    return vb.load_graph(vb.synth_grid(10, 10, "two_cluster"))


@pytest.fixture
def rng():
    return np.random.default_rng(0)
