"""Shared helpers and independent oracles.

The oracles here deliberately avoid the package's own algorithms: CR is a
naive round-based signature iteration and isomorphism comes from networkx.
"""
from __future__ import annotations

import random

import networkx as nx
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from crcanon.graph import Graph, build_graph

settings.register_profile("default", deadline=None)
settings.load_profile("default")


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def from_nx(h: nx.Graph) -> Graph:
    idx = {v: i for i, v in enumerate(sorted(h.nodes()))}
    return build_graph(len(idx), [(idx[u], idx[v]) for u, v in h.edges()])


def nx_iso(g: Graph, h: Graph) -> bool:
    return g.n == h.n and g.m == h.m and nx.is_isomorphic(to_nx(g), to_nx(h))


def nx_aut_order(g: Graph, colors=None, cap: int | None = None) -> int:
    """Automorphism count by enumeration; stops at ``cap`` if given."""
    a = to_nx(g)
    if colors is not None:
        for v in range(g.n):
            a.nodes[v]["c"] = colors[v]
        nm = nx.algorithms.isomorphism.categorical_node_match("c", None)
        gm = nx.algorithms.isomorphism.GraphMatcher(a, a, node_match=nm)
    else:
        gm = nx.algorithms.isomorphism.GraphMatcher(a, a)
    count = 0
    for _ in gm.isomorphisms_iter():
        count += 1
        if cap is not None and count >= cap:
            break
    return count


def naive_cr(adj, initial=None) -> list[frozenset[int]]:
    """Round-based refinement: recolor by (color, sorted neighbour colors) until stable."""
    n = len(adj)
    color = list(initial) if initial is not None else [0] * n
    names = {c: i for i, c in enumerate(sorted(set(color), key=repr))}
    color = [names[c] for c in color]
    while True:
        sig = [(color[v], tuple(sorted(color[u] for u in adj[v]))) for v in range(n)]
        names = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [names[s] for s in sig]
        if len(set(new)) == len(set(color)):
            break
        color = new
    classes: dict[int, set[int]] = {}
    for v, c in enumerate(color):
        classes.setdefault(c, set()).add(v)
    return sorted((frozenset(s) for s in classes.values()), key=min)


def partition_of(class_of) -> list[frozenset[int]]:
    classes: dict[int, set[int]] = {}
    for v, c in enumerate(class_of):
        classes.setdefault(c, set()).add(v)
    return sorted((frozenset(s) for s in classes.values()), key=min)


def relabel_random(g: Graph, rng: random.Random) -> Graph:
    perm = list(range(g.n))
    rng.shuffle(perm)
    return g.relabel(perm)


def rand_gnp(n: int, p: float, rng: random.Random) -> Graph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return build_graph(n, edges)


@st.composite
def graphs(draw, max_n: int = 12, min_n: int = 0):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if not pairs:
        return build_graph(n, [])
    chosen = draw(st.lists(st.sampled_from(pairs), max_size=min(len(pairs), 2 * n), unique=True))
    return build_graph(n, chosen)


@st.composite
def trees(draw, max_n: int = 14):
    n = draw(st.integers(1, max_n))
    edges = [(draw(st.integers(0, v - 1)), v) for v in range(1, n)]
    return build_graph(n, edges)


@st.composite
def permutations(draw, n: int):
    return draw(st.permutations(list(range(n))))


@pytest.fixture
def rng():
    return random.Random(12345)
