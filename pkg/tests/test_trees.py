import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crcanon.errors import NotATree
from crcanon.graph import Graph, build_graph, cycle_graph, path_graph
from crcanon.trees import ahu_code, ahu_label, decode, free_tree_canon, tree_centers

from conftest import from_nx, nx_iso, relabel_random, to_nx, trees

# unlabeled rooted trees on 1..7 vertices
ROOTED_COUNTS = [1, 1, 2, 4, 9, 20, 48]


def all_rooted(max_n: int) -> list[tuple[Graph, int]]:
    out = []
    for n in range(1, max_n + 1):
        frees = [nx.empty_graph(1)] if n == 1 else list(nx.nonisomorphic_trees(n))
        for t in frees:
            g = from_nx(t)
            out.extend((g, r) for r in range(n))
    return out


def labeled_edges(g: Graph, lab: dict[int, int]) -> set[tuple[int, int]]:
    return {tuple(sorted((lab[u], lab[v]))) for u, v in g.edges}


def test_small_codes():
    assert ahu_code(path_graph(1).adj, 0) == b"()"
    assert ahu_code(path_graph(3).adj, 1) == b"(()())"
    assert ahu_code(path_graph(3).adj, 0) == b"((()))"


def test_not_a_tree():
    with pytest.raises(NotATree):
        ahu_code(cycle_graph(3).adj, 0)
    with pytest.raises(NotATree):
        free_tree_canon(cycle_graph(4))


def test_rooted_code_completeness_up_to_7():
    pairs = all_rooted(7)
    codes: dict[bytes, list[tuple[Graph, int]]] = {}
    for g, r in pairs:
        codes.setdefault(ahu_code(g.adj, r), []).append((g, r))
    assert len(codes) == sum(ROOTED_COUNTS)
    for members in codes.values():
        g0, r0 = members[0]
        a = to_nx(g0)
        nx.set_node_attributes(a, {v: v == r0 for v in a}, "root")
        for g, r in members[1:]:
            b = to_nx(g)
            nx.set_node_attributes(b, {v: v == r for v in b}, "root")
            assert nx.is_isomorphic(a, b, node_match=lambda x, y: x["root"] == y["root"])


def test_rooted_trees_up_to_5_counted():
    codes = {ahu_code(g.adj, r) for g, r in all_rooted(5)}
    assert len(codes) == sum(ROOTED_COUNTS[:5])


def test_ahu_label_examples():
    assert ahu_label(path_graph(1).adj, 0) == {0: 1}
    star = build_graph(4, [(0, 1), (0, 2), (0, 3)])
    lab = ahu_label(star.adj, 0)
    assert lab[0] == 1
    assert labeled_edges(star, lab) == {(1, 2), (1, 3), (1, 4)}


def test_ahu_label_relabel_invariant_12_vertices():
    rnd = random.Random(7)
    base = build_graph(12, [(rnd.randint(0, v - 1), v) for v in range(1, 12)])
    ref = labeled_edges(base, ahu_label(base.adj, 0))
    for _ in range(100):
        perm = list(range(12))
        rnd.shuffle(perm)
        g = base.relabel(perm)
        assert labeled_edges(g, ahu_label(g.adj, perm[0])) == ref


def test_free_canon_examples():
    f = free_tree_canon(path_graph(2))
    assert f.canonical_edges == [(1, 2)]
    p4 = path_graph(4)
    rev = p4.relabel([3, 2, 1, 0])
    assert free_tree_canon(p4).canonical_edges == free_tree_canon(rev).canonical_edges
    assert free_tree_canon(p4).certificate == free_tree_canon(rev).certificate


def test_free_canon_complete_up_to_8():
    rnd = random.Random(1)
    seen: dict[str, Graph] = {}
    total = 0
    for n in range(1, 9):
        frees = [nx.empty_graph(1)] if n == 1 else list(nx.nonisomorphic_trees(n))
        for t in frees:
            g = relabel_random(from_nx(t), rnd)
            cert = free_tree_canon(g).certificate
            assert cert not in seen
            seen[cert] = g
            total += 1
            for _ in range(3):
                assert free_tree_canon(relabel_random(g, rnd)).certificate == cert
    assert total == len(seen) == 1 + 1 + 1 + 2 + 3 + 6 + 11 + 23


def test_payload_sensitivity():
    g = path_graph(3)
    assert ahu_code(g.adj, 1, payload=b"a") != ahu_code(g.adj, 1, payload=b"b")
    assert ahu_code(g.adj, 1, payload=b"a") == ahu_code(g.adj, 1, payload=b"a")


def test_blocked_reads_attached_tree():
    g = build_graph(5, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4)])
    blocked = [True, True, True, False, False]
    assert ahu_code(g.adj, 0, blocked=blocked) == b"((()))"


def test_centers():
    assert tree_centers(path_graph(5)) == [2]
    assert tree_centers(path_graph(4)) == [1, 2]
    with pytest.raises(NotATree):
        tree_centers(cycle_graph(3))


@settings(max_examples=100)
@given(trees(max_n=16))
def test_decode_roundtrip(t: Graph):
    code = ahu_code(t.adj, 0)
    back = decode(code)
    assert ahu_code(back.adj, 0) == code
    assert nx_iso(back, t)


@settings(max_examples=100)
@given(trees(max_n=16), st.randoms(use_true_random=False))
def test_free_canon_sound_and_invariant(t: Graph, rnd):
    f = free_tree_canon(t)
    assert sorted(f.labeling) == list(range(1, t.n + 1))
    relabeled = build_graph(t.n, [(u - 1, v - 1) for u, v in f.canonical_edges])
    assert nx_iso(relabeled, t)
    assert free_tree_canon(relabel_random(t, rnd)).certificate == f.certificate
