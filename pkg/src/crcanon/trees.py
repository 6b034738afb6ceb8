"""AHU canonization of rooted and free trees.

Codes are balanced-bracket byte strings with children sorted by their
code bytes.  Internally each depth level is renamed to integers; a
vertex's key is its sorted child ranks followed by a sentinel larger than
any rank, which makes integer-tuple order agree with the byte order of the
codes (a closing bracket sorts after an opening one).
"""
from __future__ import annotations

from collections import deque
from typing import Hashable, Sequence

from .errors import NotATree
from .forms import CanonicalForm, form_from_order
from .graph import Graph

_OPEN, _CLOSE = 40, 41  # "(" and ")"


def _bfs(adj: Sequence[Sequence[int]], root: int, blocked: Sequence[bool] | None):
    order = [root]
    parent = {root: -1}
    depth = {root: 0}
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        pv = parent[v]
        for u in adj[v]:
            if u == pv or (blocked is not None and blocked[u]):
                continue
            if u in parent:
                raise NotATree(f"cycle through vertex {u}")
            parent[u] = v
            depth[u] = depth[v] + 1
            order.append(u)
    return order, parent, depth


def _ranks(order, parent, depth):
    """Children lists and per-vertex rank within its depth level."""
    children: dict[int, list[int]] = {v: [] for v in order}
    for v in order[1:]:
        children[parent[v]].append(v)
    rank: dict[int, int] = {}
    sentinel = len(order) + 1
    i = len(order)
    while i > 0:
        d = depth[order[i - 1]]
        j = i
        while j > 0 and depth[order[j - 1]] == d:
            j -= 1
        level = order[j:i]
        keys = {}
        for v in level:
            kids = children[v]
            if len(kids) > 1:
                kids.sort(key=rank.__getitem__)
            keys[v] = tuple(rank[c] for c in kids) + (sentinel,)
        names = {k: r for r, k in enumerate(sorted(set(keys.values())))}
        for v in level:
            rank[v] = names[keys[v]]
        i = j
    return children, rank


def _payload_bytes(payload: Hashable) -> bytes:
    p = payload if isinstance(payload, bytes) else repr(payload).encode()
    return b"%d:" % len(p) + p


def _emit(root, children, payload) -> bytes:
    out = bytearray([_OPEN])
    if payload is not None:
        out += _payload_bytes(payload)
    stack = [iter(children[root])]
    while stack:
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
            out.append(_CLOSE)
        else:
            out.append(_OPEN)
            stack.append(iter(children[nxt]))
    return bytes(out)


def ahu_code(adj: Sequence[Sequence[int]], root: int, payload: Hashable | None = None,
             blocked: Sequence[bool] | None = None) -> bytes:
    """Canonical code of the tree hanging from ``root``.

    ``blocked`` vertices are never entered (use the core flags to read off
    ``T_x``).  ``payload`` is injected after the root's opening bracket.
    """
    order, parent, depth = _bfs(adj, root, blocked)
    children, _ = _ranks(order, parent, depth)
    return _emit(root, children, payload)


def ahu_order(adj: Sequence[Sequence[int]], root: int,
              blocked: Sequence[bool] | None = None) -> list[int]:
    """Vertices in canonical preorder: root first, children by code."""
    order, parent, depth = _bfs(adj, root, blocked)
    children, _ = _ranks(order, parent, depth)
    out = []
    stack = [root]
    while stack:
        v = stack.pop()
        out.append(v)
        stack.extend(reversed(children[v]))
    return out


def ahu_code_and_order(adj, root, blocked=None) -> tuple[bytes, list[int]]:
    order, parent, depth = _bfs(adj, root, blocked)
    children, _ = _ranks(order, parent, depth)
    out = []
    stack = [root]
    while stack:
        v = stack.pop()
        out.append(v)
        stack.extend(reversed(children[v]))
    return _emit(root, children, None), out


def ahu_label(adj: Sequence[Sequence[int]], root: int,
              blocked: Sequence[bool] | None = None) -> dict[int, int]:
    return {v: i + 1 for i, v in enumerate(ahu_order(adj, root, blocked))}


def decode(code: bytes) -> Graph:
    """Tree shape (root 0) of a payload-free code."""
    edges = []
    stack: list[int] = []
    nxt = 0
    for ch in code:
        if ch == _OPEN:
            if stack:
                edges.append((stack[-1], nxt))
            stack.append(nxt)
            nxt += 1
        elif ch == _CLOSE:
            stack.pop()
        else:
            raise ValueError("payload codes are not decodable")
    from .graph import build_graph
    return build_graph(nxt, edges)


def tree_centers(g: Graph) -> list[int]:
    if g.n == 0:
        raise NotATree("empty graph")
    if g.m != g.n - 1:
        raise NotATree(f"{g.n} vertices but {g.m} edges")
    if g.n <= 2:
        return list(range(g.n))
    deg = g.degrees()
    layer = [v for v in range(g.n) if deg[v] == 1]
    remaining = g.n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            for u in g.adj[v]:
                deg[u] -= 1
                if deg[u] == 1:
                    nxt.append(u)
        layer = nxt
    if not layer:
        raise NotATree("disconnected input")
    return sorted(layer)


def free_tree_canon(tree: Graph) -> CanonicalForm:
    centers = tree_centers(tree)
    best = None
    for c in centers:
        code, order = ahu_code_and_order(tree.adj, c)
        if len(order) != tree.n:
            raise NotATree("disconnected input")
        if best is None or code < best[0]:
            best = (code, order)
    return form_from_order(tree, best[1], route="tree")
