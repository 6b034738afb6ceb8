"""Simple graphs, kernel multigraphs, components and the edge-list format.

Vertex ids are dense integers ``0..n-1``.  A :class:`Graph` is treated as
immutable once built; ``adj`` lists are shared, never mutated.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Iterable, Literal, NamedTuple, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import CountMismatch, GraphError, ParseError, RejectLoop, RejectRange


_SMALL = 256


@dataclass(frozen=True, eq=False)
class Graph:
    n: int
    edges: list[tuple[int, int]]
    adj: list[list[int]] = field(repr=False)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def edge_set(self) -> set[tuple[int, int]]:
        return set(self.edges)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, tuple(self.edges)))

    @classmethod
    def from_arrays(cls, n: int, us, vs) -> "Graph":
        """Build from parallel endpoint arrays.  Loops are dropped, duplicates merged."""
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        keep = us != vs
        lo = np.minimum(us[keep], vs[keep])
        hi = np.maximum(us[keep], vs[keep])
        if lo.size:
            key = np.unique(lo * n + hi)
            lo, hi = key // n, key % n
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        bounds = np.searchsorted(src, np.arange(n + 1))
        flat = dst.tolist()
        b = bounds.tolist()
        adj = [flat[b[i]:b[i + 1]] for i in range(n)]
        edges = list(zip(lo.tolist(), hi.tolist()))
        return cls(n, edges, adj)

    def subgraph(self, vertices: Sequence[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph on ``vertices`` (in the given order) plus the id map back."""
        vertices = list(vertices)
        local = {v: i for i, v in enumerate(vertices)}
        if len(vertices) <= _SMALL:
            # numpy setup dominates for small pieces
            adj = [sorted(local[w] for w in self.adj[v] if w in local) for v in vertices]
            edges = [(i, j) for i, a in enumerate(adj) for j in a if i < j]
            return Graph(len(vertices), edges, adj), vertices
        us, vs = [], []
        for v in vertices:
            i = local[v]
            for w in self.adj[v]:
                j = local.get(w)
                if j is not None and i < j:
                    us.append(i)
                    vs.append(j)
        return Graph.from_arrays(len(vertices), us, vs), vertices

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        p = np.asarray(perm, dtype=np.int64)
        if p.shape != (self.n,) or (self.n and (p.min() < 0 or p.max() >= self.n
                                                or np.bincount(p, minlength=self.n).max() != 1)):
            raise ValueError("perm must be a permutation of range(n)")
        if self.m == 0:
            return Graph.from_arrays(self.n, [], [])
        e = np.asarray(self.edges, dtype=np.int64)
        return Graph.from_arrays(self.n, p[e[:, 0]], p[e[:, 1]])

    def disjoint_union(self, other: "Graph") -> "Graph":
        us = [u for u, _ in self.edges] + [u + self.n for u, _ in other.edges]
        vs = [v for _, v in self.edges] + [v + self.n for _, v in other.edges]
        return Graph.from_arrays(self.n + other.n, us, vs)

    def complement(self) -> "Graph":
        present = self.edge_set()
        pairs = [(u, v) for u in range(self.n) for v in range(u + 1, self.n)
                 if (u, v) not in present]
        return Graph.from_arrays(self.n, [u for u, _ in pairs], [v for _, v in pairs])


def build_graph(n: int, edge_list: Iterable[tuple[int, int]]) -> Graph:
    if n < 0:
        raise RejectRange(f"negative vertex count {n}")
    us, vs = [], []
    for u, v in edge_list:
        if not (0 <= u < n and 0 <= v < n):
            raise RejectRange(f"edge ({u}, {v}) out of range for n={n}")
        if u == v:
            raise RejectLoop(f"self-loop at {u}")
        us.append(u)
        vs.append(v)
    return Graph.from_arrays(n, us, vs)


def path_graph(n: int) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def disjoint_union(*graphs: Graph) -> Graph:
    out = Graph.from_arrays(0, [], [])
    for g in graphs:
        out = out.disjoint_union(g)
    return out


def theta_graph(*lengths: int) -> Graph:
    """Two vertices 0 and 1 joined by internally disjoint paths of the given lengths."""
    edges = []
    nxt = 2
    for length in lengths:
        prev = 0
        for _ in range(length - 1):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
        edges.append((prev, 1))
    return build_graph(nxt, edges)


class MultiEdge(NamedTuple):
    u: int
    v: int
    length: int
    id: int


@dataclass(frozen=True)
class Multigraph:
    """Kernel multigraph.  ``u == v`` encodes a loop; ``origin`` maps vertices back to core ids."""

    n: int
    edges: list[MultiEdge]
    origin: list[int] | None = None
    loop_min: int = 2  # configuration-model output uses 1

    def __post_init__(self):
        deg = [0] * self.n
        for e in self.edges:
            if not (0 <= e.u < self.n and 0 <= e.v < self.n):
                raise RejectRange(f"multiedge {e} out of range")
            if e.length < 1:
                raise GraphError(f"edge {e.id} has length {e.length} < 1")
            if e.u == e.v and e.length < self.loop_min:
                raise GraphError(f"loop {e.id} has length {e.length} < {self.loop_min}")
            deg[e.u] += 1
            deg[e.v] += 1
        low = [v for v, d in enumerate(deg) if d < 3]
        if low:
            raise GraphError(f"kernel vertices of degree < 3: {low[:5]}")

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for e in self.edges:
            deg[e.u] += 1
            deg[e.v] += 1
        return deg

    @property
    def total_length(self) -> int:
        return sum(e.length for e in self.edges)


Kind = Literal["tree", "unicyclic", "complex"]
KIND_RANK = {"tree": 0, "unicyclic": 1, "complex": 2}


@dataclass(frozen=True)
class ComponentClass:
    kind: Kind
    vertices: list[int]
    m: int

    @property
    def excess(self) -> int:
        return self.m - len(self.vertices)


def components(g: Graph) -> list[ComponentClass]:
    """Connected components ordered by smallest vertex, tagged by excess."""
    if g.n == 0:
        return []
    labels = _component_labels(g)
    order = np.argsort(labels, kind="stable")
    counts = np.bincount(labels)
    if g.m:
        e = np.asarray(g.edges, dtype=np.int64)
        ecount = np.bincount(labels[e[:, 0]], minlength=len(counts))
    else:
        ecount = np.zeros(len(counts), dtype=np.int64)
    out = []
    start = 0
    order_l = order.tolist()
    for c, size in enumerate(counts.tolist()):
        verts = order_l[start:start + size]
        start += size
        m = int(ecount[c])
        kind: Kind = "tree" if m == size - 1 else ("unicyclic" if m == size else "complex")
        out.append(ComponentClass(kind, verts, m))
    return out


def _component_labels(g: Graph) -> np.ndarray:
    """Labels numbered in order of each component's smallest vertex."""
    if g.m == 0:
        return np.arange(g.n)
    e = np.asarray(g.edges, dtype=np.int64)
    mat = coo_matrix((np.ones(len(e), dtype=np.int8), (e[:, 0], e[:, 1])), shape=(g.n, g.n))
    _, labels = connected_components(mat, directed=False)
    # renumber by first occurrence so the order is independent of scipy internals
    _, first = np.unique(labels, return_index=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first)] = np.arange(len(first))
    return rank[labels]


def split_parts(g: Graph) -> tuple[list[ComponentClass], list[ComponentClass]]:
    """(simple components, complex components)."""
    comps = components(g)
    return ([c for c in comps if c.kind != "complex"], [c for c in comps if c.kind == "complex"])


def complex_part(g: Graph) -> tuple[Graph, list[int]]:
    verts = sorted(v for c in components(g) if c.kind == "complex" for v in c.vertices)
    return g.subgraph(verts)


def read_edgelist(stream: IO[str]) -> Graph:
    header = None
    pairs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected two integers, got {raw.strip()!r}", lineno)
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer token in {raw.strip()!r}", lineno) from None
        if header is None:
            if a < 0 or b < 0:
                raise ParseError("negative count in header", lineno)
            header = (a, b)
        else:
            pairs.append((a, b))
    if header is None:
        raise ParseError("missing header line 'n m'", 0)
    n, m = header
    if m != len(pairs):
        raise CountMismatch(f"header declares {m} edges, body has {len(pairs)}")
    return build_graph(n, pairs)


def write_edgelist(g: Graph, stream: IO[str]) -> None:
    stream.write(f"{g.n} {g.m}\n")
    stream.writelines(f"{u} {v}\n" for u, v in g.edges)


def edgelist_text(g: Graph) -> str:
    return f"{g.n} {g.m}\n" + "".join(f"{u} {v}\n" for u, v in g.edges)
