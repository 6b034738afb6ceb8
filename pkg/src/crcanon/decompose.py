"""2-core extraction, kernel contraction and attached trees."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .errors import GraphError, PureCycleComponent
from .graph import Graph, MultiEdge, Multigraph


def peel(g: Graph, order: Sequence[int] | None = None) -> list[bool]:
    """Core membership flags.  ``order`` only permutes the initial queue (the result is confluent)."""
    deg = g.degrees()
    adj = g.adj
    removed = [d <= 1 for d in deg]
    stack = [v for v in (range(g.n) if order is None else order) if removed[v]]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if not removed[u]:
                deg[u] -= 1
                if deg[u] <= 1:
                    removed[u] = True
                    stack.append(u)
    return [not r for r in removed]


@dataclass(frozen=True, eq=False)
class CoreDecomposition:
    """The core of ``graph`` plus the trees hanging off it.

    ``anchor[v]`` is the core vertex ``x`` with ``v`` in ``T_x`` (``x`` for
    core vertices, -1 for vertices of core-free components).  ``parent``
    points toward the core, or toward an arbitrary root in core-free
    components.
    """

    graph: Graph
    core: Graph
    core_vertices: list[int]
    in_core: list[bool]
    anchor: list[int]
    parent: list[int]
    _children: list[list[int]] = field(repr=False)

    @property
    def local(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.core_vertices)}

    def attached_tree(self, x: int) -> list[int]:
        """Vertices of ``T_x`` in BFS order from ``x``."""
        if not self.in_core[x]:
            raise GraphError(f"vertex {x} is not in the core")
        out = [x]
        i = 0
        while i < len(out):
            out.extend(self._children[out[i]])
            i += 1
        return out

    def children(self, v: int) -> list[int]:
        return self._children[v]

    def tree_size(self, x: int) -> int:
        return len(self.attached_tree(x))

    @property
    def forest_vertices(self) -> list[int]:
        return [v for v, a in enumerate(self.anchor) if a < 0]


def two_core(g: Graph, order: Sequence[int] | None = None) -> CoreDecomposition:
    in_core = peel(g, order)
    core_vertices = [v for v in range(g.n) if in_core[v]]
    core, _ = g.subgraph(core_vertices)
    anchor = [-1] * g.n
    parent = [-1] * g.n
    children: list[list[int]] = [[] for _ in range(g.n)]
    adj = g.adj
    queue = deque(core_vertices)
    for x in core_vertices:
        anchor[x] = x
    while queue:
        v = queue.popleft()
        for u in adj[v]:
            if anchor[u] < 0 and not in_core[u]:
                anchor[u] = anchor[v]
                parent[u] = v
                children[v].append(u)
                queue.append(u)
    # core-free components: orient toward their smallest vertex
    seen = [a >= 0 for a in anchor]
    for r in range(g.n):
        if seen[r]:
            continue
        seen[r] = True
        queue.append(r)
        while queue:
            v = queue.popleft()
            for u in adj[v]:
                if not seen[u]:
                    seen[u] = True
                    parent[u] = v
                    children[v].append(u)
                    queue.append(u)
    return CoreDecomposition(g, core, core_vertices, in_core, anchor, parent, children)


class PendantPath(NamedTuple):
    s: int
    t: int
    internal: list[int]

    @property
    def length(self) -> int:
        return len(self.internal) + 1


class PendantCycle(NamedTuple):
    anchor: int
    internal: list[int]

    @property
    def length(self) -> int:
        return len(self.internal) + 1


@dataclass(frozen=True)
class PendantStructure:
    pendant_paths: list[PendantPath]
    pendant_cycles: list[PendantCycle]
    cycle_components: list[list[int]]


def pendant_structure(core: Graph) -> PendantStructure:
    """Every maximal path of degree-2 vertices, classified by its ends.

    Paths are oriented so that ``s <= t``; for ``s == t`` the result is a
    pendant cycle.  Edges between two branch vertices are paths of length 1.
    """
    adj = core.adj
    deg = core.degrees()
    if any(d < 2 for d in deg):
        raise GraphError("pendant structure needs minimum degree 2")
    used: set[tuple[int, int]] = set()
    paths: list[PendantPath] = []
    cycles: list[PendantCycle] = []
    covered = [False] * core.n
    for s in range(core.n):
        if deg[s] < 3:
            continue
        for first in adj[s]:
            if (s, first) in used:
                continue
            internal = []
            prev, cur = s, first
            while deg[cur] == 2:
                internal.append(cur)
                covered[cur] = True
                a, b = adj[cur]
                prev, cur = cur, (b if a == prev else a)
            used.add((s, first))
            used.add((cur, prev))
            if cur == s:
                cycles.append(PendantCycle(s, internal))
            elif s < cur:
                paths.append(PendantPath(s, cur, internal))
            else:
                paths.append(PendantPath(cur, s, internal[::-1]))
    cycle_components = []
    for v in range(core.n):
        if covered[v] or deg[v] != 2:
            continue
        comp = [v]
        covered[v] = True
        prev, cur = v, adj[v][0]
        while cur != v:
            comp.append(cur)
            covered[cur] = True
            a, b = adj[cur]
            prev, cur = cur, (b if a == prev else a)
        cycle_components.append(comp)
    return PendantStructure(paths, cycles, cycle_components)


def kernel(core: Graph) -> Multigraph:
    """Contract pendant paths; kernel vertex ``i`` is the i-th branch vertex of ``core``."""
    ps = pendant_structure(core)
    if ps.cycle_components:
        raise PureCycleComponent(
            f"{len(ps.cycle_components)} core component(s) are bare cycles, e.g. {ps.cycle_components[0][:6]}")
    branch = [v for v in range(core.n) if len(core.adj[v]) >= 3]
    idx = {v: i for i, v in enumerate(branch)}
    edges = []
    for p in ps.pendant_paths:
        edges.append(MultiEdge(idx[p.s], idx[p.t], p.length, len(edges)))
    for c in ps.pendant_cycles:
        edges.append(MultiEdge(idx[c.anchor], idx[c.anchor], c.length, len(edges)))
    return Multigraph(len(branch), edges, branch)


def subdivide(k: Multigraph) -> Graph:
    """Replace every kernel edge of length L by a path with L - 1 new vertices.

    Kernel vertices keep ids ``0..k.n-1``; subdivision vertices follow in edge order.
    """
    us, vs = [], []
    nxt = k.n
    for e in k.edges:
        prev = e.u
        for _ in range(e.length - 1):
            us.append(prev)
            vs.append(nxt)
            prev = nxt
            nxt += 1
        us.append(prev)
        vs.append(e.v)
    g = Graph.from_arrays(nxt, us, vs)
    if g.m != k.total_length:
        raise GraphError("subdivision is not simple (a loop or parallel edges are too short)")
    return g
