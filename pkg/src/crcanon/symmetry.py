"""Involutive symmetries of cores (pendant cycles, transposable paths, thetas)
and exact automorphism oracles used to check them.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Hashable, Literal, Sequence

from .decompose import CoreDecomposition, pendant_structure, two_core
from .errors import TooLarge
from .graph import Graph, components
from .refine import Refiner, cr_stable
from .trees import ahu_code


@dataclass(frozen=True)
class Involution:
    kind: Literal["A1", "A2", "A3"]
    mapping: dict[int, int]  # only moved vertices; both directions present

    def permutation(self, n: int) -> list[int]:
        perm = list(range(n))
        for a, b in self.mapping.items():
            perm[a] = b
        return perm

    def pairs(self) -> list[tuple[int, int]]:
        return sorted((a, b) for a, b in self.mapping.items() if a < b)


def _swap(pairs) -> dict[int, int]:
    m = {}
    for a, b in pairs:
        if a != b:
            m[a] = b
            m[b] = a
    return m


@dataclass(frozen=True)
class SymmetryReport:
    a1: list[dict]
    a2: list[dict]
    a3: list[dict]
    interchangeable_pairs: list[tuple[int, int]]
    duplex_classes: list[tuple[int, int]]
    involutions: list[Involution] = field(repr=False)

    def as_dict(self) -> dict:
        return {
            "a1": self.a1, "a2": self.a2, "a3": self.a3,
            "interchangeable_pairs": [list(p) for p in self.interchangeable_pairs],
            "duplex_classes": [list(p) for p in self.duplex_classes],
        }


def detect_symmetries(core: Graph, tree_types: Sequence[Hashable] | None = None,
                      coloring: Sequence[int] | None = None) -> SymmetryReport:
    """A1/A2/A3 involutions of ``core`` that also preserve ``tree_types``.

    ``coloring`` (class id per core vertex) supplies the duplex classes; by
    default CR is run on the core colored by ``tree_types``.
    """
    t = tree_types if tree_types is not None else [0] * core.n
    ps = pendant_structure(core)
    involutions: list[Involution] = []
    a1, a2, a3 = [], [], []

    for cyc in ps.pendant_cycles:
        seq = cyc.internal
        if all(t[seq[i]] == t[seq[-1 - i]] for i in range(len(seq) // 2)):
            inv = Involution("A1", _swap((seq[i], seq[-1 - i]) for i in range(len(seq) // 2)))
            involutions.append(inv)
            a1.append({"anchor": cyc.anchor, "cycle": list(seq), "pairs": [list(p) for p in inv.pairs()]})

    groups = defaultdict(list)
    for p in ps.pendant_paths:
        if p.length >= 2:
            groups[(p.s, p.t, p.length)].append(p)
    for (s, tt, _), paths in sorted(groups.items()):
        for i in range(len(paths)):
            for j in range(i + 1, len(paths)):
                p1, p2 = paths[i].internal, paths[j].internal
                if all(t[x] == t[y] for x, y in zip(p1, p2)):
                    inv = Involution("A2", _swap(zip(p1, p2)))
                    involutions.append(inv)
                    a2.append({"s": s, "t": tt, "path1": list(p1), "path2": list(p2),
                               "pairs": [list(q) for q in inv.pairs()]})

    branch_paths = defaultdict(list)
    for p in ps.pendant_paths:
        branch_paths[(p.s, p.t)].append(p)
    deg = core.degrees()
    for comp in components(core):
        branch = [v for v in comp.vertices if deg[v] >= 3]
        if len(branch) != 2 or comp.excess != 1 or any(deg[v] != 3 for v in branch):
            continue
        x, y = branch
        paths = branch_paths.get((x, y), [])
        if len(paths) != 3 or len({p.length for p in paths}) != 3:
            continue
        if t[x] != t[y] or not all(
                t[p.internal[i]] == t[p.internal[-1 - i]] for p in paths for i in range(len(p.internal) // 2)):
            continue
        pairs = [(x, y)] + [(p.internal[i], p.internal[-1 - i]) for p in paths for i in range(len(p.internal) // 2)]
        inv = Involution("A3", _swap(pairs))
        involutions.append(inv)
        a3.append({"x": x, "y": y, "lengths": sorted(p.length for p in paths),
                   "pairs": [list(q) for q in inv.pairs()]})

    inter = sorted({pair for inv in involutions if inv.kind != "A3" for pair in inv.pairs()})

    if coloring is None:
        coloring = cr_stable(core, list(t)).class_of
    members = defaultdict(list)
    for v, c in enumerate(coloring):
        members[c].append(v)
    duplex = sorted(tuple(sorted(m)) for m in members.values() if len(m) == 2)
    return SymmetryReport(a1, a2, a3, inter, duplex, involutions)


# exact automorphism search ---------------------------------------------------

@dataclass(frozen=True)
class AutGroup:
    generators: list[list[int]]
    order: int
    route: Literal["duplex", "search"]


def _first_cell(r: Refiner) -> int | None:
    for c, m in enumerate(r.members):
        if len(m) > 1:
            return c
    return None


def _leaf_map(ra: Refiner, rb: Refiner) -> list[int]:
    phi = [0] * len(ra.color)
    for ma, mb in zip(ra.members, rb.members):
        (a,) = ma
        (b,) = mb
        phi[a] = b
    return phi


def _is_iso(phi: Sequence[int], edges_a, adj_b_sets) -> bool:
    return all(phi[v] in adj_b_sets[phi[u]] for u, v in edges_a)


def _find_iso(ra: Refiner, rb: Refiner, edges_a, adj_b_sets, budget: list[int]) -> list[int] | None:
    if [len(m) for m in ra.members] != [len(m) for m in rb.members]:
        return None
    budget[0] -= 1
    if budget[0] < 0:
        raise TooLarge("isomorphism search exceeded its node budget")
    c = _first_cell(ra)
    if c is None:
        phi = _leaf_map(ra, rb)
        return phi if _is_iso(phi, edges_a, adj_b_sets) else None
    a = min(ra.members[c])
    ra2 = ra.copy()
    ra2.individualize(a)
    for b in sorted(rb.members[c]):
        rb2 = rb.copy()
        rb2.individualize(b)
        phi = _find_iso(ra2, rb2, edges_a, adj_b_sets, budget)
        if phi is not None:
            return phi
    return None


def find_isomorphism(g: Graph, h: Graph, g_colors=None, h_colors=None,
                     budget: int = 200_000) -> list[int] | None:
    """A color-preserving isomorphism ``g -> h`` as a vertex map, or None."""
    if g.n != h.n or g.m != h.m:
        return None
    if (g_colors is None) != (h_colors is None):
        raise ValueError("color both graphs or neither")
    if g_colors is not None:
        names = {c: i for i, c in enumerate(sorted(set(g_colors) | set(h_colors)))}
        g_colors = [names[c] for c in g_colors]
        h_colors = [names[c] for c in h_colors]
        if Counter(g_colors) != Counter(h_colors):
            return None
    ra = Refiner(g.adj, g_colors)
    rb = Refiner(h.adj, h_colors)
    # identical initial ids are required for the canonical ids to line up
    ra.refine()
    rb.refine()
    sets = [set(a) for a in h.adj]
    return _find_iso(ra, rb, g.edges, sets, [budget])


def isomorphic(g: Graph, h: Graph) -> bool:
    return find_isomorphism(g, h) is not None


def _search_aut(g: Graph, colors, budget: int) -> AutGroup:
    r = Refiner(g.adj, colors)
    r.refine()
    sets = [set(a) for a in g.adj]
    order = 1
    gens: list[list[int]] = []
    left = [budget]
    while True:
        c = _first_cell(r)
        if c is None:
            break
        v = min(r.members[c])
        rv = r.copy()
        rv.individualize(v)
        orbit = 1
        for w in sorted(r.members[c]):
            if w == v:
                continue
            rw = r.copy()
            rw.individualize(w)
            phi = _find_iso(rv, rw, g.edges, sets, left)
            if phi is not None:
                orbit += 1
                gens.append(phi)
        order *= orbit
        r = rv
    return AutGroup(gens, order, "search")


def _duplex_aut(g: Graph, r: Refiner) -> AutGroup:
    """All class-respecting swaps when every class has size <= 2.

    The valid swap sets form a GF(2) subspace; it is enumerated by
    backtracking over the duplex classes with incremental edge checks.
    """
    duplex = [sorted(m) for m in r.members if len(m) == 2]
    k = len(duplex)
    idx = {}
    for i, (a, b) in enumerate(duplex):
        idx[a] = i
        idx[b] = i
    sets = [set(a) for a in g.adj]
    phi = list(range(g.n))
    elements: list[int] = []

    def consistent(i: int) -> bool:
        # edges from class i to fixed vertices or to earlier classes
        for u in duplex[i]:
            pu = phi[u]
            for w in g.adj[u]:
                j = idx.get(w)
                if j is not None and j > i:
                    continue
                if phi[w] not in sets[pu]:
                    return False
        return True

    def rec(i: int, mask: int) -> None:
        if i == k:
            elements.append(mask)
            return
        a, b = duplex[i]
        for bit in (0, 1):
            if bit:
                phi[a], phi[b] = b, a
            if consistent(i):
                rec(i + 1, mask | (bit << i))
            phi[a], phi[b] = a, b

    rec(0, 0)
    basis: list[int] = []
    for e in elements:
        x = e
        for bvec in basis:
            x = min(x, x ^ bvec)
        if x:
            basis.append(x)
    gens = []
    for bvec in basis:
        perm = list(range(g.n))
        for i, (a, b) in enumerate(duplex):
            if bvec >> i & 1:
                perm[a], perm[b] = b, a
        gens.append(perm)
    return AutGroup(gens, len(elements), "duplex")


def brute_force_aut(g: Graph, colors: Sequence[Hashable] | None = None, bound: int = 64,
                    max_duplex: int = 20, budget: int = 200_000) -> AutGroup:
    """Exact (color-preserving) automorphism group as generators plus order."""
    if colors is not None:
        r = Refiner(g.adj, colors)
        r.refine()
        sizes = [len(m) for m in r.members]
        if max(sizes, default=1) <= 2 and sizes.count(2) <= max_duplex:
            return _duplex_aut(g, r)
    if g.n <= bound:
        return _search_aut(g, colors, budget)
    raise TooLarge(f"{g.n} vertices exceed bound {bound} and no duplex coloring applies")


def _compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    return tuple(p[x] for x in q)


def _is_automorphism(perm: Sequence[int], g: Graph, colors) -> bool:
    sets = [set(a) for a in g.adj]
    if colors is not None and any(colors[perm[v]] != colors[v] for v in range(g.n)):
        return False
    return sorted(perm) == list(range(g.n)) and _is_iso(perm, g.edges, sets)


@dataclass(frozen=True)
class GroupVerdict:
    all_automorphisms: bool
    involutions: bool
    commuting: bool
    generated_order: int
    independent: bool
    full_order: int
    equals_full: bool

    @property
    def ok(self) -> bool:
        return self.all_automorphisms and self.involutions and self.commuting and self.independent

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in (
            "all_automorphisms", "involutions", "commuting", "generated_order",
            "independent", "full_order", "equals_full")}


def verify_group_structure(report: SymmetryReport, g: Graph, colors: Sequence[Hashable] | None = None,
                           full: AutGroup | None = None, max_generated: int = 1 << 16) -> GroupVerdict:
    perms = [tuple(inv.permutation(g.n)) for inv in report.involutions]
    ident = tuple(range(g.n))
    autos = all(_is_automorphism(p, g, colors) for p in perms)
    invol = all(p != ident and _compose(p, p) == ident for p in perms)
    commuting = all(_compose(p, q) == _compose(q, p) for i, p in enumerate(perms) for q in perms[i + 1:])
    group = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for p in perms:
                y = _compose(p, x)
                if y not in group:
                    group.add(y)
                    nxt.append(y)
                    if len(group) > max_generated:
                        raise TooLarge("generated group exceeds enumeration cap")
        frontier = nxt
    if full is None:
        full = brute_force_aut(g, colors)
    gen_order = len(group)
    return GroupVerdict(autos, invol, commuting, gen_order, gen_order == 2 ** len(perms),
                        full.order, autos and gen_order == full.order)


# complex parts ---------------------------------------------------------------

def tree_types(dec: CoreDecomposition) -> list[bytes]:
    """AHU code of ``T_x`` for every core vertex, in core-local order."""
    adj = dec.graph.adj
    blocked = dec.in_core
    return [ahu_code(adj, x, blocked=blocked) for x in dec.core_vertices]


@dataclass(eq=False)
class ComplexAnalysis:
    graph: Graph
    decomposition: CoreDecomposition
    refiner: Refiner  # stable CR of the whole complex part
    tree_types: list[bytes]
    report: SymmetryReport  # on core-local ids
    duplex_class_ids: list[int]
    max_class_size: int
    failing: list[int]  # core-local vertices violating the conditions

    @property
    def ok(self) -> bool:
        return self.max_class_size <= 2 and not self.failing

    def stats(self) -> dict:
        dec = self.decomposition
        kernel_size = sum(1 for d in dec.core.degrees() if d >= 3)
        return {
            "complex_size": self.graph.n,
            "core_size": dec.core.n,
            "kernel_size": kernel_size,
            "duplex_classes": len(self.duplex_class_ids),
            "max_class_size": self.max_class_size,
            "a1": len(self.report.a1),
            "a2": len(self.report.a2),
            "a3": len(self.report.a3),
            "interchangeable_pairs": len(self.report.interchangeable_pairs),
            "non_interchangeable": len(self.failing),
        }


def analyze_complex(h: Graph, refiner: Refiner | None = None) -> ComplexAnalysis:
    dec = two_core(h)
    if refiner is None:
        refiner = Refiner(h.adj)
        refiner.refine()
    core_ids = dec.core_vertices
    types = tree_types(dec)
    class_of_core = [refiner.color[x] for x in core_ids]
    report = detect_symmetries(dec.core, types, coloring=class_of_core)
    members = defaultdict(list)
    for i, c in enumerate(class_of_core):
        members[c].append(i)
    max_size = max((len(m) for m in members.values()), default=0)
    inter = set(report.interchangeable_pairs)
    failing = []
    duplex_ids = []
    for c in sorted(members):
        m = members[c]
        if len(m) == 1:
            continue
        if len(m) == 2:
            duplex_ids.append(c)
            if tuple(sorted(m)) in inter:
                continue
        failing.extend(m)
    return ComplexAnalysis(h, dec, refiner, types, report, duplex_ids, max_size, sorted(failing))


@dataclass(frozen=True)
class ConditionResult:
    ok: bool
    stats: dict
    failing_vertices: list[int]


def complex_part_conditions(h: Graph) -> ConditionResult:
    """Core classes of size <= 2, each duplex class an interchangeable pair."""
    a = analyze_complex(h)
    core_ids = a.decomposition.core_vertices
    return ConditionResult(a.ok, a.stats(), [core_ids[i] for i in a.failing])
