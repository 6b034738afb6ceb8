"""Canonical labeling pipeline.

Routes: discrete CR, trees (AHU at the center), unicyclic components (least
circular word of attached-tree codes), complex components (CR plus one
individualization per duplex class), and an exact individualization-refinement
fallback for complex components that violate the duplex conditions.
"""
from __future__ import annotations

from typing import Literal, Sequence

from .decompose import CoreDecomposition, two_core
from .errors import TooLarge
from .forms import CanonicalForm, Status, form_from_order, relabeled_edges
from .graph import KIND_RANK, Graph, components
from .identify import unicyclic_profile
from .refine import Refiner
from .symmetry import analyze_complex, tree_types
from .trees import ahu_order, free_tree_canon
from .words import canonical_rotation

_STATUS_RANK = {"success": 0, "fallback_used": 1, "not_canonizable": 2}

DEFAULT_FALLBACK_BOUND = 64
DEFAULT_MAX_DUPLEX = 20
DEFAULT_NODE_BUDGET = 100_000

ComplementPolicy = Literal["never", "auto"]


def _extend_through_trees(dec: CoreDecomposition, core_order: Sequence[int]) -> list[int]:
    """Core vertices (component ids) in order, each followed by its T_x in AHU preorder."""
    adj = dec.graph.adj
    out: list[int] = []
    for x in core_order:
        out.extend(ahu_order(adj, x, blocked=dec.in_core))
    return out


def canon_unicyclic(g: Graph) -> CanonicalForm:
    prof = unicyclic_profile(g)
    cyc = prof.cycle
    c = len(cyc)
    _, start, rev = canonical_rotation(prof.word.letters)
    if rev:
        walk = [cyc[(start - i) % c] for i in range(c)]
    else:
        walk = [cyc[(start + i) % c] for i in range(c)]
    in_cycle = [False] * g.n
    for v in cyc:
        in_cycle[v] = True
    order: list[int] = []
    for x in walk:
        order.extend(ahu_order(g.adj, x, blocked=in_cycle))
    return form_from_order(g, order, route="unicyclic")


# fallback search ----------------------------------------------------------------

class _Search:
    def __init__(self, core: Graph, colors: Sequence[int], budget: int):
        self.core = core
        self.colors = colors
        self.budget = budget
        self.best_key: tuple | None = None
        self.best_leaf: list[int] | None = None  # label index -> vertex
        self.autos: list[list[int]] = []

    def _leaf(self, r: Refiner) -> None:
        order = [next(iter(m)) for m in r.members]
        labeling = [0] * len(order)
        for i, v in enumerate(order):
            labeling[v] = i + 1
        key = (tuple(self.colors[v] for v in order),
               relabeled_edges(self.core, labeling).tobytes())
        if self.best_key is None or key < self.best_key:
            self.best_key, self.best_leaf = key, order
        elif key == self.best_key:
            # same relabeled graph: the two leaves differ by an automorphism
            auto = [0] * len(order)
            for a, b in zip(self.best_leaf, order):
                auto[a] = b
            self.autos.append(auto)

    def run(self, r: Refiner, path: list[int]) -> None:
        self.budget -= 1
        if self.budget < 0:
            raise TooLarge("fallback search exceeded its node budget")
        cell = next((c for c, m in enumerate(r.members) if len(m) > 1), None)
        if cell is None:
            self._leaf(r)
            return
        done: list[int] = []
        for v in sorted(r.members[cell]):
            if done and self._same_orbit(v, done, path):
                continue
            child = r.copy()
            child.individualize(v)
            self.run(child, path + [v])
            done.append(v)

    def _same_orbit(self, v: int, done: list[int], path: list[int]) -> bool:
        """``v`` is moved onto an explored sibling by automorphisms fixing ``path``."""
        gens = [a for a in self.autos if all(a[p] == p for p in path)]
        if not gens:
            return False
        parent = {}

        def find(x):
            while parent.get(x, x) != x:
                x = parent[x]
            return x

        for a in gens:
            for x, y in enumerate(a):
                if x != y:
                    rx, ry = find(x), find(y)
                    if rx != ry:
                        parent[rx] = ry
        target = find(v)
        return any(find(d) == target for d in done)


def _type_colors(types: Sequence[bytes]) -> list[int]:
    rank = {t: i for i, t in enumerate(sorted(set(types)))}
    return [rank[t] for t in types]


def canon_fallback(component: Graph, bound: int = DEFAULT_FALLBACK_BOUND,
                   max_duplex: int = DEFAULT_MAX_DUPLEX,
                   budget: int = DEFAULT_NODE_BUDGET) -> CanonicalForm:
    """Exact canonization by individualization-refinement on the tree-typed core.

    Feasible when the core has at most ``bound`` vertices or CR on the
    tree-typed core leaves only classes of size <= 2, at most ``max_duplex``
    of them.  Raises TooLarge otherwise or when the search exceeds ``budget``.
    """
    dec = two_core(component)
    core = dec.core
    colors = _type_colors(tree_types(dec))
    r = Refiner(core.adj, colors)
    r.refine()
    sizes = [len(m) for m in r.members]
    small_classes = max(sizes, default=1) <= 2 and sizes.count(2) <= max_duplex
    if core.n > bound and not small_classes:
        raise TooLarge(f"core of {core.n} vertices, {sizes.count(2)} duplex classes, "
                       f"largest class {max(sizes)}")
    s = _Search(core, colors, budget)
    s.run(r, [])
    core_order = [dec.core_vertices[i] for i in s.best_leaf]
    return form_from_order(component, _extend_through_trees(dec, core_order),
                           status="fallback_used", route="fallback")


def _canon_complex_direct(h: Graph) -> CanonicalForm | None:
    """Success route, or None if the duplex conditions fail."""
    a = analyze_complex(h)
    if not a.ok:
        return None
    r = a.refiner.copy()
    for cid in a.duplex_class_ids:
        m = r.members[cid]
        if len(m) == 2:
            r.individualize(min(m))
    dec = a.decomposition
    core_ids = dec.core_vertices
    if len({r.color[x] for x in core_ids}) != len(core_ids):
        return None
    core_order = sorted(core_ids, key=r.color.__getitem__)
    return form_from_order(h, _extend_through_trees(dec, core_order), route="complex")


def _identity_form(g: Graph) -> CanonicalForm:
    """Sound but non-canonical labeling: CR class order, ties by vertex id."""
    r = Refiner(g.adj)
    r.refine()
    order = sorted(range(g.n), key=lambda v: (r.color[v], v))
    return form_from_order(g, order, status="not_canonizable", route="unresolved")


def canon_component(comp: Graph, kind: str, fallback_bound: int = DEFAULT_FALLBACK_BOUND,
                    max_duplex: int = DEFAULT_MAX_DUPLEX,
                    budget: int = DEFAULT_NODE_BUDGET) -> CanonicalForm:
    if kind == "tree":
        return free_tree_canon(comp)
    if kind == "unicyclic":
        return canon_unicyclic(comp)
    form = _canon_complex_direct(comp)
    if form is not None:
        return form
    try:
        return canon_fallback(comp, fallback_bound, max_duplex, budget)
    except TooLarge:
        return _identity_form(comp)


def _has_cheap_symmetry(g: Graph) -> bool:
    """Twin leaves or two isolated vertices: CR cannot be discrete."""
    deg = g.degrees()
    isolated = 0
    seen_anchor = set()
    for v in range(g.n):
        if deg[v] == 0:
            isolated += 1
            if isolated > 1:
                return True
        elif deg[v] == 1:
            a = g.adj[v][0]
            if a in seen_anchor:
                return True
            seen_anchor.add(a)
    return False


def _canon_once(g: Graph, fast_path: bool, fallback_bound: int, max_duplex: int,
                budget: int) -> CanonicalForm:
    if fast_path and not _has_cheap_symmetry(g):
        r = Refiner(g.adj)
        r.refine()
        if r.is_discrete():
            order = [next(iter(m)) for m in r.members]
            return form_from_order(g, order, route="cr-discrete")
    parts = []
    for comp in components(g):
        sub, back = g.subgraph(comp.vertices)
        form = canon_component(sub, comp.kind, fallback_bound, max_duplex, budget)
        parts.append(((KIND_RANK[comp.kind], sub.n, form.certificate), form, back))
    parts.sort(key=lambda p: p[0])
    order: list[int] = []
    status: Status = "success"
    for _, form, back in parts:
        order.extend(back[v] for v in form.order)
        if _STATUS_RANK[form.status] > _STATUS_RANK[status]:
            status = form.status
    return form_from_order(g, order, status=status, route="components")


def canon(g: Graph, fast_path: bool = True, fallback_bound: int = DEFAULT_FALLBACK_BOUND,
          max_duplex: int = DEFAULT_MAX_DUPLEX, complement: ComplementPolicy = "never",
          budget: int = DEFAULT_NODE_BUDGET) -> CanonicalForm:
    """Canonical form of ``g``; failures are reported through ``status``.

    With ``complement="auto"`` a graph with more than half of all possible
    edges is canonized through its complement, and any other graph whose
    canonization ends in ``not_canonizable`` is retried on its complement.
    """
    if complement not in ("never", "auto"):
        raise ValueError(f"unknown complement policy {complement!r}")
    total = g.n * (g.n - 1) // 2
    use_comp = complement == "auto" and 2 * g.m > total
    form = _canon_once(g.complement() if use_comp else g, fast_path, fallback_bound, max_duplex, budget)
    if complement == "auto" and not use_comp and form.status == "not_canonizable":
        other = _canon_once(g.complement(), fast_path, fallback_bound, max_duplex, budget)
        if other.status != "not_canonizable":
            form, use_comp = other, True
    if use_comp:
        return form_from_order(g, form.order, status=form.status, route="complement/" + form.route)
    return form
