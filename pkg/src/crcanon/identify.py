"""CR-identifiability: unicyclic profiles, universal-cover equivalence, whole graphs."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any

from .decompose import peel
from .errors import NotUnicyclic
from .graph import Graph, components
from .trees import ahu_code
from .words import CircularWord, canonical_rotation


@dataclass(frozen=True)
class UnicyclicProfile:
    c: int
    p: int
    word: CircularWord
    period_word: tuple
    tree_type_set: frozenset
    cycle: list[int]  # cycle vertices in walking order, aligned with word.letters


def cycle_order(g: Graph, in_core: list[bool]) -> list[int]:
    start = next(v for v in range(g.n) if in_core[v])
    nbrs = [u for u in g.adj[start] if in_core[u]]
    out = [start]
    prev, cur = start, min(nbrs)
    while cur != start:
        out.append(cur)
        a, b = [u for u in g.adj[cur] if in_core[u]]
        prev, cur = cur, (b if a == prev else a)
    return out


def _check_unicyclic(g: Graph) -> list[bool]:
    if g.n == 0 or g.m != g.n:
        raise NotUnicyclic(f"{g.n} vertices, {g.m} edges")
    comps = components(g)
    if len(comps) != 1:
        raise NotUnicyclic(f"{len(comps)} components")
    return peel(g)


def unicyclic_profile(g: Graph) -> UnicyclicProfile:
    in_core = _check_unicyclic(g)
    cycle = cycle_order(g, in_core)
    letters = tuple(ahu_code(g.adj, x, blocked=in_core) for x in cycle)
    word = CircularWord(letters)
    p = word.period
    return UnicyclicProfile(len(cycle), p, word, canonical_rotation(letters[:p])[0],
                            frozenset(letters), cycle)


def identifiable_from_profile(prof: UnicyclicProfile) -> bool:
    p, c = prof.p, prof.c
    return (p == 1 and c in (3, 4, 5)) or (p == 2 and c in (4, 6)) or p == c


def unicyclic_identifiable(g: Graph) -> bool:
    return identifiable_from_profile(unicyclic_profile(g))


def uc_equivalent(g: Graph, h: Graph) -> bool:
    """Universal covers isomorphic, i.e. the circular words share a period."""
    return unicyclic_profile(g).period_word == unicyclic_profile(h).period_word


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: dict[str, Any] | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> dict[str, Any]:
        return {"ok": self.ok, "witness": self.witness, **self.details}


def simple_part_identifiable(g: Graph) -> Verdict:
    comps = components(g)
    profiles = {}
    for i, comp in enumerate(comps):
        if comp.kind != "unicyclic":
            continue
        sub, _ = g.subgraph(comp.vertices)
        prof = unicyclic_profile(sub)
        profiles[i] = prof
        if not identifiable_from_profile(prof):
            return Verdict(False, {"kind": "non-identifiable-unicyclic", "component": i,
                                   "vertices": comp.vertices, "c": prof.c, "p": prof.p})
    by_period: dict[tuple, int] = {}
    for i, prof in profiles.items():
        j = by_period.setdefault(prof.period_word, i)
        if j != i:
            return Verdict(False, {"kind": "uc-equivalent-pair", "components": [j, i]})
    return Verdict(True, None, {"unicyclic_components": len(profiles)})


# complex parts up to this many vertices are decided exactly when the
# sufficient conditions do not apply
EXACT_COMPLEX_BOUND = 6


def graph_identifiable(g: Graph) -> Verdict:
    from .symmetry import complex_part_conditions

    simple = simple_part_identifiable(g)
    if not simple.ok:
        return simple
    cverts = sorted(v for c in components(g) if c.kind == "complex" for v in c.vertices)
    if not cverts:
        return Verdict(True, None, {"route": "simple-only"})
    h, back = g.subgraph(cverts)
    cond = complex_part_conditions(h)
    if cond.ok:
        return Verdict(True, None, {"route": "complex-conditions", "stats": cond.stats})
    if h.n <= EXACT_COMPLEX_BOUND:
        other = exhaustive_cr_twin(h)
        if other is None:
            return Verdict(True, None, {"route": "exhaustive"})
        return Verdict(False, {"kind": "cr-equivalent-non-isomorphic", "edges": other.edges},
                       {"route": "exhaustive"})
    return Verdict(False, {"kind": "undetermined-complex", "vertices": [back[v] for v in cond.failing_vertices]},
                   {"route": "complex-conditions", "stats": cond.stats})


def exhaustive_cr_twin(h: Graph) -> Graph | None:
    """A graph on the same vertex count that is CR-equivalent to ``h`` but not isomorphic, if any."""
    from .refine import cr_distinguish
    from .symmetry import isomorphic

    pairs = list(itertools.combinations(range(h.n), 2))
    degs = sorted(h.degrees())
    for chosen in itertools.combinations(pairs, h.m):
        deg = [0] * h.n
        for u, v in chosen:
            deg[u] += 1
            deg[v] += 1
        if sorted(deg) != degs:
            continue
        cand = Graph.from_arrays(h.n, [u for u, _ in chosen], [v for _, v in chosen])
        if cr_distinguish(h, cand).distinguished:
            continue
        if not isomorphic(h, cand):
            return cand
    return None


def unicyclic_cr_twin(g: Graph) -> Graph | None:
    """A disconnected graph CR-equivalent to a non-identifiable unicyclic ``g``.

    The cycle is cut at a multiple of the period and closed into two shorter
    cycles, each at least 3 long, whose lengths sum to c.  Returns None when
    ``g`` is identifiable.
    """
    prof = unicyclic_profile(g)
    if identifiable_from_profile(prof):
        return None
    c, p, cyc = prof.c, prof.p, prof.cycle
    cut = next(a * p for a in range(1, c // p) if a * p >= 3 and c - a * p >= 3)
    drop = {(min(cyc[cut - 1], cyc[cut]), max(cyc[cut - 1], cyc[cut])),
            (min(cyc[-1], cyc[0]), max(cyc[-1], cyc[0]))}
    edges = [e for e in g.edges if e not in drop]
    edges += [(cyc[cut - 1], cyc[0]), (cyc[-1], cyc[cut])]
    return Graph.from_arrays(g.n, [u for u, _ in edges], [v for _, v in edges])
