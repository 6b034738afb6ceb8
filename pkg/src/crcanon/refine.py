"""Color refinement (1-WL) by partition refinement with a splitter worklist.

Each splitter class S updates, for every vertex, the number of neighbours in
S; touched classes split by that count.  The largest part keeps the old
class id (ties go to the smaller count) and only the new parts are queued,
which gives the usual O((n + m) log n) bound.

Class ids are a function of the split history alone: touched classes are
processed in increasing id order and new ids are handed out in increasing
count order.  Hence for any permutation pi, the coloring of pi(G) is
``class_of o pi^-1``, and colors of two graphs refined as a disjoint union
are directly comparable.
"""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .graph import Graph


@dataclass(frozen=True)
class Coloring:
    class_of: list[int]
    classes: list[list[int]]
    rounds: int

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    def size_histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(len(c) for c in self.classes).items()))

    def partition(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(c) for c in self.classes)


class Refiner:
    """Mutable refinement state over a fixed adjacency structure.

    ``rounds`` counts processed splitters; every class id enters the
    worklist at most once, so it never exceeds the number of classes.
    """

    def __init__(self, adj: Sequence[Sequence[int]], initial: Sequence[Hashable] | None = None):
        n = len(adj)
        self.adj = adj
        if initial is None:
            self.color = [0] * n
            self.members: list[set[int]] = [set(range(n))] if n else []
        else:
            if len(initial) != n:
                raise ValueError(f"initial coloring has {len(initial)} entries for {n} vertices")
            names = {c: i for i, c in enumerate(sorted(set(initial)))}
            self.color = [names[c] for c in initial]
            self.members = [set() for _ in names]
            for v, c in enumerate(self.color):
                self.members[c].add(v)
        self._count = [0] * n
        self._in_queue = [False] * len(self.members)
        self.rounds = 0

    def copy(self) -> "Refiner":
        other = Refiner.__new__(Refiner)
        other.adj = self.adj
        other.color = list(self.color)
        other.members = [set(m) for m in self.members]
        other._count = [0] * len(self.color)
        other._in_queue = list(self._in_queue)
        other.rounds = self.rounds
        return other

    @property
    def num_classes(self) -> int:
        return len(self.members)

    def is_discrete(self) -> bool:
        return len(self.members) == len(self.color)

    def refine(self, splitters: Iterable[int] | None = None) -> None:
        """Refine to the coarsest equitable partition below the current one."""
        if splitters is None:
            splitters = range(len(self.members))
        adj, color, members, count = self.adj, self.color, self.members, self._count
        in_queue = self._in_queue
        queue = deque()
        for c in splitters:
            if not in_queue[c]:
                in_queue[c] = True
                queue.append(c)
        while queue:
            s = queue.popleft()
            in_queue[s] = False
            self.rounds += 1
            touched = []
            for v in members[s]:
                for u in adj[v]:
                    if count[u]:
                        count[u] += 1
                    else:
                        count[u] = 1
                        touched.append(u)
            if not touched:
                continue
            by_class: dict[int, list[int]] = {}
            for u in touched:
                c = color[u]
                bucket = by_class.get(c)
                if bucket is None:
                    by_class[c] = [u]
                else:
                    bucket.append(u)
            for c in sorted(by_class):
                hit = by_class[c]
                cell = members[c]
                if len(cell) == 1:
                    continue
                groups: dict[int, list[int]] = {}
                for u in hit:
                    k = count[u]
                    g = groups.get(k)
                    if g is None:
                        groups[k] = [u]
                    else:
                        g.append(u)
                zero = len(cell) - len(hit)
                if not zero and len(groups) == 1:
                    continue
                keys = sorted(groups)
                if zero:
                    best_key, best_size = 0, zero
                else:
                    best_key, best_size = keys[0], len(groups[keys[0]])
                for k in keys:
                    if len(groups[k]) > best_size:
                        best_key, best_size = k, len(groups[k])
                if zero and best_key != 0:
                    # the untouched part is no larger than the kept part, so this scan is O(|hit|)
                    groups[0] = [x for x in cell if not count[x]]
                    keys.insert(0, 0)
                for k in keys:
                    if k == best_key:
                        continue
                    part = groups[k]
                    new = len(members)
                    newset = set(part)
                    members.append(newset)
                    cell.difference_update(newset)
                    for x in part:
                        color[x] = new
                    in_queue.append(True)
                    queue.append(new)
            for u in touched:
                count[u] = 0

    def individualize(self, v: int) -> bool:
        """Give ``v`` a fresh color and refine.  Returns False if ``v`` was already a singleton."""
        c = self.color[v]
        if len(self.members[c]) == 1:
            return False
        new = len(self.members)
        self.members[c].discard(v)
        self.members.append({v})
        self.color[v] = new
        self._in_queue.append(False)
        self.refine([new])
        return True

    def coloring(self) -> Coloring:
        return Coloring(list(self.color), [sorted(m) for m in self.members], self.rounds)


def cr_stable(g: Graph, initial: Sequence[Hashable] | None = None) -> Coloring:
    r = Refiner(g.adj, initial)
    r.refine()
    return r.coloring()


@dataclass(frozen=True)
class Distinction:
    distinguished: bool
    joint: Coloring
    split: int  # vertices [0, split) belong to the first graph


def cr_distinguish(g: Graph, h: Graph,
                   g_colors: Sequence[Hashable] | None = None,
                   h_colors: Sequence[Hashable] | None = None) -> Distinction:
    """Refine the disjoint union of ``g`` and ``h`` with synchronized color names."""
    union = g.disjoint_union(h)
    initial = None
    if g_colors is not None or h_colors is not None:
        initial = list(g_colors or [0] * g.n) + list(h_colors or [0] * h.n)
    joint = cr_stable(union, initial)
    left = Counter(joint.class_of[:g.n])
    right = Counter(joint.class_of[g.n:])
    return Distinction(left != right, joint, g.n)


def cr_equivalent(g: Graph, h: Graph) -> bool:
    return not cr_distinguish(g, h).distinguished


def is_discrete(c: Coloring) -> bool:
    return len(c.classes) == len(c.class_of)


def is_equitable(g: Graph, c: Coloring) -> bool:
    """Every two vertices of a class have equally many neighbours in every class."""
    for members in c.classes:
        profile = None
        for v in members:
            p = Counter(c.class_of[u] for u in g.adj[v])
            if profile is None:
                profile = p
            elif p != profile:
                return False
    return True
