from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .graph import Graph

Status = Literal["success", "fallback_used", "not_canonizable"]


@dataclass(frozen=True)
class CanonicalForm:
    labeling: list[int]  # vertex -> label in 1..n
    canonical_edges: list[tuple[int, int]]
    certificate: str  # sha256 hex of (n, canonical_edges)
    status: Status = "success"
    route: str = ""

    @property
    def n(self) -> int:
        return len(self.labeling)

    @property
    def order(self) -> list[int]:
        """Vertices listed by label."""
        out = [0] * len(self.labeling)
        for v, lab in enumerate(self.labeling):
            out[lab - 1] = v
        return out


def relabeled_edges(g: Graph, labeling: Sequence[int]) -> np.ndarray:
    if g.m == 0:
        return np.zeros((0, 2), dtype=np.int64)
    if g.m <= 256:
        e = sorted((a, b) if a < b else (b, a) for a, b in ((labeling[u], labeling[v]) for u, v in g.edges))
        return np.array(e, dtype=np.int64)
    lab = np.asarray(labeling, dtype=np.int64)
    e = lab[np.asarray(g.edges, dtype=np.int64)]
    e.sort(axis=1)
    return e[np.lexsort((e[:, 1], e[:, 0]))]


def digest(n: int, edges: np.ndarray) -> str:
    h = hashlib.sha256()
    h.update(np.int64(n).tobytes())
    h.update(np.ascontiguousarray(edges, dtype="<i8").tobytes())
    return h.hexdigest()


def form_from_order(g: Graph, order: Sequence[int], status: Status = "success", route: str = "") -> CanonicalForm:
    """Label ``order[i]`` with ``i + 1``."""
    if len(order) != g.n:
        raise ValueError(f"order lists {len(order)} vertices, graph has {g.n}")
    labeling = [0] * g.n
    for i, v in enumerate(order):
        labeling[v] = i + 1
    edges = relabeled_edges(g, labeling)
    return CanonicalForm(labeling, list(map(tuple, edges.tolist())), digest(g.n, edges), status, route)
