"""Random graph samplers: G(n, p) and the contiguous kernel/subdivision/GW model.

Every sampler is a pure function of its parameters and an integer seed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import lambertw

from .decompose import subdivide
from .errors import BadLambda, OddSum, RunawayTree
from .graph import Graph, MultiEdge, Multigraph

TREE_CAP = 10**6
_CHUNK = 1 << 16


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def _decode_pairs(k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Pair index k -> (i, j), i < j, ordered by j then i: k = j(j-1)/2 + i."""
    j = np.floor((1.0 + np.sqrt(1.0 + 8.0 * k.astype(np.float64))) / 2.0).astype(np.int64)
    # float rounding can be off by one either way
    j -= (j * (j - 1) // 2 > k)
    j += ((j + 1) * j // 2 <= k)
    return k - j * (j - 1) // 2, j


def gnp(n: int, p: float, seed) -> Graph:
    """Erdos-Renyi G(n, p) by geometric skipping over the pair index."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    total = n * (n - 1) // 2
    if p == 0.0 or total == 0:
        return Graph.from_arrays(n, [], [])
    rng = _rng(seed)
    chunk = max(_CHUNK, int(p * total * 1.1) + 16) if p < 1 else total
    picks = []
    pos = -1
    while True:
        gaps = rng.geometric(p, size=chunk).astype(np.int64)
        idx = pos + np.cumsum(gaps)
        if idx[-1] >= total:
            picks.append(idx[idx < total])
            break
        picks.append(idx)
        pos = int(idx[-1])
    k = np.concatenate(picks)
    i, j = _decode_pairs(k)
    return Graph.from_arrays(n, i, j)


@dataclass(frozen=True)
class ContiguousParams:
    n: int
    lam: float
    near_critical: bool = False  # xi variance 1/(n delta) instead of 1/n

    def __post_init__(self):
        if self.lam <= 1.0:
            raise BadLambda(f"lambda={self.lam} must exceed 1")
        if self.n < 1:
            raise ValueError("n must be positive")

    @property
    def mu(self) -> float:
        return solve_mu(self.lam)

    @property
    def delta(self) -> float:
        return self.lam - 1.0

    @property
    def xi_mean(self) -> float:
        return self.lam - self.mu

    @property
    def xi_var(self) -> float:
        return 1.0 / (self.n * self.delta) if self.near_critical else 1.0 / self.n


def solve_mu(lam: float) -> float:
    """The conjugate mu in (0, 1) with mu e^-mu = lam e^-lam."""
    if not lam > 1.0:
        raise BadLambda(f"lambda={lam} must exceed 1")
    target = lam * math.exp(-lam)
    mu = float(-lambertw(-target, 0).real)
    for _ in range(3):
        f = mu * math.exp(-mu) - target
        d = (1.0 - mu) * math.exp(-mu)
        if d <= 0.0 or f == 0.0:
            break
        nxt = mu - f / d
        if not 0.0 < nxt < 1.0:
            break
        mu = nxt
    return mu


def degree_sequence(params: ContiguousParams, seed) -> list[int]:
    """Kernel degrees: Poisson(xi) draws of size >= 3, redrawn until the sum is even."""
    rng = _rng(seed)
    sd = math.sqrt(params.xi_var)
    while True:
        xi = rng.normal(params.xi_mean, sd)
        if xi <= 0.0:
            continue
        eta = rng.poisson(xi, size=params.n)
        kept = eta[eta >= 3]
        if int(kept.sum()) % 2 == 0:
            return kept.tolist()


def config_multigraph(degrees: Sequence[int], seed) -> Multigraph:
    """Uniform pairing of half-edges; every edge has length 1.

    The pairing is uniform, the multigraph is not: each multigraph is weighted by
    1 / (2^loops * product of edge multiplicities!).
    """
    deg = np.asarray(degrees, dtype=np.int64)
    if int(deg.sum()) % 2:
        raise OddSum(f"degree sum {int(deg.sum())} is odd")
    stubs = np.repeat(np.arange(len(deg)), deg)
    _rng(seed).shuffle(stubs)
    a, b = stubs[0::2], stubs[1::2]
    u, v = np.minimum(a, b), np.maximum(a, b)
    edges = [MultiEdge(x, y, 1, i) for i, (x, y) in enumerate(zip(u.tolist(), v.tolist()))]
    return Multigraph(len(deg), edges, loop_min=1)


def geometric_lengths(mu: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """Geom(1 - mu) on {1, 2, ...}."""
    if mu == 0.0:
        return np.ones(size, dtype=np.int64)
    return rng.geometric(1.0 - mu, size=size).astype(np.int64)


def subdivide_geometric(k: Multigraph, mu: float, seed) -> Graph:
    """Replace every edge by a path of Geom(1 - mu) length, repaired to stay simple.

    Loops are drawn conditioned on length >= 3; within a parallel class
    only the first length-1 edge is kept and the others are redrawn
    conditioned on length >= 2.
    """
    if not 0.0 <= mu < 1.0:
        raise ValueError(f"mu={mu} outside [0, 1)")
    rng = _rng(seed)
    m = len(k.edges)
    lengths = geometric_lengths(mu, m, rng)
    extra = geometric_lengths(mu, m, rng)
    seen_short = set()
    new_edges = []
    for e, ln, ex in zip(k.edges, lengths.tolist(), extra.tolist()):
        if e.u == e.v:
            if ln < 3:
                ln = 2 + ex
        elif ln == 1:
            key = (e.u, e.v)
            if key in seen_short:
                ln = 1 + ex
            else:
                seen_short.add(key)
        new_edges.append(MultiEdge(e.u, e.v, ln, e.id))
    return subdivide(Multigraph(k.n, new_edges))


def attach_gw_trees(core: Graph, mu: float, seed) -> Graph:
    """Hang an independent Pois(mu) Galton-Watson tree from every vertex.

    New vertices are appended after the core's ids.
    """
    if not 0.0 <= mu < 1.0:
        raise ValueError(f"mu={mu} outside [0, 1)")
    rng = _rng(seed)
    us = [np.asarray([u for u, _ in core.edges], dtype=np.int64)]
    vs = [np.asarray([v for _, v in core.edges], dtype=np.int64)]
    parents = np.arange(core.n, dtype=np.int64)
    owner = parents.copy()
    sizes = np.ones(core.n, dtype=np.int64)
    nxt = core.n
    while len(parents) and mu > 0.0:
        kids = rng.poisson(mu, size=len(parents))
        total = int(kids.sum())
        if total == 0:
            break
        par = np.repeat(parents, kids)
        own = np.repeat(owner, kids)
        sizes += np.bincount(own, minlength=core.n)
        if sizes.max() > TREE_CAP:
            raise RunawayTree(f"tree at vertex {int(sizes.argmax())} exceeded {TREE_CAP} nodes")
        child = np.arange(nxt, nxt + total, dtype=np.int64)
        nxt += total
        us.append(par)
        vs.append(child)
        parents, owner = child, own
    return Graph.from_arrays(nxt, np.concatenate(us), np.concatenate(vs))


@dataclass(frozen=True)
class ContiguousSample:
    graph: Graph
    core: Graph  # synthetic core; its vertex i is vertex i of ``graph``
    kernel: Multigraph
    mu: float


def sample_contiguous(params: ContiguousParams, seed) -> ContiguousSample:
    s = np.random.SeedSequence(seed).spawn(4)
    mu = params.mu
    degs = degree_sequence(params, s[0])
    k = config_multigraph(degs, s[1])
    core = subdivide_geometric(k, mu, s[2])
    g = attach_gw_trees(core, mu, s[3])
    return ContiguousSample(g, core, k, mu)
