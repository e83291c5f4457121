"""Configuration-model sampling and Monte Carlo measurement.

Bipartite and directed graphs are built by stub matching from sampled
degree sequences; measurement covers giant components, one-mode
projections, triangle clustering, and SIR bond percolation.  Everything
is deterministic given the seed: identical inputs and seed produce a
bit-identical edge list.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import isqrt
from typing import Optional, Sequence

import numpy as np

from .degdist import DegreeDistribution, JointDegreeDistribution
from .epidemics import Transmissibility
from .errors import BalanceFailureError, SignedDistributionError

__all__ = [
    "GraphSample",
    "OutbreakStats",
    "UnionFind",
    "sample_degree_sequence",
    "build_bipartite",
    "build_directed",
    "giant_component_fraction",
    "one_mode_projection",
    "measured_clustering",
    "sir_percolation",
    "write_edgelist",
    "read_edgelist",
]


@dataclass(frozen=True, eq=False)
class GraphSample:
    """A sampled multigraph with its generating degree sequences.

    ``mode`` is one of ``"bipartite"``, ``"directed"``, ``"unipartite"``.
    ``edges`` is an ``(E, 2)`` int64 array; for bipartite samples column 0
    indexes side A and column 1 indexes side B (each side numbered from
    zero), for directed samples each row is ``u -> v``.  ``degrees`` holds
    ``(deg_a, deg_b)``, ``(in_deg, out_deg)``, or ``(deg,)`` depending on
    mode.  Multi-edges, and self-loops in directed mode, are permitted.
    """

    mode: str
    edges: np.ndarray
    degrees: tuple
    seed: Optional[int]
    k_max: int

    def __post_init__(self):
        if self.mode not in ("bipartite", "directed", "unipartite"):
            raise ValueError(f"unknown sample mode {self.mode!r}")
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        object.__setattr__(self, "edges", edges)
        degs = tuple(np.asarray(d, dtype=np.int64) for d in self.degrees)
        object.__setattr__(self, "degrees", degs)
        n_edges = edges.shape[0]
        if self.mode == "bipartite":
            da, db = degs
            if int(da.sum()) != n_edges or int(db.sum()) != n_edges:
                raise ValueError("stub totals do not match the edge count")
        elif self.mode == "directed":
            din, dout = degs
            if int(din.sum()) != n_edges or int(dout.sum()) != n_edges:
                raise ValueError("in/out stub totals do not match the edge count")
        else:
            (d,) = degs
            if int(d.sum()) != 2 * n_edges:
                raise ValueError("degree sum does not match twice the edge count")

    @property
    def n_a(self) -> int:
        if self.mode != "bipartite":
            raise ValueError("n_a is only defined for bipartite samples")
        return len(self.degrees[0])

    @property
    def n_b(self) -> int:
        if self.mode != "bipartite":
            raise ValueError("n_b is only defined for bipartite samples")
        return len(self.degrees[1])

    @property
    def n_vertices(self) -> int:
        if self.mode == "bipartite":
            return len(self.degrees[0]) + len(self.degrees[1])
        return len(self.degrees[0])

    def manifest(self) -> dict:
        out = {
            "mode": self.mode,
            "edges": int(self.edges.shape[0]),
            "seed": self.seed,
            "k_max": int(self.k_max),
        }
        if self.mode == "bipartite":
            out["n_a"] = self.n_a
            out["n_b"] = self.n_b
        else:
            out["n"] = self.n_vertices
        return out


@dataclass(frozen=True)
class OutbreakStats:
    """Aggregate of SIR percolation trials on one sample."""

    mean_size: float
    giant_fraction: float
    sizes: np.ndarray
    cutoff: int
    trials: int
    seed: int


class UnionFind:
    """Union by size with path halving."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return
        if self.size[rx] < self.size[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        self.size[rx] += self.size[ry]

    def max_component(self) -> int:
        return max(
            (self.size[i] for i in range(len(self.parent)) if self.parent[i] == i),
            default=0,
        )


def _inverse_cdf(dist: DegreeDistribution) -> np.ndarray:
    if dist.signed:
        raise SignedDistributionError(
            "cannot sample from a signed distribution; its weights are formal"
        )
    return np.cumsum(dist.weights[1:])


def _draw(cdf: np.ndarray, rng: np.random.Generator, n: int) -> np.ndarray:
    u = rng.random(n) * cdf[-1]
    return np.searchsorted(cdf, u, side="right").astype(np.int64) + 1


def sample_degree_sequence(
    dist: DegreeDistribution, n: int, seed: int
) -> np.ndarray:
    """Draw ``n`` independent degrees from the truncated pmf.

    Inverse-CDF sampling over the stored weights; degrees lie in
    ``[1, k_max]``.  Signed distributions are rejected.
    """
    if n < 1:
        raise ValueError("need at least one vertex")
    cdf = _inverse_cdf(dist)
    rng = np.random.Generator(np.random.PCG64(seed))
    return _draw(cdf, rng, n)


def _balance(
    seq_light: np.ndarray,
    total_light: int,
    total_heavy: int,
    cdf,
    rng: np.random.Generator,
    budget: list,
    label: str,
) -> int:
    """One redraw attempt on the lighter side; returns the new light total.

    A redraw replaces the degree of a uniformly chosen vertex with a
    fresh draw, and is kept only when it strictly narrows the stub gap.
    Unconditional replacement makes the gap a null-recurrent walk whose
    hitting time regularly exceeds any linear cap at large N; keeping
    only narrowing draws converges in O(gap) attempts and touches
    O(gap / mean) vertices, so the realized marginals are unbiased up to
    a vanishing fraction of the sequence.
    """
    if cdf is None:
        raise ValueError(
            f"stub totals differ and no distribution was given for side {label}; "
            "pass the degree distribution to enable balance redraws"
        )
    if budget[0] <= 0:
        raise BalanceFailureError(
            f"balance repair exceeded the redraw cap (gap {abs(total_heavy - total_light)} "
            f"remains on side {label}); the truncation is likely pathological"
        )
    budget[0] -= 1
    i = int(rng.integers(len(seq_light)))
    x = int(_draw(cdf, rng, 1)[0])
    candidate = total_light - int(seq_light[i]) + x
    if abs(total_heavy - candidate) < abs(total_heavy - total_light):
        seq_light[i] = x
        return candidate
    return total_light


def build_bipartite(
    seq_a: Sequence[int],
    seq_b: Sequence[int],
    seed: int,
    dist_a: Optional[DegreeDistribution] = None,
    dist_b: Optional[DegreeDistribution] = None,
) -> GraphSample:
    """Configuration-model bipartite graph from two degree sequences.

    When the stub totals differ, degrees of uniformly chosen vertices on
    the lighter side are redrawn until the totals match, with a cap of
    10^3 times the initial imbalance before ``BalanceFailureError``.
    Redraws need the generating distribution of the side being repaired.
    Matching is a uniform random pairing of A-stubs to B-stubs;
    multi-edges are retained.
    """
    a = np.array(seq_a, dtype=np.int64)
    b = np.array(seq_b, dtype=np.int64)
    if a.size == 0 or b.size == 0:
        raise ValueError("degree sequences must be nonempty")
    if (a < 0).any() or (b < 0).any():
        raise ValueError("degrees must be nonnegative")
    rng = np.random.Generator(np.random.PCG64(seed))
    cdf_a = _inverse_cdf(dist_a) if dist_a is not None else None
    cdf_b = _inverse_cdf(dist_b) if dist_b is not None else None
    ta, tb = int(a.sum()), int(b.sum())
    budget = [1000 * abs(ta - tb)]
    while ta != tb:
        if ta < tb:
            ta = _balance(a, ta, tb, cdf_a, rng, budget, "A")
        else:
            tb = _balance(b, tb, ta, cdf_b, rng, budget, "B")
    a_stubs = np.repeat(np.arange(a.size, dtype=np.int64), a)
    b_stubs = np.repeat(np.arange(b.size, dtype=np.int64), b)
    edges = np.column_stack((a_stubs, b_stubs[rng.permutation(tb)]))
    k_max = int(max(dist_a.k_max if dist_a is not None else a.max(initial=0),
                    dist_b.k_max if dist_b is not None else b.max(initial=0)))
    return GraphSample("bipartite", edges, (a, b), seed, k_max)


def build_directed(
    pi: JointDegreeDistribution, n: int, seed: int
) -> GraphSample:
    """Directed configuration-model graph on ``n`` vertices from a joint law.

    Each vertex draws an (in, out) pair: independently from the two
    marginals for separated laws, or from the flattened grid for the
    Barnes joint law.  In/out stub totals are balanced by redrawing the
    whole pair of uniformly chosen vertices (same cap and acceptance
    rule as the bipartite builder), then out-stubs are matched uniformly
    to in-stubs.  Self-loops and multi-edges are retained.
    """
    if n < 1:
        raise ValueError("need at least one vertex")
    if pi.signed:
        raise SignedDistributionError(
            "cannot sample from a signed joint distribution"
        )
    rng = np.random.Generator(np.random.PCG64(seed))
    if pi.kind == "separated":
        cdf_in = _inverse_cdf(pi.p)
        cdf_out = _inverse_cdf(pi.q)

        def draw_pairs(m):
            return _draw(cdf_in, rng, m), _draw(cdf_out, rng, m)

    else:
        flat = pi.grid.ravel()
        cdf_flat = np.cumsum(flat)
        width = pi.k_max + 1

        def draw_pairs(m):
            u = rng.random(m) * cdf_flat[-1]
            idx = np.searchsorted(cdf_flat, u, side="right")
            return (idx // width).astype(np.int64), (idx % width).astype(np.int64)

    deg_in, deg_out = draw_pairs(n)
    ti, to = int(deg_in.sum()), int(deg_out.sum())
    budget = 1000 * abs(ti - to)
    while ti != to:
        if budget <= 0:
            raise BalanceFailureError(
                f"balance repair exceeded the redraw cap (gap {abs(ti - to)} remains); "
                "the truncation is likely pathological"
            )
        budget -= 1
        i = int(rng.integers(n))
        new_in, new_out = draw_pairs(1)
        ci = ti - int(deg_in[i]) + int(new_in[0])
        co = to - int(deg_out[i]) + int(new_out[0])
        if abs(ci - co) < abs(ti - to):
            deg_in[i], deg_out[i] = new_in[0], new_out[0]
            ti, to = ci, co
    out_stubs = np.repeat(np.arange(n, dtype=np.int64), deg_out)
    in_stubs = np.repeat(np.arange(n, dtype=np.int64), deg_in)
    edges = np.column_stack((out_stubs, in_stubs[rng.permutation(ti)]))
    return GraphSample("directed", edges, (deg_in, deg_out), seed, pi.k_max)


def giant_component_fraction(g: GraphSample) -> float:
    """Largest connected-component size over the vertex count.

    Directed samples are measured on the undirected skeleton; bipartite
    samples count both sides.
    """
    if g.mode == "bipartite":
        n = g.n_a + g.n_b
        offset = g.n_a
    else:
        n = g.n_vertices
        offset = 0
    if n == 0:
        return 0.0
    uf = UnionFind(n)
    for u, v in g.edges.tolist():
        uf.union(u, v + offset)
    return uf.max_component() / n


def one_mode_projection(g: GraphSample, side: str = "A") -> GraphSample:
    """Project a bipartite sample onto one side.

    Two vertices of the chosen side are joined when they share at least
    one neighbor; the result is a simple graph (duplicate pairs and
    self-pairs from multi-edges are collapsed).
    """
    if g.mode != "bipartite":
        raise ValueError("one_mode_projection needs a bipartite sample")
    side = side.upper()
    if side not in ("A", "B"):
        raise ValueError("side must be 'A' or 'B'")
    keep, group = (0, 1) if side == "A" else (1, 0)
    n_keep = g.n_a if side == "A" else g.n_b
    order = np.argsort(g.edges[:, group], kind="stable")
    kept = g.edges[order, keep]
    anchors = g.edges[order, group]
    pairs = set()
    start = 0
    m = anchors.size
    while start < m:
        stop = start
        while stop < m and anchors[stop] == anchors[start]:
            stop += 1
        members = np.unique(kept[start:stop])
        for i in range(members.size):
            for j in range(i + 1, members.size):
                pairs.add((int(members[i]), int(members[j])))
        start = stop
    if pairs:
        edges = np.array(sorted(pairs), dtype=np.int64)
    else:
        edges = np.empty((0, 2), dtype=np.int64)
    deg = np.bincount(edges.ravel(), minlength=n_keep).astype(np.int64)
    return GraphSample("unipartite", edges, (deg,), g.seed, g.k_max)


def measured_clustering(g: GraphSample) -> float:
    """Triangle clustering 3*(triangles)/(connected triples); 0 when no triples."""
    if g.mode != "unipartite":
        raise ValueError("measured_clustering needs a simple unipartite sample")
    deg = g.degrees[0]
    triples = int(np.dot(deg, deg - 1)) // 2
    if triples == 0:
        return 0.0
    adj = [set() for _ in range(g.n_vertices)]
    for u, v in g.edges.tolist():
        adj[u].add(v)
        adj[v].add(u)
    closed = 0
    for u, v in g.edges.tolist():
        small, big = (adj[u], adj[v]) if len(adj[u]) < len(adj[v]) else (adj[v], adj[u])
        closed += sum(1 for w in small if w in big)
    # each triangle contributes one common neighbor to each of its 3 edges
    return closed / triples


def _csr(targets: np.ndarray, sources: np.ndarray, n_source: int):
    order = np.argsort(sources, kind="stable")
    indices = targets[order]
    counts = np.bincount(sources, minlength=n_source)
    indptr = np.concatenate(([0], np.cumsum(counts)))
    return indptr, indices


def _gather(indptr: np.ndarray, indices: np.ndarray, frontier: np.ndarray) -> np.ndarray:
    starts = indptr[frontier]
    lens = indptr[frontier + 1] - starts
    total = int(lens.sum())
    if total == 0:
        return np.empty(0, dtype=indices.dtype)
    cum = np.cumsum(lens)
    idx = np.arange(total, dtype=np.int64) + np.repeat(
        starts - np.concatenate(([0], cum[:-1])), lens
    )
    return indices[idx]


def sir_percolation(
    g: GraphSample,
    t: Transmissibility,
    trials: int,
    seed: int,
    giant_cutoff: Optional[int] = None,
) -> OutbreakStats:
    """SIR outbreaks as directed bond percolation on a bipartite sample.

    Each A->B contact transmits with probability ``t_mf`` and each B->A
    contact with ``t_fm``, independently per contact and direction; a
    trial seeds a uniformly random A-vertex and counts the vertices
    reachable through kept arcs.  Trial ``k`` uses the derived seed
    ``seed XOR k`` so replicates are order-independent.  An outbreak is
    giant when it reaches ``giant_cutoff`` vertices (default: the square
    root of the population).
    """
    if g.mode != "bipartite":
        raise ValueError("sir_percolation needs a bipartite sample")
    if trials < 1:
        raise ValueError("need at least one trial")
    n_a, n_b = g.n_a, g.n_b
    a2b = _csr(g.edges[:, 1], g.edges[:, 0], n_a)
    b2a = _csr(g.edges[:, 0], g.edges[:, 1], n_b)
    cutoff = giant_cutoff if giant_cutoff is not None else max(2, isqrt(n_a + n_b))
    sizes = np.empty(trials, dtype=np.int64)
    for k in range(trials):
        rng = np.random.Generator(np.random.PCG64(seed ^ k))
        start = int(rng.integers(n_a))
        hit_a = np.zeros(n_a, dtype=bool)
        hit_b = np.zeros(n_b, dtype=bool)
        hit_a[start] = True
        frontier = np.array([start], dtype=np.int64)
        while frontier.size:
            arcs = _gather(*a2b, frontier)
            if arcs.size:
                arcs = arcs[rng.random(arcs.size) < t.t_mf]
                arcs = arcs[~hit_b[arcs]]
            new_b = np.unique(arcs)
            hit_b[new_b] = True
            arcs = _gather(*b2a, new_b)
            if arcs.size:
                arcs = arcs[rng.random(arcs.size) < t.t_fm]
                arcs = arcs[~hit_a[arcs]]
            frontier = np.unique(arcs)
            hit_a[frontier] = True
        sizes[k] = int(hit_a.sum()) + int(hit_b.sum())
    return OutbreakStats(
        mean_size=float(sizes.mean()),
        giant_fraction=float((sizes >= cutoff).mean()),
        sizes=sizes,
        cutoff=int(cutoff),
        trials=trials,
        seed=seed,
    )


def write_edgelist(g: GraphSample, path) -> tuple:
    """Write the edge list as plain text plus a JSON manifest.

    Bipartite and unipartite edges are written as ``u v`` lines, directed
    edges as ``u -> v``.  The manifest (``<path>.manifest.json``) records
    mode, sizes, seed, and k_max so the sample can be reloaded.
    """
    path = str(path)
    sep = " -> " if g.mode == "directed" else " "
    with open(path, "w") as fh:
        for u, v in g.edges.tolist():
            fh.write(f"{u}{sep}{v}\n")
    manifest_path = path + ".manifest.json"
    with open(manifest_path, "w") as fh:
        json.dump(g.manifest(), fh, indent=1)
        fh.write("\n")
    return path, manifest_path


def read_edgelist(path) -> GraphSample:
    """Reload a sample written by :func:`write_edgelist`.

    Uses the manifest when present; otherwise infers a bipartite sample
    with side sizes taken from the largest indices.
    """
    path = str(path)
    rows = []
    directed = False
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if "->" in line:
                directed = True
                u, v = line.split("->")
            else:
                u, v = line.split()
            rows.append((int(u), int(v)))
    edges = np.array(rows, dtype=np.int64) if rows else np.empty((0, 2), np.int64)
    manifest = None
    try:
        with open(path + ".manifest.json") as fh:
            manifest = json.load(fh)
    except FileNotFoundError:
        pass
    if manifest is not None:
        mode = manifest["mode"]
        seed = manifest.get("seed")
        k_max = int(manifest.get("k_max", 0))
        if mode == "bipartite":
            n_a, n_b = int(manifest["n_a"]), int(manifest["n_b"])
        else:
            n_a = n_b = int(manifest["n"])
    else:
        mode = "directed" if directed else "bipartite"
        seed = None
        k_max = 0
        n_a = int(edges[:, 0].max()) + 1 if edges.size else 1
        n_b = int(edges[:, 1].max()) + 1 if edges.size else 1
        if directed:
            n_a = n_b = max(n_a, n_b)
    if mode == "bipartite":
        degs = (
            np.bincount(edges[:, 0], minlength=n_a).astype(np.int64),
            np.bincount(edges[:, 1], minlength=n_b).astype(np.int64),
        )
    elif mode == "directed":
        degs = (
            np.bincount(edges[:, 1], minlength=n_a).astype(np.int64),
            np.bincount(edges[:, 0], minlength=n_a).astype(np.int64),
        )
    else:
        deg = np.bincount(edges.ravel(), minlength=n_a).astype(np.int64)
        degs = (deg,)
    if k_max == 0:
        k_max = int(max((d.max(initial=0) for d in degs), default=0))
    return GraphSample(mode, edges, degs, seed, k_max)
