"""Certification oracles: shortest paths, stretch checks, size accounting.

The oracles are deliberately independent of the construction code; they see
only point sets, edge lists and bounds.  Shortest paths run on scipy's
sparse-graph Dijkstra; for tiny graphs ``enumerate_shortest_paths`` computes
the same answer by literally walking every simple path, which is the
ground-truth check keeping the fast oracle honest.

``certify_stretch`` certifies that a candidate subgraph preserves directed
distances up to a bound.  It checks every edge of the base graph (the worst
pair is always realised on an edge) and additionally spot-checks sampled
non-adjacent pairs; the sampling seed is fixed so reports are byte-stable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.csgraph as csgraph

from .diskgraph import DiskGraph
from .errors import CertificationError, UsageError
from .metric import REL_TOL

__all__ = [
    "shortest_paths_from",
    "enumerate_shortest_paths",
    "StretchReport",
    "certify_stretch",
    "SizeReport",
    "size_report",
]

# Largest point count for which exhaustive path enumeration stays tractable.
_ENUM_CAP = 10


def _edge_arrays(
    edges,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Normalise an edge collection to (src, tgt, w) arrays.

    Accepts (source, target, weight) triples or objects carrying
    ``source`` / ``target`` / ``weight`` attributes (spanner edges).
    """
    srcs: list[int] = []
    tgts: list[int] = []
    ws: list[float] = []
    for e in edges:
        if hasattr(e, "source"):
            srcs.append(e.source)
            tgts.append(e.target)
            ws.append(e.weight)
        else:
            s, t, w = e
            srcs.append(int(s))
            tgts.append(int(t))
            ws.append(float(w))
    return (
        np.asarray(srcs, dtype=np.int64),
        np.asarray(tgts, dtype=np.int64),
        np.asarray(ws, dtype=float),
    )


def _graph_matrix(n: int, src, tgt, w) -> sp.csr_matrix:
    if len(src) and (src.min() < 0 or src.max() >= n or tgt.min() < 0 or tgt.max() >= n):
        raise UsageError("edge endpoint out of range")
    if len(w) and np.any(w < 0):
        raise UsageError("negative edge weights are not supported")
    return sp.csr_matrix((w, (src, tgt)), shape=(n, n))


def shortest_paths_from(
    n: int, edges, source: int
) -> tuple[np.ndarray, np.ndarray]:
    """Directed single-source distances and predecessors.

    Returns ``(dist, parent)`` where unreachable points have ``inf`` distance
    and parent -1 (the source's parent is also -1).  Parallel edges collapse
    to their weight sum under scipy's matrix representation, so callers must
    pass each edge at most once.
    """
    if not 0 <= source < n:
        raise UsageError(f"source {source} out of range [0, {n})")
    src, tgt, w = _edge_arrays(edges)
    mat = _graph_matrix(n, src, tgt, w)
    dist, parent = csgraph.dijkstra(
        mat, directed=True, indices=source, return_predecessors=True
    )
    parent = np.where(parent < 0, -1, parent).astype(np.int64)
    return dist, parent


def enumerate_shortest_paths(n: int, edges, source: int) -> np.ndarray:
    """Single-source distances by exhaustive simple-path enumeration.

    Walks every simple path out of ``source`` with no pruning whatsoever and
    keeps the cheapest arrival per point.  Exponential by design; refuses
    graphs with more than a handful of points.
    """
    if n > _ENUM_CAP:
        raise UsageError(f"exhaustive enumeration is limited to n <= {_ENUM_CAP}")
    if not 0 <= source < n:
        raise UsageError(f"source {source} out of range [0, {n})")
    src, tgt, w = _edge_arrays(edges)
    if len(w) and np.any(w < 0):
        raise UsageError("negative edge weights are not supported")
    adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for s, t, weight in zip(src, tgt, w):
        adj[int(s)].append((int(t), float(weight)))
    dist = np.full(n, np.inf)
    dist[source] = 0.0
    visited = [False] * n
    visited[source] = True

    def walk(u: int, acc: float) -> None:
        if acc < dist[u]:
            dist[u] = acc
        for v, weight in adj[u]:
            if not visited[v]:
                visited[v] = True
                walk(v, acc + weight)
                visited[v] = False

    walk(source, 0.0)
    return dist


@dataclass
class StretchReport:
    """Outcome of ``certify_stretch``."""

    bound: float
    tolerance: float
    regime: str
    edges_checked: int
    max_ratio: float
    worst_source: int | None
    worst_target: int | None
    worst_direct: float | None
    worst_via: float | None
    witness: list[int] | None
    pairs_checked: int
    pair_max_ratio: float | None
    passed: bool
    per_edge: list[tuple[int, int, float]] | None = None

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "tolerance": self.tolerance,
            "regime": self.regime,
            "edges_checked": self.edges_checked,
            "max_ratio": self.max_ratio,
            "worst_source": self.worst_source,
            "worst_target": self.worst_target,
            "worst_direct": self.worst_direct,
            "worst_via": self.worst_via,
            "witness": self.witness,
            "pairs_checked": self.pairs_checked,
            "pair_max_ratio": self.pair_max_ratio,
            "passed": self.passed,
        }


def certify_stretch(
    base: DiskGraph,
    h_edges,
    bound: float,
    *,
    universe: DiskGraph | None = None,
    regime: str = "proof-safe",
    pair_samples: int = 32,
    include_per_edge: bool = False,
    rel: float = REL_TOL,
) -> StretchReport:
    """Certify that ``h_edges`` preserves ``base``'s distances within ``bound``.

    Every candidate edge must exist in ``universe`` (``base`` itself unless
    the candidate was built against inflated radii) and carry the metric
    distance of its endpoints as weight; violations raise
    ``CertificationError`` naming the offending edge.  The stretch bound is
    then checked on every base edge, plus ``pair_samples`` sampled reachable
    point pairs; ratios may exceed the bound by relative ``rel`` before the
    report fails.
    """
    if bound < 1.0:
        raise UsageError(f"stretch bound must be >= 1, got {bound}")
    uni = base if universe is None else universe
    n = base.n
    src, tgt, w = _edge_arrays(h_edges)
    if len(src) and (src.min() < 0 or src.max() >= n or tgt.min() < 0 or tgt.max() >= n):
        raise UsageError("candidate edge endpoint out of range")

    adj = uni.adjacency()
    dmat = base.metric.distance_matrix()
    for s, t in zip(src.tolist(), tgt.tolist()):
        if not adj[s, t]:
            raise CertificationError(
                f"candidate edge ({s}, {t}) lies outside the allowed edge universe"
            )
    for s, t, weight in zip(src.tolist(), tgt.tolist(), w.tolist()):
        d = dmat[s, t]
        if abs(weight - d) > rel * max(abs(weight), abs(d)):
            raise CertificationError(
                f"candidate edge ({s}, {t}) carries weight {weight}, "
                f"expected the metric distance {d}"
            )

    # Collapse duplicate (s, t) pairs before building the matrix; duplicates
    # carry identical weights (checked above) but would otherwise sum.
    if len(src):
        pairs = np.stack([src, tgt], axis=1)
        _, keep = np.unique(pairs, axis=0, return_index=True)
        src, tgt = src[keep], tgt[keep]
        hmat = _graph_matrix(n, src, tgt, dmat[src, tgt])
    else:
        hmat = _graph_matrix(n, src, tgt, w)

    report = StretchReport(
        bound=float(bound),
        tolerance=rel,
        regime=regime,
        edges_checked=base.n_edges,
        max_ratio=1.0,
        worst_source=None,
        worst_target=None,
        worst_direct=None,
        worst_via=None,
        witness=None,
        pairs_checked=0,
        pair_max_ratio=None,
        passed=True,
        per_edge=[] if include_per_edge else None,
    )
    if base.n_edges == 0:
        return report

    sources = np.unique(base.src)
    hdist = csgraph.dijkstra(hmat, directed=True, indices=sources)
    row_of = {int(s): k for k, s in enumerate(sources)}

    max_ratio = 0.0
    worst: tuple[int, int, float, float] | None = None
    for s, t, weight in zip(base.src.tolist(), base.tgt.tolist(), base.w.tolist()):
        via = float(hdist[row_of[s], t])
        ratio = via / weight
        if report.per_edge is not None:
            report.per_edge.append((s, t, ratio))
        if worst is None or ratio > max_ratio:
            max_ratio = ratio
            worst = (s, t, weight, via)

    assert worst is not None
    report.max_ratio = max_ratio
    report.worst_source, report.worst_target = worst[0], worst[1]
    report.worst_direct, report.worst_via = worst[2], worst[3]
    report.passed = max_ratio <= bound * (1.0 + rel)

    if np.isfinite(worst[3]):
        _, parent = csgraph.dijkstra(
            hmat, directed=True, indices=worst[0], return_predecessors=True
        )
        path = [worst[1]]
        while path[-1] != worst[0]:
            prev = int(parent[path[-1]])
            if prev < 0:
                path = None
                break
            path.append(prev)
        report.witness = path[::-1] if path else None

    # Spot-check sampled point pairs beyond the edges.  The seed is fixed so
    # repeated certification of the same input yields byte-identical reports.
    if pair_samples > 0 and n > 1:
        rng = np.random.default_rng(53511)
        gdist = csgraph.dijkstra(
            _graph_matrix(n, base.src, base.tgt, base.w), directed=True, indices=sources
        )
        pair_max = 0.0
        checked = 0
        for _ in range(pair_samples):
            u = int(sources[rng.integers(0, sources.size)])
            v = int(rng.integers(0, n))
            if u == v:
                continue
            gd = float(gdist[row_of[u], v])
            if not np.isfinite(gd):
                continue
            ratio = float(hdist[row_of[u], v]) / gd
            checked += 1
            if ratio > pair_max:
                pair_max = ratio
        report.pairs_checked = checked
        report.pair_max_ratio = pair_max if checked else None
        if checked and pair_max > bound * (1.0 + rel):
            report.passed = False

    return report


@dataclass
class SizeReport:
    """Edge and pivot accounting for a constructed spanner."""

    n: int
    L: int
    total_edges: int
    edges_per_point: float
    edges_per_level: dict[int, int]
    max_incoming: int
    incoming_bound: float | None
    incoming_violations: list[tuple[int, int, int]]
    pivots_per_level: dict[int, int] | None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "L": self.L,
            "total_edges": self.total_edges,
            "edges_per_point": self.edges_per_point,
            "edges_per_level": {str(k): v for k, v in sorted(self.edges_per_level.items())},
            "max_incoming": self.max_incoming,
            "incoming_bound": self.incoming_bound,
            "incoming_violations": self.incoming_violations,
            "pivots_per_level": None
            if self.pivots_per_level is None
            else {str(k): v for k, v in sorted(self.pivots_per_level.items())},
        }


def size_report(sp_obj, *, dim: int | None = None) -> SizeReport:
    """Count edges per level and per target for a construction result.

    Accepts a single-pass spanner or a merged relaxed spanner (where only
    surviving edges count).  When the instance has a Euclidean dimension,
    per-(target, level) incoming counts are checked against
    ``((1 + alpha) / beta + 3) ** dim`` and violations are listed.
    """
    edges = [e for e in sp_obj.edges if e.survived]
    params = sp_obj.params
    per_level: dict[int, int] = {}
    incoming: dict[tuple[int, int], int] = {}
    for e in edges:
        per_level[e.level] = per_level.get(e.level, 0) + 1
        key = (e.target, e.level)
        incoming[key] = incoming.get(key, 0) + 1
    max_incoming = max(incoming.values()) if incoming else 0
    bound = None
    violations: list[tuple[int, int, int]] = []
    if dim is not None:
        bound = ((1.0 + params.alpha) / params.beta + 3.0) ** dim
        violations = sorted(
            (t, l, c) for (t, l), c in incoming.items() if c > bound
        )
    pivots: dict[int, int] | None = None
    if hasattr(sp_obj, "pivot_events"):
        pivots = {}
        for lvl, _ in sp_obj.pivot_events:
            pivots[lvl] = pivots.get(lvl, 0) + 1
    n = sp_obj.n
    return SizeReport(
        n=n,
        L=sp_obj.levels.L,
        total_edges=len(edges),
        edges_per_point=len(edges) / n,
        edges_per_level=per_level,
        max_incoming=max_incoming,
        incoming_bound=bound,
        incoming_violations=violations,
        pivots_per_level=pivots,
    )
