"""Relaxed spanner: two construction passes merged, then pruned per point.

The relaxed variant answers a lower bound: disk graphs in general admit no
sparse spanner, but they do once the spanner may use edges that appear after
every radius is inflated by ``1 + eps``.  The pipeline is:

1. build the spanner ``H`` of the input graph;
2. build the spanner ``H'`` of the graph induced by the inflated radii;
3. merge both edge sets (weights and levels taken in the original graph's
   normalized scale, inflated-pass edges re-levelled into that structure);
4. prune per point q: incoming edges at levels at or beyond q's own level
   ``l(q)`` are protected, and among the coarser levels ``l(q)-1 .. 0`` only
   the first ``4 * gamma`` non-empty ones (walking downward from
   ``l(q)-1``) keep their edges.

Pruning uses the original radii, not the inflated ones, and is a pure
per-point filter, which makes it idempotent and order-independent; the
per-point bookkeeping is kept in a trace so tests can audit every decision.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .diskgraph import (
    DiskGraph,
    LevelStructure,
    RadiusAssignment,
    build_disk_graph,
    inflate_radii,
    normalize,
)
from .errors import DomainError, UsageError
from .metric import Metric
from .spanner import Params, Spanner, SpannerEdge, disk_spanner

__all__ = [
    "PrunePointTrace",
    "PruneTrace",
    "RelaxedSpanner",
    "prune",
    "build_relaxed_spanner",
]


@dataclass(frozen=True)
class PrunePointTrace:
    """Pruning decisions for one point's incoming edges.

    ``below_levels`` lists the non-empty incoming levels coarser than the
    point's own level, ordered from ``point_level - 1`` downward; the kept
    levels are always a prefix of that list.
    """

    point: int
    point_level: int
    protected: int
    below_levels: tuple[int, ...]
    kept_levels: tuple[int, ...]
    dropped_levels: tuple[int, ...]
    kept: int
    dropped: int


@dataclass
class PruneTrace:
    gamma: int
    quota: int
    per_point: dict[int, PrunePointTrace]

    def __getitem__(self, q: int) -> PrunePointTrace:
        return self.per_point[q]


class RelaxedSpanner:
    """Merged and pruned result of the two construction passes.

    ``edges`` holds the full union in deterministic order, each edge tagged
    with its origin ("H", "H'" or "both") and whether it survived pruning;
    ``surviving()`` is the actual relaxed spanner.
    """

    def __init__(
        self,
        edges: list[SpannerEdge],
        params: Params,
        levels: LevelStructure,
        trace: PruneTrace,
        *,
        base_graph: DiskGraph | None = None,
        universe_graph: DiskGraph | None = None,
        h: Spanner | None = None,
        h_prime: Spanner | None = None,
        scale: float = 1.0,
    ) -> None:
        self.edges = edges
        self.params = params
        self.levels = levels
        self.trace = trace
        self.base_graph = base_graph
        self.universe_graph = universe_graph
        self.h = h
        self.h_prime = h_prime
        self.scale = scale

    @property
    def n(self) -> int:
        if self.base_graph is not None:
            return self.base_graph.n
        return 1 + max((max(e.source, e.target) for e in self.edges), default=0)

    @property
    def gamma(self) -> int:
        return self.trace.gamma

    def surviving(self) -> list[SpannerEdge]:
        return [e for e in self.edges if e.survived]

    @property
    def n_surviving(self) -> int:
        return sum(1 for e in self.edges if e.survived)

    def surviving_tuples(self) -> list[tuple[int, int, float]]:
        return [(e.source, e.target, e.weight) for e in self.edges if e.survived]

    def kept_levels(self) -> dict[int, tuple[int, ...]]:
        """Per point: the retained incoming levels coarser than its own."""
        return {q: t.kept_levels for q, t in self.trace.per_point.items()}

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return (
            f"RelaxedSpanner(n={self.n}, union={len(self.edges)}, "
            f"surviving={self.n_surviving}, gamma={self.gamma})"
        )


def prune(
    union: list[SpannerEdge],
    radii: RadiusAssignment,
    levels: LevelStructure,
    gamma: int,
) -> RelaxedSpanner:
    """Apply the per-point retention rule to a merged edge list.

    ``radii`` are the original (not inflated) radii in the same scale as
    ``levels``.  Each point's incoming edges are filtered independently:
    levels at or beyond the point's own level survive unconditionally, and
    among the coarser levels only the first ``4 * gamma`` non-empty ones
    (walking from ``point_level - 1`` down) survive.
    """
    if int(gamma) != gamma or gamma < 1:
        raise UsageError(f"gamma must be an integer >= 1, got {gamma}")
    gamma = int(gamma)
    quota = 4 * gamma

    by_target: dict[int, list[int]] = {}
    for k, e in enumerate(union):
        by_target.setdefault(e.target, []).append(k)

    survived = [False] * len(union)
    per_point: dict[int, PrunePointTrace] = {}
    for q, idxs in sorted(by_target.items()):
        lq = levels.level_of_radius(radii[q])
        below = sorted({union[k].level for k in idxs if union[k].level < lq}, reverse=True)
        kept_below = below[:quota]
        dropped = below[quota:]
        keep = set(kept_below)
        protected = 0
        kept = 0
        dropped_edges = 0
        for k in idxs:
            lv = union[k].level
            if lv >= lq:
                survived[k] = True
                protected += 1
            elif lv in keep:
                survived[k] = True
                kept += 1
            else:
                dropped_edges += 1
        per_point[q] = PrunePointTrace(
            point=q,
            point_level=lq,
            protected=protected,
            below_levels=tuple(below),
            kept_levels=tuple(kept_below),
            dropped_levels=tuple(dropped),
            kept=kept,
            dropped=dropped_edges,
        )

    edges = [replace(e, survived=survived[k]) for k, e in enumerate(union)]
    trace = PruneTrace(gamma=gamma, quota=quota, per_point=per_point)
    # Standalone pruning cannot know eps; build_relaxed_spanner replaces this
    # placeholder with the parameters actually in force.
    return RelaxedSpanner(edges, Params(1.0, gamma=gamma), levels, trace)


def build_relaxed_spanner(
    m: Metric, r: RadiusAssignment, params: Params, *, kernel: str = "auto"
) -> RelaxedSpanner:
    """Full relaxed pipeline for a metric and radius assignment.

    Requires the induced disk graph to have at least one edge.  The result
    carries both single-pass spanners, the merged edge list with survival
    flags, the pruning trace, and the normalization scale that maps the
    reported weights back to the input metric.
    """
    g = build_disk_graph(m, r)
    if g.n_edges == 0:
        raise DomainError("relaxed construction needs a graph with at least one edge")
    gn, scale = normalize(g)
    h = disk_spanner(gn, params, kernel=kernel)

    g_prime = build_disk_graph(m, inflate_radii(r, params.eps))
    gn_prime, _ = normalize(g_prime)
    h_prime = disk_spanner(gn_prime, params, kernel=kernel)

    # Merge on (source, target); weights come from the base graph's
    # normalized metric so shared pairs carry bit-identical floats.
    dn = gn.metric.distance_matrix()
    ls = h.levels
    merged: dict[tuple[int, int], SpannerEdge] = {}
    for e in h.edges:
        merged[(e.source, e.target)] = e
    for e in h_prime.edges:
        key = (e.source, e.target)
        if key in merged:
            merged[key] = replace(merged[key], origin="both")
        else:
            w = float(dn[e.source, e.target])
            lvl = int(ls.levels_of_weights(np.asarray(w), clamp=True))
            merged[key] = SpannerEdge(
                source=e.source,
                target=e.target,
                weight=w,
                level=lvl,
                case=e.case,
                origin="H'",
            )

    union = sorted(
        merged.values(), key=lambda e: (e.level, e.weight, e.source, e.target)
    )
    rs = prune(union, gn.radii, ls, params.gamma)
    rs.params = params
    rs.base_graph = gn
    rs.universe_graph = gn_prime
    rs.h = h
    rs.h_prime = h_prime
    rs.scale = scale
    return rs
