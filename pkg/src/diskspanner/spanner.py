"""Low-stretch spanner construction for directed disk graphs.

``disk_spanner`` consumes a normalized disk graph and parameters
``(eps, alpha, beta)`` and produces a subgraph whose directed distances
approximate the full graph's within a factor ``1 + eps`` whenever the
parameters stay in the proof-safe regime ``alpha = beta = eps / 20``.

The construction sweeps edges level by level (heaviest band first), inside a
band in nondecreasing weight order with (source, target) as the final tie
break.  While sweeping it grows a hierarchy of pivots, one nested set per
level, maintained so that pivots of level ``i`` keep pairwise distance above
``beta * M_{i+1}``; every edge is admitted unless an already selected edge
connects the relevant close neighborhoods, in which case the minimum-weight
witness is recorded.

Two interchangeable kernels implement the sweep: a compiled one
(``diskspanner._speedups``, built from Cython) and a NumPy fallback.  Kernel
choice never changes the result, only the running time; ``kernel="auto"``
picks the compiled one when present.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernel_py
from .diskgraph import DiskGraph, LevelStructure, level_structure
from .errors import UsageError
from .metric import REL_TOL, PivotSet, approx_equal, nearest_pivot

try:
    from . import _speedups
except ImportError:  # pragma: no cover - exercised only on pure installs
    _speedups = None

__all__ = [
    "Params",
    "SpannerEdge",
    "BlockedEdge",
    "Spanner",
    "disk_spanner",
    "close_neighborhood",
    "available_kernels",
]


def available_kernels() -> tuple[str, ...]:
    """Names accepted by the ``kernel`` argument of ``disk_spanner``."""
    if _speedups is not None:
        return ("auto", "c", "python")
    return ("auto", "python")


def _resolve_kernel(name: str):
    if name == "python":
        return _kernel_py.run_kernel
    if name == "c":
        if _speedups is None:
            raise UsageError("compiled kernel requested but not built")
        return _speedups.run_kernel
    if name == "auto":
        return _speedups.run_kernel if _speedups is not None else _kernel_py.run_kernel
    raise UsageError(f"unknown kernel {name!r}; choose from {available_kernels()}")


class Params:
    """Construction parameters.

    ``alpha`` (level granularity), ``beta`` (pivot separation) and ``gamma``
    (pruning depth for the relaxed construction) default to the proof-safe
    choices ``alpha = beta = eps / 20`` and the smallest ``gamma`` with
    ``(1 + alpha)^(gamma - 1) >= 1 / beta``.  Any explicit value is accepted
    but moves the instance outside the proof regime unless it coincides with
    the defaults; ``regime`` reports which side we are on.
    """

    def __init__(
        self,
        eps: float,
        *,
        alpha: float | None = None,
        beta: float | None = None,
        gamma: int | None = None,
    ) -> None:
        if not np.isfinite(eps) or eps <= 0.0:
            raise UsageError(f"eps must be positive and finite, got {eps}")
        self.eps = float(eps)
        self.overridden: frozenset[str] = frozenset(
            name
            for name, value in (("alpha", alpha), ("beta", beta), ("gamma", gamma))
            if value is not None
        )
        self.alpha = float(alpha) if alpha is not None else self.eps / 20.0
        self.beta = float(beta) if beta is not None else self.eps / 20.0
        if not np.isfinite(self.alpha) or self.alpha <= 0.0:
            raise UsageError(f"alpha must be positive and finite, got {self.alpha}")
        if not np.isfinite(self.beta) or self.beta <= 0.0:
            raise UsageError(f"beta must be positive and finite, got {self.beta}")
        if gamma is not None:
            if int(gamma) != gamma or gamma < 1:
                raise UsageError(f"gamma must be an integer >= 1, got {gamma}")
            self.gamma = int(gamma)
        else:
            self.gamma = default_gamma(self.alpha, self.beta)

    @property
    def proof_safe(self) -> bool:
        d = self.eps / 20.0
        return (
            self.alpha == d
            and self.beta == d
            and self.gamma == default_gamma(self.alpha, self.beta)
        )

    @property
    def regime(self) -> str:
        return "proof-safe" if self.proof_safe else "override"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Params):
            return NotImplemented
        return (self.eps, self.alpha, self.beta, self.gamma) == (
            other.eps,
            other.alpha,
            other.beta,
            other.gamma,
        )

    def __hash__(self) -> int:
        return hash((self.eps, self.alpha, self.beta, self.gamma))

    def to_dict(self) -> dict:
        return {
            "eps": self.eps,
            "alpha": self.alpha,
            "beta": self.beta,
            "gamma": self.gamma,
            "regime": self.regime,
        }

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return (
            f"Params(eps={self.eps}, alpha={self.alpha}, beta={self.beta}, "
            f"gamma={self.gamma}, regime={self.regime!r})"
        )


def default_gamma(alpha: float, beta: float) -> int:
    """Smallest ``k + 1`` such that ``(1 + alpha)^k`` reaches ``1 / beta``.

    Computed by repeated multiplication with a small slack so exact-power
    cases resolve the same way on every platform.
    """
    target = 1.0 / beta
    k = 0
    acc = 1.0
    while acc < target * (1.0 - 1e-12):
        acc *= 1.0 + alpha
        k += 1
        if k > 100_000_000:  # pragma: no cover - absurd parameter guard
            raise UsageError("gamma derivation diverged; alpha is too small")
    return k + 1


@dataclass(frozen=True)
class SpannerEdge:
    """One selected edge.  ``case`` records which insertion rule admitted it
    ("big" when the target's radius reached the level's lower threshold,
    "small" otherwise); ``origin`` and ``survived`` matter only once edges
    from two construction passes are merged and pruned."""

    source: int
    target: int
    weight: float
    level: int
    case: str
    origin: str = "H"
    survived: bool = True


@dataclass(frozen=True)
class BlockedEdge:
    """A rejected edge together with its minimum-weight blocking witness."""

    source: int
    target: int
    weight: float
    level: int
    case: str
    blocker_source: int
    blocker_target: int
    blocker_weight: float


class Spanner:
    """Result of one construction pass over a normalized disk graph."""

    def __init__(
        self,
        graph: DiskGraph,
        params: Params,
        levels: LevelStructure,
        edges: list[SpannerEdge],
        blocked: list[BlockedEdge],
        pivot_events: list[tuple[int, int]],
        kernel_used: str,
    ) -> None:
        self.graph = graph
        self.params = params
        self.levels = levels
        self.edges = edges
        self.blocked = blocked
        #: (level, point) pairs in insertion order; levels are nondecreasing.
        self.pivot_events = pivot_events
        self.kernel_used = kernel_used

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def edge_tuples(self) -> list[tuple[int, int, float]]:
        return [(e.source, e.target, e.weight) for e in self.edges]

    def edge_pairs(self) -> set[tuple[int, int]]:
        return {(e.source, e.target) for e in self.edges}

    def pivots_at(self, level: int) -> PivotSet:
        """The pivot set in force at ``level`` (nested: grows with level)."""
        if not 0 <= level <= self.levels.L:
            raise UsageError(f"level {level} out of range [0, {self.levels.L}]")
        return PivotSet(p for lvl, p in self.pivot_events if lvl <= level)

    def active_levels(self) -> list[int]:
        """Distinct levels carrying at least one selected edge, ascending."""
        return sorted({e.level for e in self.edges})

    def pivot_history(self) -> dict[int, PivotSet]:
        """Pivot snapshots per active level."""
        return {i: self.pivots_at(i) for i in self.active_levels()}

    def edges_by_level(self) -> dict[int, list[SpannerEdge]]:
        out: dict[int, list[SpannerEdge]] = {}
        for e in self.edges:
            out.setdefault(e.level, []).append(e)
        return out

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return (
            f"Spanner(n={self.n}, edges={self.n_edges}, "
            f"pivots={len(self.pivot_events)}, kernel={self.kernel_used!r})"
        )


def disk_spanner(g: DiskGraph, params: Params, *, kernel: str = "auto") -> Spanner:
    """Run the construction sweep on normalized ``g``.

    ``g`` must have its lightest edge at weight 1 (see ``normalize``); an
    edgeless graph yields an empty spanner.  Determinism: the same input
    produces the same edge sequence, whichever kernel runs.
    """
    run = _resolve_kernel(kernel)
    kernel_name = (
        "python"
        if run is _kernel_py.run_kernel
        else "c"
    )
    if g.n_edges == 0:
        levels = level_structure(max(g.M, 1.0), params.alpha)
        return Spanner(g, params, levels, [], [], [], kernel_name)
    if not approx_equal(g.min_weight, 1.0):
        raise UsageError(
            f"spanner construction expects a normalized graph "
            f"(min edge weight 1, got {g.min_weight}); call normalize first"
        )
    levels = level_structure(g.M, params.alpha)
    lvl = levels.levels_of_weights(g.w)
    order = np.lexsort((g.tgt, g.src, g.w, lvl))
    src = np.ascontiguousarray(g.src[order])
    tgt = np.ascontiguousarray(g.tgt[order])
    w = np.ascontiguousarray(g.w[order])
    elvl = np.ascontiguousarray(lvl[order])
    D = np.ascontiguousarray(g.metric.distance_matrix())
    r = np.ascontiguousarray(g.radii.values)

    out = run(D, r, levels.thresholds, params.beta, src, tgt, w, elvl, REL_TOL)

    sel = out["selected"].astype(bool)
    is_big = out["big"].astype(bool)
    edges = [
        SpannerEdge(
            source=int(src[j]),
            target=int(tgt[j]),
            weight=float(w[j]),
            level=int(elvl[j]),
            case="big" if is_big[j] else "small",
        )
        for j in np.flatnonzero(sel)
    ]
    blocked = [
        BlockedEdge(
            source=int(src[j]),
            target=int(tgt[j]),
            weight=float(w[j]),
            level=int(elvl[j]),
            case="big" if is_big[j] else "small",
            blocker_source=int(src[out["blocker"][j]]),
            blocker_target=int(tgt[out["blocker"][j]]),
            blocker_weight=float(w[out["blocker"][j]]),
        )
        for j in np.flatnonzero(~sel)
    ]
    pivot_events = [
        (int(l), int(p)) for l, p in zip(out["piv_lvls"], out["piv_pts"])
    ]
    return Spanner(g, params, levels, edges, blocked, pivot_events, kernel_name)


def close_neighborhood(g: DiskGraph, pivots: PivotSet, p: int) -> set[int]:
    """Points assigned to pivot ``p`` that can reach it within their radius.

    A point x belongs when p is its nearest pivot (smallest id on ties) and
    ``r(x) >= d(x, p)``.  Independent of the construction kernel; used to
    cross-check its bookkeeping.
    """
    if p not in pivots:
        raise UsageError(f"point {p} is not a member of the pivot set")
    out: set[int] = set()
    for x in range(g.n):
        q, d = nearest_pivot(g.metric, x, pivots)
        if q == p and g.radii[x] >= d:
            out.add(x)
    return out
