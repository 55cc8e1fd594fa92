"""Directed disk graphs and their weight-level decomposition.

A radius assignment ``r`` over a metric induces the directed graph with an
edge ``p -> q`` (of weight ``d(p, q)``) exactly when ``d(p, q) <= r(p)``.
This module owns:

* ``RadiusAssignment`` and ``inflate_radii`` (multiply every radius by
  ``1 + eps``, the relaxation used for the second construction pass).
* ``DiskGraph`` / ``build_disk_graph`` -- materialised edge arrays sorted by
  (source, target); weights are metric distances by construction.
* ``normalize`` -- rescale so the lightest edge has weight 1 (the scale is
  returned so results can be mapped back).
* ``LevelStructure`` -- geometric weight thresholds ``M / (1+alpha)^i`` and
  the level lookups for edge weights and point radii.

Levels are indexed ``0 .. L`` from heaviest to lightest, where
``L = floor(log_{1+alpha} M)``; level ``i`` holds weights in
``(M_{i+1}, M_i]``.  Threshold arithmetic uses repeated multiplication and
division rather than logarithms so boundary cases resolve deterministically;
a weight within relative 1e-9 of a threshold counts as equal to it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstructionError, DomainError, UsageError
from .metric import REL_TOL, Metric, approx_equal

__all__ = [
    "RadiusAssignment",
    "inflate_radii",
    "DiskGraph",
    "build_disk_graph",
    "normalize",
    "LevelStructure",
    "level_structure",
    "edge_level",
    "point_level",
]

# Hard cap on the number of levels; beyond this the aspect ratio / alpha
# combination is outside anything the package is meant for.
_MAX_LEVELS = 2_000_000


@dataclass(frozen=True)
class RadiusAssignment:
    """Positive radius per point; ``M`` is the largest radius."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size < 1:
            raise UsageError("radii must form a nonempty 1-d array")
        if not np.all(np.isfinite(v)) or np.any(v <= 0.0):
            raise UsageError("all radii must be positive and finite")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def M(self) -> float:
        return float(self.values.max())

    def __getitem__(self, p: int) -> float:
        return float(self.values[p])

    def rescaled(self, factor: float) -> "RadiusAssignment":
        return RadiusAssignment(self.values * factor)


def inflate_radii(r: RadiusAssignment, eps: float) -> RadiusAssignment:
    """Radii for the relaxed pass: every radius multiplied by ``1 + eps``."""
    if eps <= 0.0 or not np.isfinite(eps):
        raise UsageError(f"inflation factor requires eps > 0, got {eps}")
    return RadiusAssignment(r.values * (1.0 + eps))


class DiskGraph:
    """The directed graph induced by a metric and a radius assignment.

    Edge arrays are ordered by (source, target).  Built through
    ``build_disk_graph``; not meant to be constructed by hand.
    """

    def __init__(
        self,
        metric: Metric,
        radii: RadiusAssignment,
        src: np.ndarray,
        tgt: np.ndarray,
        w: np.ndarray,
    ) -> None:
        self.metric = metric
        self.radii = radii
        self.src = src
        self.tgt = tgt
        self.w = w
        self._adj: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.metric.n

    @property
    def n_edges(self) -> int:
        return int(self.src.size)

    @property
    def M(self) -> float:
        return self.radii.M

    @property
    def min_weight(self) -> float:
        if self.n_edges == 0:
            raise DomainError("edgeless graph has no minimum edge weight")
        return float(self.w.min())

    def edge_set(self) -> set[tuple[int, int]]:
        return set(zip(self.src.tolist(), self.tgt.tolist()))

    def edge_list(self) -> list[tuple[int, int, float]]:
        return list(zip(self.src.tolist(), self.tgt.tolist(), self.w.tolist()))

    def adjacency(self) -> np.ndarray:
        """Boolean n x n matrix; [p, q] true when p -> q is an edge."""
        if self._adj is None:
            a = np.zeros((self.n, self.n), dtype=bool)
            a[self.src, self.tgt] = True
            self._adj = a
        return self._adj

    def has_edge(self, p: int, q: int) -> bool:
        return bool(self.adjacency()[p, q])

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"DiskGraph(n={self.n}, edges={self.n_edges}, M={self.M})"


def build_disk_graph(m: Metric, r: RadiusAssignment) -> DiskGraph:
    """Materialise the disk graph of ``(m, r)``.

    Includes ``p -> q`` exactly when ``d(p, q) <= r(p)`` and ``p != q``; the
    comparison is taken on the floats as given, so a point pair lying exactly
    on a radius boundary is an edge.
    """
    if r.n != m.n:
        raise UsageError(f"radius count {r.n} does not match point count {m.n}")
    d = m.distance_matrix()
    mask = d <= r.values[:, None]
    np.fill_diagonal(mask, False)
    src, tgt = np.nonzero(mask)
    # np.nonzero yields row-major order, i.e. sorted by (source, target).
    return DiskGraph(m, r, src.astype(np.int64), tgt.astype(np.int64), d[src, tgt].copy())


def normalize(g: DiskGraph) -> tuple[DiskGraph, float]:
    """Rescale ``g`` so its lightest edge has weight 1.

    Returns the rescaled graph together with the applied scale factor.
    Rescaling multiplies distances and radii alike, so edge membership is
    unchanged; the graph is rebuilt from the rescaled data and the edge count
    is asserted to survive the round trip.
    """
    if g.n_edges == 0:
        raise DomainError("cannot normalize an edgeless graph (no scale defined)")
    scale = 1.0 / g.min_weight
    gn = build_disk_graph(g.metric.rescaled(scale), g.radii.rescaled(scale))
    if gn.n_edges != g.n_edges:
        raise ConstructionError(
            f"normalisation changed the edge count: {g.n_edges} -> {gn.n_edges}"
        )
    return gn, scale


class LevelStructure:
    """Geometric weight thresholds for one (M, alpha) pair.

    ``thresholds[i] = M / (1+alpha)^i`` for ``i in 0 .. L+1`` where
    ``L = floor(log_{1+alpha} M)``; level ``i`` covers the weight band
    ``(thresholds[i+1], thresholds[i]]``.
    """

    def __init__(self, M: float, alpha: float, L: int, thresholds: np.ndarray) -> None:
        self.M = M
        self.alpha = alpha
        self.L = L
        self.thresholds = thresholds
        # Ascending copy for searchsorted-based lookups.
        self._asc = thresholds[::-1].copy()

    def lower_threshold(self, i: int) -> float:
        """The exclusive lower bound ``M_{i+1}`` of level ``i``."""
        if not 0 <= i <= self.L:
            raise UsageError(f"level {i} out of range [0, {self.L}]")
        return float(self.thresholds[i + 1])

    def level_of_weight(self, w: float) -> int:
        return edge_level(self, w)

    def level_of_radius(self, r: float) -> int:
        return point_level(self, r)

    def levels_of_weights(self, w: np.ndarray, *, clamp: bool = False) -> np.ndarray:
        """Vectorised level lookup for an array of weights."""
        return _lookup(self, np.asarray(w, dtype=float), clamp=clamp)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"LevelStructure(M={self.M}, alpha={self.alpha}, L={self.L})"


def level_structure(M: float, alpha: float) -> LevelStructure:
    """Build the threshold ladder for top weight ``M`` and step ``alpha``."""
    if not np.isfinite(M) or M < 1.0:
        raise DomainError(f"level structure needs M >= 1 (normalized input), got {M}")
    if alpha <= 0.0 or not np.isfinite(alpha):
        raise UsageError(f"alpha must be positive, got {alpha}")
    step = 1.0 + alpha
    # L = largest k with (1+alpha)^k <= M, found by repeated multiplication;
    # the slack absorbs accumulated rounding when M is an exact power.
    L = 0
    acc = step
    while acc <= M * (1.0 + 1e-12):
        L += 1
        acc *= step
        if L > _MAX_LEVELS:
            raise DomainError("level count exceeds the supported maximum")
    thresholds = np.empty(L + 2, dtype=float)
    thresholds[0] = M
    for i in range(1, L + 2):
        thresholds[i] = thresholds[i - 1] / step
    return LevelStructure(float(M), float(alpha), L, thresholds)


def _lookup(ls: LevelStructure, w: np.ndarray, *, clamp: bool) -> np.ndarray:
    """Level indices for weights ``w``; see ``edge_level`` for the contract."""
    asc = ls._asc
    count_lt = np.searchsorted(asc, w, side="left")
    # Entries within relative tolerance of w count as equal, not below.
    has_below = count_lt > 0
    idx = np.where(has_below, count_lt - 1, 0)
    near = np.abs(asc[idx] - w) <= REL_TOL * np.maximum(np.abs(asc[idx]), np.abs(w))
    count_lt = count_lt - (has_below & near)
    lvl = ls.L + 1 - count_lt
    if clamp:
        return np.clip(lvl, 0, ls.L)
    # Below the bottom band only float dust can land (normalized weights are
    # >= 1 > M_{L+1}); it belongs to the finest level.  Above M is a real
    # contract violation.
    lvl = np.minimum(lvl, ls.L)
    if np.any(lvl < 0):
        bad = float(w[np.argmin(lvl)] if w.ndim else w)
        raise DomainError(f"weight {bad} exceeds the top threshold M={ls.M}")
    return lvl


def edge_level(ls: LevelStructure, w: float) -> int:
    """Level of edge weight ``w``: the ``i`` with ``M_{i+1} < w <= M_i``.

    Weights within relative tolerance of a threshold snap to it (so a weight
    "equal" to ``M_{i+1}`` lands in level ``i+1``).  A weight above ``M``
    raises; one below the bottom band maps to level ``L``.
    """
    if w <= 0.0 or not np.isfinite(w):
        raise UsageError(f"edge weight must be positive and finite, got {w}")
    return int(_lookup(ls, np.asarray(w, dtype=float), clamp=False))


def point_level(ls: LevelStructure, r: float) -> int:
    """Level of a point with radius ``r``, clamped into ``[0, L]``.

    Same band rule as ``edge_level``, but a radius above ``M`` maps to level
    0 and a radius at or below ``M_{L+1}`` maps to level ``L``.
    """
    if r <= 0.0 or not np.isfinite(r):
        raise UsageError(f"radius must be positive and finite, got {r}")
    return int(_lookup(ls, np.asarray(r, dtype=float), clamp=True))
