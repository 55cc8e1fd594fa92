"""Finite metric spaces and the point machinery built on top of them.

This module owns:

* ``Metric`` -- a finite point set with pairwise distances, either backed by
  Euclidean coordinates or by an explicit distance matrix, with an exact
  multiplicative ``scale`` so rescaling never touches the raw data.
* ``validate_metric`` -- symmetry / positivity / triangle-inequality checks,
  exhaustive for small inputs and sampled beyond a configurable cap.
* ``metric_closure`` -- shortest-path repair of a symmetric distance spec that
  may violate the triangle inequality.
* ``PivotSet`` / ``nearest_pivot`` -- insertion-ordered pivot bookkeeping and
  deterministic nearest-pivot queries (ties go to the smallest id).
* ``estimate_doubling_constant`` -- greedy (radius/2)-cover of a ball, an
  upper bound witness for the local doubling behaviour.

Distance comparisons throughout the package treat two values as equal when
they agree to a relative 1e-9; strict inequalities are taken exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np
import scipy.sparse.csgraph as csgraph

from .errors import UsageError

__all__ = [
    "REL_TOL",
    "approx_equal",
    "Metric",
    "MetricValidation",
    "validate_metric",
    "metric_closure",
    "PivotSet",
    "nearest_pivot",
    "DoublingEstimate",
    "estimate_doubling_constant",
]

#: Relative tolerance used for distance equality and tie detection.
REL_TOL = 1e-9


def approx_equal(a: float, b: float, rel: float = REL_TOL) -> bool:
    """True when ``a`` and ``b`` agree to within ``rel`` relatively.

    Both operands are expected to be finite and nonnegative (distances).
    """
    return abs(a - b) <= rel * max(abs(a), abs(b))


class Metric:
    """A finite metric on points ``0 .. n-1``.

    Two backing kinds exist: ``"euclidean"`` stores coordinates and derives
    L2 distances, ``"matrix"`` stores the full distance matrix.  Every metric
    carries a ``scale`` factor applied multiplicatively on top of the raw
    data, so that rescaling (as done by graph normalisation) is exact and
    reversible instead of rewriting floats.
    """

    def __init__(
        self,
        kind: str,
        *,
        coords: np.ndarray | None = None,
        dist: np.ndarray | None = None,
        scale: float = 1.0,
    ) -> None:
        if kind not in ("euclidean", "matrix"):
            raise UsageError(f"unknown metric kind {kind!r}")
        if scale <= 0.0 or not np.isfinite(scale):
            raise UsageError(f"scale must be positive and finite, got {scale}")
        self.kind = kind
        self.scale = float(scale)
        if kind == "euclidean":
            if coords is None:
                raise UsageError("euclidean metric needs coordinates")
            coords = np.asarray(coords, dtype=float)
            if coords.ndim != 2 or coords.shape[0] < 1:
                raise UsageError("coordinates must be a nonempty (n, d) array")
            self._coords: np.ndarray | None = coords
            self._raw: np.ndarray | None = None
        else:
            if dist is None:
                raise UsageError("matrix metric needs a distance matrix")
            dist = np.asarray(dist, dtype=float)
            if dist.ndim != 2 or dist.shape[0] != dist.shape[1] or dist.shape[0] < 1:
                raise UsageError("distance matrix must be square and nonempty")
            self._coords = None
            self._raw = dist
        self._scaled: np.ndarray | None = None

    @classmethod
    def euclidean(cls, coords: np.ndarray) -> "Metric":
        return cls("euclidean", coords=coords)

    @classmethod
    def from_matrix(cls, dist: np.ndarray) -> "Metric":
        return cls("matrix", dist=dist)

    @property
    def n(self) -> int:
        if self._coords is not None:
            return int(self._coords.shape[0])
        assert self._raw is not None
        return int(self._raw.shape[0])

    @property
    def dim(self) -> int | None:
        """Ambient dimension for euclidean metrics, ``None`` otherwise."""
        if self._coords is not None:
            return int(self._coords.shape[1])
        return None

    @property
    def coords(self) -> np.ndarray | None:
        return self._coords

    def raw_matrix(self) -> np.ndarray:
        """Pairwise distances before the scale factor is applied."""
        if self._raw is None:
            assert self._coords is not None
            diff = self._coords[:, None, :] - self._coords[None, :, :]
            self._raw = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        return self._raw

    def distance_matrix(self) -> np.ndarray:
        """Full pairwise distance matrix (scale applied), cached."""
        if self._scaled is None:
            raw = self.raw_matrix()
            self._scaled = raw if self.scale == 1.0 else self.scale * raw
        return self._scaled

    def distance(self, p: int, q: int) -> float:
        self._check_point(p)
        self._check_point(q)
        return float(self.distance_matrix()[p, q])

    def rescaled(self, factor: float) -> "Metric":
        """Same point set with all distances multiplied by ``factor``."""
        if factor <= 0.0 or not np.isfinite(factor):
            raise UsageError(f"rescale factor must be positive, got {factor}")
        m = Metric.__new__(Metric)
        m.kind = self.kind
        m.scale = self.scale * float(factor)
        m._coords = self._coords
        m._raw = self._raw
        m._scaled = None
        return m

    def _check_point(self, p: int) -> None:
        if not 0 <= p < self.n:
            raise UsageError(f"point id {p} out of range [0, {self.n})")

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Metric(kind={self.kind!r}, n={self.n}, scale={self.scale})"


@dataclass
class MetricValidation:
    """Outcome of ``validate_metric``."""

    symmetric: bool
    zero_diagonal: bool
    positive_off_diagonal: bool
    triangle_ok: bool
    triangle_mode: str  # "exhaustive" or "sampled"
    triangle_checked: int
    violations: list[tuple] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            self.symmetric
            and self.zero_diagonal
            and self.positive_off_diagonal
            and self.triangle_ok
        )


def validate_metric(
    m: Metric,
    *,
    triangle_cap: int = 200,
    samples: int = 20000,
    seed: int = 0,
    rel: float = REL_TOL,
) -> MetricValidation:
    """Check metric axioms on ``m``.

    The triangle inequality is verified over all ordered triples when
    ``n <= triangle_cap`` and over ``samples`` seeded random triples above
    that; the report states which mode ran.  A triple (i, j, k) violates when
    d(i, k) exceeds d(i, j) + d(j, k) beyond the relative tolerance.
    """
    d = m.distance_matrix()
    n = m.n
    violations: list[tuple] = []

    sym = bool(np.array_equal(d, d.T))
    diag = bool(np.all(np.diag(d) == 0.0))
    off = d[~np.eye(n, dtype=bool)]
    pos = bool(off.size == 0 or np.all(off > 0.0))

    def triple_ok(i: int, j: int, k: int) -> bool:
        lhs = d[i, k]
        rhs = d[i, j] + d[j, k]
        return lhs <= rhs or approx_equal(lhs, rhs, rel)

    if n <= triangle_cap:
        mode = "exhaustive"
        checked = 0
        # Vectorised over k: d[i, :] <= d[i, j] + d[j, :] for all pairs (i, j).
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                rhs = d[i, j] + d[j, :]
                bad = d[i, :] > rhs + rel * np.maximum(d[i, :], rhs)
                checked += n
                for k in np.flatnonzero(bad):
                    violations.append((i, j, int(k), float(d[i, k]), float(rhs[k])))
    else:
        mode = "sampled"
        rng = np.random.default_rng(seed)
        triples = rng.integers(0, n, size=(samples, 3))
        checked = samples
        for i, j, k in triples:
            if not triple_ok(int(i), int(j), int(k)):
                violations.append(
                    (int(i), int(j), int(k), float(d[i, k]), float(d[i, j] + d[j, k]))
                )

    return MetricValidation(
        symmetric=sym,
        zero_diagonal=diag,
        positive_off_diagonal=pos,
        triangle_ok=not violations,
        triangle_mode=mode,
        triangle_checked=checked,
        violations=violations,
    )


def metric_closure(spec: np.ndarray) -> Metric:
    """Shortest-path closure of prescribed symmetric distances.

    ``spec`` prescribes pairwise distances that may break the triangle
    inequality; the closure replaces each entry by the cheapest path total
    through the spec, which is the largest metric dominated by it.  The spec
    must be square and symmetric with a zero diagonal and positive
    off-diagonal entries.
    """
    a = np.asarray(spec, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise UsageError("distance spec must be a nonempty square matrix")
    n = a.shape[0]
    if not np.array_equal(a, a.T):
        raise UsageError("distance spec must be symmetric")
    if np.any(np.diag(a) != 0.0):
        raise UsageError("distance spec must have a zero diagonal")
    off = a[~np.eye(n, dtype=bool)]
    if off.size and np.any(off <= 0.0):
        raise UsageError("distance spec must be positive off the diagonal")
    if n == 1:
        return Metric.from_matrix(a.copy())
    closed = csgraph.floyd_warshall(a, directed=False)
    return Metric.from_matrix(closed)


class PivotSet:
    """An insertion-ordered set of pivot point ids."""

    def __init__(self, members: Iterable[int] = ()) -> None:
        self._order: list[int] = []
        self._members: set[int] = set()
        for p in members:
            self.add(p)

    def add(self, p: int) -> None:
        if p not in self._members:
            self._members.add(p)
            self._order.append(p)

    def __contains__(self, p: int) -> bool:
        return p in self._members

    def __iter__(self) -> Iterator[int]:
        return iter(self._order)

    def __len__(self) -> int:
        return len(self._order)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PivotSet):
            return NotImplemented
        return self._members == other._members

    def members(self) -> tuple[int, ...]:
        return tuple(self._order)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"PivotSet({self._order!r})"


def nearest_pivot(
    m: Metric, x: int, pivots: PivotSet, *, rel: float = REL_TOL
) -> tuple[int | None, float]:
    """Nearest member of ``pivots`` to ``x``; ties go to the smallest id.

    Returns ``(None, inf)`` on an empty pivot set.  The tie rule makes the
    answer independent of pivot insertion order.
    """
    m._check_point(x)
    if len(pivots) == 0:
        return None, float("inf")
    d = m.distance_matrix()
    best_id = -1
    best_d = float("inf")
    for p in pivots:
        dp = float(d[x, p])
        if best_id < 0:
            best_id, best_d = p, dp
            continue
        if approx_equal(dp, best_d, rel):
            if p < best_id:
                best_id, best_d = p, dp
        elif dp < best_d:
            best_id, best_d = p, dp
    return best_id, best_d


@dataclass
class DoublingEstimate:
    """Greedy cover witness for one ball: ``cover_count`` centers of radius
    ``radius / 2`` suffice to cover every point of the ball."""

    center: int
    radius: float
    ball_size: int
    cover_count: int
    centers: tuple[int, ...]


def estimate_doubling_constant(m: Metric, center: int, radius: float) -> DoublingEstimate:
    """Greedy half-radius cover of the ball around ``center``.

    Points of the closed ball are covered farthest-first: repeatedly pick the
    uncovered point farthest from the chosen centers (smallest id on ties,
    so the first pick is the smallest id in the ball) and cover everything
    within ``radius / 2`` of it.  The number of centers used upper-bounds the
    minimum cover size and behaves like a constant for doubling inputs.
    """
    m._check_point(center)
    if radius <= 0.0 or not np.isfinite(radius):
        raise UsageError(f"ball radius must be positive and finite, got {radius}")
    d = m.distance_matrix()
    ball = np.flatnonzero(d[center, :] <= radius)
    half = radius / 2.0
    covered = np.zeros(ball.size, dtype=bool)
    # Distance of each ball point to its nearest chosen center so far.
    best = np.full(ball.size, np.inf)
    centers: list[int] = []
    while not covered.all():
        # Farthest uncovered point; ties by smallest id. All points start at
        # inf, so the very first pick is the smallest id in the ball.
        cand = np.flatnonzero(~covered)
        far = cand[np.argmax(best[cand])]
        # argmax returns the first maximal index and ball is id-sorted, so the
        # tie rule comes for free.
        c = int(ball[far])
        centers.append(c)
        dc = d[ball, c]
        covered |= dc <= half
        best = np.minimum(best, dc)
    return DoublingEstimate(
        center=center,
        radius=float(radius),
        ball_size=int(ball.size),
        cover_count=len(centers),
        centers=tuple(centers),
    )
