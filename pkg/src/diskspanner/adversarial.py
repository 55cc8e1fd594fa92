"""The engineered instance family on which no sparse spanner exists.

The family pairs n receiver points ``x_1 .. x_n`` (unit radius, spaced
``1 + eps`` apart on a line) with n sender points ``y_1 .. y_n`` whose radii
grow geometrically: ``r(y_i) = 2^(i-1) * n``, placed so that y_i sits at
distance exactly ``r(y_i)`` from every receiver.  Consecutive senders sit
``2^i * n + eps`` apart, and the remaining sender distances follow by
telescoping; that prescription violates the triangle inequality (a detour
through a receiver undercuts it), so the actual metric is its shortest-path
closure, which provably keeps every prescribed sender-receiver and
consecutive-sender distance.

The induced disk graph then consists of exactly the n^2 sender-to-receiver
edges, every one of which is essential: each edge is its endpoints' only
connection, so any subgraph dropping one changes a finite distance to
infinity.  A spanner of this graph, for any finite stretch, is the graph
itself.

``doubling_profile`` certifies the family stays doubling as n grows (the
point count that defeats sparsification does not hide in a degenerate
metric), and ``verify_non_sparsifiable`` certifies essentiality edge by
edge.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diskgraph import DiskGraph, RadiusAssignment, build_disk_graph
from .errors import ConstructionError, UsageError
from .metric import (
    DoublingEstimate,
    Metric,
    approx_equal,
    estimate_doubling_constant,
    metric_closure,
)
from .oracle import shortest_paths_from

__all__ = [
    "LowerBoundInstance",
    "build_lower_bound_instance",
    "NonSparsifiableReport",
    "verify_non_sparsifiable",
    "doubling_profile",
]

# Beyond this the prescribed distances leave the exactly-representable
# integer range of float64 and the construction guarantees get murky.
_MAX_N = 40


@dataclass
class LowerBoundInstance:
    """A built family member: 2n points, closure metric, radii, reports."""

    n: int
    eps: float
    prescribed_matrix: np.ndarray
    metric: Metric
    radii: RadiusAssignment
    structure: dict

    @property
    def y_ids(self) -> list[int]:
        """Sender ids; y_i (1-based i) is point ``i - 1``."""
        return list(range(self.n))

    @property
    def x_ids(self) -> list[int]:
        """Receiver ids; x_j (1-based j) is point ``n + j - 1``."""
        return list(range(self.n, 2 * self.n))

    def graph(self) -> DiskGraph:
        return build_disk_graph(self.metric, self.radii)


def lower_bound_prescribed_matrix(n: int, eps: float) -> np.ndarray:
    """The prescribed (pre-closure) pairwise distances."""
    N = 2 * n
    s = np.zeros((N, N))
    # Receivers on a line, capped by the cheapest sender detour (2n via y_1).
    for j in range(n):
        for k in range(n):
            if j != k:
                s[n + j, n + k] = min((1.0 + eps) * abs(j - k), 2.0 * n)
    # Sender i sits at its own radius from every receiver.
    for i in range(n):
        for j in range(n):
            s[i, n + j] = s[n + j, i] = float(2 ** i) * n
    # Senders: consecutive gaps 2^i * n + eps, telescoped for the rest.
    for i in range(n):
        for k in range(i):
            gap = (float(2 ** (i + 1)) - float(2 ** (k + 1))) * n + (i - k) * eps
            s[i, k] = s[k, i] = gap
    return s


def build_lower_bound_instance(n: int, eps: float) -> LowerBoundInstance:
    """Construct and verify one family member.

    ``n`` is the sender/receiver count (the instance has ``2 * n`` points);
    ``eps`` in (0, 1) sets the receiver spacing.  Every structural claim the
    family rests on is checked after the closure; a violation raises
    ``ConstructionError`` naming the offending points.
    """
    if n < 2 or int(n) != n:
        raise UsageError(f"family needs an integer n >= 2, got {n}")
    if n > _MAX_N:
        raise UsageError(
            f"n = {n} exceeds {_MAX_N}; distances would leave the exact float range"
        )
    if not 0.0 < eps < 1.0:
        raise UsageError(f"family needs eps in (0, 1), got {eps}")
    n = int(n)
    pre = lower_bound_prescribed_matrix(n, eps)
    metric = metric_closure(pre)
    d = metric.distance_matrix()

    radii = np.empty(2 * n)
    for i in range(n):
        radii[i] = float(2 ** i) * n
    radii[n:] = 1.0
    r = RadiusAssignment(radii)

    # Closure must keep every prescribed sender-receiver distance ...
    for i in range(n):
        for j in range(n):
            want = float(2 ** i) * n
            got = float(d[i, n + j])
            if not approx_equal(got, want):
                raise ConstructionError(
                    f"closure moved d(y_{i + 1}, x_{j + 1}) from {want} to {got}"
                )
    # ... every consecutive-sender gap ...
    for i in range(n - 1):
        want = float(2 ** (i + 1)) * n + eps
        got = float(d[i + 1, i])
        if not approx_equal(got, want):
            raise ConstructionError(
                f"closure moved d(y_{i + 2}, y_{i + 1}) from {want} to {got}"
            )
    # ... every receiver gap ...
    for j in range(n - 1):
        want = 1.0 + eps
        got = float(d[n + j, n + j + 1])
        if not approx_equal(got, want):
            raise ConstructionError(
                f"closure moved d(x_{j + 1}, x_{j + 2}) from {want} to {got}"
            )
    # ... and keep each sender pair within twice the larger sender's radius
    # (the bound that makes the family doubling despite the geometric gaps).
    for i in range(n):
        for k in range(i):
            cap = 2.0 * float(2 ** i) * n
            got = float(d[i, k])
            if got >= cap:
                raise ConstructionError(
                    f"d(y_{i + 1}, y_{k + 1}) = {got} reached the cap {cap}"
                )

    g = build_disk_graph(metric, r)
    expected = {(i, n + j) for i in range(n) for j in range(n)}
    actual = g.edge_set()
    if actual != expected:
        extra = sorted(actual - expected)[:5]
        missing = sorted(expected - actual)[:5]
        raise ConstructionError(
            f"edge set mismatch: {len(actual)} edges, "
            f"unexpected {extra}, missing {missing}"
        )

    structure = {
        "points": 2 * n,
        "edges": g.n_edges,
        "all_sender_to_receiver": True,
        "aspect": float(d.max() / d[d > 0].min()),
    }
    return LowerBoundInstance(
        n=n, eps=float(eps), prescribed_matrix=pre, metric=metric, radii=r, structure=structure
    )


@dataclass
class NonSparsifiableReport:
    """Per-edge essentiality: an edge is essential when deleting it strictly
    increases (here: disconnects) the distance between its endpoints."""

    total_edges: int
    essential: list[tuple[int, int]]
    non_essential: list[tuple[int, int]]

    @property
    def all_essential(self) -> bool:
        return not self.non_essential

    @property
    def essential_fraction(self) -> float:
        if self.total_edges == 0:
            return 1.0
        return len(self.essential) / self.total_edges


def verify_non_sparsifiable(g: DiskGraph) -> NonSparsifiableReport:
    """Check every edge of ``g`` for essentiality.

    For each edge (p, q), shortest paths are recomputed with that single
    edge removed; if p still reaches q at the same distance (within
    tolerance) the edge is redundant, otherwise it is essential.
    """
    edges = g.edge_list()
    essential: list[tuple[int, int]] = []
    redundant: list[tuple[int, int]] = []
    for s, t, w in edges:
        rest = [(a, b, c) for a, b, c in edges if (a, b) != (s, t)]
        dist, _ = shortest_paths_from(g.n, rest, s)
        alt = float(dist[t])
        if np.isfinite(alt) and (alt <= w or approx_equal(alt, w)):
            redundant.append((s, t))
        else:
            essential.append((s, t))
    return NonSparsifiableReport(
        total_edges=len(edges), essential=essential, non_essential=redundant
    )


def doubling_profile(inst: LowerBoundInstance) -> list[DoublingEstimate]:
    """Greedy cover counts over a grid of balls spanning every scale.

    Centers are all senders plus the first receiver; radii sweep the
    geometric scales ``2^i * n`` for i in 0 .. n together with ``n / 2`` and
    ``2 n``.  The maximum cover count over the grid stays bounded as n
    grows, which is the doubling certificate for the family.
    """
    n = inst.n
    radii = [float(2 ** i) * n for i in range(n + 1)] + [n / 2.0, 2.0 * n]
    centers = inst.y_ids + [inst.x_ids[0]]
    out: list[DoublingEstimate] = []
    for c in centers:
        for rad in radii:
            out.append(estimate_doubling_constant(inst.metric, c, rad))
    return out
