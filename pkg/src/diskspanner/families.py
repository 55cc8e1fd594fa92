"""Instance generators behind ``spanner gen``.

Four families:

* ``euclid-random`` -- n uniform points in the unit square (or cube), radii
  log-uniform in [rmin, rmax].  The workhorse for stretch and size testing.
* ``unitdisk`` -- like euclid-random but every radius equal, the classic
  unit-disk-graph special case (pruning is vacuous there: no point ever has
  incoming edges heavier than its own scale).
* ``multiscale-chain`` -- an engineered matrix metric with one "hub" point
  per scale 2^c feeding a chain of unit-radius targets.  The number of
  occupied weight levels grows with ``levels`` while the doubling character
  stays fixed, which separates the single-pass spanner (size grows with the
  level count) from the pruned relaxed one (size does not).
* ``lowerbound`` -- the sender/receiver family from ``adversarial``; every
  edge essential, so it is the family on which sparsification must fail.

All randomness flows from the single ``seed`` through one generator; two
calls with equal arguments produce equal instances.
"""

from __future__ import annotations

import numpy as np

from .adversarial import build_lower_bound_instance, verify_non_sparsifiable
from .diskgraph import RadiusAssignment, build_disk_graph
from .errors import UsageError
from .files import Instance
from .metric import Metric

__all__ = [
    "FAMILIES",
    "gen_euclid_random",
    "gen_unitdisk",
    "gen_multiscale_chain",
    "gen_lowerbound",
    "generate",
]


def gen_euclid_random(
    n: int,
    *,
    dim: int = 2,
    seed: int = 0,
    rmin: float = 0.05,
    rmax: float = 0.4,
) -> Instance:
    if n < 1:
        raise UsageError(f"need n >= 1, got {n}")
    if dim < 1:
        raise UsageError(f"need dim >= 1, got {dim}")
    if not 0.0 < rmin <= rmax:
        raise UsageError(f"need 0 < rmin <= rmax, got rmin={rmin} rmax={rmax}")
    rng = np.random.default_rng(seed)
    coords = rng.random((n, dim))
    radii = np.exp(rng.uniform(np.log(rmin), np.log(rmax), n))
    meta = {
        "family": "euclid-random",
        "seed": int(seed),
        "rmin": rmin,
        "rmax": rmax,
    }
    return Instance(
        "euclidean",
        Metric.euclidean(coords),
        RadiusAssignment(radii),
        meta,
        coords=coords,
    )


def gen_unitdisk(
    n: int, *, dim: int = 2, seed: int = 0, radius: float = 0.3
) -> Instance:
    if n < 1:
        raise UsageError(f"need n >= 1, got {n}")
    if radius <= 0.0:
        raise UsageError(f"need a positive radius, got {radius}")
    rng = np.random.default_rng(seed)
    coords = rng.random((n, dim))
    radii = np.full(n, float(radius))
    meta = {"family": "unitdisk", "seed": int(seed), "radius": float(radius)}
    return Instance(
        "euclidean",
        Metric.euclidean(coords),
        RadiusAssignment(radii),
        meta,
        coords=coords,
    )


def gen_multiscale_chain(n: int, *, levels: int, seed: int = 0) -> Instance:
    """Hub-per-scale construction with a target chain.

    Point ids 0 .. levels-1 are hubs; hub c (0-based) has radius ``2^(c+1)``
    and sits at exactly that distance from every target.  Ids levels .. n-1
    are targets on a unit-spaced line (distances capped at 4, the cheapest
    hub detour), radius 1.  Hubs are mutually ``2^(c+1) + 2^(c'+1)`` apart,
    so no hub reaches another: the graph is the hub-to-target stars plus the
    target chain, occupying ``levels + 1`` distinct weight bands.
    """
    if levels < 1:
        raise UsageError(f"need levels >= 1, got {levels}")
    if n < levels + 2:
        raise UsageError(
            f"need n >= levels + 2 so at least two targets exist, got n={n}"
        )
    n_hub = int(levels)
    n_tgt = int(n) - n_hub
    N = int(n)
    d = np.zeros((N, N))
    scales = [float(2 ** (c + 1)) for c in range(n_hub)]
    for c in range(n_hub):
        for c2 in range(c):
            d[c, c2] = d[c2, c] = scales[c] + scales[c2]
        for j in range(n_tgt):
            d[c, n_hub + j] = d[n_hub + j, c] = scales[c]
    for j in range(n_tgt):
        for k in range(j):
            d[n_hub + j, n_hub + k] = d[n_hub + k, n_hub + j] = min(float(j - k), 4.0)
    radii = np.empty(N)
    radii[:n_hub] = scales
    radii[n_hub:] = 1.0
    meta = {
        "family": "multiscale-chain",
        "seed": int(seed),
        "levels": n_hub,
        "hubs": n_hub,
        "targets": n_tgt,
    }
    return Instance(
        "matrix", Metric.from_matrix(d), RadiusAssignment(radii), meta, dist=d
    )


def gen_lowerbound(n: int, *, eps: float) -> Instance:
    """The non-sparsifiable family, with its verification baked into the
    metadata (edge count, essential fraction, structure report)."""
    inst = build_lower_bound_instance(n, eps)
    g = inst.graph()
    rep = verify_non_sparsifiable(g)
    meta = {
        "family": "lowerbound",
        "pair_count": inst.n,
        "eps": inst.eps,
        "edges": rep.total_edges,
        "essential_edges": len(rep.essential),
        "all_essential": rep.all_essential,
        "structure": inst.structure,
    }
    return Instance(
        "prescribed-closure",
        inst.metric,
        inst.radii,
        meta,
        dist=inst.prescribed_matrix,
    )


FAMILIES = ("euclid-random", "unitdisk", "multiscale-chain", "lowerbound")


def generate(
    family: str,
    n: int,
    *,
    eps: float | None = None,
    dim: int = 2,
    seed: int = 0,
    levels: int | None = None,
    rmin: float = 0.05,
    rmax: float | None = None,
) -> Instance:
    """Dispatch by family name; raises ``UsageError`` on unknown names or
    missing family-specific arguments."""
    if family == "euclid-random":
        return gen_euclid_random(
            n, dim=dim, seed=seed, rmin=rmin, rmax=rmax if rmax is not None else 0.4
        )
    if family == "unitdisk":
        return gen_unitdisk(
            n, dim=dim, seed=seed, radius=rmax if rmax is not None else 0.3
        )
    if family == "multiscale-chain":
        if levels is None:
            raise UsageError("multiscale-chain needs --levels")
        return gen_multiscale_chain(n, levels=levels, seed=seed)
    if family == "lowerbound":
        if eps is None:
            raise UsageError("lowerbound needs --eps (it sets the receiver spacing)")
        return gen_lowerbound(n, eps=eps)
    raise UsageError(f"unknown family {family!r}; choose from {FAMILIES}")
