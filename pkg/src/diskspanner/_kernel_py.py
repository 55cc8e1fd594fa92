"""Pure-Python (NumPy) spanner construction kernel.

This is the reference implementation of the hot loop shared with the
compiled kernel in ``_speedups``; both must make identical decisions on
identical input, down to tie handling.  The kernel walks the edges of a
normalized disk graph in processing order (level, then weight, then source,
then target) and maintains:

* ``nn_id`` / ``nn_d`` -- for every point, the id of and distance to its
  nearest pivot so far (ties go to the smallest pivot id, resolved at
  relative tolerance ``rel_tol``); ``nn_id`` is -1 while no pivot exists.
* the list of edges selected during the current level, scanned to decide
  whether the current edge is blocked.

Per edge (x, y) at level ``i`` with lower threshold ``T = thresholds[i+1]``:

1. if x's nearest pivot is farther than ``beta * T``, x becomes a pivot;
2. if ``r(y) >= T`` and y's nearest pivot is farther than ``beta * T``,
   y becomes a pivot;
3. with p = nearest pivot of x and q = nearest pivot of y (after 1 and 2):
   big-target case (``r(y) >= T``): the edge is blocked when some edge
   already selected at this level runs from the close neighborhood of p to
   the close neighborhood of q and its own target has radius at least
   ``T``; small-target case: blocked when some edge already selected at
   this level enters y itself from the close neighborhood of p.

A point v belongs to the close neighborhood of pivot p when its nearest
pivot is p and ``r(v) >= d(v, p)``.  For a blocked edge the minimum-weight
blocking edge (first among equals in selection order) is recorded.

Blocking is scoped to the current level on purpose.  Edges of earlier
levels are heavier (levels are processed heaviest class first), so a
surviving edge from an earlier level says nothing about how short a
detour between two pivot neighborhoods can be at the current weight
scale.  Within one level, weight-sorted processing guarantees that a
recorded blocker never outweighs the edge it blocks, which is what makes
the detour through the blocker cheap.

The big-target case additionally demands ``r(blocker target) >= T``.  A
target that cleared that bar at this level was pulled within
``beta * T`` of a pivot when its edge was processed, so the detour
leaves the blocker's target with a hop of at most ``2 * beta * T`` that
its radius is guaranteed to cover.  A small-radius target can sit
anywhere inside its radius away from the pivot, which makes the closing
hop both long and possibly missing from the graph.
"""

from __future__ import annotations

import numpy as np

__all__ = ["run_kernel"]


def run_kernel(
    D: np.ndarray,
    r: np.ndarray,
    thresholds: np.ndarray,
    beta: float,
    src: np.ndarray,
    tgt: np.ndarray,
    w: np.ndarray,
    lvl: np.ndarray,
    rel_tol: float,
) -> dict[str, np.ndarray]:
    n = r.size
    m = src.size
    nn_id = np.full(n, -1, dtype=np.int64)
    nn_d = np.full(n, np.inf)

    selected = np.zeros(m, dtype=np.uint8)
    big = np.zeros(m, dtype=np.uint8)
    blocker = np.full(m, -1, dtype=np.int64)

    sel_src = np.empty(m, dtype=np.int64)
    sel_tgt = np.empty(m, dtype=np.int64)
    sel_w = np.empty(m)
    sel_idx = np.empty(m, dtype=np.int64)
    nsel = 0
    stage_start = 0
    cur_level = -1

    piv_pts: list[int] = []
    piv_lvls: list[int] = []

    def add_pivot(v: int, level: int) -> None:
        piv_pts.append(v)
        piv_lvls.append(level)
        drow = D[v]
        no_piv = nn_id < 0
        eq = np.abs(drow - nn_d) <= rel_tol * np.maximum(drow, nn_d)
        take = np.where(no_piv, True, np.where(eq, v < nn_id, drow < nn_d))
        nn_d[take] = drow[take]
        nn_id[take] = v

    for j in range(m):
        i = int(lvl[j])
        if i != cur_level:
            cur_level = i
            stage_start = nsel
        T = float(thresholds[i + 1])
        sep = beta * T
        x = int(src[j])
        y = int(tgt[j])

        if nn_d[x] > sep:
            add_pivot(x, i)
        big_target = r[y] >= T
        if big_target and nn_d[y] > sep:
            add_pivot(y, i)

        p = nn_id[x]
        if big_target:
            big[j] = 1
            q = nn_id[y]
        hit = -1
        if nsel > stage_start:
            s = sel_src[stage_start:nsel]
            in_gamma_p = (nn_id[s] == p) & (r[s] >= nn_d[s])
            if big_target:
                t = sel_tgt[stage_start:nsel]
                mask = in_gamma_p & (nn_id[t] == q) & (r[t] >= nn_d[t]) & (r[t] >= T)
            else:
                mask = in_gamma_p & (sel_tgt[stage_start:nsel] == y)
            cand = np.flatnonzero(mask)
            if cand.size:
                hit = stage_start + int(cand[np.argmin(sel_w[stage_start:nsel][cand])])
        if hit < 0:
            selected[j] = 1
            sel_src[nsel] = x
            sel_tgt[nsel] = y
            sel_w[nsel] = w[j]
            sel_idx[nsel] = j
            nsel += 1
        else:
            blocker[j] = sel_idx[hit]

    return {
        "selected": selected,
        "big": big,
        "blocker": blocker,
        "piv_pts": np.asarray(piv_pts, dtype=np.int64),
        "piv_lvls": np.asarray(piv_lvls, dtype=np.int64),
        "nn_id": nn_id,
        "nn_d": nn_d,
    }
