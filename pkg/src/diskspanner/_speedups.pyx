# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled spanner construction kernel.

Mirrors ``_kernel_py.run_kernel`` exactly: same inputs, same outputs, same
tie handling.  Any change here must be made in the NumPy reference kernel as
well; the test suite asserts the two agree edge for edge.
"""

import numpy as np


cdef void _add_pivot(double[:, ::1] D, double[::1] nn_d, long long[::1] nn_id,
                     long long v, double rel_tol) noexcept:
    cdef Py_ssize_t u, n = nn_d.shape[0]
    cdef double d, hi, diff
    for u in range(n):
        d = D[v, u]
        if nn_id[u] < 0:
            nn_d[u] = d
            nn_id[u] = v
            continue
        hi = d if d > nn_d[u] else nn_d[u]
        diff = d - nn_d[u]
        if diff < 0.0:
            diff = -diff
        if diff <= rel_tol * hi:
            if v < nn_id[u]:
                nn_d[u] = d
                nn_id[u] = v
        elif d < nn_d[u]:
            nn_d[u] = d
            nn_id[u] = v


def run_kernel(double[:, ::1] D, double[::1] r, double[::1] thresholds, double beta,
               long long[::1] src, long long[::1] tgt, double[::1] w,
               long long[::1] lvl, double rel_tol):
    cdef Py_ssize_t n = r.shape[0]
    cdef Py_ssize_t m = src.shape[0]

    selected_arr = np.zeros(m, dtype=np.uint8)
    big_arr = np.zeros(m, dtype=np.uint8)
    blocker_arr = np.full(m, -1, dtype=np.int64)
    nn_id_arr = np.full(n, -1, dtype=np.int64)
    nn_d_arr = np.full(n, np.inf)
    sel_src_arr = np.empty(m, dtype=np.int64)
    sel_tgt_arr = np.empty(m, dtype=np.int64)
    sel_w_arr = np.empty(m)
    sel_idx_arr = np.empty(m, dtype=np.int64)
    piv_pts_arr = np.empty(n, dtype=np.int64)
    piv_lvls_arr = np.empty(n, dtype=np.int64)

    cdef unsigned char[::1] selected = selected_arr
    cdef unsigned char[::1] big = big_arr
    cdef long long[::1] blocker = blocker_arr
    cdef long long[::1] nn_id = nn_id_arr
    cdef double[::1] nn_d = nn_d_arr
    cdef long long[::1] sel_src = sel_src_arr
    cdef long long[::1] sel_tgt = sel_tgt_arr
    cdef double[::1] sel_w = sel_w_arr
    cdef long long[::1] sel_idx = sel_idx_arr
    cdef long long[::1] piv_pts = piv_pts_arr
    cdef long long[::1] piv_lvls = piv_lvls_arr

    cdef Py_ssize_t j, k, nsel = 0, npiv = 0, stage_start = 0
    cdef long long x, y, p, q, a, b, i, hit, cur_level = -1
    cdef double T, sep, best_w
    cdef bint big_target, ok

    for j in range(m):
        i = lvl[j]
        if i != cur_level:
            cur_level = i
            stage_start = nsel
        T = thresholds[i + 1]
        sep = beta * T
        x = src[j]
        y = tgt[j]

        if nn_d[x] > sep:
            piv_pts[npiv] = x
            piv_lvls[npiv] = i
            npiv += 1
            _add_pivot(D, nn_d, nn_id, x, rel_tol)
        big_target = r[y] >= T
        if big_target and nn_d[y] > sep:
            piv_pts[npiv] = y
            piv_lvls[npiv] = i
            npiv += 1
            _add_pivot(D, nn_d, nn_id, y, rel_tol)

        p = nn_id[x]
        q = nn_id[y] if big_target else -1
        if big_target:
            big[j] = 1

        # Only edges selected at the current level can block; see the
        # reference kernel for the reasoning.
        hit = -1
        best_w = 0.0
        for k in range(stage_start, nsel):
            a = sel_src[k]
            if nn_id[a] != p or r[a] < nn_d[a]:
                continue
            if big_target:
                b = sel_tgt[k]
                if nn_id[b] != q or r[b] < nn_d[b] or r[b] < T:
                    continue
            elif sel_tgt[k] != y:
                continue
            if hit < 0 or sel_w[k] < best_w:
                hit = k
                best_w = sel_w[k]

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
        "selected": selected_arr,
        "big": big_arr,
        "blocker": blocker_arr,
        "piv_pts": piv_pts_arr[:npiv].copy(),
        "piv_lvls": piv_lvls_arr[:npiv].copy(),
        "nn_id": nn_id_arr,
        "nn_d": nn_d_arr,
    }
