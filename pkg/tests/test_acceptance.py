"""End-to-end gate for the package's advertised guarantees.

Each test covers one contract clause and prints a single PASS or FAIL line
naming the property (visible with ``pytest -s`` or on failure), then asserts
it.  The heavyweight fixtures are module-scoped so the twenty-instance
euclidean suite is built once and shared.
"""

import time
from collections import Counter

import numpy as np
import pytest

from diskspanner.adversarial import (
    build_lower_bound_instance,
    doubling_profile,
    verify_non_sparsifiable,
)
from diskspanner.cli import main as cli_main
from diskspanner.diskgraph import build_disk_graph, normalize
from diskspanner.families import gen_euclid_random, gen_multiscale_chain
from diskspanner.oracle import (
    certify_stretch,
    enumerate_shortest_paths,
    shortest_paths_from,
    size_report,
)
from diskspanner.relaxed import build_relaxed_spanner, prune
from diskspanner.spanner import Params, disk_spanner

SEEDS = tuple(range(20))
EPS_GRID = (0.5, 1.0)


def _suite_n(seed: int) -> int:
    return (50, 100, 200)[seed % 3]


def _report(name: str, ok: bool, detail: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL'} {name}"
    if detail:
        line += f" [{detail}]"
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def euclid_suite():
    return {s: gen_euclid_random(_suite_n(s), seed=s) for s in SEEDS}


@pytest.fixture(scope="module")
def baseline_builds(euclid_suite):
    t0 = time.perf_counter()
    builds = {}
    reports = {}
    for s, inst in euclid_suite.items():
        gn, _ = normalize(build_disk_graph(inst.metric, inst.radii))
        for eps in EPS_GRID:
            sp = disk_spanner(gn, Params(eps))
            builds[(s, eps)] = (gn, sp)
            reports[(s, eps)] = certify_stretch(gn, sp.edges, 1.0 + eps)
    return builds, reports, time.perf_counter() - t0


@pytest.fixture(scope="module")
def relaxed_builds(euclid_suite):
    t0 = time.perf_counter()
    builds = {}
    reports = {}
    for s, inst in euclid_suite.items():
        for eps in EPS_GRID:
            rs = build_relaxed_spanner(inst.metric, inst.radii, Params(eps))
            builds[(s, eps)] = rs
            reports[(s, eps)] = certify_stretch(
                rs.base_graph,
                rs.surviving_tuples(),
                1.0 + eps,
                universe=rs.universe_graph,
            )
    return builds, reports, time.perf_counter() - t0


@pytest.fixture(scope="module")
def multiscale_runs():
    t0 = time.perf_counter()
    runs = []
    params = Params(0.5, gamma=1)  # retention quota 4, below every level count here
    for levels in (8, 16, 32):
        inst = gen_multiscale_chain(64, levels=levels)
        gn, _ = normalize(build_disk_graph(inst.metric, inst.radii))
        sp = disk_spanner(gn, params)
        rs = build_relaxed_spanner(inst.metric, inst.radii, params)
        rep = certify_stretch(
            rs.base_graph,
            rs.surviving_tuples(),
            1.5,
            universe=rs.universe_graph,
            regime=params.regime,
        )
        runs.append({"levels": levels, "n": inst.n, "sp": sp, "rs": rs, "rep": rep})
    return runs, time.perf_counter() - t0


def test_baseline_stretch_within_bound(baseline_builds):
    _, reports, elapsed = baseline_builds
    worst = 0.0
    ok = True
    for (s, eps), rep in reports.items():
        ok = ok and rep.passed and rep.bound == 1.0 + eps and rep.tolerance == 1e-9
        worst = max(worst, rep.max_ratio / rep.bound)
    ok = ok and elapsed <= 60.0
    _report(
        "baseline stretch within 1+eps on 20-instance suite",
        ok,
        f"worst ratio/bound {worst:.4f}, build+certify {elapsed:.1f}s",
    )


def test_relaxed_membership_and_stretch(euclid_suite, relaxed_builds):
    builds, reports, elapsed = relaxed_builds
    bad_membership = 0
    certified = True
    for (s, eps), rs in builds.items():
        inst = euclid_suite[s]
        d = inst.metric.distance_matrix()
        r = inst.radii.values
        for e in rs.surviving():
            if d[e.source, e.target] > r[e.source] * (1.0 + eps):
                bad_membership += 1
        certified = certified and reports[(s, eps)].passed
    ok = bad_membership == 0 and certified and elapsed <= 120.0
    _report(
        "relaxed spanner stays inside inflated disks and certifies vs base edges",
        ok,
        f"membership violations {bad_membership}, build+certify {elapsed:.1f}s",
    )


def test_lower_bound_family_resists_sparsification():
    t0 = time.perf_counter()
    ok = True
    details = []
    for n in (4, 8, 16):
        inst = build_lower_bound_instance(n, 0.25)
        d = inst.metric.distance_matrix()
        # exhaustive triangle inequality over all ordered triples
        slack = 1e-9 * d.max()
        viol = int(np.sum(d[:, None, :] > d[:, :, None] + d[None, :, :] + slack))
        g = inst.graph()
        rep = verify_non_sparsifiable(g)
        gn, _ = normalize(g)
        sp = disk_spanner(gn, Params(0.25))
        full = sp.edge_pairs() == g.edge_set()
        ok = ok and viol == 0 and g.n_edges >= n * n and rep.all_essential and full
        details.append(f"n={n}: {g.n_edges} edges all essential, kept {sp.n_edges}")
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed <= 30.0
    _report(
        "lower-bound family keeps all n^2 essential edges",
        ok,
        "; ".join(details) + f", {elapsed:.1f}s",
    )


def test_lower_bound_family_stays_doubling():
    t0 = time.perf_counter()
    m8 = max(e.cover_count for e in doubling_profile(build_lower_bound_instance(8, 0.25)))
    m16 = max(e.cover_count for e in doubling_profile(build_lower_bound_instance(16, 0.25)))
    elapsed = time.perf_counter() - t0
    ok = m16 <= 2 * m8 and elapsed <= 10.0
    _report(
        "lower-bound family cover counts stay flat as n doubles",
        ok,
        f"max cover n=8: {m8}, n=16: {m16}, {elapsed:.1f}s",
    )


def test_incoming_degree_bound(baseline_builds):
    builds, _, _ = baseline_builds
    ok = True
    worst = 0
    for (s, eps), (gn, sp) in builds.items():
        p = sp.params
        bound = ((1.0 + p.alpha) / p.beta + 3.0) ** 2
        rep = size_report(sp, dim=2)
        # recount independently of the report
        counts = Counter((e.target, e.level) for e in sp.edges)
        mx = max(counts.values()) if counts else 0
        ok = (
            ok
            and rep.incoming_violations == []
            and rep.incoming_bound == bound
            and rep.max_incoming == mx
            and mx <= bound
        )
        worst = max(worst, mx)
    _report(
        "incoming edges per point and level stay under the packing bound",
        ok,
        f"max observed {worst}",
    )


def test_pivot_separation_and_packing(baseline_builds):
    builds, _, _ = baseline_builds
    rng = np.random.default_rng(0)
    ok = True
    packed_checks = 0
    for (s, eps), (gn, sp) in builds.items():
        d = gn.metric.distance_matrix()
        thr = sp.levels.thresholds
        beta = sp.params.beta
        # Pivot sets are nested and the spacing threshold shrinks level by
        # level, so pairwise separation needs checking only at levels where
        # an insertion happened; every later level inherits it a fortiori.
        for lvl in sorted({l for l, _ in sp.pivot_events}):
            sep = beta * thr[lvl + 1]
            members = np.array(sp.pivots_at(lvl).members())
            sub = d[np.ix_(members, members)]
            off = ~np.eye(len(members), dtype=bool)
            if not np.all(sub[off] > sep):
                ok = False
            # seeded ball samples against the grid packing bound
            for k in (1.0, 4.0, 16.0):
                R = k * sep
                cap = (2.0 * R / sep + 1.0) ** 2
                for c in rng.choice(gn.n, size=2):
                    got = int(np.sum(d[c, members] <= R))
                    packed_checks += 1
                    if got > cap:
                        ok = False
    _report(
        "pivots stay separated and ball-packed at every level",
        ok,
        f"{packed_checks} sampled balls",
    )


def test_size_scales_with_level_count(multiscale_runs):
    runs, elapsed = multiscale_runs
    n = runs[0]["n"]
    h_density = [r["sp"].n_edges / n for r in runs]
    hhat_density = [r["rs"].n_surviving / n for r in runs]
    increasing = all(a < b for a, b in zip(h_density, h_density[1:]))
    capped = hhat_density[-1] <= 1.25 * hhat_density[0]
    flagged = all(r["rep"].regime == "override" for r in runs)
    stretches = ", ".join(f"{r['levels']}: {r['rep'].max_ratio:.3f}" for r in runs)
    ok = increasing and capped and flagged and elapsed <= 120.0
    _report(
        "full spanner grows with scale count while pruning caps the relaxed one",
        ok,
        f"|H|/n {h_density}, |Hhat|/n {hhat_density}, "
        f"override stretch {{{stretches}}}, {elapsed:.1f}s",
    )


def test_prune_keeps_protected_prefix(relaxed_builds, multiscale_runs):
    builds, _, _ = relaxed_builds
    runs, _ = multiscale_runs
    ok = True
    points = 0
    for rs in list(builds.values()) + [r["rs"] for r in runs]:
        quota = rs.trace.quota
        assert quota == 4 * rs.trace.gamma
        protected_seen: Counter = Counter()
        for e in rs.edges:
            tr = rs.trace[e.target]
            if e.level >= tr.point_level:
                if not e.survived:
                    ok = False
                protected_seen[e.target] += 1
        for q, tr in rs.trace.per_point.items():
            points += 1
            if tr.protected != protected_seen.get(q, 0):
                ok = False
            if tr.kept_levels != tr.below_levels[:quota]:
                ok = False
            if tr.dropped_levels != tr.below_levels[quota:]:
                ok = False
            if len(tr.kept_levels) > quota:
                ok = False
        again = prune(rs.surviving(), rs.base_graph.radii, rs.levels, rs.trace.gamma)
        if again.n_surviving != rs.n_surviving:
            ok = False
        if any(tr.dropped for tr in again.trace.per_point.values()):
            ok = False
    _report(
        "pruning protects fine levels, keeps a maximal coarse prefix, idempotent",
        ok,
        f"{points} point traces",
    )


def test_repeat_runs_are_byte_identical(tmp_path):
    pairs = []

    def twice(name, argv_fn):
        outs = []
        for tag in ("a", "b"):
            out = tmp_path / f"{name}-{tag}"
            rc = cli_main(argv_fn(str(out)))
            assert rc == 0
            outs.append(out.read_bytes())
        pairs.append((name, outs[0] == outs[1]))

    inst = tmp_path / "inst.json"
    assert cli_main(["gen", "euclid-random", "--n", "40", "--seed", "3", "-o", str(inst)]) == 0
    lb = tmp_path / "lb.json"

    twice("gen", lambda o: ["gen", "euclid-random", "--n", "40", "--seed", "3", "-o", o])
    twice("gen-lb", lambda o: ["gen", "lowerbound", "--n", "4", "--eps", "0.25", "-o", o])
    twice(
        "build-baseline",
        lambda o: ["build", "--mode", "baseline", "--eps", "0.5", "-i", str(inst), "-o", o],
    )
    twice(
        "build-relaxed",
        lambda o: ["build", "--mode", "relaxed", "--eps", "0.5", "-i", str(inst), "-o", o],
    )

    sweep = tmp_path / "sweep.json"
    sweep.write_text(
        '{"eps": [0.5], "modes": ["baseline", "relaxed"], "cells": '
        '[{"family": "euclid-random", "n": 30, "seed": 2}, '
        '{"family": "multiscale-chain", "n": 12, "levels": 3}]}'
    )
    twice(
        "bench",
        lambda o: ["bench", "--spec", str(sweep), "-o", o, "--omit-millis"],
    )

    bad = [name for name, same in pairs if not same]
    _report(
        "repeated runs produce byte-identical outputs",
        not bad,
        f"{len(pairs)} command pairs" + (f", mismatched: {bad}" if bad else ""),
    )


def test_oracle_agrees_with_enumeration():
    rng = np.random.default_rng(2024)
    mismatches = 0
    for _ in range(200):
        n = int(rng.integers(3, 9))
        edges = []
        for i in range(n):
            for j in range(n):
                if i != j and rng.random() < 0.35:
                    edges.append((i, j, float(rng.uniform(0.5, 5.0))))
        for s in range(n):
            got, _ = shortest_paths_from(n, edges, s)
            want = enumerate_shortest_paths(n, edges, s)
            same = np.isinf(got) == np.isinf(want)
            finite = np.isfinite(want)
            close = np.allclose(got[finite], want[finite], rtol=1e-12, atol=0.0)
            if not (same.all() and close):
                mismatches += 1
    _report(
        "shortest-path oracle matches exhaustive enumeration",
        mismatches == 0,
        f"200 digraphs, {mismatches} mismatches",
    )
