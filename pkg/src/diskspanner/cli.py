"""Command line interface.

Four subcommands:

* ``spanner gen <family> --n N [--eps E --dim D --seed S --levels L
  --rmin A --rmax B] -o inst.json`` -- write an instance file.
* ``spanner build --mode {baseline,relaxed} --eps E [--alpha A --beta B
  --gamma G --kernel K] -i inst.json -o out.json [--report rep.json]`` --
  construct, certify, and write the spanner (exit 2 when certification fails
  under proof-safe parameters; overridden parameters are reported but never
  enforced).
* ``spanner verify -i inst.json -s out.json --bound B`` -- independent
  re-certification from the files alone.
* ``spanner bench --spec sweep.json -o results.csv [--omit-millis]`` -- run
  a sweep and emit one CSV row per (cell, eps) with sizes and stretch.

Exit codes: 0 success, 2 certification failure, 64 usage error.  Timing is
the one inherently non-reproducible output, so ``--omit-millis`` leaves the
millisecond column empty for byte-stable benchmark runs.

The bench sweep file is JSON:
``{"eps": [0.5], "modes": ["baseline", "relaxed"],
   "cells": [{"family": "euclid-random", "n": 50, "seed": 0}, ...],
   "alpha": null, "beta": null, "gamma": null}``
where each cell takes the same keys as ``gen`` flags.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

from .diskgraph import build_disk_graph, normalize
from .errors import CertificationError, ConstructionError, DomainError, UsageError
from .families import FAMILIES, generate
from .files import (
    Instance,
    read_instance,
    read_spanner,
    serialize_spanner,
    write_instance,
    write_json,
)
from .oracle import certify_stretch, size_report
from .relaxed import build_relaxed_spanner
from .spanner import Params, disk_spanner

__all__ = ["main", "cmd_gen", "cmd_build", "cmd_verify", "cmd_bench"]


class _Parser(argparse.ArgumentParser):
    """argparse variant that raises instead of exiting on bad usage."""

    def error(self, message: str):  # noqa: D401 - argparse contract
        raise UsageError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="spanner", description="disk graph spanner toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance file", parents=[])
    g.add_argument("family", choices=FAMILIES)
    g.add_argument("--n", type=int, required=True, help="point count (pair count for lowerbound)")
    g.add_argument("--eps", type=float, help="spacing parameter (lowerbound only)")
    g.add_argument("--dim", type=int, default=2)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--levels", type=int, help="scale count (multiscale-chain only)")
    g.add_argument("--rmin", type=float, default=0.05)
    g.add_argument("--rmax", type=float, help="max radius (the uniform radius for unitdisk)")
    g.add_argument("-o", "--out", required=True)

    b = sub.add_parser("build", help="construct and certify a spanner")
    b.add_argument("--mode", choices=("baseline", "relaxed"), required=True)
    b.add_argument("--eps", type=float, required=True)
    b.add_argument("--alpha", type=float)
    b.add_argument("--beta", type=float)
    b.add_argument("--gamma", type=int)
    b.add_argument("--kernel", choices=("auto", "c", "python"), default="auto")
    b.add_argument("-i", "--input", required=True)
    b.add_argument("-o", "--out", required=True)
    b.add_argument("--report")

    v = sub.add_parser("verify", help="re-certify a written spanner")
    v.add_argument("-i", "--input", required=True)
    v.add_argument("-s", "--spanner", required=True)
    v.add_argument("--bound", type=float, required=True)

    be = sub.add_parser("bench", help="run a parameter sweep")
    be.add_argument("--spec", required=True)
    be.add_argument("-o", "--out", required=True)
    be.add_argument("--kernel", choices=("auto", "c", "python"), default="auto")
    be.add_argument(
        "--omit-millis",
        action="store_true",
        help="leave the timing column empty (byte-stable output)",
    )
    return p


def cmd_gen(args) -> int:
    inst = generate(
        args.family,
        args.n,
        eps=args.eps,
        dim=args.dim,
        seed=args.seed,
        levels=args.levels,
        rmin=args.rmin,
        rmax=args.rmax,
    )
    write_instance(args.out, inst)
    g = build_disk_graph(inst.metric, inst.radii)
    print(
        f"wrote {args.out}: {args.family}, n={inst.n}, edges={g.n_edges}"
        + (f", metadata={json.dumps(inst.metadata, sort_keys=True)}" if args.family == "lowerbound" else "")
    )
    return 0


def _certify_built(inst: Instance, mode: str, params: Params, kernel: str):
    """Construct per mode; return (edges, scale, n, stretch report, size report,
    union sizes dict)."""
    g = build_disk_graph(inst.metric, inst.radii)
    bound = 1.0 + params.eps
    if g.n_edges == 0:
        return [], 1.0, g.n, None, None, {"E": 0, "H": 0, "H'": 0, "Hhat": 0}
    if mode == "baseline":
        gn, scale = normalize(g)
        sp = disk_spanner(gn, params, kernel=kernel)
        stretch = certify_stretch(gn, sp.edges, bound, regime=params.regime)
        size = size_report(sp, dim=inst.dim)
        sizes = {"E": g.n_edges, "H": sp.n_edges, "H'": None, "Hhat": None}
        return sp.edges, scale, g.n, stretch, size, sizes
    rs = build_relaxed_spanner(inst.metric, inst.radii, params, kernel=kernel)
    stretch = certify_stretch(
        rs.base_graph,
        rs.surviving_tuples(),
        bound,
        universe=rs.universe_graph,
        regime=params.regime,
    )
    size = size_report(rs, dim=inst.dim)
    sizes = {
        "E": g.n_edges,
        "H": rs.h.n_edges,
        "H'": rs.h_prime.n_edges,
        "Hhat": rs.n_surviving,
    }
    return rs.edges, rs.scale, g.n, stretch, size, sizes


def cmd_build(args) -> int:
    inst = read_instance(args.input)
    params = Params(args.eps, alpha=args.alpha, beta=args.beta, gamma=args.gamma)
    edges, scale, n, stretch, size, sizes = _certify_built(
        inst, args.mode, params, args.kernel
    )
    write_json(args.out, serialize_spanner(args.mode, params, scale, n, edges))
    if args.report:
        rep = {
            "mode": args.mode,
            "params": params.to_dict(),
            "sizes": sizes,
            "stretch": None if stretch is None else stretch.to_dict(),
            "size": None if size is None else size.to_dict(),
        }
        write_json(args.report, rep)
    if stretch is None:
        print(f"wrote {args.out}: empty graph, trivial spanner")
        return 0
    ok = stretch.passed
    surviving = sum(1 for e in edges if e.survived)
    print(
        f"wrote {args.out}: mode={args.mode} edges={surviving} "
        f"max_stretch={stretch.max_ratio:.6f} bound={stretch.bound} "
        f"regime={params.regime} certified={'yes' if ok else 'NO'}"
    )
    if not ok and params.proof_safe:
        return 2
    return 0


def cmd_verify(args) -> int:
    inst = read_instance(args.input)
    sf = read_spanner(args.spanner)
    if args.bound < 1.0:
        raise UsageError(f"--bound must be >= 1, got {args.bound}")
    g = build_disk_graph(inst.metric, inst.radii)
    if g.n_edges == 0:
        if sf.edges:
            raise CertificationError("instance graph is edgeless but spanner has edges")
        print("verified: empty graph, empty spanner")
        return 0
    gn, scale = normalize(g)
    universe = gn
    if sf.mode == "relaxed":
        from .diskgraph import inflate_radii

        gp = build_disk_graph(inst.metric, inflate_radii(inst.radii, sf.params.eps))
        universe, _ = normalize(gp)
    rep = certify_stretch(
        gn, sf.surviving(), args.bound, universe=universe, regime=sf.params.regime
    )
    print(
        f"verify {args.spanner}: edges={len(sf.surviving())} "
        f"max_stretch={rep.max_ratio:.6f} bound={args.bound} "
        f"passed={'yes' if rep.passed else 'NO'}"
    )
    return 0 if rep.passed else 2


_BENCH_COLUMNS = [
    "family",
    "n",
    "levels",
    "seed",
    "eps",
    "alpha",
    "beta",
    "gamma",
    "M",
    "L",
    "edges",
    "h_edges",
    "hprime_edges",
    "hhat_edges",
    "max_stretch",
    "build_millis",
    "regime",
]


def cmd_bench(args) -> int:
    try:
        with open(args.spec, "rb") as f:
            spec = json.load(f)
    except OSError as e:
        raise UsageError(f"cannot read sweep spec: {e}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"malformed sweep spec: {e}") from None
    if not isinstance(spec, dict):
        raise UsageError("sweep spec must be a JSON object")
    eps_list = spec.get("eps", [0.5])
    modes = spec.get("modes", ["baseline", "relaxed"])
    cells = spec.get("cells", [])
    if not isinstance(eps_list, list) or not eps_list:
        raise UsageError("sweep spec needs a nonempty eps list")
    for mode in modes:
        if mode not in ("baseline", "relaxed"):
            raise UsageError(f"unknown mode {mode!r} in sweep spec")

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_BENCH_COLUMNS)
    for cell in cells:
        if not isinstance(cell, dict) or "family" not in cell or "n" not in cell:
            raise UsageError(f"sweep cell needs at least family and n: {cell}")
        for eps in eps_list:
            inst = generate(
                cell["family"],
                cell["n"],
                eps=cell.get("eps", eps if cell["family"] == "lowerbound" else None),
                dim=cell.get("dim", 2),
                seed=cell.get("seed", 0),
                levels=cell.get("levels"),
                rmin=cell.get("rmin", 0.05),
                rmax=cell.get("rmax"),
            )
            params = Params(
                eps,
                alpha=spec.get("alpha"),
                beta=spec.get("beta"),
                gamma=spec.get("gamma"),
            )
            g = build_disk_graph(inst.metric, inst.radii)
            row: dict[str, object] = {
                "family": cell["family"],
                "n": inst.n,
                "levels": cell.get("levels", ""),
                "seed": cell.get("seed", 0),
                "eps": eps,
                "alpha": params.alpha,
                "beta": params.beta,
                "gamma": params.gamma,
                "edges": g.n_edges,
                "regime": params.regime,
            }
            if g.n_edges == 0:
                row.update(M="", L="", h_edges=0, hprime_edges="", hhat_edges="", max_stretch="")
                millis = 0
            elif "relaxed" in modes:
                t0 = time.perf_counter()
                rs = build_relaxed_spanner(inst.metric, inst.radii, params, kernel=args.kernel)
                millis = int(round((time.perf_counter() - t0) * 1000.0))
                stretch = certify_stretch(
                    rs.base_graph,
                    rs.surviving_tuples(),
                    1.0 + eps,
                    universe=rs.universe_graph,
                    regime=params.regime,
                )
                row.update(
                    M=rs.base_graph.M,
                    L=rs.levels.L,
                    h_edges=rs.h.n_edges,
                    hprime_edges=rs.h_prime.n_edges,
                    hhat_edges=rs.n_surviving,
                    max_stretch=stretch.max_ratio,
                )
            else:
                gn, _ = normalize(g)
                t0 = time.perf_counter()
                sp = disk_spanner(gn, params, kernel=args.kernel)
                millis = int(round((time.perf_counter() - t0) * 1000.0))
                stretch = certify_stretch(gn, sp.edges, 1.0 + eps, regime=params.regime)
                row.update(
                    M=gn.M,
                    L=sp.levels.L,
                    h_edges=sp.n_edges,
                    hprime_edges="",
                    hhat_edges="",
                    max_stretch=stretch.max_ratio,
                )
            row["build_millis"] = "" if args.omit_millis else millis
            writer.writerow([row[c] for c in _BENCH_COLUMNS])

    with open(args.out, "w", newline="") as f:
        f.write(buf.getvalue())
    print(f"wrote {args.out}: {len(cells) * len(eps_list)} rows")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "gen":
            return cmd_gen(args)
        if args.command == "build":
            return cmd_build(args)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "bench":
            return cmd_bench(args)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 64
    except CertificationError as e:
        print(f"certification failure: {e}", file=sys.stderr)
        return 2
    except (DomainError, ConstructionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
