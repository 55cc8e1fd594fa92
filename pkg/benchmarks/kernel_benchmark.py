"""Compare the compiled construction kernel against the reference one.

Builds the same instances with both kernels, checks the selected edge sets
are identical, and reports best-of-N wall times::

    python3 benchmarks/kernel_benchmark.py --sizes 100 200 400 --repeat 3

The compiled kernel is optional; with only the pure kernel present the
script still runs and says so.
"""

import argparse
import sys
import time

from diskspanner.diskgraph import build_disk_graph, normalize
from diskspanner.families import gen_euclid_random
from diskspanner.spanner import Params, available_kernels, disk_spanner


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return out, best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[100, 200, 400, 800])
    ap.add_argument("--eps", type=float, default=0.5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    kernels = tuple(k for k in available_kernels() if k != "auto")
    params = Params(args.eps)
    print(f"kernels: {', '.join(kernels)}   eps={args.eps}  repeat={args.repeat}")
    if "c" not in kernels:
        print("compiled kernel not built; timing the pure kernel only")
        print("(build it with: python3 setup.py build_ext --inplace)")

    header = f"{'n':>6} {'edges':>8} {'kept':>7}"
    for k in kernels:
        header += f" {k + ' ms':>12}"
    if len(kernels) > 1:
        header += f" {'speedup':>9}"
    print(header)

    for n in args.sizes:
        inst = gen_euclid_random(n, seed=args.seed)
        gn, _ = normalize(build_disk_graph(inst.metric, inst.radii))
        times = {}
        edge_sets = {}
        for k in kernels:
            sp, t = best_of(lambda k=k: disk_spanner(gn, params, kernel=k), args.repeat)
            times[k] = t
            edge_sets[k] = sp.edge_pairs()
            kept = sp.n_edges
        row = f"{n:>6} {gn.n_edges:>8} {kept:>7}"
        for k in kernels:
            row += f" {times[k] * 1e3:>12.2f}"
        if len(kernels) > 1:
            if edge_sets["c"] != edge_sets["python"]:
                print(f"n={n}: KERNEL DISAGREEMENT", file=sys.stderr)
                return 1
            row += f" {times['python'] / times['c']:>8.1f}x"
        print(row)
    return 0


if __name__ == "__main__":
    sys.exit(main())
