"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py --nodes 1000 --repeat 3
"""
import argparse
import time

import numpy as np

from smartselect import _backend
from smartselect.graph import sbm_generate


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=1000)
    ap.add_argument("--blocks", type=int, default=4)
    ap.add_argument("--degree", type=float, default=8.0, help="expected within-block degree")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--voterank-r", type=int, default=140)
    args = ap.parse_args()

    if _backend.compiled_kernels is None:
        raise SystemExit("compiled kernels are not built; run `pip install -e . --no-build-isolation`")
    size = args.nodes // args.blocks
    p_in = min(1.0, args.degree / size)
    g, _, _ = sbm_generate([size] * args.blocks, p_in, p_in / 20, seed=0)
    print(f"graph: n={g.n} m={g.edge_count}")
    active = np.ones(g.n, dtype=bool)
    weaken = 1.0 / (2.0 * g.edge_count / g.n)
    r = min(args.voterank_r, g.n)
    jobs = {
        "closeness": lambda k: k.closeness(g.offsets, g.neighbors, active),
        "betweenness": lambda k: k.betweenness(g.offsets, g.neighbors, active),
        "voterank": lambda k: k.voterank(g.offsets, g.neighbors, r, weaken)[0],
    }
    print(f"{'kernel':<12} {'python [s]':>11} {'cython [s]':>11} {'speedup':>8}  identical")
    for name, job in jobs.items():
        tp, a = best_of(lambda: job(_backend.python_kernels), args.repeat)
        tc, b = best_of(lambda: job(_backend.compiled_kernels), args.repeat)
        print(f"{name:<12} {tp:11.4f} {tc:11.4f} {tp / tc:8.1f}  {a.tobytes() == b.tobytes()}")


if __name__ == "__main__":
    main()
