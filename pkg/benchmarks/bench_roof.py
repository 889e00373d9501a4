"""Compare the compiled and numpy roof-search kernels.

    python benchmarks/bench_roof.py [--dims 2 3 4] [--restarts 8] [--iters 2000]
"""
import argparse
import time

from qudit_monogamy import RoofConfig, haar_random_tripartite, partial_trace, roof_upper_bound
from qudit_monogamy import kernels


def bench(dim, backend, restarts, iters, repeats):
    rho = partial_trace(haar_random_tripartite(dim, 1), {1, 2})
    cfg = RoofConfig(restarts=restarts, max_iters=iters, backend=backend)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        res = roof_upper_bound(rho, (dim, dim), cfg)
        best = min(best, time.perf_counter() - t0)
    return best, res.value


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--restarts", type=int, default=8)
    ap.add_argument("--iters", type=int, default=2000)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    backends = [b for b in ("compiled", "python") if b in kernels.BACKENDS]
    print(f"{'dim':>3} {'backend':>9} {'seconds':>9} {'roof value':>22} {'speedup':>8}")
    for dim in args.dims:
        times = {}
        for be in backends:
            t, value = bench(dim, be, args.restarts, args.iters, args.repeats)
            times[be] = t
            speed = ""
            if be == "python" and "compiled" in times:
                speed = f"{t / times['compiled']:.1f}x"
            print(f"{dim:>3} {be:>9} {t:>9.4f} {value:>22.15g} {speed:>8}")


if __name__ == "__main__":
    main()
