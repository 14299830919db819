"""Compare the numba and numpy kernel builds on the two hot workloads.

Run from the repository root:

    PYTHONPATH=src python3 benchmarks/bench_backends.py

Workload A: full associativity scan of the 256x256 table of the rank-8
elementary abelian 2-group (16.7M triples). Workload B: the exhaustive
residue-family FP audit (k=5, M=40: 658,008 subsets x 31 words). The numba
numbers exclude JIT compilation (one warm-up call per kernel).
"""

from __future__ import annotations

import os
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from hindman_lab.backend import BACKEND_ENV, NUMBA_AVAILABLE  # noqa: E402
from hindman_lab.families import z2sum  # noqa: E402
from hindman_lab.fpsets import whymodfin_fp_audit  # noqa: E402
from hindman_lab.kernels import (  # noqa: E402
    assoc_violation_numba,
    assoc_violation_numpy,
    warm_up,
)


def timed(fn, repeat: int = 3) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main() -> int:
    table = z2sum(8).table
    print(f"workload A: associativity scan, n=256 ({256**3:,} triples)")
    if NUMBA_AVAILABLE:
        warm_up()
        assoc_violation_numba(table)  # compile for this signature
        t = timed(lambda: assoc_violation_numba(table))
        print(f"  numba : {t * 1e3:9.2f} ms")
    else:
        print("  numba : unavailable")
    t = timed(lambda: assoc_violation_numpy(table))
    print(f"  numpy : {t * 1e3:9.2f} ms")

    print("workload B: residue-family FP audit, k=5 M=40 (658,008 subsets)")
    for backend in ("numba", "numpy"):
        if backend == "numba" and not NUMBA_AVAILABLE:
            print("  numba : unavailable")
            continue
        os.environ[BACKEND_ENV] = backend
        whymodfin_fp_audit(5, 40)  # warm (compiles under numba)
        t = timed(lambda: whymodfin_fp_audit(5, 40), repeat=2)
        print(f"  {backend:6}: {t * 1e3:9.2f} ms")
    os.environ.pop(BACKEND_ENV, None)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
