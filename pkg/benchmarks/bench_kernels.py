"""Compare the numba and numpy product kernels.

    python benchmarks/bench_kernels.py [--repeat 5] [--batch 20000]

Reports single-product latency and batched throughput for M2, M3 and M4,
and checks that both backends agree before timing anything.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from mpga import _kernels
from mpga.algebra import SPACES


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--batch", type=int, default=20000)
    ap.add_argument("--singles", type=int, default=2000)
    args = ap.parse_args()

    rng = np.random.default_rng(7)
    backends = _kernels.available_backends()
    print(f"backends: {', '.join(backends)}")
    print(f"{'space':<6}{'backend':<8}{'single (us)':>14}{'batch (Mprod/s)':>18}")
    for tag, sig in SPACES.items():
        sign = sig.tables.gp
        a = rng.normal(size=(args.batch, sig.size))
        b = rng.normal(size=(args.batch, sig.size))
        ref = None
        for be in backends:
            out = _kernels.product_batch(a[:100], b[:100], sign, backend=be)  # also triggers JIT
            if ref is None:
                ref = out
            elif not np.allclose(out, ref, rtol=1e-12, atol=1e-12):
                raise SystemExit(f"backend {be} disagrees in {tag}")
            _kernels.product(a[0], b[0], sign, backend=be)

            def singles(be=be):
                for k in range(args.singles):
                    _kernels.product(a[k], b[k], sign, backend=be)

            t_single = _best(singles, args.repeat) / args.singles
            t_batch = _best(lambda be=be: _kernels.product_batch(a, b, sign, backend=be), args.repeat)
            print(f"{tag:<6}{be:<8}{t_single * 1e6:>14.2f}{args.batch / t_batch / 1e6:>18.3f}")


if __name__ == "__main__":
    main()
