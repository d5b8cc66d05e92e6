"""Compare the compiled kernels with the pure-Python fallback.

Runs each kernel on the same seeded random inputs under both backends, then
times one end-to-end solve per backend in a subprocess (the backend is
chosen at import time through FBSYNTH_PURE_PYTHON).

    python3 benchmarks/bench_kernels.py [--problem benchmarks/hd/hd09.sl]
"""

import argparse
import os
import random
import subprocess
import sys
import time
from array import array
from pathlib import Path

from fbsynth import kernels
from fbsynth.kernels import _pykernels as py

W = 64
M = (1 << W) - 1


def _signed(v):
    return v - (1 << W) if v >> (W - 1) else v


def workloads(rng, k=2000):
    bits = []
    for _ in range(k):
        known = rng.getrandbits(W)
        val = rng.getrandbits(W)
        bits.append((M & ~(val & known), (val | ~known) & M))
    adds = [(W, *bits[i], *bits[-i - 1], 1, 0) for i in range(k)]
    reds = []
    for z, o in bits:
        a, b = sorted((rng.getrandbits(W), rng.getrandbits(W)))
        sa, sb = sorted((_signed(rng.getrandbits(W)), _signed(rng.getrandbits(W))))
        reds.append((W, z, o, sa, sb, a, b))
    shifts = [(kernels.LSHR, W, *bits[i], M & ~0x3F, 0x3F) for i in range(k)]
    members = array("Q", (rng.getrandbits(W) for _ in range(8 * 4000)))
    filt = (members, 8, [0] * 8, [0] * 8, [-(1 << 63)] * 8, [(1 << 63) - 1] * 8,
            [1 << 60] * 8, [M] * 8, W)
    return {"ripple_carry_add": adds, "reduce_product": reds, "shift_join": shifts,
            "filter_members": [filt] * 20}


def time_kernel(fn, calls, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for args in calls:
            fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def end_to_end(problem, pure):
    env = dict(os.environ)
    if pure:
        env["FBSYNTH_PURE_PYTHON"] = "1"
    else:
        env.pop("FBSYNTH_PURE_PYTHON", None)
    t0 = time.perf_counter()
    subprocess.run([sys.executable, "-m", "fbsynth", "solve", problem, "--timeout", "300"],
                   env=env, check=False, stdout=subprocess.DEVNULL)
    return time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    default = Path(__file__).resolve().parent / "hd" / "hd09.sl"
    ap.add_argument("--problem", default=str(default))
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    if kernels.native is None:
        print("compiled kernels are not built; only the fallback is available")
        return 1
    work = workloads(random.Random(args.seed))
    print(f"{'kernel':<18} {'calls':>6} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name, calls in work.items():
        for a in calls[:50]:
            if getattr(py, name)(*a) != getattr(kernels.native, name)(*a):
                raise SystemExit(f"backends disagree on {name}{a[:3]}")
        tp = time_kernel(getattr(py, name), calls)
        tc = time_kernel(getattr(kernels.native, name), calls)
        print(f"{name:<18} {len(calls):>6} {tp:>10.4f} {tc:>10.4f} {tp / tc:>7.1f}x")
    tp, tc = end_to_end(args.problem, True), end_to_end(args.problem, False)
    print(f"{'solve ' + Path(args.problem).name:<18} {1:>6} {tp:>10.4f} {tc:>10.4f} {tp / tc:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
