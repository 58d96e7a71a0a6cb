#!/usr/bin/env python3
"""Benchmark: compiled extension kernels vs the pure-NumPy fallback.

Covers the raw kernel arrays at the batch sizes the adaptive quadrature
actually uses (one panel = 15 nodes, one refinement sweep <= 64 panels)
plus two end-to-end paths.  Run:

    python benchmarks/bench_backends.py
"""

import math
import os
import subprocess
import sys
import time

import numpy as np

from wavecut import _purepy

try:
    from wavecut import _kernels
except ImportError:
    _kernels = None

K = math.sqrt(5.0)


def bench(fn, *args, target_s=0.4):
    fn(*args)  # warm up
    n = 1
    while True:
        t0 = time.perf_counter()
        for _ in range(n):
            fn(*args)
        dt = time.perf_counter() - t0
        if dt > 0.05:
            break
        n *= 4
    reps = max(1, int(n * target_s / dt))
    t0 = time.perf_counter()
    for _ in range(reps):
        fn(*args)
    return (time.perf_counter() - t0) / reps


def kernel_benches():
    rng = np.random.default_rng(17)
    rows = []
    for size in (15, 120, 960, 20000):
        z = rng.uniform(-4, 4, size) + 1j * rng.uniform(-4, 4, size)
        k = rng.uniform(-4, 4, size) + 1j * rng.uniform(0.01, 4, size)
        for name, args in [("dilog", (z,)), ("splus", (k, 1.0, 2.0, K))]:
            tp = bench(getattr(_purepy, name), *args)
            row = [f"{name}[{size}]", tp * 1e6]
            if _kernels is not None:
                tc = bench(getattr(_kernels, name), *args)
                row += [tc * 1e6, tp / tc]
            rows.append(row)
    return rows


def end_to_end(backend):
    env = dict(os.environ, WAVECUT_BACKEND=backend)
    code = (
        "import time, numpy as np\n"
        "from wavecut.model import ReducedParams\n"
        "from wavecut import wavefunction as wf\n"
        "rp = ReducedParams.from_a_k0(1.0, 2.0)\n"
        "t0 = time.perf_counter()\n"
        "wf.psi_unified(-5.0, 0.0, rp, eps=3e-4, tol=1e-9)\n"
        "t1 = time.perf_counter()\n"
        "wf.scan_grid([-10.0], np.linspace(0, 40, 1201), rp, tol=1e-6)\n"
        "t2 = time.perf_counter()\n"
        "for y in np.linspace(30, 300, 20):\n"
        "    wf.psi_free(-10.0, float(y), rp, tol=1e-8)\n"
        "t3 = time.perf_counter()\n"
        "print(f'{t1-t0:.3f} {t2-t1:.3f} {t3-t2:.3f}')\n"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    return [float(v) for v in out.stdout.split()]


def main():
    print(f"compiled backend available: {_kernels is not None}\n")
    print(f"{'kernel':<16}{'pure (us)':>12}{'compiled (us)':>15}{'speedup':>9}")
    for row in kernel_benches():
        if len(row) == 4:
            print(f"{row[0]:<16}{row[1]:>12.1f}{row[2]:>15.1f}{row[3]:>8.1f}x")
        else:
            print(f"{row[0]:<16}{row[1]:>12.1f}{'-':>15}{'-':>9}")

    labels = ["psi_unified(-5,0)", "1201-pt y-scan", "20 adaptive psi_free"]
    print("\nend-to-end (seconds):")
    pure = end_to_end("pure")
    rows = {"pure": pure}
    if _kernels is not None:
        rows["compiled"] = end_to_end("compiled")
    print(f"{'path':<24}" + "".join(f"{k:>12}" for k in rows))
    for i, lab in enumerate(labels):
        print(f"{lab:<24}" + "".join(f"{v[i]:>12.3f}" for v in rows.values()))


if __name__ == "__main__":
    main()
