"""Benchmark the DP kernels: numba-compiled loops vs the numpy fallback.

Run with ``python -m pvarlab.bench``.  Both code paths are exercised directly
(no env flag needed here); ``PVARLAB_NUMBA=0`` selects the numpy path for the
whole library instead.
"""

from __future__ import annotations

import time

import numpy as np

from . import _kernels


def _time(fn, *args, repeat: int = 3) -> tuple[float, object]:
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def run(sizes=(64, 256, 1024), n_max: int = 32, seed: int = 0) -> list[dict]:
    rng = np.random.default_rng(seed)
    rows = []
    for m in sizes:
        values = rng.uniform(-1.0, 1.0, m)
        for p in (1.0, 2.0):
            if _kernels.USE_NUMBA:
                if p == 1.0:
                    _kernels._dp1_values_jit(values, 2)  # warm the JIT cache
                    t_jit, out_jit = _time(_kernels._dp1_values_jit, values, n_max)
                    t_np, out_np = _time(_kernels._dp1_values_numpy, values, n_max)
                else:
                    _kernels._dp_profile_jit(values, p, 2)
                    t_jit, out_jit = _time(_kernels._dp_profile_jit, values, p, n_max)
                    t_np, out_np = _time(_kernels._dp_profile_numpy, values, p, n_max)
                gap = float(np.max(np.abs(np.asarray(out_jit) - np.asarray(out_np))))
                rows.append({"m": m, "p": p, "numba_s": t_jit, "numpy_s": t_np,
                             "speedup": t_np / t_jit if t_jit > 0 else float("inf"),
                             "max_abs_gap": gap})
            else:
                fn = _kernels._dp1_values_numpy if p == 1.0 else _kernels._dp_profile_numpy
                args = (values, n_max) if p == 1.0 else (values, p, n_max)
                t_np, _ = _time(fn, *args)
                rows.append({"m": m, "p": p, "numba_s": None, "numpy_s": t_np,
                             "speedup": None, "max_abs_gap": 0.0})
    return rows


def main():
    print(f"active backend: {_kernels.backend_name()}")
    rows = run()
    hdr = f"{'m':>6} {'p':>4} {'numba [s]':>12} {'numpy [s]':>12} {'speedup':>9} {'gap':>9}"
    print(hdr)
    for r in rows:
        numba_s = f"{r['numba_s']:.4e}" if r["numba_s"] is not None else "-"
        speedup = f"{r['speedup']:.1f}x" if r["speedup"] is not None else "-"
        print(f"{r['m']:>6} {r['p']:>4g} {numba_s:>12} {r['numpy_s']:>12.4e} "
              f"{speedup:>9} {r['max_abs_gap']:>9.1e}")


if __name__ == "__main__":
    main()
