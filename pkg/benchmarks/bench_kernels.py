"""Timing comparison of the compiled kernels against the NumPy fallback.

Runs the three hot loops on realistic data sizes and reports per-call
times and the speed ratio. Invoke directly:

    python3 benchmarks/bench_kernels.py [n] [steps]
"""
import sys
import time

import numpy as np

from splitlaw._kernels import py_backend

try:
    from splitlaw._kernels import _speed
except ImportError:
    _speed = None


def _time(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def _report(name, py_t, sp_t):
    if sp_t is None:
        print(f"{name:>14}: python {py_t * 1e6:8.1f} us   speed: not built")
    else:
        print(f"{name:>14}: python {py_t * 1e6:8.1f} us   "
              f"speed {sp_t * 1e6:8.1f} us   x{py_t / sp_t:.1f}")


def main(n=4096, repeats=200):
    rng = np.random.default_rng(0)
    v = rng.uniform(0.1, 2.0, n)
    w = rng.uniform(-1.0, 1.0, n) * v
    a = np.concatenate([[v[0]], v])
    b = np.concatenate([v, [v[-1]]])
    ga = a / (1.0 + a)
    gb = b / (1.0 + b)
    G = np.minimum(ga, gb)
    mu = 0.2
    F = v * v
    inv2mu = 1.0 / (2.0 * mu)

    cases = [
        ("godunov_fluxes", (a, b, ga, gb, 0.0, np.inf, 0)),
        ("scalar_step", (v, G, mu)),
        ("upwind_step", (v, w, G, mu, 0)),
        ("lxf_fluxes", (v, F, inv2mu)),
    ]
    print(f"n = {n}, best of {repeats}")
    for name, args in cases:
        py_t = _time(getattr(py_backend, name), args, repeats)
        sp_t = (_time(getattr(_speed, name), args, repeats)
                if _speed is not None else None)
        _report(name, py_t, sp_t)

    if _speed is not None:
        for name, args in cases:
            got = getattr(_speed, name)(*args)
            ref = getattr(py_backend, name)(*args)
            got = got if isinstance(got, tuple) else (got,)
            ref = ref if isinstance(ref, tuple) else (ref,)
            for x, y in zip(got, ref):
                assert np.array_equal(np.asarray(x), np.asarray(y)), name
        print("bitwise parity: ok")


if __name__ == "__main__":
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 4096
    repeats = int(sys.argv[2]) if len(sys.argv) > 2 else 200
    main(n, repeats)
