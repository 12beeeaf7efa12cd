"""Micro-benchmark of the numeric kernels, compiled backend vs NumPy.

Run as ``python -m ufom.kernel_bench [--n 1000 100000] [--repeats 200]``.
Also cross-checks that both backends agree on every kernel before timing.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from ufom.kernels import BACKEND, available_backends


def _cases(n: int, rng: np.random.Generator):
    x = rng.standard_normal(n)
    d = rng.standard_normal(n)
    out = np.empty_like(x)
    return [
        ("dot", lambda m: m.dot(x, d)),
        ("nrm2sq", lambda m: m.nrm2sq(x)),
        ("scale_add", lambda m: m.scale_add(out, 0.3, x, 0.7, d)),
        ("quad_value", lambda m: m.quad_value(x)),
        ("quad_grad", lambda m: m.quad_grad(out, x)),
        ("quad_ray_coeffs", lambda m: m.quad_ray_coeffs(x, d)),
        ("maxquad_value", lambda m: m.maxquad_value(x, 0.1)),
        ("maxquad_value_subgrad", lambda m: m.maxquad_value_subgrad(out, x, 0.1)),
        ("shifted_max", lambda m: m.shifted_max(x, d, 0.37)),
    ]


def _check_parity(backends, n: int, rng: np.random.Generator) -> float:
    worst = 0.0
    for name, call in _cases(n, rng):
        results = []
        for mod in backends.values():
            r = call(mod)
            results.append(np.atleast_1d(np.asarray(r, dtype=float)))
        for other in results[1:]:
            num = float(np.max(np.abs(results[0] - other)))
            den = 1.0 + float(np.max(np.abs(results[0])))
            worst = max(worst, num / den)
    return worst


def _time(call, mod, repeats: int) -> float:
    call(mod)  # warm up
    t0 = time.perf_counter()
    for _ in range(repeats):
        call(mod)
    return (time.perf_counter() - t0) / repeats


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[1_000, 100_000])
    ap.add_argument("--repeats", type=int, default=200)
    args = ap.parse_args(argv)

    backends = available_backends()
    print(f"active backend: {BACKEND}; timing: {', '.join(backends)}")
    rng = np.random.default_rng(0)
    for n in args.n:
        worst = _check_parity(backends, n, rng)
        print(f"\nn = {n}  (cross-backend max rel diff {worst:.2e})")
        header = f"{'kernel':<24}" + "".join(f"{name:>14}" for name in backends)
        if len(backends) > 1:
            header += f"{'speedup':>10}"
        print(header)
        for name, call in _cases(n, rng):
            times = {b: _time(call, mod, args.repeats) for b, mod in backends.items()}
            line = f"{name:<24}" + "".join(f"{times[b] * 1e6:>12.2f}us" for b in backends)
            if "compiled" in times and "numpy" in times:
                line += f"{times['numpy'] / times['compiled']:>9.2f}x"
            print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
