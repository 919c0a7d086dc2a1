"""Benchmark the compiled Gauss-Seidel kernel against the numpy fallback.

Run with:  python -m triseg.benchmark [--size N ...] [--sweeps K]

Also verifies that both kernels produce bit-identical iterates, which is the
fallback's contract.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from . import _kernels_py


def _setup(n: int):
    rng = np.random.default_rng(1234)
    shape = (n + 1, n + 1)
    fields = [np.abs(rng.standard_normal(shape)) for _ in range(3)]
    for u in fields:
        u[0, :] = u[-1, :] = u[:, 0] = u[:, -1] = 0.5
    return fields


def _run(kernel, fields, inv_eps, inv_h2, sweeps):
    u1, u2, u3 = (f.copy() for f in fields)
    t0 = time.perf_counter()
    kernel.gs_sweeps(u1, u2, u3, inv_eps, inv_h2, inv_h2, sweeps)
    dt = time.perf_counter() - t0
    return (u1, u2, u3), dt


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, nargs="*", default=[64, 128, 256])
    ap.add_argument("--sweeps", type=int, default=50)
    args = ap.parse_args(argv)

    try:
        from . import _kernels as compiled
    except ImportError:
        compiled = None

    print(f"{'grid':>8} {'sweeps':>7} {'fallback':>12} {'compiled':>12} "
          f"{'speedup':>8}  identical")
    for n in args.size:
        fields = _setup(n)
        inv_eps = 100.0
        inv_h2 = float(n * n)
        (f1, f2, f3), t_py = _run(_kernels_py, fields, inv_eps, inv_h2, args.sweeps)
        if compiled is None:
            print(f"{n:>7}^2 {args.sweeps:>7} {t_py:>10.4f} s {'-':>12} {'-':>8}  -")
            continue
        (c1, c2, c3), t_c = _run(compiled, fields, inv_eps, inv_h2, args.sweeps)
        same = all(
            np.array_equal(a, b) for a, b in ((f1, c1), (f2, c2), (f3, c3))
        )
        r_py = _kernels_py.residual_max(f1, f2, f3, inv_eps, inv_h2, inv_h2)
        r_c = compiled.residual_max(c1, c2, c3, inv_eps, inv_h2, inv_h2)
        same = same and (r_py == r_c)
        print(
            f"{n:>7}^2 {args.sweeps:>7} {t_py:>10.4f} s {t_c:>10.4f} s "
            f"{t_py / t_c:>7.1f}x  {same}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
