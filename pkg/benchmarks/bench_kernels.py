"""Compare the numba kernels with their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]

Both variants are imported in one process (the ``*_nb`` and ``*_np``
functions), so no environment flag is needed. Each row reports the best of
``--repeat`` wall-clock timings after one warm-up call, the speed-up and the
largest absolute difference between the two results.
"""
import argparse
import time

import numpy as np

from gaussmax import _kernels as K
from gaussmax.functions import TestFunction
from gaussmax.quadrature import hermite_1d


def _best(fn, repeat):
    out = fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases():
    rng = np.random.default_rng(0)
    n = 20_000
    m2 = rng.uniform(0, 30, n) ** 2
    r2 = rng.uniform(0.01, 30, n) ** 2
    yield "log_ball_mass d=2 (20k balls)", lambda: K.log_ball_mass_nb(m2, r2, 2), \
        lambda: K.log_ball_mass_np(m2, r2, 2)

    poly = TestFunction.polynomial(rng.normal(size=(4, 4)))
    z, w = hermite_1d(40)
    ys = rng.uniform(-3, 3, (500, 2))
    code, params = poly.code, poly.packed()
    yield "gh_tensor d=2 order 40 (500 points)", \
        lambda: K.gh_tensor_nb(code, params, ys, 0.8, 0.6, z, w, False), \
        lambda: K.gh_tensor_np(code, params, ys, 0.8, 0.6, z, w, False)

    bump = TestFunction.bump([0.3, -0.2], 0.5)
    inc = np.array([[0.0, 0.0, 1.5], [0.3, -0.2, bump.support_extent]])
    exc = np.zeros(3)
    yb = np.array([0.4, 0.1])
    bc, bp = bump.code, bump.packed()
    yield "region d=2 kernel mode, tol 1e-8", \
        lambda: K.region_nb(inc, exc, 1, 0.3, yb, bc, bp, False, 1e-8)[0], \
        lambda: K.region_np(inc, exc, 1, 0.3, yb, bc, bp, False, 1e-8)[0]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not K.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"{'case':40s} {'numba s':>10s} {'numpy s':>10s} {'speed-up':>9s} {'max |diff|':>11s}")
    for name, nb_fn, np_fn in cases():
        t_nb, v_nb = _best(nb_fn, args.repeat)
        t_np, v_np = _best(np_fn, args.repeat)
        diff = float(np.max(np.abs(np.asarray(v_nb) - np.asarray(v_np))))
        print(f"{name:40s} {t_nb:10.4f} {t_np:10.4f} {t_np / t_nb:9.1f} {diff:11.2e}")


if __name__ == "__main__":
    main()
