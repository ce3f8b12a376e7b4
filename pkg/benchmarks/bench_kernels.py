"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--batch 20000] [--degree 8] [--theta 4096] [--repeat 3]

Both implementations are imported directly, so one run compares them side
by side regardless of LEMHEIGHTS_PURE_PYTHON. Results are also checked for
agreement so a speedup never hides a wrong answer.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from lemheights import _pykernels
from lemheights.rootfinding import DEFAULT_MAXITER, DEFAULT_TOL, initial_guesses

try:
    from lemheights import _ckernels
except ImportError:
    _ckernels = None


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def bench_batch(mod, coeffs, repeat):
    z0 = initial_guesses(coeffs)

    def run():
        z = z0.copy()
        mod.aberth_batch(coeffs, z, DEFAULT_TOL, DEFAULT_MAXITER)
        return z

    return best_of(run, repeat)


def bench_sweep(mod, V, r, n_theta, repeat):
    cv = V.copy()
    cv[0] -= r
    z0 = np.ascontiguousarray(initial_guesses(cv.reshape(1, -1))[0])
    _pykernels.aberth_batch(cv.reshape(1, -1), z0.reshape(1, -1), DEFAULT_TOL, DEFAULT_MAXITER)

    def run():
        Z, _ = mod.level_sweep(V, r, n_theta, z0, DEFAULT_TOL, DEFAULT_MAXITER)
        return np.asarray(Z)

    return best_of(run, repeat)


def root_distance(A, B):
    """Largest distance from a root in A to the nearest root in the same row of B."""
    d = np.abs(A[:, :, None] - B[:, None, :]).min(axis=2)
    return float(d.max())


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--batch", type=int, default=20000, help="polynomials in the batch root benchmark")
    ap.add_argument("--degree", type=int, default=8)
    ap.add_argument("--theta", type=int, default=4096, help="grid size for the level sweep")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    coeffs = rng.integers(-3, 4, size=(args.batch, args.degree + 1)).astype(np.complex128)
    coeffs[:, -1] = rng.integers(1, 4, size=args.batch)
    coeffs = np.ascontiguousarray(coeffs)
    V = np.ascontiguousarray(np.array([-1, 0, 0, 1, 0, 1], dtype=np.complex128))
    r = 1.5

    mods = [("python", _pykernels)]
    if _ckernels is not None:
        mods.append(("cython", _ckernels))
    else:
        print("compiled extension not built; timing the numpy fallback only")

    rows = []
    batch_out, sweep_out = {}, {}
    for name, mod in mods:
        t, batch_out[name] = bench_batch(mod, coeffs, args.repeat)
        rows.append(("aberth_batch", name, t))
        t, sweep_out[name] = bench_sweep(mod, V, r, args.theta, args.repeat)
        rows.append(("level_sweep", name, t))

    print(f"{'kernel':<14}{'backend':<10}{'seconds':>12}")
    for kernel, name, t in rows:
        print(f"{kernel:<14}{name:<10}{t:>12.4f}")

    if _ckernels is not None:
        tb = {(k, n): t for k, n, t in rows}
        for kernel in ("aberth_batch", "level_sweep"):
            print(f"{kernel} speedup: {tb[kernel, 'python'] / tb[kernel, 'cython']:.1f}x")
        db = root_distance(batch_out["python"], batch_out["cython"])
        ds = np.max(np.abs(sweep_out["python"] - sweep_out["cython"]))
        print(f"max root disagreement: batch {db:.2e}, sweep {ds:.2e}")


if __name__ == "__main__":
    main()
