"""Pure-Python / numpy kernels, used when the compiled extension is unavailable.

:func:`aberth_scalar` is written against generic scalar arithmetic so the
same iteration runs on ``mpmath.mpc`` values for the extended-precision retry.
"""

import cmath
import math

import numpy as np

EPS = 2.220446049250313e-16


def aberth_scalar(c, z, tol, maxiter, eps=EPS, absf=abs):
    """Aberth-Ehrlich on one polynomial (ascending ``c``), refining list ``z`` in place.

    Returns the number of iterations, or -1 when the cap is hit.
    """
    n = len(c) - 1
    k0 = 0
    while k0 < n and c[k0] == 0:
        k0 += 1
    for i in range(k0):
        z[i] = 0 * z[i]
    if k0 == n:
        return 0
    frozen = [False] * n
    it = 0
    for it in range(1, maxiter + 1):
        active = 0
        for i in range(k0, n):
            if frozen[i]:
                continue
            zi = z[i]
            az = absf(zi)
            p = c[n]
            dp = 0 * p
            ab = absf(c[n])
            for k in range(n - 1, k0 - 1, -1):
                dp = dp * zi + p
                p = p * zi + c[k]
                ab = ab * az + absf(c[k])
            if absf(p) <= 4 * eps * (n - k0) * ab:
                frozen[i] = True
                continue
            s = 0 * p
            for j in range(k0, n):
                if j != i:
                    s += 1 / (zi - z[j])
            q = dp - p * s
            w = p / q if q != 0 else 1e-3 * (1 + az)
            z[i] = zi - w
            if absf(w) <= tol * absf(z[i]) or absf(w) <= eps * eps:
                frozen[i] = True
            else:
                active += 1
        if active == 0:
            break
    else:
        return -1
    for i in range(k0, n):
        zi = z[i]
        p, dp = c[n], 0 * c[n]
        for k in range(n - 1, k0 - 1, -1):
            dp = dp * zi + p
            p = p * zi + c[k]
        if dp == 0 or p == 0:
            continue
        zn = zi - p / dp
        q = c[n]
        for k in range(n - 1, k0 - 1, -1):
            q = q * zn + c[k]
        if absf(q) < absf(p):
            z[i] = zn
    return it


def _aberth_group(c, z, tol, maxiter):
    """Vectorized across rows that all have nonzero constant term."""
    N, n1 = c.shape
    n = n1 - 1
    frozen = np.zeros((N, n), dtype=bool)
    iters = np.full(N, maxiter, dtype=np.int64)
    done = np.zeros(N, dtype=bool)
    absc = np.abs(c)
    for it in range(1, maxiter + 1):
        moved = np.zeros(N, dtype=bool)
        for i in range(n):
            act = ~frozen[:, i]
            if not act.any():
                continue
            rows = np.flatnonzero(act)
            zi = z[rows, i]
            az = np.abs(zi)
            p = c[rows, n].copy()
            dp = np.zeros_like(p)
            ab = absc[rows, n].copy()
            for k in range(n - 1, -1, -1):
                dp = dp * zi + p
                p = p * zi + c[rows, k]
                ab = ab * az + absc[rows, k]
            small = np.abs(p) <= 4 * EPS * n * ab
            frozen[rows[small], i] = True
            keep = ~small
            rows, zi, p, dp = rows[keep], zi[keep], p[keep], dp[keep]
            if rows.size == 0:
                continue
            diff = zi[:, None] - z[rows, :]
            diff[:, i] = 1.0
            inv = 1.0 / diff
            inv[:, i] = 0.0
            s = inv.sum(axis=1)
            q = dp - p * s
            with np.errstate(divide="ignore", invalid="ignore"):
                w = np.where(q != 0, p / np.where(q != 0, q, 1), 1e-3 * (1 + np.abs(zi)))
            znew = zi - w
            z[rows, i] = znew
            conv = (np.abs(w) <= tol * np.abs(znew)) | (np.abs(w) <= EPS * EPS)
            frozen[rows[conv], i] = True
            moved[rows[~conv]] = True
        newly = ~moved & ~done
        iters[newly] = it
        done |= newly
        if done.all():
            break
    # Newton polish, kept only where it lowers the residual
    p = np.broadcast_to(c[:, n:n1], z.shape).copy()
    dp = np.zeros_like(z)
    for k in range(n - 1, -1, -1):
        dp = dp * z + p
        p = p * z + c[:, k : k + 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        zn = np.where(dp != 0, z - p / np.where(dp != 0, dp, 1), z)
    q = np.broadcast_to(c[:, n:n1], z.shape).copy()
    for k in range(n - 1, -1, -1):
        q = q * zn + c[:, k : k + 1]
    better = np.abs(q) < np.abs(p)
    z[better] = zn[better]
    return iters, done


def aberth_batch(coeffs, z, tol, maxiter):
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    N, n1 = coeffs.shape
    n = n1 - 1
    iters = np.zeros(N, dtype=np.int64)
    conv = np.zeros(N, dtype=np.uint8)
    nz = coeffs != 0
    k0 = np.where(nz.any(axis=1), nz.argmax(axis=1), n)
    k0 = np.minimum(k0, n)
    for k in np.unique(k0):
        rows = np.flatnonzero(k0 == k)
        z[np.ix_(rows, np.arange(k))] = 0
        if k == n:
            conv[rows] = 1
            continue
        sub_c = np.ascontiguousarray(coeffs[rows, k:])
        sub_z = np.ascontiguousarray(z[rows, k:])
        it, done = _aberth_group(sub_c, sub_z, tol, maxiter)
        z[np.ix_(rows, np.arange(k, n))] = sub_z
        iters[rows] = it
        conv[rows] = done.astype(np.uint8)
    return iters, conv


def _greedy_match(prev, cur):
    m = len(cur)
    d = [[abs(prev[i] - cur[j]) for j in range(m)] for i in range(m)]
    out = [0j] * m
    used_p, used_c = set(), set()
    for _ in range(m):
        best = math.inf
        bi = bj = 0
        for i in range(m):
            if i in used_p:
                continue
            for j in range(m):
                if j not in used_c and d[i][j] < best:
                    best, bi, bj = d[i][j], i, j
        used_p.add(bi)
        used_c.add(bj)
        out[bi] = cur[bj]
    return out


def level_sweep(coeffs, r, n_theta, z0, tol, maxiter):
    c = [complex(a) for a in coeffs]
    m = len(c) - 1
    out = np.empty((n_theta + 1, m), dtype=np.complex128)
    ok = np.ones(n_theta + 1, dtype=np.uint8)
    c0 = c[0]
    prev = None
    for k in range(n_theta + 1):
        theta = 2.0 * math.pi * (k % n_theta) / n_theta
        c[0] = c0 - r * cmath.exp(1j * theta)
        z = list(z0) if prev is None else list(prev)
        if aberth_scalar(c, z, tol, maxiter) < 0:
            ok[k] = 0
        if prev is not None:
            z = _greedy_match(prev, z)
        out[k] = z
        prev = z
    return out, ok
