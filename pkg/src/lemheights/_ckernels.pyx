# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Aberth-Ehrlich kernels; same contract as :mod:`lemheights._pykernels`."""

import numpy as np

cdef extern from "complex.h" nogil:
    double cabs(double complex)
    double complex cexp(double complex)

cdef double EPS = 2.220446049250313e-16
cdef double PI = 3.141592653589793


cdef int _aberth_row(const double complex[::1] c, double complex[::1] z, double tol,
                     int maxiter, unsigned char* frozen) noexcept nogil:
    """Solve one polynomial in place. Returns iterations used, or -1 on failure."""
    cdef int n = c.shape[0] - 1
    cdef int k0 = 0
    cdef int i, j, k, it, active
    cdef double complex p, dp, s, w, zi, q, dq, zn
    cdef double ab, az, bound
    while k0 < n and c[k0] == 0:
        k0 += 1
    for i in range(k0):
        z[i] = 0
        frozen[i] = 1
    for i in range(k0, n):
        frozen[i] = 0
    if k0 == n:
        return 0
    for it in range(1, maxiter + 1):
        active = 0
        for i in range(k0, n):
            if frozen[i]:
                continue
            zi = z[i]
            az = cabs(zi)
            p = c[n]
            dp = 0
            ab = cabs(c[n])
            for k in range(n - 1, k0 - 1, -1):
                dp = dp * zi + p
                p = p * zi + c[k]
                ab = ab * az + cabs(c[k])
            if cabs(p) <= 4.0 * EPS * (n - k0) * ab:
                frozen[i] = 1
                continue
            s = 0
            for j in range(k0, n):
                if j != i:
                    s = s + 1.0 / (zi - z[j])
            q = dp - p * s
            if q == 0:
                w = 1e-3 * (1.0 + az)
            else:
                w = p / q
            z[i] = zi - w
            if cabs(w) <= tol * cabs(z[i]) or cabs(w) <= EPS * EPS:
                frozen[i] = 1
            else:
                active += 1
        if active == 0:
            break
    else:
        return -1
    # one Newton polish step per root, kept only when it lowers the residual
    for i in range(k0, n):
        zi = z[i]
        p = c[n]
        dp = 0
        for k in range(n - 1, k0 - 1, -1):
            dp = dp * zi + p
            p = p * zi + c[k]
        if dp == 0 or p == 0:
            continue
        zn = zi - p / dp
        q = c[n]
        for k in range(n - 1, k0 - 1, -1):
            q = q * zn + c[k]
        if cabs(q) < cabs(p):
            z[i] = zn
    return it


def aberth_batch(const double complex[:, ::1] coeffs, double complex[:, ::1] z,
                 double tol, int maxiter):
    """Run Aberth-Ehrlich on each row of ``coeffs`` (ascending), refining ``z`` in place.

    Returns ``(iterations, converged)`` arrays of length N.
    """
    cdef Py_ssize_t N = coeffs.shape[0]
    cdef int n = coeffs.shape[1] - 1
    cdef Py_ssize_t r
    cdef int res
    iters_arr = np.zeros(N, dtype=np.int64)
    conv_arr = np.zeros(N, dtype=np.uint8)
    cdef long long[::1] iters = iters_arr
    cdef unsigned char[::1] conv = conv_arr
    frozen_arr = np.zeros(max(n, 1), dtype=np.uint8)
    cdef unsigned char[::1] frozen = frozen_arr
    with nogil:
        for r in range(N):
            res = _aberth_row(coeffs[r], z[r], tol, maxiter, &frozen[0])
            if res >= 0:
                iters[r] = res
                conv[r] = 1
            else:
                iters[r] = maxiter
                conv[r] = 0
    return iters_arr, conv_arr


cdef void _greedy_match(const double complex[::1] prev, double complex[::1] cur,
                        double complex* tmp, unsigned char* used_p, unsigned char* used_c,
                        int m) noexcept nogil:
    cdef int step, i, j, bi, bj
    cdef double best, d
    for i in range(m):
        used_p[i] = 0
        used_c[i] = 0
        tmp[i] = cur[i]
    for step in range(m):
        best = 1e308
        bi = 0
        bj = 0
        for i in range(m):
            if used_p[i]:
                continue
            for j in range(m):
                if used_c[j]:
                    continue
                d = cabs(prev[i] - tmp[j])
                if d < best:
                    best = d
                    bi = i
                    bj = j
        used_p[bi] = 1
        used_c[bj] = 1
        cur[bi] = tmp[bj]


def level_sweep(const double complex[::1] coeffs, double r, int n_theta,
                const double complex[::1] z0, double tol, int maxiter):
    """Solve V(z) = r exp(i theta_k) for theta_k = 2 pi k / n_theta, k = 0..n_theta.

    Row k of the result is warm-started from row k-1 and its entries are
    greedily matched to row k-1, so columns follow continuous branches.
    Row n_theta repeats theta = 0 after one full loop (for monodromy).
    """
    cdef int m = coeffs.shape[0] - 1
    cdef int k, i, res
    cdef double theta
    out_arr = np.empty((n_theta + 1, m), dtype=np.complex128)
    ok_arr = np.ones(n_theta + 1, dtype=np.uint8)
    cdef double complex[:, ::1] out = out_arr
    cdef unsigned char[::1] ok = ok_arr
    cc_arr = np.array(coeffs, dtype=np.complex128)
    cdef double complex[::1] cc = cc_arr
    cdef double complex c0 = coeffs[0]
    scratch = np.zeros(m, dtype=np.complex128)
    cdef double complex[::1] tmp = scratch
    flags = np.zeros(3 * m, dtype=np.uint8)
    cdef unsigned char[::1] fl = flags
    with nogil:
        for k in range(n_theta + 1):
            theta = 2.0 * PI * (k % n_theta) / n_theta
            cc[0] = c0 - r * cexp(1j * theta)
            if k == 0:
                for i in range(m):
                    out[k, i] = z0[i]
            else:
                for i in range(m):
                    out[k, i] = out[k - 1, i]
            res = _aberth_row(cc, out[k], tol, maxiter, &fl[0])
            if res < 0:
                ok[k] = 0
            if k > 0:
                _greedy_match(out[k - 1], out[k], &tmp[0], &fl[m], &fl[2 * m], m)
    return out_arr, ok_arr
