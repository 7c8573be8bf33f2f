# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: batched elementary symmetric polynomials, a cyclic
Jacobi eigensolver for the small symmetric matrices (n <= 8), and the damped
Newton inversion of the sigma_k gradient map.

The call surface matches ``conelab._kernels_py`` exactly; either module can
serve as the backend.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport atan2, cos, fabs, sin, sqrt

cnp.import_array()

NAME = "compiled"

DEF NMAX = 8


def esym(lam, int kmax):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] L = np.ascontiguousarray(lam, dtype=np.float64)
    cdef Py_ssize_t N = L.shape[0]
    cdef int n = <int> L.shape[1]
    if kmax > n:
        kmax = n
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((N, kmax + 1))
    cdef Py_ssize_t row
    cdef int i, j, top
    cdef double v
    for row in range(N):
        out[row, 0] = 1.0
        for i in range(n):
            v = L[row, i]
            top = i + 1
            if top > kmax:
                top = kmax
            for j in range(top, 0, -1):
                out[row, j] += v * out[row, j - 1]
    return out


cdef void _esym_row(double* lam, int n, int kmax, double* e) noexcept nogil:
    cdef int i, j, top
    cdef double v
    for j in range(kmax + 1):
        e[j] = 0.0
    e[0] = 1.0
    for i in range(n):
        v = lam[i]
        top = i + 1
        if top > kmax:
            top = kmax
        for j in range(top, 0, -1):
            e[j] += v * e[j - 1]


cdef void _grad_sigma_row(double* lam, int n, int k, double* out) noexcept nogil:
    # out_i = sigma_{k-1}(lam with entry i deleted)
    cdef double e[NMAX + 1]
    cdef double d
    cdef int i, j
    _esym_row(lam, n, k - 1, e)
    for i in range(n):
        d = 1.0
        for j in range(1, k):
            d = e[j] - lam[i] * d
        out[i] = d


cdef void _hess_sigma_row(double* lam, int n, int k, double* out) noexcept nogil:
    # out[i*n+j] = sigma_{k-2}(lam minus entries i and j), zero diagonal
    cdef double e[NMAX + 1]
    cdef double di[NMAX + 1]
    cdef double dd
    cdef int i, j, m
    if k < 2:
        for i in range(n * n):
            out[i] = 0.0
        return
    _esym_row(lam, n, k - 2, e)
    for i in range(n):
        di[0] = 1.0
        for m in range(1, k - 1):
            di[m] = e[m] - lam[i] * di[m - 1]
        for j in range(n):
            if j == i:
                out[i * n + j] = 0.0
                continue
            dd = 1.0
            for m in range(1, k - 1):
                dd = di[m] - lam[j] * dd
            out[i * n + j] = dd


def grad_sigma(lam, int k):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] L = np.ascontiguousarray(lam, dtype=np.float64)
    cdef Py_ssize_t N = L.shape[0]
    cdef int n = <int> L.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((N, n))
    cdef Py_ssize_t row
    for row in range(N):
        _grad_sigma_row(&L[row, 0], n, k, &out[row, 0])
    return out


def hess_sigma(lam, int k):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] L = np.ascontiguousarray(lam, dtype=np.float64)
    cdef Py_ssize_t N = L.shape[0]
    cdef int n = <int> L.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=3] out = np.empty((N, n, n))
    cdef Py_ssize_t row
    for row in range(N):
        _hess_sigma_row(&L[row, 0], n, k, &out[row, 0, 0])
    return out


cdef bint _in_gamma_row(double* lam, int n, int k) noexcept nogil:
    cdef double e[NMAX + 1]
    cdef int j
    _esym_row(lam, n, k, e)
    for j in range(1, k + 1):
        if e[j] <= 0.0:
            return 0
    return 1


def in_gamma_interior(lam, int k):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] L = np.ascontiguousarray(lam, dtype=np.float64)
    cdef Py_ssize_t N = L.shape[0]
    cdef int n = <int> L.shape[1]
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] out = np.empty(N, dtype=np.uint8)
    cdef Py_ssize_t row
    for row in range(N):
        out[row] = _in_gamma_row(&L[row, 0], n, k)
    return out.view(np.bool_)


cdef void _jacobi(double* a, double* v, double* w, int n) noexcept nogil:
    """Cyclic Jacobi on a (copied) symmetric matrix a; eigenvectors into v."""
    cdef int i, j, p, q, sweep
    cdef double off, scale, app, aqq, apq, theta, t, c, s, tau, g, h
    for i in range(n):
        for j in range(n):
            v[i * n + j] = 1.0 if i == j else 0.0
    for sweep in range(50):
        off = 0.0
        scale = 0.0
        for p in range(n):
            scale += fabs(a[p * n + p])
            for q in range(p + 1, n):
                off += a[p * n + q] * a[p * n + q]
        if off <= 1e-30 * (scale * scale + 1e-300):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p * n + q]
                if fabs(apq) < 1e-300:
                    continue
                app = a[p * n + p]
                aqq = a[q * n + q]
                theta = 0.5 * (aqq - app) / apq
                if fabs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (fabs(theta) + sqrt(1.0 + theta * theta))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                tau = s / (1.0 + c)
                # update a
                a[p * n + p] = app - t * apq
                a[q * n + q] = aqq + t * apq
                a[p * n + q] = 0.0
                a[q * n + p] = 0.0
                for i in range(n):
                    if i != p and i != q:
                        g = a[i * n + p]
                        h = a[i * n + q]
                        a[i * n + p] = g - s * (h + tau * g)
                        a[i * n + q] = h + s * (g - tau * h)
                        a[p * n + i] = a[i * n + p]
                        a[q * n + i] = a[i * n + q]
                for i in range(n):
                    g = v[i * n + p]
                    h = v[i * n + q]
                    v[i * n + p] = g - s * (h + tau * g)
                    v[i * n + q] = h + s * (g - tau * h)
    for i in range(n):
        w[i] = a[i * n + i]


def eigh_sym(mats):
    """Eigenvalues (descending) and frames of a batch of symmetric matrices."""
    cdef cnp.ndarray[cnp.float64_t, ndim=3] M = np.ascontiguousarray(mats, dtype=np.float64)
    cdef Py_ssize_t N = M.shape[0]
    cdef int n = <int> M.shape[1]
    if n > NMAX:
        raise ValueError("jacobi eigensolver supports n <= 8")
    cdef cnp.ndarray[cnp.float64_t, ndim=2] W = np.empty((N, n))
    cdef cnp.ndarray[cnp.float64_t, ndim=3] V = np.empty((N, n, n))
    cdef double a[NMAX * NMAX]
    cdef double vv[NMAX * NMAX]
    cdef double ww[NMAX]
    cdef int order[NMAX]
    cdef Py_ssize_t row
    cdef int i, j, b, tmp
    for row in range(N):
        for i in range(n):
            for j in range(n):
                a[i * n + j] = M[row, i, j]
        _jacobi(a, vv, ww, n)
        # insertion sort, descending
        for i in range(n):
            order[i] = i
        for i in range(1, n):
            b = order[i]
            j = i - 1
            while j >= 0 and ww[order[j]] < ww[b]:
                order[j + 1] = order[j]
                j -= 1
            order[j + 1] = b
        for i in range(n):
            W[row, i] = ww[order[i]]
            for j in range(n):
                V[row, j, i] = vv[j * n + order[i]]
    return W, V


cdef int _solve_small(double* J, double* r, double* x, int n) noexcept nogil:
    """Gaussian elimination with partial pivoting; returns 0 on singular."""
    cdef double A[NMAX * (NMAX + 1)]
    cdef int i, j, p, piv
    cdef double best, f
    for i in range(n):
        for j in range(n):
            A[i * (n + 1) + j] = J[i * n + j]
        A[i * (n + 1) + n] = r[i]
    for p in range(n):
        piv = p
        best = fabs(A[p * (n + 1) + p])
        for i in range(p + 1, n):
            if fabs(A[i * (n + 1) + p]) > best:
                best = fabs(A[i * (n + 1) + p])
                piv = i
        if best < 1e-280:
            return 0
        if piv != p:
            for j in range(n + 1):
                f = A[p * (n + 1) + j]
                A[p * (n + 1) + j] = A[piv * (n + 1) + j]
                A[piv * (n + 1) + j] = f
        for i in range(p + 1, n):
            f = A[i * (n + 1) + p] / A[p * (n + 1) + p]
            for j in range(p, n + 1):
                A[i * (n + 1) + j] -= f * A[p * (n + 1) + j]
    for i in range(n - 1, -1, -1):
        f = A[i * (n + 1) + n]
        for j in range(i + 1, n):
            f -= A[i * (n + 1) + j] * x[j]
        x[i] = f / A[i * (n + 1) + i]
    return 1


def newton_dual(target, int k, double tol=1e-13, int maxit=100):
    """Solve sigma_{k-1}(mu_{-i}) = target_i per row, mu kept in int Gamma_k."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] T = np.ascontiguousarray(target, dtype=np.float64)
    cdef Py_ssize_t N = T.shape[0]
    cdef int n = <int> T.shape[1]
    if k < 2 or k > n:
        raise ValueError("newton_dual requires 2 <= k <= n")
    cdef cnp.ndarray[cnp.float64_t, ndim=2] MU = np.empty((N, n))
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] OK = np.zeros(N, dtype=np.uint8)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] IT = np.zeros(N, dtype=np.int64)

    cdef double comb = 1.0
    cdef int ii
    for ii in range(k - 1):
        comb = comb * (n - 1 - ii) / (ii + 1)

    cdef double mu[NMAX]
    cdef double g[NMAX]
    cdef double r[NMAX]
    cdef double d[NMAX]
    cdef double trial[NMAX]
    cdef double J[NMAX * NMAX]
    cdef Py_ssize_t row
    cdef int it, i, hv
    cdef double tmean, s0, tnorm, res, step
    cdef bint ok
    for row in range(N):
        tmean = 0.0
        tnorm = 0.0
        for i in range(n):
            tmean += T[row, i]
            tnorm += T[row, i] * T[row, i]
        tmean /= n
        tnorm = sqrt(tnorm)
        if tnorm < 1.0:
            tnorm = 1.0
        if tmean < 1e-300:
            tmean = 1e-300
        s0 = (tmean / comb) ** (1.0 / (k - 1))
        for i in range(n):
            mu[i] = s0
        ok = 0
        for it in range(maxit):
            _grad_sigma_row(mu, n, k, g)
            res = 0.0
            for i in range(n):
                r[i] = g[i] - T[row, i]
                res += r[i] * r[i]
            if sqrt(res) <= tol * tnorm:
                ok = 1
                IT[row] = it
                break
            _hess_sigma_row(mu, n, k, J)
            if not _solve_small(J, r, d, n):
                break
            step = 1.0
            for hv in range(60):
                for i in range(n):
                    trial[i] = mu[i] - step * d[i]
                if _in_gamma_row(trial, n, k):
                    break
                step *= 0.5
            for i in range(n):
                mu[i] = trial[i]
            IT[row] = it + 1
        OK[row] = ok
        for i in range(n):
            MU[row, i] = mu[i]
    return MU, OK.view(np.bool_), IT


def eigvals2_sym(a00, a01, a11):
    half_tr = 0.5 * (np.asarray(a00) + np.asarray(a11))
    disc = np.sqrt(np.maximum(0.25 * (np.asarray(a00) - np.asarray(a11)) ** 2
                              + np.asarray(a01) ** 2, 0.0))
    return half_tr + disc, half_tr - disc


def eigvals3_sym(a00, a01, a02, a11, a12, a22):
    q = (a00 + a11 + a22) / 3.0
    b00, b11, b22 = a00 - q, a11 - q, a22 - q
    p2 = b00**2 + b11**2 + b22**2 + 2.0 * (a01**2 + a02**2 + a12**2)
    p = np.sqrt(np.maximum(p2 / 6.0, 0.0))
    safe = np.where(p > 0.0, p, 1.0)
    c00, c11, c22 = b00 / safe, b11 / safe, b22 / safe
    c01, c02, c12 = a01 / safe, a02 / safe, a12 / safe
    detb = (c00 * (c11 * c22 - c12**2)
            - c01 * (c01 * c22 - c12 * c02)
            + c02 * (c01 * c12 - c11 * c02))
    phi = np.arccos(np.clip(0.5 * detb, -1.0, 1.0)) / 3.0
    lam0 = q + 2.0 * p * np.cos(phi)
    lam2 = q + 2.0 * p * np.cos(phi + 2.0 * np.pi / 3.0)
    lam1 = 3.0 * q - lam0 - lam2
    return lam0, lam1, lam2
