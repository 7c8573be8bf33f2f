"""Pure-numpy implementations of the hot kernels.

Same call signatures as the compiled module ``conelab._kernels``; the
active backend is chosen at import time in ``conelab._backend``.  All
routines operate on batches: eigenvalue vectors are ``(N, n)`` arrays,
matrices ``(N, n, n)``, with ``n <= 8``.
"""

from __future__ import annotations

import numpy as np

NAME = "python"


def esym(lam: np.ndarray, kmax: int) -> np.ndarray:
    """Elementary symmetric polynomials e_0..e_kmax of each row of lam.

    Returns an ``(N, kmax + 1)`` array with ``out[:, j] = sigma_j(row)``.
    """
    lam = np.asarray(lam, dtype=np.float64)
    N, n = lam.shape
    kmax = min(kmax, n)
    out = np.zeros((N, kmax + 1))
    out[:, 0] = 1.0
    for i in range(n):
        v = lam[:, i]
        top = min(i + 1, kmax)
        for j in range(top, 0, -1):
            out[:, j] += v * out[:, j - 1]
    return out


def grad_sigma(lam: np.ndarray, k: int) -> np.ndarray:
    """d sigma_k / d lam_i = sigma_{k-1}(lam with entry i deleted), batched."""
    lam = np.asarray(lam, dtype=np.float64)
    e = esym(lam, k - 1)
    # deleted polynomials via d_j = e_j - lam_i * d_{j-1}
    d = np.ones_like(lam)
    for j in range(1, k):
        d = e[:, j][:, None] - lam * d
    return d


def hess_sigma(lam: np.ndarray, k: int) -> np.ndarray:
    """d^2 sigma_k / d lam_i d lam_j = sigma_{k-2}(lam minus entries i, j).

    Diagonal entries are zero.  Shape ``(N, n, n)``.
    """
    lam = np.asarray(lam, dtype=np.float64)
    N, n = lam.shape
    if k < 2:
        return np.zeros((N, n, n))
    e = esym(lam, k - 2)
    # single-deletion polynomials d_j^{(i)} for j <= k-2
    singles = [np.ones_like(lam)]
    for j in range(1, k - 1):
        singles.append(e[:, j][:, None] - lam * singles[-1])
    # double deletion: dd_m^{(i,j)} = d_m^{(i)} - lam_j * dd_{m-1}^{(i,j)}
    dd = np.ones((N, n, n))
    for m in range(1, k - 1):
        dd = singles[m][:, :, None] - lam[:, None, :] * dd
    idx = np.arange(n)
    dd[:, idx, idx] = 0.0
    return dd


def in_gamma_interior(lam: np.ndarray, k: int) -> np.ndarray:
    """Boolean mask of rows with sigma_j > 0 for all j = 1..k."""
    e = esym(lam, k)
    return np.all(e[:, 1 : k + 1] > 0.0, axis=1)


def eigh_sym(mats: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and orthonormal frames of symmetric batches."""
    mats = np.asarray(mats, dtype=np.float64)
    w, v = np.linalg.eigh(mats)
    return w[..., ::-1].copy(), v[..., ::-1].copy()


def newton_dual(
    target: np.ndarray, k: int, tol: float = 1e-13, maxit: int = 100
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Invert the gradient of sigma_k: find mu with sigma_{k-1}(mu_{-i}) = target_i.

    mu is kept in the interior of the Garding cone (sigma_j > 0, j <= k) by
    step damping.  Returns ``(mu, converged, iters)``.  Rows whose target is
    not reachable (outside the image of the interior) fail to converge.
    """
    t = np.asarray(target, dtype=np.float64)
    N, n = t.shape
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range for n={n}")
    if k == 1:
        # sigma_0 = 1 identically; gradient inversion is meaningless here.
        raise ValueError("newton_dual requires k >= 2")

    tmean = np.maximum(t.mean(axis=1), 1e-300)
    from math import comb

    s0 = (tmean / comb(n - 1, k - 1)) ** (1.0 / (k - 1))
    mu = np.repeat(s0[:, None], n, axis=1)
    tnorm = np.maximum(np.linalg.norm(t, axis=1), 1.0)
    converged = np.zeros(N, dtype=bool)
    iters = np.zeros(N, dtype=np.int64)

    active = np.arange(N)
    for it in range(maxit):
        if active.size == 0:
            break
        m = mu[active]
        r = grad_sigma(m, k) - t[active]
        res = np.linalg.norm(r, axis=1)
        done = res <= tol * tnorm[active]
        if np.any(done):
            converged[active[done]] = True
            active = active[~done]
            if active.size == 0:
                break
            m = mu[active]
            r = r[~done]
        J = hess_sigma(m, k)
        try:
            delta = np.linalg.solve(J, r[..., None])[..., 0]
        except np.linalg.LinAlgError:
            delta = np.empty_like(r)
            for i in range(m.shape[0]):
                delta[i] = np.linalg.lstsq(J[i], r[i], rcond=None)[0]
        if not np.all(np.isfinite(delta)):
            bad = ~np.all(np.isfinite(delta), axis=1)
            delta[bad] = 0.0
        # damp to stay inside the cone
        step = np.ones(m.shape[0])
        trial = m - delta
        for _ in range(60):
            ok = in_gamma_interior(trial, k)
            if ok.all():
                break
            step[~ok] *= 0.5
            trial = m - step[:, None] * delta
        mu[active] = trial
        iters[active] = it + 1

    return mu, converged, iters


def eigvals2_sym(a00, a01, a11):
    """Descending eigenvalues of batched symmetric 2x2 matrices (per-cell)."""
    half_tr = 0.5 * (a00 + a11)
    disc = np.sqrt(np.maximum(0.25 * (a00 - a11) ** 2 + a01**2, 0.0))
    return half_tr + disc, half_tr - disc


def eigvals3_sym(a00, a01, a02, a11, a12, a22):
    """Descending eigenvalues of batched symmetric 3x3 matrices (Cardano)."""
    q = (a00 + a11 + a22) / 3.0
    b00, b11, b22 = a00 - q, a11 - q, a22 - q
    p2 = b00**2 + b11**2 + b22**2 + 2.0 * (a01**2 + a02**2 + a12**2)
    p = np.sqrt(np.maximum(p2 / 6.0, 0.0))
    safe = np.where(p > 0.0, p, 1.0)
    c00, c11, c22 = b00 / safe, b11 / safe, b22 / safe
    c01, c02, c12 = a01 / safe, a02 / safe, a12 / safe
    detb = (
        c00 * (c11 * c22 - c12**2)
        - c01 * (c01 * c22 - c12 * c02)
        + c02 * (c01 * c12 - c11 * c02)
    )
    phi = np.arccos(np.clip(0.5 * detb, -1.0, 1.0)) / 3.0
    lam0 = q + 2.0 * p * np.cos(phi)
    lam2 = q + 2.0 * p * np.cos(phi + 2.0 * np.pi / 3.0)
    lam1 = 3.0 * q - lam0 - lam2
    return lam0, lam1, lam2
