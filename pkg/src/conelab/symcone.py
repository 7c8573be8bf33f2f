"""Symmetric-cone calculus.

Implements the Garding cones Gamma_k, their duals Gamma_k*, the normalized
symmetric functions rho_k and the dual functions rho_k*, the gradient map
nabla F_k and its inverse, the duality pairing with attainment, and the
membership tests for every cone used by the experiment layer.

Conventions
-----------
* Eigenvalues are always sorted in descending order.
* rho_k and rho_k* evaluate to ``-inf`` outside their cones; arithmetic with
  the marker propagates it.
* All randomness is injected through an explicit ``numpy.random.Generator``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb
from typing import Callable

import numpy as np

from ._backend import kernels

OUTSIDE = float("-inf")

INSIDE = "inside"
BOUNDARY = "boundary"
OUTSIDE_CONE = "outside"

MAX_DIM = 8


class InputError(ValueError):
    """Malformed input (non-finite entries, bad shapes, parameter ranges)."""


class DomainError(ValueError):
    """Input outside the mathematical domain of the operation."""


class IndeterminateError(RuntimeError):
    """Dual evaluation could not be certified; carries the best bracket."""

    def __init__(self, message: str, bracket: tuple[float, float]):
        super().__init__(f"{message} (bracket {bracket[0]:.3e}..{bracket[1]:.3e})")
        self.bracket = bracket


# ---------------------------------------------------------------------------
# matrices and spectra
# ---------------------------------------------------------------------------


def as_sym(a, max_dim: int = MAX_DIM) -> np.ndarray:
    """Validate and mirror a symmetric matrix (upper triangle authoritative)."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if not 1 <= n <= max_dim:
        raise InputError(f"dimension {n} outside 1..{max_dim}")
    if not np.all(np.isfinite(a)):
        raise InputError("non-finite matrix entries")
    upper = np.triu(a)
    return upper + np.triu(a, 1).T


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues (descending) and the orthogonal frame of eigenvectors."""

    eigenvalues: np.ndarray
    frame: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.frame * self.eigenvalues) @ self.frame.T


def eigen_sym(a) -> Spectrum:
    """Spectral decomposition of a symmetric matrix, eigenvalues descending."""
    a = as_sym(a)
    w, v = kernels.eigh_sym(a[None])
    return Spectrum(eigenvalues=w[0], frame=v[0])


# ---------------------------------------------------------------------------
# symmetric polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymPolyValues:
    sigma: float
    F: float
    rho: float  # -inf outside Gamma_k


def sigma_all(lam: np.ndarray, kmax: int) -> np.ndarray:
    """sigma_1..sigma_kmax of a single eigenvalue vector."""
    return kernels.esym(np.asarray(lam, dtype=np.float64)[None], kmax)[0][1:]


def sym_poly(lam, k: int) -> SymPolyValues:
    """sigma_k, the normalized F_k = sigma_k / C(n,k), and rho_k = F_k^{1/k}."""
    lam = np.asarray(lam, dtype=np.float64).ravel()
    n = lam.size
    if not 1 <= k <= n:
        raise InputError(f"k={k} out of range 1..{n}")
    if not np.all(np.isfinite(lam)):
        raise InputError("non-finite eigenvalues")
    e = sigma_all(lam, k)
    sigma = float(e[k - 1])
    F = sigma / comb(n, k)
    if np.all(e >= 0.0):
        rho = F ** (1.0 / k) if F > 0.0 else 0.0
    else:
        rho = OUTSIDE
    return SymPolyValues(sigma=sigma, F=F, rho=rho)


def rho_k(a, k: int) -> float:
    """rho_k of a symmetric matrix (eigenvalue route); -inf outside Gamma_k."""
    return sym_poly(eigen_sym(a).eigenvalues, k).rho


def F_k(a, k: int) -> float:
    return sym_poly(eigen_sym(a).eigenvalues, k).F


def in_gamma(lam, k: int, tol: float = 0.0) -> bool:
    lam = np.asarray(lam, dtype=np.float64).ravel()
    scale = max(float(np.max(np.abs(lam))), 1e-300)
    e = sigma_all(lam, k)
    norms = np.array([comb(lam.size, j + 1) * scale ** (j + 1) for j in range(k)])
    return bool(np.all(e >= -tol * norms))


# ---------------------------------------------------------------------------
# cone identifiers and membership
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConeId:
    """Tagged identifier of the cones used throughout."""

    tag: str
    k: int | None = None
    n: int | None = None
    K: float | None = None
    index: int | None = None
    sign: int = 1

    def __post_init__(self):
        if self.tag in ("gamma", "gamma_star"):
            if self.k is None or self.k < 1:
                raise InputError("Gamma cones require k >= 1")
        elif self.tag == "quasiconformal":
            if self.K is None or self.K < 1.0:
                raise InputError("quasiconformal cones require K >= 1")
            if self.n is None or self.n < 2:
                raise InputError("quasiconformal cones require n >= 2")
        elif self.tag == "entrywise":
            if self.index not in (1, 2, 3, 4):
                raise InputError("entrywise cone index must be 1..4")
        if self.sign not in (-1, 1):
            raise InputError("sign must be +-1")

    def describe(self) -> str:
        s = "+" if self.sign > 0 else "-"
        return {
            "gamma": f"Gamma_{self.k}",
            "gamma_star": f"Gamma_{self.k}*",
            "quasiconformal": f"Q_{self.n}^{s}({self.K:g})",
            "entrywise": f"K_{self.index}^{s}",
            "trace": "{Tr >= 0}",
            "sym_pos": "Sym+",
            "sym_neg": "Sym-",
            "wave_div": "Lambda_Div",
            "wave_curl": "Lambda_Curl",
        }[self.tag]


def Gamma(k: int) -> ConeId:
    return ConeId("gamma", k=k)


def GammaStar(k: int) -> ConeId:
    return ConeId("gamma_star", k=k)


def QuasiConformal(n: int, K: float, sign: int = 1) -> ConeId:
    return ConeId("quasiconformal", n=n, K=float(K), sign=sign)


def Entrywise(index: int, sign: int = 1) -> ConeId:
    return ConeId("entrywise", index=index, sign=sign)


def TraceHalfSpace() -> ConeId:
    return ConeId("trace")


def SymPos() -> ConeId:
    return ConeId("sym_pos")


def SymNeg() -> ConeId:
    return ConeId("sym_neg")


def WaveConeDiv() -> ConeId:
    return ConeId("wave_div")


def WaveConeCurl() -> ConeId:
    return ConeId("wave_curl")


def _classify(margin: float, tol: float) -> str:
    if margin > tol:
        return INSIDE
    if margin >= -tol:
        return BOUNDARY
    return OUTSIDE_CONE


_ENTRYWISE = {
    # (index, sign) -> the two signed entry constraints, 0-indexed
    (1, 1): lambda a: (a[0, 0], a[1, 1]),
    (2, 1): lambda a: (a[0, 1], -a[1, 0]),
    (3, 1): lambda a: (-a[0, 0], -a[1, 1]),
    (4, 1): lambda a: (a[1, 0], -a[0, 1]),
    (1, -1): lambda a: (a[0, 0], -a[1, 1]),
    (2, -1): lambda a: (-a[0, 1], -a[1, 0]),
    (3, -1): lambda a: (a[0, 1], a[1, 0]),
    (4, -1): lambda a: (a[1, 1], -a[0, 0]),
}


def _require_sym(a: np.ndarray, cone: ConeId) -> None:
    scale = max(float(np.abs(a).max()), 1e-300)
    if np.abs(a - a.T).max() > 1e-10 * scale:
        raise InputError(f"cone {cone.describe()} requires a symmetric matrix")


def op_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, 2))


def cone_contains(a, cone: ConeId, tol: float = 1e-8) -> str:
    """Three-way membership classification with tolerance band ``tol``.

    For GammaStar with 2 < k < n the result is a tolerance-qualified
    semi-decision driven by multistart minimization of the eigenvalue
    pairing (no closed-form certificate exists in that range).
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InputError("non-finite matrix entries")
    n = a.shape[0]
    scale = max(float(np.linalg.norm(a)), 0.0)
    if scale == 0.0:
        return BOUNDARY  # the apex belongs to every cone here

    if cone.tag == "gamma":
        _require_sym(a, cone)
        k = cone.k
        if k > n:
            raise InputError(f"Gamma_{k} undefined for dimension {n}")
        lam = eigen_sym(a).eigenvalues
        e = sigma_all(lam, k)
        margins = [e[j] / (comb(n, j + 1) * scale ** (j + 1)) for j in range(k)]
        return _classify(min(margins), tol)

    if cone.tag == "gamma_star":
        return _gamma_star_contains(as_sym(a), cone.k, tol)

    if cone.tag == "quasiconformal":
        if n != cone.n:
            raise InputError(f"cone expects {cone.n}x{cone.n} matrices")
        margin = (cone.sign * cone.K * np.linalg.det(a) - op_norm(a) ** n) / scale**n
        return _classify(margin, tol)

    if cone.tag == "entrywise":
        if n != 2:
            raise InputError("entrywise cones are 2x2")
        c1, c2 = _ENTRYWISE[(cone.index, cone.sign)](a)
        return _classify(min(c1, c2) / scale, tol)

    if cone.tag == "trace":
        return _classify(float(np.trace(a)) / scale, tol)

    if cone.tag in ("sym_pos", "sym_neg"):
        _require_sym(a, cone)
        lam = eigen_sym(a).eigenvalues
        margin = -lam[0] / scale if cone.tag == "sym_neg" else lam[-1] / scale
        return _classify(margin, tol)

    if cone.tag == "wave_div":
        # symmetric singular matrices; a measure-zero cone: on it -> inside
        _require_sym(a, cone)
        d = abs(float(np.linalg.det(a))) / scale**n
        return INSIDE if d <= tol else OUTSIDE_CONE

    if cone.tag == "wave_curl":
        _require_sym(a, cone)
        lam = np.sort(np.abs(eigen_sym(a).eigenvalues))[::-1]
        return INSIDE if (n < 2 or lam[1] / scale <= tol) else OUTSIDE_CONE

    raise InputError(f"unknown cone tag {cone.tag!r}")


# ---------------------------------------------------------------------------
# gradient map
# ---------------------------------------------------------------------------


def grad_sigma_vec(lam: np.ndarray, k: int) -> np.ndarray:
    """d sigma_k / d lam_i for a single eigenvalue vector."""
    return kernels.grad_sigma(np.asarray(lam, dtype=np.float64)[None], k)[0]


def grad_Fk(a, k: int) -> np.ndarray:
    """nabla F_k(A) via the spectral formula; defined on all of Sym_n."""
    a = as_sym(a)
    n = a.shape[0]
    if not 1 <= k <= n:
        raise InputError(f"k={k} out of range 1..{n}")
    spec = eigen_sym(a)
    d = grad_sigma_vec(spec.eigenvalues, k) / comb(n, k)
    return (spec.frame * d) @ spec.frame.T


def grad_rho_k(a, k: int) -> np.ndarray:
    """nabla rho_k(A) = (1/k) F_k^{(1-k)/k} nabla F_k(A), interior only."""
    a = as_sym(a)
    f = F_k(a, k)
    if not f > 0.0:
        raise DomainError("grad_rho_k requires A in the interior of Gamma_k")
    return (1.0 / k) * f ** ((1.0 - k) / k) * grad_Fk(a, k)


# ---------------------------------------------------------------------------
# the dual function rho_k*
# ---------------------------------------------------------------------------


@dataclass
class DualEvaluation:
    """Value of rho_k*, the attaining minimizer, and the method used."""

    value: float
    minimizer: np.ndarray | None
    method: str  # "closed-form" | "newton" | "sampling-fallback"
    detail: dict = field(default_factory=dict)


def _minimizer_from_mu(mu: np.ndarray, frame: np.ndarray, k: int) -> np.ndarray:
    n = mu.size
    rk = (sigma_all(mu, k)[k - 1] / comb(n, k)) ** (1.0 / k)
    mu_hat = mu / rk
    return (frame * mu_hat) @ frame.T


def _dual_vector_newton(b: np.ndarray, k: int):
    """Solve grad F_k(mu) = b; returns (mu, ok)."""
    n = b.size
    target = comb(n, k) * b
    mu, ok, _ = kernels.newton_dual(target[None], k, tol=1e-13, maxit=100)
    if ok[0]:
        resid = np.abs(grad_sigma_vec(mu[0], k) - target).max()
        ok0 = resid <= 1e-9 * max(1.0, np.abs(target).max())
        return mu[0], bool(ok0)
    return mu[0], False


def _sample_gamma_directions(n: int, k: int, rng: np.random.Generator, count: int) -> np.ndarray:
    """Rejection-sample unit directions in Gamma_k (sigma_j >= 0 tests)."""
    out = []
    need = count
    while need > 0:
        z = rng.normal(size=(4 * need, n))
        half = z.shape[0] // 2
        z[:half] = np.abs(z[:half])  # the positive orthant is always feasible
        mask = kernels.in_gamma_interior(z, k)
        good = z[mask]
        out.append(good[:need])
        need -= len(good[:need])
    d = np.concatenate(out, axis=0)
    return d / np.linalg.norm(d, axis=1, keepdims=True)


def _boundary_seed_directions(n: int, k: int) -> list[np.ndarray]:
    """Ascending-sorted directions on/near the boundary of Gamma_k."""
    seeds = [np.ones(n) / math.sqrt(n)]
    for m in range(1, n):
        # (x,...,x, 1,...,1) with n-m leading x's; bisect x down to the boundary
        def margin(x: float) -> float:
            v = np.concatenate([np.full(n - m, x), np.ones(m)])
            e = sigma_all(v, k)
            return float(np.min(e[:k]))

        lo, hi = -float(m) / max(n - m, 1) - 2.0, 0.0
        if margin(lo) > 0:
            seeds.append(np.concatenate([np.full(n - m, lo), np.ones(m)]))
            continue
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if margin(mid) >= 0:
                hi = mid
            else:
                lo = mid
        v = np.concatenate([np.full(n - m, hi), np.ones(m)])
        seeds.append(v / np.linalg.norm(v))
    return seeds


def gamma_star_min_pairing(
    b_desc: np.ndarray,
    k: int,
    rng: np.random.Generator | None = None,
    samples: int = 2000,
    refine: bool = True,
) -> tuple[float, np.ndarray]:
    """min of mu . b over unit vectors mu in Gamma_k (multistart semi-decision).

    The sign of the minimum decides membership of b in Gamma_k*.
    """
    n = b_desc.size
    rng = np.random.default_rng(0) if rng is None else rng
    cands = list(_boundary_seed_directions(n, k))
    cands.append(np.sort(_sample_gamma_directions(n, k, rng, 1)[0]))
    sampled = _sample_gamma_directions(n, k, rng, samples)
    # pair ascending mu against descending b: sort each sample ascending
    sampled = np.sort(sampled, axis=1)
    vals = sampled @ b_desc
    order = np.argsort(vals)
    cands.extend(sampled[order[:3]])

    best_val, best_mu = np.inf, None
    for mu0 in cands:
        mu, val = mu0, float(mu0 @ b_desc)
        if refine:
            mu, val = _refine_pairing(b_desc, k, mu0)
        if val < best_val:
            best_val, best_mu = val, mu
    return best_val, best_mu


def _refine_pairing(b: np.ndarray, k: int, mu0: np.ndarray):
    from scipy.optimize import minimize

    n = b.size

    def cons_sigma(mu):
        return sigma_all(mu, k)[:k]

    res = minimize(
        lambda mu: mu @ b,
        mu0,
        jac=lambda mu: b,
        method="SLSQP",
        constraints=[
            {"type": "ineq", "fun": cons_sigma},
            {"type": "eq", "fun": lambda mu: mu @ mu - 1.0},
        ],
        options={"maxiter": 200, "ftol": 1e-14},
    )
    if res.success and in_gamma(res.x, k, tol=1e-9):
        mu = res.x / np.linalg.norm(res.x)
        return mu, float(mu @ b)
    return mu0, float(mu0 @ b)


def _gamma_star_closed_value(b_desc: np.ndarray, k: int) -> float | None:
    """Closed-form rho_k*(diag b) for k in {1, 2, n}; None when unavailable.

    Returns -inf outside the cone.
    """
    n = b_desc.size
    if k == 1:
        t = float(np.mean(b_desc))
        on_ray = np.abs(b_desc - t).max() <= 1e-10 * max(1.0, abs(t))
        return t if (on_ray and t >= 0.0) else OUTSIDE
    if k == 2:
        tr = float(np.sum(b_desc))
        rad = tr**2 - (n - 1) * float(np.sum(b_desc**2))
        if tr < 0.0 or rad < 0.0:
            return OUTSIDE
        return math.sqrt(rad) / math.sqrt(n)
    if k == n:
        if b_desc[-1] < 0.0:
            return OUTSIDE
        return float(np.prod(b_desc)) ** (1.0 / n) if n > 0 else OUTSIDE
    return None


def _gamma_star_contains(b: np.ndarray, k: int, tol: float) -> str:
    n = b.shape[0]
    if k > n:
        raise InputError(f"Gamma_{k}* undefined for dimension {n}")
    lam = eigen_sym(b).eigenvalues
    scale = max(float(np.linalg.norm(lam)), 1e-300)
    if k == 1:
        t = float(np.mean(lam))
        dist = float(np.abs(lam - t).max())
        if t >= -tol * scale and dist <= tol * scale:
            return BOUNDARY  # a ray has empty interior
        return OUTSIDE_CONE
    if k == 2:
        tr = float(np.sum(lam))
        rad = (tr**2 - (n - 1) * float(np.sum(lam**2))) / scale**2
        if tr < -tol * scale:
            return OUTSIDE_CONE
        return _classify(rad, tol)
    if k == n:
        return _classify(lam[-1] / scale, tol)
    # 2 < k < n: certificates first, then the multistart semi-decision
    if lam[-1] < -tol * scale:
        return OUTSIDE_CONE
    tr = float(np.sum(lam))
    if tr > 0.0 and tr**2 - (n - 1) * float(np.sum(lam**2)) > tol * scale**2:
        return INSIDE  # strictly inside Gamma_2* subset of Gamma_k*
    val, _ = gamma_star_min_pairing(lam, k)
    return _classify(val / (n * scale), tol)


def rho_k_star(B, k: int, method: str = "auto", tol: float = 1e-8) -> DualEvaluation:
    """Evaluate rho_k*(B) with its attaining minimizer A (rho_k(A) = 1).

    ``method``: 'auto' uses closed forms when available (k in {1,2,n}) and
    the Newton gradient-map inversion otherwise; 'newton' forces the Newton
    path; 'sampling' forces the sampling fallback.
    """
    B = as_sym(B)
    n = B.shape[0]
    if not 1 <= k <= n:
        raise InputError(f"k={k} out of range 1..{n}")
    spec = eigen_sym(B)
    b = spec.eigenvalues
    scale = max(float(np.linalg.norm(b)), 1e-300)

    # Gamma_k* subset of Sym+: a definitely-negative eigenvalue means outside
    if b[-1] < -tol * scale:
        return DualEvaluation(OUTSIDE, None, "closed-form")

    if method == "auto":
        closed = _gamma_star_closed_value(b, k)
        if closed is not None:
            if closed == OUTSIDE:
                return DualEvaluation(OUTSIDE, None, "closed-form")
            minim = _closed_form_minimizer(b, spec.frame, k)
            return DualEvaluation(closed, minim, "closed-form")

    if method in ("auto", "newton") and k >= 2:
        mu, ok = _dual_vector_newton(b, k)
        if ok:
            rk = (sigma_all(mu, k)[k - 1] / comb(n, k)) ** (1.0 / k)
            value = (k / n) * rk ** (k - 1)
            minim = _minimizer_from_mu(mu, spec.frame, k)
            return DualEvaluation(value, minim, "newton")
        if method == "newton" and _gamma_star_contains(B, k, tol) == INSIDE:
            raise IndeterminateError(
                "newton failed on an interior point", (0.0, float("inf"))
            )

    # sampling fallback: multistart minimization over {mu in Gamma_k, |mu|=1}
    rng = np.random.default_rng(20_240_915)
    val, mu_unit = gamma_star_min_pairing(b, k, rng, samples=10_000)
    upper = _pairing_to_value(b, mu_unit, k)
    lower = _certified_lower(b, k)
    if val < -tol * n * scale:
        return DualEvaluation(OUTSIDE, None, "sampling-fallback")
    if upper is not None:
        minim = _minimizer_from_mu(
            mu_unit / _rho_of(mu_unit, k) if _rho_of(mu_unit, k) > 0 else mu_unit,
            spec.frame,
            k,
        ) if _rho_of(mu_unit, k) > 0 else None
        value = upper if upper is not None else max(val, 0.0)
        return DualEvaluation(value, minim, "sampling-fallback")
    if abs(val) <= tol * n * scale:
        return DualEvaluation(0.0, None, "sampling-fallback")
    raise IndeterminateError("dual evaluation indeterminate", (lower, float(val)))


def _rho_of(mu: np.ndarray, k: int) -> float:
    n = mu.size
    e = sigma_all(mu, k)
    if np.any(e[:k] < 0):
        return 0.0
    f = e[k - 1] / comb(n, k)
    return f ** (1.0 / k) if f > 0 else 0.0


def _pairing_to_value(b: np.ndarray, mu_unit: np.ndarray, k: int) -> float | None:
    """Rescale a unit direction to rho_k = 1 and evaluate the pairing."""
    r = _rho_of(mu_unit, k)
    if r <= 0.0:
        return None
    mu = mu_unit / r
    return float(mu @ b) / b.size


def _certified_lower(b: np.ndarray, k: int) -> float:
    v = _gamma_star_closed_value(b, 2) if k >= 2 else OUTSIDE
    return v if v is not None else OUTSIDE


def _closed_form_minimizer(b: np.ndarray, frame: np.ndarray, k: int) -> np.ndarray | None:
    n = b.size
    if k == 1:
        return np.eye(n)
    if k == 2:
        tr_mu = comb(n, 2) * float(np.sum(b)) / (n - 1)
        mu = tr_mu - comb(n, 2) * b
    elif k == n:
        if np.any(b <= 0.0):
            return None  # boundary: the minimum is not attained at finite A
        P = float(np.prod(b)) ** (1.0 / (n - 1))
        mu = P / b
    else:
        return None
    if _rho_of(mu, k) <= 0.0:
        return None
    return _minimizer_from_mu(mu, frame, k)


def duality_minimizer(B, k: int) -> np.ndarray:
    """The A in Gamma_k with rho_k(A) = 1 attaining the duality pairing."""
    ev = rho_k_star(B, k)
    if ev.value == OUTSIDE or ev.value <= 0.0 or ev.minimizer is None:
        raise DomainError("duality_minimizer requires B in the interior of Gamma_k*")
    return ev.minimizer


def grad_Fk_inverse(B, k: int) -> np.ndarray:
    """Invert nabla F_k on the interior of Gamma_k* (scaling of the minimizer)."""
    B = as_sym(B)
    n = B.shape[0]
    if k < 2:
        raise InputError("grad_Fk_inverse requires k >= 2")
    ev = rho_k_star(B, k)
    if ev.value == OUTSIDE or ev.value <= 0.0 or ev.minimizer is None:
        raise DomainError("grad_Fk_inverse requires B in the interior of Gamma_k*")
    c = (n * ev.value / k) ** (1.0 / (k - 1))
    return c * ev.minimizer


# ---------------------------------------------------------------------------
# concavity profiles along wave-cone lines
# ---------------------------------------------------------------------------


def power_concavity_profile(
    k: int,
    alpha: float,
    A0,
    X,
    t_grid,
    line: str = "direct",
    tol: float = 1e-8,
) -> np.ndarray:
    """Centered second differences of t -> rho_k*(line(t))^alpha.

    ``line='direct'`` walks A0 + tX in Gamma_k*; ``line='pushforward'`` walks
    A0 + tX in Gamma_k and evaluates rho_k*((1/k) nabla F_k(A0 + tX))^alpha.
    Grid points where the segment exits the cone yield NaN, not a failure.
    """
    A0 = as_sym(A0)
    X = as_sym(X)
    t = np.asarray(t_grid, dtype=np.float64)
    if t.size < 3:
        raise InputError("t_grid needs at least 3 points")
    steps = np.diff(t)
    if steps.size and (steps.min() <= 0 or steps.ptp() > 1e-9 * steps.max()):
        raise InputError("t_grid must be uniformly increasing")
    if np.linalg.norm(X) > 0 and cone_contains(X, WaveConeDiv(), tol=1e-6) != INSIDE:
        raise InputError("direction X must lie in the Div wave cone (singular)")

    g = np.empty_like(t)
    for i, ti in enumerate(t):
        At = A0 + ti * X
        if line == "pushforward":
            if not in_gamma(eigen_sym(At).eigenvalues, k, tol=tol):
                g[i] = np.nan
                continue
            Bt = grad_Fk(At, k) / k
        elif line == "direct":
            Bt = At
        else:
            raise InputError(f"unknown line {line!r}")
        v = rho_k_star(Bt, k, tol=tol).value
        g[i] = np.nan if v == OUTSIDE else max(v, 0.0) ** alpha
    return g[:-2] - 2.0 * g[1:-1] + g[2:]


# ---------------------------------------------------------------------------
# the Burkholder integrand
# ---------------------------------------------------------------------------


def burkholder_eval(a, K: float) -> float:
    """B_K(A) = (K det A - ||A||^2)^{(K-1)/2K} ||A||^{1/K} for 2x2 A.

    ||.|| is the operator norm; a negative radicand returns the outside
    marker, consistent with Q_2^+(K) = {B_K >= 0}.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.shape != (2, 2):
        raise InputError("burkholder_eval expects a 2x2 matrix")
    if not np.all(np.isfinite(a)):
        raise InputError("non-finite matrix entries")
    if K < 1.0:
        raise InputError("K must be >= 1")
    det = float(np.linalg.det(a))
    nrm = op_norm(a)
    rad = K * det - nrm**2
    if rad < 0.0:
        return OUTSIDE
    expo = (K - 1.0) / (2.0 * K)
    lead = 1.0 if expo == 0.0 else rad**expo
    return lead * nrm ** (1.0 / K)


# ---------------------------------------------------------------------------
# seeded samplers (interior points of the cones)
# ---------------------------------------------------------------------------


def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    return q * np.sign(np.diag(r))


def sample_gamma_interior(
    n: int, k: int, rng: np.random.Generator, margin: float = 1e-6
) -> np.ndarray:
    """A random matrix in int Gamma_k (rejection on eigenvalues, Haar frame)."""
    for _ in range(400):
        lam = rng.normal(size=n) * rng.uniform(0.5, 2.0)
        if rng.uniform() < 0.4:
            lam = np.abs(lam)
        e = sigma_all(lam, k)
        norms = np.array([comb(n, j + 1) for j in range(k)])
        if np.all(e[:k] > margin * norms):
            q = random_orthogonal(n, rng)
            return (q * np.sort(lam)[::-1]) @ q.T
    lam = np.abs(rng.normal(size=n)) + margin  # positive orthant fallback
    q = random_orthogonal(n, rng)
    return (q * np.sort(lam)[::-1]) @ q.T


def sample_gamma_star_interior(
    n: int, k: int, rng: np.random.Generator
) -> np.ndarray:
    """A random matrix in int Gamma_k*: the image of int Gamma_k under nabla F_k."""
    a = sample_gamma_interior(n, k, rng, margin=1e-3)
    return float(rng.uniform(0.2, 3.0)) * grad_Fk(a, k)


# batched helpers used by the lab and the acceptance suite -------------------


def rho_batch(lams: np.ndarray, k: int) -> np.ndarray:
    """rho_k row-wise for a batch of eigenvalue vectors; -inf outside."""
    lams = np.asarray(lams, dtype=np.float64)
    n = lams.shape[1]
    e = kernels.esym(lams, k)
    inside = np.all(e[:, 1 : k + 1] >= 0.0, axis=1)
    f = np.maximum(e[:, k] / comb(n, k), 0.0)
    out = np.where(inside, f ** (1.0 / k), OUTSIDE)
    return out


def rho_star_newton_batch(b_desc: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Batched Newton evaluation of rho_k* on descending eigenvalue rows."""
    b = np.asarray(b_desc, dtype=np.float64)
    n = b.shape[1]
    mu, ok, _ = kernels.newton_dual(comb(n, k) * b, k)
    f = kernels.esym(mu, k)[:, k] / comb(n, k)
    vals = (k / n) * np.maximum(f, 0.0) ** ((k - 1.0) / k)
    return vals, ok
