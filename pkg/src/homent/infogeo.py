"""Gaussian statistical manifold attached to a graph.

A graph with adjacency ``A`` on ``n`` vertices is mapped to the family of
zero-mean Gaussians whose covariance is ``psi(theta) = diag(theta) + A``.
The parameter domain is the set of positive ``theta`` for which that matrix
is positive definite, and the Fisher-Rao metric has components

    g_ij(theta) = 0.5 * (psi(theta)^-1)_ij ** 2

(the closed form valid when off-diagonal covariances are 0 or 1).  The
Fisher integral itself is never evaluated.

Besides the single-point API there is :func:`evaluate_batch`, the vectorized
kernel the Monte Carlo samplers use.  It permutes each point into ascending
``theta`` order before factorizing, so the result is bitwise independent of
how the graph's vertices are labelled.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .graph import Graph

PIVOT_RTOL = 1e-12
OVERFLOW_CAP = 1e308


def psi(theta, g: Graph) -> np.ndarray:
    """``diag(theta) + A``."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (g.n,):
        raise ValueError(f"theta must have length {g.n}, got shape {theta.shape}")
    M = g.adjacency()
    M[np.diag_indices(g.n)] = theta
    return M


def cholesky_batch(M, rel_tol=PIVOT_RTOL):
    """Cholesky factors of a stack of symmetric matrices.

    Returns ``(L, ok)``.  ``ok[b]`` is False when some pivot of ``M[b]`` is
    not above ``rel_tol * max(diag(M[b]))`` (or not finite); such factors are
    garbage and must be masked by the caller.
    """
    M = np.asarray(M, dtype=float)
    nb, n, _ = M.shape
    L = np.zeros_like(M)
    ok = np.ones(nb, dtype=bool)
    thresh = rel_tol * np.max(np.diagonal(M, axis1=1, axis2=2), axis=1, initial=0.0)
    for j in range(n):
        Lj = L[:, j, :j]
        d = M[:, j, j] - np.einsum("bk,bk->b", Lj, Lj)
        ok &= d > thresh
        ljj = np.sqrt(np.where(ok, d, 1.0))
        L[:, j, j] = ljj
        if j + 1 < n:
            col = M[:, j + 1:, j] - np.einsum("bik,bk->bi", L[:, j + 1:, :j], Lj)
            L[:, j + 1:, j] = col / ljj[:, None]
    return L, ok


@dataclass
class BatchEvaluation:
    """Per-point results of :func:`evaluate_batch`.

    ``log_det_psi`` and ``log_det_g`` are only meaningful where ``in_domain``
    (and, for the metric, ``resolved``) holds; elsewhere they are NaN.
    ``resolved`` is False when the metric matrix is too ill-conditioned for
    its own Cholesky factorization to succeed.
    """

    in_domain: np.ndarray
    resolved: np.ndarray
    log_det_psi: np.ndarray
    log_det_g: np.ndarray


def evaluate_batch(thetas, A) -> BatchEvaluation:
    thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
    nb, n = thetas.shape
    A = np.asarray(A, dtype=float)
    finite = np.all(np.isfinite(thetas), axis=1) & np.all(thetas > 0, axis=1)
    safe = np.where(finite[:, None], thetas, 1.0)
    order = np.argsort(safe, axis=1, kind="stable")
    P = A[order[:, :, None], order[:, None, :]]
    idx = np.arange(n)
    P[:, idx, idx] = np.take_along_axis(safe, order, axis=1)

    L, ok = cholesky_batch(P)
    ok &= finite
    log_det_psi = np.full(nb, np.nan)
    log_det_g = np.full(nb, np.nan)
    resolved = np.zeros(nb, dtype=bool)
    if ok.any():
        Lk = L[ok]
        log_det_psi[ok] = 2.0 * np.log(np.diagonal(Lk, axis1=1, axis2=2)).sum(axis=1)
        Linv = np.linalg.inv(Lk)
        inv = np.matmul(np.swapaxes(Linv, 1, 2), Linv)
        G = 0.5 * inv * inv
        LG, okg = cholesky_batch(G, rel_tol=0.0)
        ldg = 2.0 * np.log(np.diagonal(LG, axis1=1, axis2=2)).sum(axis=1)
        sub = np.flatnonzero(ok)
        resolved[sub] = okg
        log_det_g[sub[okg]] = ldg[okg]
    return BatchEvaluation(ok, resolved, log_det_psi, log_det_g)


def evaluate_one(theta, A):
    """Single-point twin of :func:`evaluate_batch` on LAPACK factorizations.

    Returns ``(in_domain, resolved, log_det_psi, log_det_g)``; used by the
    Metropolis chain where per-point overhead dominates.
    """
    theta = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(theta)) or np.any(theta <= 0):
        return False, False, math.nan, math.nan
    order = np.argsort(theta, kind="stable")
    P = A[np.ix_(order, order)]
    np.fill_diagonal(P, theta[order])
    try:
        L = np.linalg.cholesky(P)
    except np.linalg.LinAlgError:
        return False, False, math.nan, math.nan
    d = np.diag(L)
    if not np.min(d * d) > PIVOT_RTOL * theta.max():
        return False, False, math.nan, math.nan
    log_det_psi = 2.0 * float(np.log(d).sum())
    Linv = np.linalg.inv(L)
    inv = Linv.T @ Linv
    try:
        LG = np.linalg.cholesky(0.5 * inv * inv)
    except np.linalg.LinAlgError:
        return True, False, log_det_psi, math.nan
    dg = np.diag(LG)
    if not np.all(dg > 0):
        return True, False, log_det_psi, math.nan
    return True, True, log_det_psi, 2.0 * float(np.log(dg).sum())


def in_domain(theta, g: Graph) -> bool:
    """True iff ``psi(theta)`` is positive definite (pivot-tolerance Cholesky)."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (g.n,) or not np.all(np.isfinite(theta)) or np.any(theta <= 0):
        return False
    _, ok = cholesky_batch(psi(theta, g)[None])
    return bool(ok[0])


@dataclass(frozen=True)
class MetricEvaluation:
    g_tilde: np.ndarray
    log_det_g: float
    det_g: float
    sqrt_det: float
    psi_det: float
    overflow_flag: bool

    def to_dict(self) -> dict:
        return {
            "g_tilde": self.g_tilde.tolist(),
            "log_det_g": self.log_det_g,
            "det_g": self.det_g,
            "sqrt_det": self.sqrt_det,
            "psi_det": self.psi_det,
            "overflow_flag": self.overflow_flag,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def fisher_metric(theta, g: Graph, overflow_cap: float = OVERFLOW_CAP) -> MetricEvaluation:
    """Metric components, determinant and overflow flag at one point.

    Raises
    ------
    DomainError
        If ``theta`` is outside the positive-definiteness domain.
    """
    if not in_domain(theta, g):
        raise DomainError("theta outside Theta-tilde")
    M = psi(theta, g)
    L, _ = cholesky_batch(M[None])
    L = L[0]
    Linv = np.linalg.inv(L)
    G = 0.5 * (Linv.T @ Linv) ** 2
    LG, okg = cholesky_batch(G[None], rel_tol=0.0)
    if okg[0]:
        log_det = 2.0 * float(np.log(np.diag(LG[0])).sum())
    else:
        sign, log_det = np.linalg.slogdet(G)
        log_det = float(log_det) if sign > 0 else -math.inf
    log_psi = 2.0 * float(np.log(np.diag(L)).sum())
    log_sqrt = 0.5 * log_det
    return MetricEvaluation(
        g_tilde=G,
        log_det_g=log_det,
        det_g=_exp(log_det),
        sqrt_det=_exp(log_sqrt),
        psi_det=_exp(log_psi),
        overflow_flag=log_sqrt > math.log(overflow_cap),
    )


def _exp(x):
    return math.exp(x) if x < 709.78 else math.inf


# --------------------------------------------------------------------------
# closed forms for the two five-vertex examples
#   A1: single edge {0, 1};  A2: triangle {0, 1, 2};  other vertices isolated.

A1_GRAPH = Graph(5, frozenset({(0, 1)}))
A2_GRAPH = Graph(5, frozenset({(0, 1), (0, 2), (1, 2)}))


def _five(theta):
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (5,):
        raise ValueError("closed forms take a length-5 theta")
    return theta


def domain_a1(theta) -> bool:
    t1, t2, t3, t4, t5 = _five(theta)
    return bool(t1 > 0 and t1 * t2 > 1 and t3 > 0 and t4 > 0 and t5 > 0)


def domain_a2(theta) -> bool:
    t1, t2, t3, t4, t5 = _five(theta)
    return bool(t1 > 0 and t1 * t2 > 1 and t3 > (t1 + t2 - 2) / (t1 * t2 - 1)
                and t4 > 0 and t5 > 0)


def analytic_det_g1(theta) -> float:
    if not domain_a1(theta):
        raise DomainError("theta outside the single-edge domain")
    t1, t2, t3, t4, t5 = _five(theta)
    return (1 + t1 * t2) / (32 * (t3 * t4 * t5) ** 2 * (t1 * t2 - 1) ** 3)


def _delta2(t1, t2, t3):
    # det of the triangle block diag(t1, t2, t3) + ones off-diagonal
    return t1 * (t2 * t3 - 1) - t2 - t3 + 2


def analytic_det_g2(theta) -> float:
    if not domain_a2(theta):
        raise DomainError("theta outside the triangle domain")
    t1, t2, t3, t4, t5 = _five(theta)
    num = t1**2 * ((t2 * t3) ** 2 - 1) + 2 * t1 * (t2 + t3 - 2 * t2 * t3) - (t2 - t3) ** 2
    return num / (32 * (t4 * t5 * _delta2(t1, t2, t3) ** 2) ** 2)


def analytic_metric_g1(theta) -> np.ndarray:
    if not domain_a1(theta):
        raise DomainError("theta outside the single-edge domain")
    t1, t2, t3, t4, t5 = _five(theta)
    D2 = 2 * (t1 * t2 - 1) ** 2
    G = np.zeros((5, 5))
    G[0, 0] = t2**2 / D2
    G[1, 1] = t1**2 / D2
    G[0, 1] = G[1, 0] = 1 / D2
    G[2, 2] = 1 / (2 * t3**2)
    G[3, 3] = 1 / (2 * t4**2)
    G[4, 4] = 1 / (2 * t5**2)
    return G


def analytic_metric_g2(theta) -> np.ndarray:
    if not domain_a2(theta):
        raise DomainError("theta outside the triangle domain")
    t1, t2, t3, t4, t5 = _five(theta)
    D2 = 2 * _delta2(t1, t2, t3) ** 2
    G = np.zeros((5, 5))
    G[0, 0] = (t2 * t3 - 1) ** 2 / D2
    G[1, 1] = (t1 * t3 - 1) ** 2 / D2
    G[2, 2] = (t1 * t2 - 1) ** 2 / D2
    G[0, 1] = G[1, 0] = (1 - t3) ** 2 / D2
    G[0, 2] = G[2, 0] = (1 - t2) ** 2 / D2
    G[1, 2] = G[2, 1] = (1 - t1) ** 2 / D2
    G[3, 3] = 1 / (2 * t4**2)
    G[4, 4] = 1 / (2 * t5**2)
    return G
