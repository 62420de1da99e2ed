"""A-posteriori check of approximate nonsmooth stationarity.

The approximate subdifferential is the convex hull of ratio gradients
taken at every near-maximal local maximizer of |p| on bd W(A); the norm
of its smallest element measures how far (p, A) is from stationarity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .fov import AttainmentSet, z_eps_set
from .polymat import FieldMode, PolyLike, StructuredMatrixPoint
from .ratio import RatioEvaluation, crouzeix_ratio, grad_ratio

__all__ = ["StationarityReport", "approx_subdifferential", "min_norm_point", "stationarity_report"]

DEFAULT_EPS = 1e-4


@dataclass
class StationarityReport:
    epsilon: float
    z_count: int
    generators: list[np.ndarray]
    d: Optional[np.ndarray]
    d_norm: Optional[float]
    weights: Optional[np.ndarray]
    forgo: bool
    points: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "z_count": self.z_count,
            "d_norm": self.d_norm,
            "weights": None if self.weights is None else self.weights.tolist(),
            "forgo": self.forgo,
            "points": [[c.z.real, c.z.imag] for c in self.points],
        }


def approx_subdifferential(p: PolyLike, A: np.ndarray, eps: float = DEFAULT_EPS,
                           mode: Optional[FieldMode] = None,
                           ev: Optional[RatioEvaluation] = None) -> tuple[list[np.ndarray], AttainmentSet]:
    """Generators of the approximate subdifferential, one per point of Z_eps.

    Every generator shares the denominator gradient; only the numerator
    part changes from point to point.  Returns an empty list with the
    forgo flag set when |p| is constant on the boundary.
    """
    if ev is None:
        ev = crouzeix_ratio(p, A, mode, gradient=False)
    att = z_eps_set(ev.p, ev.A, ev.boundary, eps)
    if att.forgo:
        return [], att
    gens = [np.asarray(grad_ratio(ev, pt)) for pt in att.points]
    return gens, att


def _affine_min_norm(P: np.ndarray) -> np.ndarray:
    """Weights summing to one minimizing ||w @ P|| without sign constraints."""
    r = P.shape[0]
    K = np.zeros((r + 1, r + 1))
    K[:r, :r] = P @ P.T
    K[:r, r] = K[r, :r] = 1.0
    rhs = np.zeros(r + 1)
    rhs[r] = 1.0
    sol = np.linalg.lstsq(K, rhs, rcond=None)[0][:r]
    return sol / sol.sum()


def min_norm_point(generators, tol: float = 1e-12, max_iter: int = 500) -> tuple[np.ndarray, np.ndarray]:
    """Smallest-norm point of the convex hull of the generators (Wolfe's algorithm).

    Returns ``(d, weights)`` with ``d = weights @ G`` and weights in the
    unit simplex.
    """
    G = np.atleast_2d(np.asarray(generators, dtype=float))
    if G.size == 0 or G.shape[0] == 0:
        raise ValueError("need at least one generator")
    k = G.shape[0]
    scale = max(np.max(np.sum(G * G, axis=1)), np.finfo(float).tiny)
    j = int(np.argmin(np.sum(G * G, axis=1)))
    S = [j]
    lam = np.zeros(k)
    lam[j] = 1.0
    x = G[j].copy()
    for _ in range(max_iter):
        dots = G @ x
        j = int(np.argmin(dots))
        if x @ x - dots[j] <= tol * scale or j in S:
            break
        S.append(j)
        while True:
            alpha = _affine_min_norm(G[S])
            if np.all(alpha > tol):
                lam[:] = 0.0
                lam[S] = alpha
                break
            cur = lam[S]
            mask = alpha <= tol
            step = np.min(cur[mask] / (cur[mask] - alpha[mask]))
            new = cur + step * (alpha - cur)
            lam[:] = 0.0
            lam[S] = new
            S = [s for s, w in zip(S, new) if w > tol]
            lam[lam <= tol] = 0.0
            lam /= lam.sum()
            if len(S) == 1:
                break
        x = lam @ G
    lam = np.clip(lam, 0.0, None)
    lam /= lam.sum()
    return lam @ G, lam


def kkt_violation(generators, d: np.ndarray) -> float:
    """max_i (||d||^2 - g_i . d); nonpositive up to rounding at the minimizer."""
    G = np.atleast_2d(np.asarray(generators, dtype=float))
    return float(np.max(d @ d - G @ d))


def stationarity_report(p: PolyLike, A: np.ndarray, eps: float = DEFAULT_EPS,
                        mode: Optional[FieldMode] = None,
                        ev: Optional[RatioEvaluation] = None) -> StationarityReport:
    gens, att = approx_subdifferential(p, A, eps, mode, ev)
    if att.forgo:
        return StationarityReport(eps, len(att.points), [], None, None, None, True, att.points)
    d, lam = min_norm_point(gens)
    return StationarityReport(eps, len(att.points), gens, d, float(np.linalg.norm(d)), lam, False, att.points)


def point_report(pt: StructuredMatrixPoint, eps: float = DEFAULT_EPS) -> StationarityReport:
    return stationarity_report(pt.p, pt.A, eps, pt.mode)
