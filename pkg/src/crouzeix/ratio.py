"""The Crouzeix ratio ||p||_{W(A)} / ||p(A)||_2 and its gradient.

Gradients are assembled as complex weights ``(gc, gA)`` with the
directional derivative along ``(dc, dA)`` equal to
``Re(sum(gc * dc) + sum(gA * dA))`` and then packed into the real
parameter space of a :class:`~crouzeix.polymat.Layout`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .fov import AttainmentSet, BoundaryApproximant, BoundaryPoint, build_boundary, sup_abs_poly
from .polymat import (
    FieldMode,
    Layout,
    PolyLike,
    StructuredMatrixPoint,
    as_poly,
    eval_poly,
    eval_poly_deriv,
    eval_poly_matrix,
)

log = logging.getLogger(__name__)

__all__ = [
    "RatioEvaluation",
    "numerator",
    "denominator",
    "crouzeix_ratio",
    "evaluate_point",
    "grad_numerator_at",
    "grad_denominator",
    "grad_ratio",
]

OVERFLOW_LIMIT = 1e150
SIGMA_GAP_RTOL = 1e-10


@dataclass
class RatioEvaluation:
    f: float
    numerator: float
    denominator: float
    attainment: AttainmentSet
    singular_pair: tuple[float, np.ndarray, np.ndarray]
    sigma_gap: float
    p: np.ndarray
    A: np.ndarray
    boundary: BoundaryApproximant
    layout: Optional[Layout] = None
    gradient: Optional[np.ndarray] = None
    # attainment was numerically tied at several points; gradient uses the first
    multiple_max: bool = False
    # sigma_max of p(A) is numerically multiple; the denominator is nonsmooth here
    sigma_near_multiple: bool = False
    warnings: list[str] = field(default_factory=list)


def _check_finite(p: np.ndarray, A: np.ndarray) -> None:
    big = max(np.max(np.abs(p), initial=0.0), np.max(np.abs(A), initial=0.0))
    if not np.isfinite(big) or big > OVERFLOW_LIMIT:
        raise OverflowError(f"parameter magnitude {big:.3g} exceeds {OVERFLOW_LIMIT:g}")


def numerator(p: PolyLike, A: np.ndarray, bd: Optional[BoundaryApproximant] = None,
              mode: FieldMode = FieldMode.COMPLEX) -> tuple[float, AttainmentSet]:
    """max |p| over W(A); attained on the boundary by the maximum modulus principle."""
    p = as_poly(p)
    if p.is_zero():
        raise ValueError("zero polynomial")
    if bd is None:
        bd = build_boundary(A, mode)
    value, pts = sup_abs_poly(p, bd)
    return value, AttainmentSet(pts, 0.0, value, forgo=False)


def denominator(p: PolyLike, A: np.ndarray):
    """sigma_max(p(A)) with its unit singular pair and the gap to sigma_2.

    Returns ``(D, u, w, sigma_gap)`` with ``p(A) w = D u``.
    """
    P = eval_poly_matrix(p, A)
    U, s, Vh = np.linalg.svd(P)
    if not np.isfinite(s[0]):
        raise OverflowError("p(A) is not finite")
    if s[0] == 0.0:
        raise ZeroDivisionError("p(A) is zero; the Crouzeix ratio is undefined")
    gap = s[0] - s[1] if s.size > 1 else np.inf
    return float(s[0]), U[:, 0], Vh[0].conj(), float(gap)


def _numerator_weights(z: complex, v: np.ndarray, p: PolyLike):
    p = as_poly(p)
    pz = eval_poly(p, z)
    if pz == 0:
        raise ZeroDivisionError("p vanishes at the attainment point")
    phase = np.conj(pz) / abs(pz)
    gc = phase * z ** np.arange(p.coeffs.size)
    gA = phase * eval_poly_deriv(p, z) * np.outer(np.conj(v), v)
    return gc, gA


def _denominator_weights(p: PolyLike, A: np.ndarray, u: np.ndarray, w: np.ndarray):
    p = as_poly(p)
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    gc = np.empty(p.coeffs.size, dtype=complex)
    x = w.astype(complex)
    uc = np.conj(u)
    for j in range(p.coeffs.size):
        gc[j] = uc @ x
        x = A @ x
    # Frechet derivative of p at A applied to w u^*: upper-right block of p([[A, wu^*], [0, A]])
    T = np.zeros((2 * n, 2 * n), dtype=complex)
    T[:n, :n] = A
    T[n:, n:] = A
    T[:n, n:] = np.outer(w, uc)
    M = eval_poly_matrix(p, T)[:n, n:]
    return gc, M.T


def _layout_for(p: np.ndarray, A: np.ndarray, mode: Optional[FieldMode]) -> Optional[Layout]:
    if mode is None:
        return None
    try:
        StructuredMatrixPoint(p if mode is FieldMode.COMPLEX else p.real, A if mode is FieldMode.COMPLEX else A.real, mode)
    except ValueError:
        return None
    return Layout(A.shape[0], p.size - 1, mode)


def _pack(layout: Optional[Layout], gc, gA):
    if layout is None:
        return gc, gA
    return layout.gradient_vector(gc, gA)


def grad_numerator_at(z: complex, v: np.ndarray, p: PolyLike, A: np.ndarray, layout: Optional[Layout] = None):
    """Gradient of ||p||_{W(A)} at a fixed attainment point z = v^* A v.

    Along dA the derivative is Re(phase * p'(z) * v^* dA v), along dc_j it is
    Re(phase * z^j dc_j), with phase = conj(p(z))/|p(z)|.  Without a layout
    the complex weights ``(gc, gA)`` are returned.
    """
    gc, gA = _numerator_weights(z, v, p)
    return _pack(layout, gc, gA)


def grad_denominator(p: PolyLike, A: np.ndarray, u: np.ndarray, w: np.ndarray, layout: Optional[Layout] = None):
    """Gradient of sigma_max(p(A)) for a simple top singular value with pair (u, w)."""
    gc, gA = _denominator_weights(p, A, u, w)
    return _pack(layout, gc, gA)


def _representative(att: AttainmentSet) -> BoundaryPoint:
    # largest |p|, ties by smallest theta
    return min(att.points, key=lambda c: (-c.value, c.theta))


def grad_ratio(ev: RatioEvaluation, point: Optional[BoundaryPoint] = None):
    """(D grad N - N grad D) / D^2 at one attainment point (the representative by default)."""
    pt = _representative(ev.attainment) if point is None else point
    N, D = ev.numerator, ev.denominator
    _, u, w = ev.singular_pair
    nc, nA = _numerator_weights(pt.z, pt.v, ev.p)
    dc, dA = _denominator_weights(ev.p, ev.A, u, w)
    gc = (D * nc - N * dc) / D**2
    gA = (D * nA - N * dA) / D**2
    return _pack(ev.layout, gc, gA)


def crouzeix_ratio(
    p: PolyLike,
    A: np.ndarray,
    mode: Optional[FieldMode] = None,
    grid: Optional[int] = None,
    gradient: bool = True,
) -> RatioEvaluation:
    """Evaluate f(p, A) with attainment data and, if requested, the gradient.

    ``mode`` defaults to REAL when A and p are real.  The gradient is packed
    in the layout of ``mode`` when A has the matching structure; otherwise
    it is left as complex weights over all entries.
    """
    p = as_poly(p)
    A = np.asarray(A, dtype=complex)
    c = p.coeffs
    _check_finite(c, A)
    if p.is_zero():
        raise ValueError("zero polynomial")
    auto = mode is None
    if auto:
        mode = FieldMode.REAL if (p.is_real() and not np.any(A.imag)) else FieldMode.COMPLEX
    mode = FieldMode(mode)
    if mode is FieldMode.REAL and (not p.is_real() or np.any(A.imag)):
        raise ValueError("real mode needs real p and A")
    kw = {} if grid is None else {"grid": grid}
    bd = build_boundary(A, mode, **kw)
    N, att = numerator(p, A, bd)
    D, u, w, sgap = denominator(p, A)
    ev = RatioEvaluation(
        f=N / D, numerator=N, denominator=D, attainment=att, singular_pair=(D, u, w),
        sigma_gap=sgap, p=c, A=A, boundary=bd, layout=_layout_for(c, A, mode),
    )
    if len(att.points) > 1:
        ev.multiple_max = True
    if sgap < SIGMA_GAP_RTOL * D:
        ev.sigma_near_multiple = True
        ev.warnings.append("sigma_max of p(A) is numerically multiple")
        log.debug("near-multiple sigma_max: gap %.3g, sigma %.3g", sgap, D)
    if gradient:
        ev.gradient = grad_ratio(ev)
    return ev


def evaluate_point(pt: StructuredMatrixPoint, grid: Optional[int] = None, gradient: bool = True) -> RatioEvaluation:
    return crouzeix_ratio(pt.p, pt.A, pt.mode, grid=grid, gradient=gradient)
