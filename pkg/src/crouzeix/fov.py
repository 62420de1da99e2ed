"""Boundary of the field of values and maximization of |p| on it.

The boundary is swept through the top eigenpair of the Hermitian matrix
``H(theta) = (e^{i theta} A + e^{-i theta} A^*) / 2``: its unit top
eigenvector ``v`` gives the support point ``z = v^* A v`` in direction
``e^{-i theta}``.  Smooth pieces are traced in ``theta``; where the top
eigenvalue is double, ``z`` jumps across a straight segment; where ``z``
stays fixed over a range of ``theta`` there is a corner.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.optimize

from .polymat import FieldMode, PolyLike, as_poly, eval_poly, eval_poly_deriv

log = logging.getLogger(__name__)

__all__ = [
    "BoundaryPoint",
    "Segment",
    "BoundaryApproximant",
    "AttainmentSet",
    "hermitian_sweep_matrix",
    "boundary_point",
    "build_boundary",
    "sup_abs_poly",
    "local_maximizers",
    "z_eps_set",
]

DEFAULT_GRID = 1024
CONST_TOL = 1e-8
ARGMAX_RTOL = 1e-12
THETA_TOL = 1e-10
REFINE_FLOOR = 0.5
_THETA_FLOOR = 1e-13
_CHORD_DIVISIONS = 128


@dataclass(frozen=True)
class BoundaryPoint:
    z: complex
    theta: float
    v: np.ndarray
    value: float = np.nan
    is_corner: bool = False
    kind: str = "arc"  # arc | corner | segment | endpoint


@dataclass(frozen=True)
class Segment:
    theta: float
    z0: complex
    z1: complex
    v0: np.ndarray
    v1: np.ndarray

    def point(self, t: float) -> tuple[complex, np.ndarray]:
        """Point at fraction t along the segment with a unit vector realizing it.

        v0 and v1 span the top eigenspace and are orthogonal, so the cross
        terms of v^* A v cancel in the normal direction and interpolating the
        squared weights moves z linearly.
        """
        v = np.sqrt(1 - t) * self.v0 + np.sqrt(t) * self.v1
        return self.z0 + t * (self.z1 - self.z0), v / np.linalg.norm(v)


@dataclass
class BoundaryApproximant:
    A: np.ndarray
    mode: FieldMode
    thetas: np.ndarray
    z: np.ndarray
    V: np.ndarray
    dz: np.ndarray
    gap: np.ndarray
    segments: list[Segment]
    corners: list[BoundaryPoint]
    domain: tuple[float, float]
    periodic: bool
    scale: float
    # sample index i -> True when a segment jump sits between i and i+1
    jumps: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))
    degenerate: bool = False

    @property
    def pieces(self) -> list[np.ndarray]:
        """Sample-index runs of the smooth arcs between segment jumps."""
        n = self.thetas.size
        if n == 0:
            return []
        cuts = np.nonzero(self.jumps[: n - 1])[0]
        runs = np.split(np.arange(n), cuts + 1)
        if self.periodic and self.jumps.size == n and not self.jumps[-1] and n > 1:
            if len(runs) > 1:
                # last run wraps into the first
                runs[0] = np.concatenate([runs[-1], runs[0]])
                runs.pop()
            else:
                # a closed smooth curve: the last sample connects back to the first
                runs[0] = np.append(runs[0], 0)
        return runs

    def polyline(self) -> np.ndarray:
        """Closed boundary traced through samples and segment endpoints."""
        pts = list(self.z)
        if self.mode is FieldMode.REAL and not self.degenerate:
            upper = np.asarray(pts)
            return np.concatenate([upper, np.conj(upper[::-1])])
        return np.asarray(pts + pts[:1])


def hermitian_sweep_matrix(A: np.ndarray, theta: float) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    e = np.exp(1j * theta)
    H = 0.5 * (e * A + np.conj(e) * A.conj().T)
    return 0.5 * (H + H.conj().T)


def _sweep(A: np.ndarray, thetas: np.ndarray):
    """Top eigenpair data for a batch of angles: z, v, dz/dtheta, gap."""
    thetas = np.asarray(thetas, dtype=float)
    e = np.exp(1j * thetas)[:, None, None]
    Ah = A.conj().T
    H = 0.5 * (e * A + np.conj(e) * Ah)
    H = 0.5 * (H + np.conj(np.swapaxes(H, 1, 2)))
    w, V = np.linalg.eigh(H)
    v = V[:, :, -1]
    Av = np.einsum("ij,tj->ti", A, v)
    z = np.einsum("ti,ti->t", np.conj(v), Av)
    n = A.shape[0]
    if n == 1:
        return z, v, np.zeros_like(z), np.full(thetas.shape, np.inf)
    gap = w[:, -1] - w[:, -2]
    # first-order eigenvector perturbation with the gauge v^* v' = 0
    Hp = 0.5j * (e * A - np.conj(e) * Ah)
    Hpv = np.einsum("tij,tj->ti", Hp, v)
    coef = np.einsum("tik,ti->tk", np.conj(V[:, :, :-1]), Hpv)
    with np.errstate(divide="ignore", invalid="ignore"):
        coef = coef / (w[:, -1:] - w[:, :-1])
    coef[~np.isfinite(coef)] = 0.0
    vp = np.einsum("tik,tk->ti", V[:, :, :-1], coef)
    Avp = np.einsum("ij,tj->ti", A, vp)
    dz = np.einsum("ti,ti->t", np.conj(vp), Av) + np.einsum("ti,ti->t", np.conj(v), Avp)
    return z, v, dz, gap


def _sweep1(A: np.ndarray, theta: float):
    """Scalar-angle version of :func:`_sweep` without batching overhead."""
    e = np.exp(1j * theta)
    Ah = A.conj().T
    H = 0.5 * (e * A + np.conj(e) * Ah)
    H = 0.5 * (H + H.conj().T)
    w, V = np.linalg.eigh(H)
    v = V[:, -1]
    Av = A @ v
    z = np.vdot(v, Av)
    if A.shape[0] == 1:
        return z, v, 0j, np.inf
    Hpv = (0.5j * (e * A - np.conj(e) * Ah)) @ v
    coef = (V[:, :-1].conj().T @ Hpv) / (w[-1] - w[:-1])
    if not np.all(np.isfinite(coef)):
        coef = np.where(np.isfinite(coef), coef, 0.0)
    vp = V[:, :-1] @ coef
    dz = np.vdot(vp, Av) + np.vdot(v, A @ vp)
    return z, v, dz, w[-1] - w[-2]


def boundary_point(A: np.ndarray, theta: float):
    """Support point of W(A) in direction e^{-i theta}: (z, v, gap)."""
    A = np.asarray(A, dtype=complex)
    z, v, _, gap = _sweep(A, np.array([theta]))
    return complex(z[0]), v[0], float(gap[0])


def _segment_at(A: np.ndarray, theta: float) -> tuple:
    """Endpoints of the boundary segment normal to e^{-i theta}, from the 2-d top eigenspace."""
    H = hermitian_sweep_matrix(A, theta)
    w, V = np.linalg.eigh(H)
    Q = V[:, -2:]
    e = np.exp(1j * theta)
    B = Q.conj().T @ (e * A) @ Q
    K = (B - B.conj().T) / 2j
    mu, S = np.linalg.eigh(0.5 * (K + K.conj().T))
    q0, q1 = Q @ S[:, 0], Q @ S[:, 1]
    z0 = complex(q0.conj() @ A @ q0)
    z1 = complex(q1.conj() @ A @ q1)
    return z0, z1, q0, q1


def _gap_tol(A: np.ndarray) -> float:
    return 1e-8 * (1 + np.linalg.norm(A))


def build_boundary(
    A: np.ndarray,
    mode: FieldMode = FieldMode.COMPLEX,
    tol: Optional[float] = None,
    grid: int = DEFAULT_GRID,
    max_rounds: int = 60,
) -> BoundaryApproximant:
    """Adaptive sampling of bd W(A).

    Samples start on a uniform grid of ``grid`` angles per 2*pi (half of
    that on ``[pi, 2*pi]`` in real mode, which traces the upper half of the
    boundary).  Intervals whose chord is long relative to the boundary
    diameter are bisected; when ``tol`` is given, intervals are also
    bisected until the cubic Hermite interpolant agrees with a direct
    eigensolve at the midpoint to ``tol * (1 + ||A||)``.  Intervals that
    still jump after bisecting down to ~1e-13 radians are segments.
    """
    A = np.asarray(A, dtype=complex)
    mode = FieldMode(mode)
    n = A.shape[0]
    normA = float(np.linalg.norm(A, 2)) if n else 0.0
    scale = 1.0 + normA
    if mode is FieldMode.REAL:
        domain, periodic = (np.pi, 2 * np.pi), False
    else:
        domain, periodic = (0.0, 2 * np.pi), True

    mu = np.trace(A) / max(n, 1)
    if n <= 1 or np.linalg.norm(A - mu * np.eye(n)) <= 1e-14 * scale:
        v = np.zeros(max(n, 1), dtype=complex)
        v[0] = 1.0
        return BoundaryApproximant(
            A=A, mode=mode, thetas=np.array([domain[0]]), z=np.array([mu]), V=v[None, :],
            dz=np.zeros(1, dtype=complex), gap=np.array([np.inf]), segments=[], corners=[],
            domain=domain, periodic=periodic, scale=scale, jumps=np.zeros(1, dtype=bool),
            degenerate=True,
        )

    if periodic:
        thetas = np.linspace(domain[0], domain[1], grid, endpoint=False)
    else:
        thetas = np.linspace(domain[0], domain[1], grid // 2 + 1)
    z, V, dz, gap = _sweep(A, thetas)
    diam = 2 * float(np.max(np.abs(z - z.mean())))
    h_max = max(diam, 1e-300) / _CHORD_DIVISIONS
    accuracy = None if tol is None else tol * scale
    verified = np.zeros(thetas.size, dtype=bool)

    for _ in range(max_rounds):
        if periodic:
            nxt_t = np.append(thetas[1:], thetas[0] + 2 * np.pi)
            nxt_z, nxt_dz = np.roll(z, -1), np.roll(dz, -1)
        else:
            nxt_t, nxt_z, nxt_dz = thetas[1:], z[1:], dz[1:]
        m = nxt_t.size
        width = nxt_t - thetas[:m]
        chord = np.abs(nxt_z - z[:m])
        splittable = width > _THETA_FLOOR
        split = splittable & (chord > h_max)
        if accuracy is not None:
            check = splittable & ~split & ~verified[:m] & (chord > accuracy)
            if np.any(check):
                idx = np.nonzero(check)[0]
                tm = thetas[idx] + width[idx] / 2
                zm, _, _, _ = _sweep(A, tm)
                herm = (z[idx] + nxt_z[idx]) / 2 + width[idx] * (dz[idx] - nxt_dz[idx]) / 8
                bad = np.abs(zm - herm) > accuracy
                split[idx[bad]] = True
                verified[idx[~bad]] = True
        if not np.any(split):
            break
        idx = np.nonzero(split)[0]
        tm = thetas[idx] + width[idx] / 2
        zm, Vm, dzm, gm = _sweep(A, tm)
        thetas = np.insert(thetas, idx + 1, tm)
        z = np.insert(z, idx + 1, zm)
        V = np.insert(V, idx + 1, Vm, axis=0)
        dz = np.insert(dz, idx + 1, dzm)
        gap = np.insert(gap, idx + 1, gm)
        verified = np.insert(verified, idx + 1, False)
        verified[idx] = False

    # wrap the periodic angles back into [0, 2*pi)
    if periodic:
        thetas = np.mod(thetas, 2 * np.pi)
        order = np.argsort(thetas, kind="stable")
        thetas, z, V, dz, gap = thetas[order], z[order], V[order], dz[order], gap[order]

    # jumps: neighbouring samples extremely close in angle but far apart in z
    if periodic:
        nxt_t = np.append(thetas[1:], thetas[0] + 2 * np.pi)
        nxt_z = np.roll(z, -1)
    else:
        nxt_t, nxt_z = thetas[1:], z[1:]
    m = nxt_t.size
    width = nxt_t - thetas[:m]
    chord = np.abs(nxt_z - z[:m])
    jump_idx = np.nonzero((width <= 2 * _THETA_FLOOR) & (chord > max(h_max, 1e-10 * scale)))[0]
    jumps = np.zeros(thetas.size, dtype=bool)
    jumps[jump_idx] = True
    segments = []
    gtol = _gap_tol(A)
    for i in jump_idx:
        j = (i + 1) % thetas.size
        tm = thetas[i] + width[i] / 2
        z0, v0, z1, v1 = z[i], V[i], nxt_z[i], V[j]
        a0, a1, q0, q1 = _segment_at(A, tm)
        # orient to match the traversal order
        if abs(a0 - z0) + abs(a1 - z1) > abs(a1 - z0) + abs(a0 - z1):
            a0, a1, q0, q1 = a1, a0, q1, q0
        z0, z1, v0, v1 = a0, a1, q0, q1
        segments.append(Segment(float(np.mod(tm, 2 * np.pi)), complex(z0), complex(z1), v0, v1))

    if mode is FieldMode.REAL:
        segments.extend(_real_axis_segments(A, thetas, z, gap, gtol))

    bd = BoundaryApproximant(
        A=A, mode=mode, thetas=thetas, z=z, V=V, dz=dz, gap=gap, segments=segments, corners=[],
        domain=domain, periodic=periodic, scale=scale, jumps=jumps,
    )
    bd.corners = _find_corners(bd)
    return bd


def _real_axis_segments(A, thetas, z, gap, gtol) -> list[Segment]:
    """Vertical segments crossing the real axis at the ends of the real-mode domain.

    Only the half with Im(z) >= 0 is kept.
    """
    out = []
    for i in (0, thetas.size - 1):
        if gap[i] > gtol:
            continue
        ends = _segment_at(A, thetas[i])
        a0, a1, q0, q1 = ends
        if a0.imag > a1.imag:
            a0, a1, q0, q1 = a1, a0, q1, q0
        if abs(a1 - a0) <= 1e-10 * (1 + np.linalg.norm(A)):
            continue
        mid = 0.5 * (a0 + a1)
        vm = (q0 + q1) / np.sqrt(2)
        # keep the half with Im >= 0; the midpoint of a conjugate-symmetric segment is real
        out.append(Segment(float(thetas[i]), complex(mid.real), complex(a1), vm, q1))
    return out


def _flat_mask(bd: BoundaryApproximant) -> np.ndarray:
    return np.abs(bd.dz) <= 1e-9 * bd.scale


def _find_corners(bd: BoundaryApproximant) -> list[BoundaryPoint]:
    """Corners: runs of samples where z does not move with theta."""
    if bd.degenerate:
        return []
    flat = _flat_mask(bd)
    corners = []
    n = flat.size
    i = 0
    while i < n:
        if not flat[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and flat[j + 1] and not bd.jumps[j]:
            j += 1
        k = (i + j) // 2
        corners.append(BoundaryPoint(complex(bd.z[k]), float(bd.thetas[k]), bd.V[k], is_corner=True, kind="corner"))
        i = j + 1
    if bd.periodic and len(corners) > 1 and flat[0] and flat[-1] and not bd.jumps[-1]:
        corners.pop()  # first and last runs are the same corner
    # merge corners at the same location (e.g. separated by an uninformative sample)
    merged: list[BoundaryPoint] = []
    for c in corners:
        if not any(abs(c.z - d.z) <= 1e-10 * bd.scale for d in merged):
            merged.append(c)
    return merged


# ---------------------------------------------------------------- |p| on bd W(A)


def _phi_and_slope(p, z, dz):
    pz = eval_poly(p, z)
    dpz = eval_poly_deriv(p, z)
    g = np.abs(pz)
    # d/dtheta |p(z)|^2
    s = 2 * np.real(np.conj(pz) * dpz * dz)
    noise = 1e-11 * (np.abs(pz) * np.abs(dpz) * (np.abs(dz) + 1e-300) + 1e-300)
    return g, s, noise


def _refine_arc_max(p, A, t_lo, t_hi):
    def slope(t):
        z, _, dz, _ = _sweep1(A, t)
        pz = eval_poly(p, z)
        return float(2 * np.real(np.conj(pz) * eval_poly_deriv(p, z) * dz))

    try:
        t = scipy.optimize.brentq(slope, t_lo, t_hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    except ValueError:
        # no sign change after all; fall back to a bounded scalar search
        res = scipy.optimize.minimize_scalar(
            lambda t: -abs(eval_poly(p, _sweep1(A, t)[0])),
            bounds=(t_lo, t_hi), method="bounded", options={"xatol": THETA_TOL},
        )
        t = float(res.x)
    z, v, dz, _ = _sweep1(A, t)
    return float(t), complex(z), v, complex(dz)


def _segment_maxima(p, seg: Segment) -> list[tuple[float, bool]]:
    """Local maxima of |p| along a segment as (t, interior) pairs, endpoints included."""
    d = seg.z1 - seg.z0
    # q(t) = p(z0 + t d) as a polynomial in t, then |q|^2 = q * conj(q)
    c = as_poly(p).coeffs
    q = np.zeros(1, dtype=complex)
    for cj in c[::-1]:
        q = np.polynomial.polynomial.polymul(q, [seg.z0, d])
        q[0] += cj
    r = np.real(np.polynomial.polynomial.polymul(q, np.conj(q)))
    dr = np.polynomial.polynomial.polyder(r)
    out = []
    if np.any(dr):
        crit = np.polynomial.polynomial.polyroots(dr) if dr.size > 1 else np.array([])
        for t in crit:
            if abs(t.imag) < 1e-9 and 1e-9 < t.real < 1 - 1e-9:
                t = t.real
                if np.polynomial.polynomial.polyval(t, np.polynomial.polynomial.polyder(dr)) < 0:
                    out.append((float(t), True))
    out.append((0.0, False))
    out.append((1.0, False))
    return out


@dataclass
class _Search:
    value: float
    points: list[BoundaryPoint]
    local: list[BoundaryPoint]
    constant: bool


def _search(p, bd: BoundaryApproximant, floor: float = REFINE_FLOOR) -> _Search:
    """All candidate maximizers of |p| on the boundary.

    Arc brackets whose sampled |p| stays below ``floor`` times the sampled
    maximum are not refined; they cannot hold a near-maximal value.
    """
    p = as_poly(p)
    if p.is_zero():
        raise ValueError("zero polynomial")
    A = bd.A
    if bd.degenerate:
        z = complex(bd.z[0])
        val = float(abs(eval_poly(p, z)))
        pt = BoundaryPoint(z, float(bd.thetas[0]), bd.V[0], val, True, "corner")
        return _Search(val, [pt], [], True)

    g, s, noise = _phi_and_slope(p, bd.z, bd.dz)
    seg_vals = []
    for seg in bd.segments:
        for t, _ in _segment_maxima(p, seg):
            seg_vals.append(abs(eval_poly(p, seg.z0 + t * (seg.z1 - seg.z0))))
    gmax_all = max(g.max(), max(seg_vals, default=0.0))
    gmin_all = g.min()
    if gmax_all == 0.0 or (gmax_all - gmin_all) <= CONST_TOL * gmax_all and not bd.segments:
        i = int(np.argmax(g))
        pt = BoundaryPoint(complex(bd.z[i]), float(bd.thetas[i]), bd.V[i], float(g[i]), False, "arc")
        return _Search(float(g[i]), [pt], [], True)

    sign = np.where(s > noise, 1, np.where(s < -noise, -1, 0))
    floor = floor * g.max()
    local: list[BoundaryPoint] = []
    flat = _flat_mask(bd)
    nsamp = bd.thetas.size
    for run in bd.pieces:
        # pair each sample with the next one of nonzero slope, so a maximum
        # sitting exactly on a sample is still bracketed
        closed = run.size > 1 and run[-1] == run[0]
        nz = [i for i in (run[:-1] if closed else run) if sign[i] != 0]
        if closed and nz:
            nz.append(nz[0])
        for a, b in zip(nz[:-1], nz[1:]):
            if sign[a] > 0 and sign[b] < 0 and not (flat[a] and flat[b]) and max(g[a], g[b]) >= floor:
                t_lo = bd.thetas[a]
                t_hi = bd.thetas[b]
                if t_hi < t_lo:
                    t_hi += 2 * np.pi
                t, z, v, dzz = _refine_arc_max(p, A, t_lo, t_hi)
                corner = abs(dzz) <= 1e-9 * bd.scale
                if not corner:
                    local.append(BoundaryPoint(z, float(np.mod(t, 2 * np.pi)), v, float(abs(eval_poly(p, z))), False, "arc"))
        if not bd.periodic:
            # ends of the real-mode domain lie on the real axis; the mirror image
            # makes them interior points of the full boundary
            for end, nb in ((0, 1), (nsamp - 1, nsamp - 2)):
                if end in (run[0], run[-1]) and nsamp > 1 and not flat[end]:
                    if g[end] >= g[nb] and not any(abs(sg.theta - bd.thetas[end]) < 1e-12 for sg in bd.segments):
                        local.append(BoundaryPoint(complex(bd.z[end]), float(bd.thetas[end]), bd.V[end], float(g[end]), False, "endpoint"))

    for seg in bd.segments:
        for t, interior in _segment_maxima(p, seg):
            if interior:
                z, v = seg.point(t)
                local.append(BoundaryPoint(z, seg.theta, v, float(abs(eval_poly(p, z))), False, "segment"))

    candidates = list(local)
    for c in bd.corners:
        candidates.append(BoundaryPoint(c.z, c.theta, c.v, float(abs(eval_poly(p, c.z))), True, "corner"))
    for seg in bd.segments:
        for t in (0.0, 1.0):
            z, v = seg.point(t)
            candidates.append(BoundaryPoint(z, seg.theta, v, float(abs(eval_poly(p, z))), False, "segment"))

    # safety net: the best raw sample must not beat every candidate
    i = int(np.argmax(g))
    best = max((c.value for c in candidates), default=-np.inf)
    if g[i] > best * (1 + ARGMAX_RTOL):
        if flat[i]:
            candidates.append(BoundaryPoint(complex(bd.z[i]), float(bd.thetas[i]), bd.V[i], float(g[i]), True, "corner"))
        else:
            lo = bd.thetas[i - 1] if i > 0 else bd.thetas[i] - (bd.thetas[1] - bd.thetas[0])
            hi = bd.thetas[i + 1] if i + 1 < nsamp else bd.thetas[i] + (bd.thetas[i] - bd.thetas[i - 1])
            if not bd.periodic:
                lo, hi = max(lo, bd.domain[0]), min(hi, bd.domain[1])
            res = scipy.optimize.minimize_scalar(
                lambda t: -abs(eval_poly(p, _sweep1(A, t)[0])),
                bounds=(lo, hi), method="bounded", options={"xatol": THETA_TOL},
            )
            z, v, _, _ = _sweep1(A, res.x)
            val = float(abs(eval_poly(p, z)))
            t = res.x
            if val < g[i]:
                z, v, val, t = bd.z[i], bd.V[i], float(g[i]), bd.thetas[i]
            candidates.append(BoundaryPoint(complex(z), float(np.mod(t, 2 * np.pi)), v, val, False, "arc"))
        log.debug("sample maximum %.17g not bracketed by a detected local maximizer", g[i])

    value = max(c.value for c in candidates)
    points = [c for c in candidates if c.value >= value * (1 - ARGMAX_RTOL)]
    points = _dedupe(points, bd.scale)
    points.sort(key=lambda c: (-c.value, c.theta))
    return _Search(value, points, _dedupe(local, bd.scale), False)


def _dedupe(points: list[BoundaryPoint], scale: float) -> list[BoundaryPoint]:
    out: list[BoundaryPoint] = []
    for pt in sorted(points, key=lambda c: (-c.value, c.theta)):
        dup = next((k for k, q in enumerate(out) if abs(pt.z - q.z) <= 1e-9 * scale), None)
        if dup is None:
            out.append(pt)
        elif pt.is_corner and not out[dup].is_corner:
            # the same point seen as a corner carries more information
            out[dup] = pt
    return out


def sup_abs_poly(p: PolyLike, bd: BoundaryApproximant) -> tuple[float, list[BoundaryPoint]]:
    """max |p(z)| over the boundary and the points attaining it."""
    res = _search(p, bd)
    return res.value, res.points


def local_maximizers(p: PolyLike, bd: BoundaryApproximant) -> tuple[list[BoundaryPoint], bool]:
    """Strict local maximizers of |p| on the smooth parts of the boundary.

    Corners are excluded.  Returns the list and a flag that is True when
    |p| is numerically constant on the boundary (the list is then empty).
    """
    res = _search(p, bd, floor=0.0)
    return res.local, res.constant


@dataclass
class AttainmentSet:
    points: list[BoundaryPoint]
    epsilon: float
    global_value: float
    forgo: bool


def z_eps_set(p: PolyLike, A: np.ndarray, bd: Optional[BoundaryApproximant] = None, eps: float = 1e-4,
              mode: FieldMode = FieldMode.COMPLEX) -> AttainmentSet:
    """Local maximizers within relative eps of the global maximum, plus the global argmax."""
    if eps < 0:
        raise ValueError("eps must be >= 0")
    if bd is None:
        bd = build_boundary(A, mode)
    res = _search(p, bd, floor=max(0.0, min(REFINE_FLOOR, 1 - eps)))
    thresh = (1 - eps) * res.value
    pts = list(res.points)
    if eps > 0:
        pts += [c for c in res.local if c.value >= thresh]
    pts = _dedupe(pts, bd.scale)
    if bd.mode is FieldMode.REAL:
        pts = [c for c in pts if c.z.imag >= -1e-12 * bd.scale]
    return AttainmentSet(pts, eps, res.value, res.constant)
