"""Acceptance criteria 1-10, one reported pass/fail line each.

The four 200-run sweeps are cached under .sweep_cache (see sweep_cache.py);
a cold run takes about 40 minutes on one core.
"""

import numpy as np
import pytest

from conftest import fd_gradient
from qp_oracles import face_enumeration, simplex_grid
from sweep_cache import cached_sweep
from crouzeix.fov import build_boundary
from crouzeix.polymat import (
    CrabbDisk,
    IceCreamCone,
    Layout,
    Polynomial,
    StructuredMatrixPoint,
    _numerical_radius,
    assemble_reference,
    crabb_matrix,
)
from crouzeix.ratio import evaluate_point
from crouzeix.stationarity import min_norm_point, point_report


def plateau_near(result, value, tol, min_count=3):
    hits = [p for p in result.plateaus if abs(p.value - value) <= tol and p.count >= min_count]
    return hits[0] if hits else None


def plateau_runs(result, pl):
    by_index = {r.index: r for r in result.records}
    return [by_index[idx] for rank, f, idx in result.sorted_f[pl.ranks[0] - 1: pl.ranks[1]]]


# ----------------------------------------------------------------- 1


def test_criterion_1_crabb_exactness(report_criterion):
    worst_f = worst_r = 0.0
    for k in range(2, 7):
        c = np.zeros(k)
        c[-1] = 1.0
        pt = StructuredMatrixPoint(Polynomial(c), crabb_matrix(k), "real")
        ev = evaluate_point(pt, gradient=False)
        worst_f = max(worst_f, abs(ev.f - 0.5))
        for mode in ("real", "complex"):
            bd = build_boundary(crabb_matrix(k), mode)
            worst_r = max(worst_r, float(np.max(np.abs(np.abs(bd.z) - 1))))
    ok = worst_f <= 1e-7 and worst_r <= 1e-7
    report_criterion(1, ok, f"k=2..6: max|f-0.5|={worst_f:.2e}, max||z|-1|={worst_r:.2e} (tol 1e-7)")
    assert ok


# ----------------------------------------------------------------- 2


def test_criterion_2_half_family(report_criterion):
    rng = np.random.default_rng(2)
    worst = 0.0
    for trial in range(20):
        k = int(rng.integers(2, 4))
        n = int(rng.integers(k, 6))
        lam = complex(rng.standard_normal(), rng.standard_normal())
        beta = complex(rng.standard_normal(), rng.standard_normal()) * np.exp(rng.standard_normal())
        U, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
        B = None
        if n > k:
            B = rng.standard_normal((n - k, n - k)) + 1j * rng.standard_normal((n - k, n - k))
            B *= rng.uniform(0.1, 0.99) / _numerical_radius(B)
        m = int(rng.integers(k - 1, 5))
        pt = assemble_reference(CrabbDisk(k, lam, beta, U, B), n, m)
        worst = max(worst, abs(evaluate_point(pt, gradient=False).f - 0.5))
    ok = worst <= 1e-6
    report_criterion(2, ok, f"20 assemblies: max|f-0.5|={worst:.2e} (tol 1e-6)")
    assert ok


# ----------------------------------------------------------------- 3


def test_criterion_3_gradient_fd(report_criterion):
    rng = np.random.default_rng(3)
    errs = []
    for trial in range(100):
        mode = ("real", "complex")[trial % 2]
        n, m = int(rng.integers(2, 5)), int(rng.integers(1, 5))
        lay = Layout(n, m, mode)
        x = rng.standard_normal(lay.size)
        ev = evaluate_point(lay.point(x))
        fd = fd_gradient(lambda y: evaluate_point(lay.point(y), gradient=False).f, x, 1e-6)
        errs.append(np.linalg.norm(ev.gradient - fd) / np.linalg.norm(fd))
    errs = np.array(errs)
    ok = errs.max() <= 1e-5
    report_criterion(3, ok, f"100 points: max rel err={errs.max():.2e}, median={np.median(errs):.2e} (tol 1e-5)")
    assert ok


# ----------------------------------------------------------------- 4


def ice_cream_configs(count, rng):
    out = []
    while len(out) < count:
        mode = ("real", "complex")[len(out) % 2]
        nb = int(rng.integers(1, 4))
        if mode == "real":
            B = rng.standard_normal((nb, nb))
            lam = complex(rng.standard_normal())
        else:
            B = rng.standard_normal((nb, nb)) + 1j * rng.standard_normal((nb, nb))
            lam = complex(rng.standard_normal(), rng.standard_normal())
        mu = np.trace(B) / nb
        direction = 1.0 if mode == "real" else np.exp(1j * rng.uniform(0, 2 * np.pi))
        vertex = mu + direction * (3 * np.linalg.norm(B - mu * np.eye(nb), 2) + 1 + abs(lam))
        m = int(rng.integers(1, 4))
        out.append(assemble_reference(IceCreamCone(vertex, B), nb + 1, m))
    return out


def test_criterion_4_ice_cream_stationarity(report_criterion):
    rng = np.random.default_rng(4)
    gmax = dmax = 0.0
    counts = []
    for pt in ice_cream_configs(10, rng):
        ev = evaluate_point(pt)
        gmax = max(gmax, float(np.linalg.norm(ev.gradient)))
        rep = point_report(pt)
        counts.append(rep.z_count)
        dmax = max(dmax, rep.d_norm if rep.d_norm is not None else np.inf)
    ok = gmax <= 1e-7 and dmax <= 1e-7 and all(c == 1 for c in counts)
    report_criterion(4, ok, f"10 cones: max||grad f||={gmax:.2e}, max||d||={dmax:.2e}, |Z_eps|={sorted(set(counts))}")
    assert ok


# ----------------------------------------------------------------- 5, 8


@pytest.fixture(scope="module")
def sweep_r23():
    return cached_sweep(2, 3, "real")


def test_criterion_5_plateaus_real_2_3(sweep_r23, report_criterion):
    targets = [(0.5, 5e-4), (0.7132186, 1e-4), (0.84375, 1e-4), (1.0, 1e-4)]
    found = [plateau_near(sweep_r23, v, tol) for v, tol in targets]
    ok = all(found)
    desc = ", ".join(f"{v}: " + (f"{p.value:.8f} x{p.count}" if p else "missing") for (v, _), p in zip(targets, found))
    report_criterion(5, ok, desc)
    assert ok


def test_criterion_8_stationarity_at_plateaus(sweep_r23, report_criterion):
    runs = [r for r in sweep_r23.records if r.converged and r.classification != "crabb_disk"]
    bad = [r for r in runs if r.forgo or r.d_norm is None or r.d_norm > 1e-3]
    worst = max((r.d_norm for r in runs if r.d_norm is not None), default=0.0)
    ok = bool(runs) and not bad
    report_criterion(8, ok, f"{len(runs)} converged non-Crabb runs, max||d||={worst:.2e}, "
                            f"{len(bad)} above 1e-3 (eps=1e-4)")
    assert ok


# ----------------------------------------------------------------- 6, 7


def test_criterion_6_plateau_real_3_3(report_criterion):
    res = cached_sweep(3, 3, "real")
    pl = plateau_near(res, 0.6978, 2e-4)
    vals = ", ".join(f"{p.value:.6f}x{p.count}" for p in res.plateaus)
    report_criterion(6, pl is not None, f"plateau near 0.6978: {pl.value:.7f} x{pl.count}" if pl else
                     f"no plateau within 2e-4 of 0.6978; plateaus: {vals}")
    assert pl is not None


def test_criterion_7_plateau_real_2_2(report_criterion):
    res = cached_sweep(2, 2, "real")
    pl = plateau_near(res, 0.7698, 2e-4)
    vals = ", ".join(f"{p.value:.6f}x{p.count}" for p in res.plateaus)
    report_criterion(7, pl is not None, f"plateau near 0.7698: {pl.value:.7f} x{pl.count}" if pl else
                     f"no plateau within 2e-4 of 0.7698; plateaus: {vals}")
    assert pl is not None


# ----------------------------------------------------------------- 9


def test_criterion_9_qp_oracle(report_criterion):
    rng = np.random.default_rng(9)
    worst = 0.0
    grid_ok = True
    for trial in range(50):
        k, dim = int(rng.integers(1, 6)), int(rng.integers(1, 9))
        G = rng.standard_normal((k, dim)) + rng.standard_normal(dim) * rng.uniform(0, 2)
        d, w = min_norm_point(G)
        _, exact = face_enumeration(G)
        worst = max(worst, abs(np.linalg.norm(d) - exact))
        if k <= 3:
            # the lattice value is an upper bound within its resolution
            g = simplex_grid(G, 1e-3)
            scale = np.max(np.linalg.norm(G, axis=1))
            grid_ok &= np.linalg.norm(d) <= g + 1e-12 and g - np.linalg.norm(d) <= 1e-3 * scale
    ok = worst <= 1e-6 and grid_ok
    report_criterion(9, ok, f"50 sets: max | ||d|| - exact | = {worst:.2e} (tol 1e-6); "
                            f"step-1e-3 lattice bound consistent: {grid_ok}")
    assert ok


# ----------------------------------------------------------------- 10


def test_criterion_10_complex_agreement(sweep_r23, report_criterion):
    res = cached_sweep(2, 3, "complex")
    targets = [0.5, 0.7132186, 0.84375, 1.0]
    found = [plateau_near(res, v, 1e-3) for v in targets]
    zcounts = {}
    for v, pl in zip(targets[1:3], found[1:3]):
        if pl is not None:
            zcounts[v] = sorted({r.z_count for r in plateau_runs(res, pl)}, key=lambda z: (z is None, z))
    ok = all(found) and all(zc == [2] for zc in zcounts.values()) and len(zcounts) == 2
    desc = ", ".join(f"{v}: " + (f"{p.value:.7f} x{p.count}" if p else "missing") for v, p in zip(targets, found))
    report_criterion(10, ok, f"{desc}; |Z_eps| at 0.713/0.844 plateaus: {zcounts}")
    assert ok
