"""Random-restart sweeps, run classification and persistence."""

from __future__ import annotations

import csv
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

import numpy as np

from .bfgs import OptimizerOptions, minimize
from .polymat import FieldMode, Layout, StructuredMatrixPoint
from .ratio import RatioEvaluation, evaluate_point
from .stationarity import DEFAULT_EPS, stationarity_report

log = logging.getLogger(__name__)

SCHEMA = "crouzeix.run/1"
PLATEAU_TOL = 1e-4
PLATEAU_MIN_RUNS = 3
CRABB_F_TOL = 5e-4
# f is stationary in the ellipticity of W(A), so runs with f within 1e-7 of 0.5
# can still carry a radius spread of a few 1e-4
DISK_TOL = 1e-2
CONE_F_TOL = 1e-3


@dataclass
class SweepConfig:
    n: int
    m: int
    field_mode: FieldMode = FieldMode.REAL
    alpha: float = 2.0
    run_count: int = 200
    base_seed: int = 0
    normtol: float = 1e-8
    max_iters: int = 2000
    eps: float = DEFAULT_EPS
    outdir: Optional[str] = None
    workers: int = 1
    grid: Optional[int] = None
    plateau_tol: float = PLATEAU_TOL

    def __post_init__(self):
        self.field_mode = FieldMode(self.field_mode)
        if self.n < 2 or self.m < 1 or self.run_count < 1 or self.alpha < 0:
            raise ValueError("need n >= 2, m >= 1, run_count >= 1, alpha >= 0")

    @property
    def layout(self) -> Layout:
        return Layout(self.n, self.m, self.field_mode)

    def options(self) -> OptimizerOptions:
        return OptimizerOptions(normtol=self.normtol, max_iters=self.max_iters)

    @classmethod
    def from_mapping(cls, data: dict) -> "SweepConfig":
        aliases = {"field": "field_mode", "runs": "run_count", "seed": "base_seed"}
        known = {f.name for f in fields(cls)}
        kw = {}
        for key, val in data.items():
            key = aliases.get(key, key)
            if key not in known:
                raise ValueError(f"unknown config key {key!r}")
            kw[key] = val
        return cls(**kw)


@dataclass
class RunRecord:
    index: int
    seed: list[int]
    n: int
    m: int
    field_mode: str
    alpha: float
    numerator: Optional[float] = None
    denominator: Optional[float] = None
    f: Optional[float] = None
    reason: Optional[str] = None
    iterations: int = 0
    evaluations: int = 0
    z_count: Optional[int] = None
    d_norm: Optional[float] = None
    forgo: bool = False
    classification: Optional[str] = None
    params: Optional[list[float]] = None
    error: Optional[str] = None
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {"schema": SCHEMA, **asdict(self)}

    @classmethod
    def from_dict(cls, data: dict) -> "RunRecord":
        data = dict(data)
        schema = data.pop("schema", SCHEMA)
        if schema != SCHEMA:
            raise ValueError(f"unsupported record schema {schema!r}")
        data.pop("verify", None)
        return cls(**data)

    @property
    def layout(self) -> Layout:
        return Layout(self.n, self.m, FieldMode(self.field_mode))

    def point(self) -> StructuredMatrixPoint:
        if self.params is None:
            raise ValueError("record has no final parameters")
        return self.layout.point(np.asarray(self.params))

    @property
    def converged(self) -> bool:
        return self.error is None and self.reason in ("gradient_tol", "linesearch_failure")


def heavy_tail_sample(rng: np.random.Generator, alpha: float, size=None):
    """x * exp(alpha * x**2) with x standard normal."""
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    x = rng.standard_normal(size)
    return heavy_tail_transform(x, alpha)


def heavy_tail_transform(x, alpha: float):
    x = np.asarray(x, dtype=float)
    out = x * np.exp(alpha * x * x)
    return out[()] if out.ndim == 0 else out


def run_rng(base_seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([base_seed, index])


def random_init(rng: np.random.Generator, n: int, m: int, mode: FieldMode, alpha: float) -> StructuredMatrixPoint:
    lay = Layout(n, m, mode)
    return lay.point(heavy_tail_sample(rng, alpha, lay.size))


# ------------------------------------------------------------------ classification


def _full_boundary(ev: RatioEvaluation) -> np.ndarray:
    bd = ev.boundary
    pts = [bd.z]
    for s in bd.segments:
        pts.append(np.array([s.z0, s.z1]))
    z = np.concatenate(pts)
    if bd.mode is FieldMode.REAL:
        z = np.concatenate([z, np.conj(z)])
    return z


def circle_variation(ev: RatioEvaluation) -> float:
    """Relative spread of the boundary radius about the bounding-box center."""
    z = _full_boundary(ev)
    c = 0.5 * (z.real.max() + z.real.min()) + 0.5j * (z.imag.max() + z.imag.min())
    r = np.abs(z - c)
    rmax = r.max()
    return float((rmax - r.min()) / rmax) if rmax > 0 else np.inf


def vertex_attainment(ev: RatioEvaluation, rtol: float = 1e-6) -> bool:
    """True when |p| peaks at a corner of W(A), i.e. at a normal eigenvalue."""
    pt = ev.attainment.points[0]
    if pt.is_corner:
        return True
    z = _full_boundary(ev)
    diam = float(np.max(np.abs(z - z.mean()))) * 2 or 1.0
    eig = np.linalg.eigvals(ev.A)
    return bool(np.min(np.abs(eig - pt.z)) <= rtol * diam)


def classify(record: RunRecord, ev: Optional[RatioEvaluation] = None) -> str:
    if record.f is None:
        return "other"
    if ev is None:
        ev = evaluate_point(record.point(), gradient=False)
    f = record.f
    if abs(f - 0.5) <= CRABB_F_TOL and circle_variation(ev) <= DISK_TOL:
        return "crabb_disk"
    if abs(f - 1.0) <= CONE_F_TOL and vertex_attainment(ev):
        return "ice_cream"
    return "other"


# ------------------------------------------------------------------ runs


def run_single(cfg: SweepConfig, index: int) -> RunRecord:
    """One BFGS run from a heavy-tailed start; failures are recorded, not raised."""
    lay = cfg.layout
    rec = RunRecord(index=index, seed=[cfg.base_seed, index], n=cfg.n, m=cfg.m,
                    field_mode=cfg.field_mode.value, alpha=cfg.alpha)
    t0 = time.perf_counter()
    try:
        start = random_init(run_rng(cfg.base_seed, index), cfg.n, cfg.m, cfg.field_mode, cfg.alpha)
        x0 = lay.to_vector(start.p.coeffs, start.A)

        def oracle(x):
            ev = evaluate_point(lay.point(x), grid=cfg.grid)
            return ev.f, ev.gradient

        trace = minimize(oracle, x0, cfg.options())
        rec.reason, rec.iterations, rec.evaluations = trace.reason, trace.iterations, trace.evaluations
        rec.params = trace.x.tolist()
        if trace.reason == "overflow_guard":
            return rec
        ev = evaluate_point(lay.point(trace.x), grid=cfg.grid, gradient=False)
        rec.numerator, rec.denominator, rec.f = ev.numerator, ev.denominator, ev.numerator / ev.denominator
        rep = stationarity_report(ev.p, ev.A, cfg.eps, ev=ev)
        rec.forgo = rep.forgo
        if not rep.forgo:
            rec.z_count, rec.d_norm = rep.z_count, rep.d_norm
        rec.classification = classify(rec, ev)
    except Exception as exc:  # one bad run must not kill the sweep
        log.warning("run %d failed: %s", index, exc)
        rec.error = f"{type(exc).__name__}: {exc}"
        if rec.reason is None and isinstance(exc, OverflowError):
            rec.reason = "overflow_guard"
    finally:
        rec.seconds = time.perf_counter() - t0
    return rec


@dataclass
class Plateau:
    value: float
    count: int
    lo: float
    hi: float
    ranks: tuple[int, int]


@dataclass
class SweepResult:
    config: SweepConfig
    records: list[RunRecord]
    sorted_f: list[tuple[int, float, int]] = field(default_factory=list)
    plateaus: list[Plateau] = field(default_factory=list)


def detect_plateaus(values, tol: float = PLATEAU_TOL, min_count: int = PLATEAU_MIN_RUNS) -> list[Plateau]:
    """Cluster sorted values; a cluster never spans more than ``tol``.

    Clusters are grown greedily from the smallest value and closed as soon
    as the next value lies more than ``tol`` above the cluster's first value.
    """
    v = np.sort(np.asarray([x for x in values if x is not None and np.isfinite(x)], dtype=float))
    out = []
    i = 0
    while i < v.size:
        j = i
        while j + 1 < v.size and v[j + 1] - v[i] <= tol:
            j += 1
        if j - i + 1 >= min_count:
            out.append(Plateau(float(np.median(v[i:j + 1])), j - i + 1, float(v[i]), float(v[j]), (i + 1, j + 1)))
        i = j + 1
    return out


def run_sweep(cfg: SweepConfig, progress: bool = False) -> SweepResult:
    indices = range(cfg.run_count)
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(run_single, [cfg] * cfg.run_count, indices))
    else:
        records = []
        for i in indices:
            records.append(run_single(cfg, i))
            if progress:
                r = records[-1]
                log.info("run %d: f=%s reason=%s (%.1fs)", i, r.f, r.reason, r.seconds)
    records.sort(key=lambda r: r.index)
    ok = [r for r in records if r.f is not None]
    ranked = sorted(ok, key=lambda r: (r.f, r.index))
    result = SweepResult(cfg, records)
    result.sorted_f = [(k + 1, r.f, r.index) for k, r in enumerate(ranked)]
    result.plateaus = detect_plateaus([r.f for r in ok], cfg.plateau_tol)
    if cfg.outdir:
        save_sweep(result, cfg.outdir)
    return result


# ------------------------------------------------------------------ persistence


def save_record(rec: RunRecord, path) -> None:
    Path(path).write_text(json.dumps(rec.to_dict(), indent=1))


def load_record(path) -> RunRecord:
    return RunRecord.from_dict(json.loads(Path(path).read_text()))


def save_sweep(result: SweepResult, outdir) -> None:
    out = Path(outdir)
    (out / "runs").mkdir(parents=True, exist_ok=True)
    for rec in result.records:
        save_record(rec, out / "runs" / f"run_{rec.index:05d}.json")
    with open(out / "sorted_f.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["rank", "f", "run_index"])
        for rank, f, idx in result.sorted_f:
            w.writerow([rank, repr(f), idx])
    cfg = asdict(result.config)
    cfg["field_mode"] = result.config.field_mode.value
    (out / "config.json").write_text(json.dumps(cfg, indent=1))
    (out / "plateaus.json").write_text(json.dumps([asdict(p) for p in result.plateaus], indent=1))


def load_sweep(outdir) -> SweepResult:
    out = Path(outdir)
    cfg = SweepConfig.from_mapping(json.loads((out / "config.json").read_text()))
    records = [load_record(p) for p in sorted((out / "runs").glob("run_*.json"))]
    ok = sorted((r for r in records if r.f is not None), key=lambda r: (r.f, r.index))
    res = SweepResult(cfg, records, [(k + 1, r.f, r.index) for k, r in enumerate(ok)])
    res.plateaus = detect_plateaus([r.f for r in ok], cfg.plateau_tol)
    return res


def plateau_table(result: SweepResult) -> list[dict]:
    """First and last run of every plateau, in the layout numer, denom, f, |Z_eps|, ||d||."""
    by_index = {r.index: r for r in result.records}
    letter = "R" if result.config.field_mode is FieldMode.REAL else "C"
    rows = []
    for pl in result.plateaus:
        for rank in sorted(set(pl.ranks)):
            _, f, idx = result.sorted_f[rank - 1]
            r = by_index[idx]
            rows.append({
                "mode": letter, "rank": rank, "run": idx, "numer": r.numerator, "denom": r.denominator,
                "f": r.f, "z_count": r.z_count, "d_norm": r.d_norm, "class": r.classification,
            })
    return rows


def format_table(rows: list[dict]) -> str:
    lines = [f"{'':2}{'rank':>6} {'run':>6} {'numer':>10} {'denom':>10} {'f':>13} {'|Z_eps|':>7} {'||d||':>10}"]
    for r in rows:
        zc = "" if r["z_count"] is None else str(r["z_count"])
        dn = "" if r["d_norm"] is None else f"{r['d_norm']:.3e}"
        lines.append(f"{r['mode']:2}{r['rank']:>6} {r['run']:>6} {r['numer']:>10.3e} {r['denom']:>10.3e} "
                     f"{r['f']:>13.10f} {zc:>7} {dn:>10}")
    return "\n".join(lines)
