"""Command line entry point: minimize, sweep, verify, fov, report."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import figures
from .harness import (
    RunRecord,
    SweepConfig,
    format_table,
    load_record,
    load_sweep,
    plateau_table,
    run_single,
    run_sweep,
    save_record,
)
from .polymat import FieldMode, StructuredMatrixPoint, as_poly, crabb_matrix
from .stationarity import DEFAULT_EPS, stationarity_report

log = logging.getLogger("crouzeix")

# flag name -> SweepConfig field
OVERRIDES = {
    "n": "n", "m": "m", "field": "field_mode", "alpha": "alpha", "runs": "run_count",
    "seed": "base_seed", "eps": "eps", "normtol": "normtol", "workers": "workers", "outdir": "outdir",
}


def load_config_file(path) -> dict:
    path = Path(path)
    if path.suffix.lower() == ".toml":
        try:
            import tomllib
        except ModuleNotFoundError:  # python < 3.11
            import tomli as tomllib
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    else:
        data = json.loads(path.read_text())
    # allow the keys to live under a [sweep] table
    return dict(data.get("sweep", data))


def build_config(args) -> SweepConfig:
    data = load_config_file(args.config) if getattr(args, "config", None) else {}
    for flag, name in OVERRIDES.items():
        val = getattr(args, flag, None)
        if val is not None:
            data.pop(flag, None)
            data[name] = val
    data.setdefault("n", 2)
    data.setdefault("m", 3)
    return SweepConfig.from_mapping(data)


def _add_config_flags(sp, runs=True):
    sp.add_argument("--config", help="TOML or JSON file with sweep settings")
    sp.add_argument("--n", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--field", choices=[m.value for m in FieldMode])
    sp.add_argument("--alpha", type=float)
    if runs:
        sp.add_argument("--runs", type=int)
        sp.add_argument("--workers", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--eps", type=float)
    sp.add_argument("--normtol", type=float)
    sp.add_argument("--outdir")


def _summary(rec: RunRecord) -> dict:
    keys = ("index", "f", "numerator", "denominator", "reason", "iterations", "z_count", "d_norm",
            "forgo", "classification", "error")
    return {k: getattr(rec, k) for k in keys}


def cmd_minimize(args) -> int:
    cfg = build_config(args)
    rec = run_single(cfg, args.index)
    out = args.out or (Path(cfg.outdir) / f"run_{rec.index:05d}.json" if cfg.outdir else None)
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        save_record(rec, out)
    print(json.dumps(_summary(rec), indent=1))
    return 0 if rec.error is None else 1


def cmd_sweep(args) -> int:
    cfg = build_config(args)
    if cfg.outdir is None:
        print("sweep needs --outdir (or outdir in the config)", file=sys.stderr)
        return 2
    res = run_sweep(cfg, progress=True)
    figures.emit_figures(result=res, outdir=cfg.outdir, stem="sweep", svg=args.svg)
    print(f"{len(res.records)} runs, {sum(r.error is not None for r in res.records)} errors")
    for pl in res.plateaus:
        print(f"plateau f={pl.value:.10f} runs={pl.count} ranks={pl.ranks[0]}-{pl.ranks[1]}")
    return 0


def cmd_verify(args) -> int:
    rec = load_record(args.record)
    pt = rec.point()
    rep = stationarity_report(pt.p, pt.A, args.eps, pt.mode)
    out = {"index": rec.index, "f": rec.f, **rep.to_dict()}
    print(json.dumps(out, indent=1))
    return 0


def _fov_point(args) -> StructuredMatrixPoint:
    if args.record:
        return load_record(args.record).point()
    if args.crabb:
        k = args.crabb
        c = np.zeros(k)
        c[-1] = 1.0
        return StructuredMatrixPoint(as_poly(c), crabb_matrix(k), FieldMode.REAL)
    raise SystemExit("fov needs --record or --crabb")


def cmd_fov(args) -> int:
    pt = _fov_point(args)
    layers = figures.configuration_layers(pt, args.eps)
    if args.out:
        figures.write_layers(layers, args.out)
        if args.svg:
            figures._svg_layers(layers, Path(args.out).with_suffix(".svg"))
    else:
        figures.write_layers(layers, sys.stdout)
    return 0


def cmd_report(args) -> int:
    res = load_sweep(args.outdir)
    print(format_table(plateau_table(res)))
    print("rows are the first and last sorted run of each plateau "
          f"(clusters of >= 3 values within {res.config.plateau_tol:g})")
    return 0


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="crouzeix", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("minimize", help="one BFGS run from a heavy-tailed start")
    _add_config_flags(sp, runs=False)
    sp.add_argument("--index", type=int, default=0, help="run index (selects the start)")
    sp.add_argument("--out", help="write the run record here")
    sp.set_defaults(func=cmd_minimize)

    sp = sub.add_parser("sweep", help="batch of random restarts")
    _add_config_flags(sp)
    sp.add_argument("--svg", action="store_true", help="also render the sorted values")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", help="stationarity of a saved run record")
    sp.add_argument("record")
    sp.add_argument("--eps", type=float, default=DEFAULT_EPS)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("fov", help="field-of-values boundary and figure layers")
    sp.add_argument("--record")
    sp.add_argument("--crabb", type=int, help="Crabb matrix of this order with p = z^(k-1)")
    sp.add_argument("--eps", type=float, default=DEFAULT_EPS)
    sp.add_argument("--out", help="CSV path (stdout if omitted)")
    sp.add_argument("--svg", action="store_true")
    sp.set_defaults(func=cmd_fov)

    sp = sub.add_parser("report", help="plateau summary of a saved sweep")
    sp.add_argument("outdir")
    sp.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
