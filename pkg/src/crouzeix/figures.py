"""Figure data as CSV layers, with an optional matplotlib rendering."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .fov import build_boundary, z_eps_set
from .polymat import StructuredMatrixPoint, poly_roots

LAYERS = ("boundary", "eigenvalues", "roots", "zeps")


def configuration_layers(pt: StructuredMatrixPoint, eps: float = 1e-4, tol: float = 1e-6) -> dict[str, np.ndarray]:
    """Boundary polyline, eigenvalues of A, finite roots of p and the Z_eps points."""
    bd = build_boundary(pt.A, pt.mode, tol=tol)
    att = z_eps_set(pt.p, pt.A, bd, eps)
    roots, _ = poly_roots(pt.p)
    zeps = np.array([c.z for c in att.points], dtype=complex)
    if pt.mode.value == "real" and zeps.size:
        # the conjugate points are attained as well
        zeps = np.concatenate([zeps, np.conj(zeps[np.abs(zeps.imag) > 0])])
    return {
        "boundary": bd.polyline(),
        "eigenvalues": np.linalg.eigvals(pt.A),
        "roots": roots,
        "zeps": zeps,
    }


def write_layers(layers: dict[str, np.ndarray], path):
    """CSV with columns layer, re, im; ``path`` may also be an open text stream."""
    if hasattr(path, "write"):
        _write_layer_rows(layers, path)
        return path
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        _write_layer_rows(layers, fh)
    return path


def _write_layer_rows(layers, fh) -> None:
    w = csv.writer(fh)
    w.writerow(["layer", "re", "im"])
    for name in LAYERS:
        for z in np.atleast_1d(layers.get(name, [])):
            w.writerow([name, repr(float(np.real(z))), repr(float(np.imag(z)))])


def read_layers(path) -> dict[str, np.ndarray]:
    out: dict[str, list] = {name: [] for name in LAYERS}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            out[row["layer"]].append(float(row["re"]) + 1j * float(row["im"]))
    return {k: np.asarray(v, dtype=complex) for k, v in out.items()}


def write_sorted_values(sorted_f: Iterable[tuple[int, float, int]], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["rank", "f", "run_index"])
        for rank, f, idx in sorted_f:
            w.writerow([rank, repr(float(f)), idx])
    return path


def emit_figures(result=None, pt: Optional[StructuredMatrixPoint] = None, outdir=".", stem: str = "fig",
                 svg: bool = False, eps: float = 1e-4) -> list[Path]:
    """Write sorted-values data for a sweep and/or configuration layers for one pair."""
    outdir = Path(outdir)
    written = []
    if result is not None:
        written.append(write_sorted_values(result.sorted_f, outdir / f"{stem}_sorted_f.csv"))
        if svg:
            written.append(_svg_sorted(result.sorted_f, outdir / f"{stem}_sorted_f.svg"))
    if pt is not None:
        layers = configuration_layers(pt, eps)
        written.append(write_layers(layers, outdir / f"{stem}_fov.csv"))
        if svg:
            written.append(_svg_layers(layers, outdir / f"{stem}_fov.svg"))
    return written


def _svg_sorted(sorted_f, path) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    data = np.asarray([(r, f) for r, f, _ in sorted_f])
    fig, ax = plt.subplots(figsize=(5, 4))
    if data.size:
        ax.plot(data[:, 0], data[:, 1], ".", ms=3)
    ax.set_xlabel("run (sorted)")
    ax.set_ylabel("final f")
    fig.savefig(path)
    plt.close(fig)
    return Path(path)


def _svg_layers(layers, path) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 5))
    b = layers["boundary"]
    ax.plot(b.real, b.imag, "b-")
    e = layers["eigenvalues"]
    ax.plot(e.real, e.imag, "b*")
    r = layers["roots"]
    ax.plot(r.real, r.imag, "ro", mfc="none")
    z = layers["zeps"]
    ax.plot(z.real, z.imag, "kd")
    ax.set_aspect("equal", adjustable="datalim")
    fig.savefig(path)
    plt.close(fig)
    return Path(path)
