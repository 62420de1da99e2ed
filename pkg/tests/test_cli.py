import json

import numpy as np
import pytest

from crouzeix import figures
from crouzeix.cli import build_config, main, make_parser
from crouzeix.polymat import FieldMode, Polynomial, StructuredMatrixPoint, crabb_matrix


def test_config_file_and_overrides(tmp_path):
    toml = tmp_path / "c.toml"
    toml.write_text('[sweep]\nn = 3\nm = 2\nfield = "complex"\nruns = 7\nalpha = 1.5\n')
    args = make_parser().parse_args(["sweep", "--config", str(toml), "--runs", "4", "--seed", "3"])
    cfg = build_config(args)
    assert (cfg.n, cfg.m, cfg.field_mode, cfg.run_count, cfg.base_seed, cfg.alpha) == (
        3, 2, FieldMode.COMPLEX, 4, 3, 1.5)
    js = tmp_path / "c.json"
    js.write_text(json.dumps({"n": 2, "m": 1, "eps": 1e-3}))
    cfg = build_config(make_parser().parse_args(["sweep", "--config", str(js), "--field", "real"]))
    assert cfg.eps == 1e-3 and cfg.field_mode is FieldMode.REAL


def test_cli_round_trip(tmp_path, capsys):
    out = tmp_path / "sw"
    assert main(["sweep", "--n", "2", "--m", "1", "--runs", "3", "--outdir", str(out)]) == 0
    text = capsys.readouterr().out
    assert "plateau f=0.5" in text
    assert (out / "sorted_f.csv").exists() and (out / "sweep_sorted_f.csv").exists()

    assert main(["report", str(out)]) == 0
    assert "0.5000000000" in capsys.readouterr().out

    rec = out / "runs" / "run_00000.json"
    assert main(["verify", str(rec), "--eps", "1e-3"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["epsilon"] == 1e-3 and rep["forgo"]

    layers = tmp_path / "fov.csv"
    assert main(["fov", "--record", str(rec), "--out", str(layers)]) == 0
    data = figures.read_layers(layers)
    assert data["boundary"].size > 100
    assert np.allclose(np.abs(data["boundary"] - data["eigenvalues"].mean()),
                       np.abs(data["boundary"] - data["eigenvalues"].mean()).mean(), rtol=1e-2)


def test_cli_minimize(tmp_path, capsys):
    path = tmp_path / "one.json"
    assert main(["minimize", "--n", "2", "--m", "1", "--index", "2", "--out", str(path)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["index"] == 2 and path.exists()


def test_cli_fov_stdout(capsys):
    assert main(["fov", "--crabb", "3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "layer,re,im"
    assert any(line.startswith("eigenvalues") for line in lines)


def test_sweep_needs_outdir(capsys):
    assert main(["sweep", "--n", "2", "--m", "1", "--runs", "1"]) == 2


def test_crabb_figure_layers(tmp_path):
    pt = StructuredMatrixPoint(Polynomial([0, 0, 1]), crabb_matrix(3), "real")
    layers = figures.configuration_layers(pt)
    assert np.allclose(np.abs(layers["boundary"]), 1, atol=1e-8)
    assert np.allclose(layers["eigenvalues"], 0, atol=1e-5)
    assert np.allclose(layers["roots"], 0)
    assert layers["zeps"].size >= 1
    path = figures.write_layers(layers, tmp_path / "crabb.csv")
    back = figures.read_layers(path)
    for k in figures.LAYERS:
        assert np.array_equal(back[k], np.asarray(layers[k], dtype=complex))


def test_svg_output(tmp_path):
    pytest.importorskip("matplotlib")
    pt = StructuredMatrixPoint(Polynomial([0, 1]), crabb_matrix(2), "real")
    paths = figures.emit_figures(pt=pt, outdir=tmp_path, svg=True)
    assert any(p.suffix == ".svg" and p.stat().st_size > 0 for p in paths)
