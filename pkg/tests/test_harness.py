import json

import numpy as np
import pytest

from crouzeix import harness
from crouzeix.harness import (
    RunRecord,
    SweepConfig,
    classify,
    detect_plateaus,
    format_table,
    heavy_tail_sample,
    heavy_tail_transform,
    load_record,
    load_sweep,
    plateau_table,
    random_init,
    run_rng,
    run_single,
    run_sweep,
    save_record,
)
from crouzeix.polymat import FieldMode, crabb_matrix
from crouzeix.ratio import crouzeix_ratio


def test_heavy_tail_formula():
    assert heavy_tail_transform(0.0, 2.0) == 0.0
    assert heavy_tail_transform(1.0, 2.0) == pytest.approx(np.exp(2.0))
    with pytest.raises(ValueError):
        heavy_tail_sample(np.random.default_rng(0), -1.0)


def test_heavy_tail_alpha_zero_is_normal():
    x = heavy_tail_sample(np.random.default_rng(1), 0.0, 100_000)
    assert abs(x.mean()) < 0.02 and abs(x.var() - 1) < 0.02


@pytest.mark.parametrize("mode,count", [("real", 8), ("complex", 14)])
def test_random_init_parameter_count(mode, count):
    pt = random_init(run_rng(0, 0), 2, 3, mode, 2.0)
    assert pt.layout.size == count
    x = pt.layout.to_vector(pt.p.coeffs, pt.A)
    assert np.count_nonzero(x) == count
    if mode == "real":
        assert pt.A[1, 0] != 0 and pt.A.dtype == complex
    else:
        assert pt.A[1, 0] == 0


def test_random_init_deterministic():
    a = random_init(run_rng(7, 3), 3, 2, "complex", 2.0)
    b = random_init(run_rng(7, 3), 3, 2, "complex", 2.0)
    assert np.array_equal(a.A, b.A) and np.array_equal(a.p.coeffs, b.p.coeffs)
    c = random_init(run_rng(7, 4), 3, 2, "complex", 2.0)
    assert not np.array_equal(a.A, c.A)


def test_config_validation_and_aliases():
    with pytest.raises(ValueError):
        SweepConfig(1, 3)
    with pytest.raises(ValueError):
        SweepConfig(2, 0)
    with pytest.raises(ValueError):
        SweepConfig(2, 3, run_count=0)
    with pytest.raises(ValueError):
        SweepConfig(2, 3, alpha=-1)
    cfg = SweepConfig.from_mapping({"n": 3, "m": 2, "field": "complex", "runs": 5, "seed": 9})
    assert cfg.field_mode is FieldMode.COMPLEX and cfg.run_count == 5 and cfg.base_seed == 9
    with pytest.raises(ValueError):
        SweepConfig.from_mapping({"n": 2, "m": 2, "bogus": 1})


def test_detect_plateaus():
    vals = [0.5, 0.50001, 0.50002, 0.7, 0.84, 0.84375, 0.84376, 0.843755, 1.0]
    pls = detect_plateaus(vals, 1e-4)
    assert [p.count for p in pls] == [3, 3]
    assert pls[0].value == pytest.approx(0.50001)
    # never merges values further apart than tol
    chain = np.arange(10) * 0.6e-4
    for p in detect_plateaus(chain, 1e-4, min_count=1):
        assert p.hi - p.lo <= 1e-4


def test_classify_examples():
    ev = crouzeix_ratio([0, 1], crabb_matrix(2))
    rec = RunRecord(0, [0, 0], 2, 1, "real", 2.0, f=ev.f)
    assert classify(rec, ev) == "crabb_disk"
    ev = crouzeix_ratio([0, 1], np.diag([0.0, 5.0]))
    rec.f = ev.f
    assert classify(rec, ev) == "ice_cream"
    ev = crouzeix_ratio([0, 1], np.array([[0.0, 2.0], [0.0, 1.0]]))
    rec.f = ev.f
    assert classify(rec, ev) == "other"


@pytest.fixture(scope="module")
def small_sweep(tmp_path_factory):
    out = tmp_path_factory.mktemp("sweep")
    cfg = SweepConfig(2, 1, "real", run_count=3, base_seed=5, outdir=str(out))
    return run_sweep(cfg), out


def test_run_single_crabb_basin(small_sweep):
    res, _ = small_sweep
    for r in res.records:
        assert r.error is None and r.converged
        assert r.f == pytest.approx(0.5, abs=1e-4)
        assert r.classification == "crabb_disk"
        assert r.forgo and r.d_norm is None
        assert r.f == r.numerator / r.denominator


def test_run_single_deterministic(small_sweep):
    res, _ = small_sweep
    again = run_single(res.config, 1)
    a, b = again.to_dict(), res.records[1].to_dict()
    a.pop("seconds"), b.pop("seconds")
    assert a == b


def test_sweep_artifacts(small_sweep):
    res, out = small_sweep
    assert sorted((out / "runs").iterdir())
    rows = (out / "sorted_f.csv").read_text().splitlines()
    assert rows[0] == "rank,f,run_index" and len(rows) == 4
    fs = [float(r.split(",")[1]) for r in rows[1:]]
    assert fs == sorted(fs)
    back = load_sweep(out)
    assert [r.to_dict() for r in back.records] == [r.to_dict() for r in res.records]
    assert len(back.plateaus) == 1 and back.plateaus[0].count == 3
    text = format_table(plateau_table(back))
    assert "0.5000000000" in text


def test_record_round_trip(tmp_path, small_sweep):
    res, _ = small_sweep
    path = tmp_path / "r.json"
    save_record(res.records[0], path)
    data = json.loads(path.read_text())
    assert data["schema"] == harness.SCHEMA
    assert load_record(path) == res.records[0]
    data["schema"] = "other/9"
    with pytest.raises(ValueError):
        RunRecord.from_dict(data)


def test_overflow_run_recorded(monkeypatch):
    def boom(*a, **k):
        raise OverflowError("parameter magnitude exceeds limit")

    monkeypatch.setattr(harness, "evaluate_point", boom)
    rec = run_single(SweepConfig(2, 1, run_count=1), 0)
    assert rec.reason == "overflow_guard"
    assert rec.error and rec.z_count is None and rec.d_norm is None and rec.f is None


def test_parallel_matches_serial(tmp_path):
    cfg = SweepConfig(2, 1, "real", run_count=2, base_seed=11, workers=2)
    par = run_sweep(cfg)
    cfg.workers = 1
    ser = run_sweep(cfg)
    strip = lambda rs: [{k: v for k, v in r.to_dict().items() if k != "seconds"} for r in rs]
    assert strip(par.records) == strip(ser.records)
