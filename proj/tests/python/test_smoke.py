"""Smoke tests for the python bindings."""

import math

import pytest

import memlane


def test_partition():
    assert memlane.partition(10, 3) == [4, 3, 3]
    assert memlane.partition(8, 8) == [1] * 8
    with pytest.raises(ValueError):
        memlane.partition(3, 4)


def test_layout_residues():
    params = memlane.LayoutParams(segment_alignment=512, shift=128)
    plan = memlane.build_layout(params, [64, 64, 64, 64])
    assert [off % 512 for off in plan.segment_byte_offsets] == [0, 128, 256, 384]
    assert plan.logical_length() == 256

    packed = memlane.build_layout(memlane.LayoutParams(), [5, 5])
    assert packed.segment_byte_offsets == [0, 40]


def test_address_map():
    model = memlane.AddressMapModel()
    assert model.controller_count() == 4
    assert model.controller_of(0x000) == 0
    assert model.controller_of(0x180) == 3
    assert model.bank_of(0x40) == 1
    for a in (0, 8, 64, 4096, 123456 * 8):
        assert model.controller_of(a) == model.controller_of(a + 512)


def test_traffic_models():
    triad = memlane.traffic_model(memlane.descriptor("triad", 1))
    assert math.isclose(triad.rfo_ratio, 4.0 / 3.0)

    jacobi = memlane.traffic_model(memlane.descriptor("jacobi2d", 64))
    assert jacobi.balance_total == 10.0
    assert jacobi.balance_memory == 4.0
    assert jacobi.balance_memory_rfo == 6.0

    lbm = memlane.traffic_model(memlane.descriptor("lbm", 16))
    assert lbm.bytes_memory_rfo == 456.0
    assert abs(lbm.balance_memory_rfo - 2.5) <= 0.1


def test_predictions():
    value, unit = memlane.predicted_performance(memlane.descriptor("jacobi2d", 64), 18e9)
    assert unit == "MLUPs"
    assert math.isclose(value, 750.0)

    value, unit = memlane.predicted_performance(memlane.descriptor("lbm", 16), 18e9)
    assert abs(value - 40.0) <= 2.0


def test_analyze_and_period():
    cfg = memlane.BenchConfig()
    cfg.kernel = "triad"
    cfg.mode = "analyze"
    cfg.n = 1 << 15
    cfg.threads = 4
    cfg.common_block = True

    cfg.offsets = [0]
    assert memlane.run(cfg).balance_score() == 0.25
    cfg.offsets = [32 * 8]
    assert memlane.run(cfg).balance_score() == 0.5

    cfg.offsets = []
    offsets = list(range(0, 129 * 8, 8))
    assert memlane.detect_period_bytes(cfg, offsets) == 512


def test_measure_small():
    cfg = memlane.BenchConfig()
    cfg.kernel = "triad"
    cfg.n = 4096
    cfg.threads = 2
    cfg.reps = 3
    rec = memlane.run(cfg)
    assert rec.time_best_s <= rec.time_median_s
    assert math.isclose(rec.gbs_actual / rec.gbs_reported, 4.0 / 3.0, rel_tol=1e-9)


def test_sweep_and_csv(tmp_path):
    cfg = memlane.BenchConfig()
    cfg.kernel = "vtriad"
    cfg.mode = "analyze"
    cfg.n = 1 << 14
    cfg.threads = 2
    series = memlane.sweep(cfg, "offset", [0, 128], str(tmp_path / "s.csv"))
    assert len(series.records) == 2
    assert series.records[1].balance_score() == 1.0  # offsets 0/128/256/384
    text = (tmp_path / "s.csv").read_text()
    assert text.startswith("variable,value,kernel")
    assert len(text.strip().splitlines()) == 3


def test_recipes():
    for name in ("jacobi-512-128", "triad-offsets-128-256-384", "stream-offset-0-worstcase"):
        assert memlane.recipe_check(name)
