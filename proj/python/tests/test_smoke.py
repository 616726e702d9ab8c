# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2026 The csikit Authors

import math

import numpy as np
import pytest

import csikit


def test_decompose_recompose_round_trip():
    csi = np.array([[1 + 0j, 1j], [-1 + 0j, 3 + 4j]])
    amp, phase, zeros = csikit.decompose(csi)
    assert amp[1, 1] == 5.0
    assert phase[1, 0] == math.pi
    assert zeros == []
    back = csikit.recompose(amp, phase)
    assert np.allclose(back, csi, rtol=1e-12, atol=1e-15)


def test_unwrap_example():
    out = csikit.unwrap(np.array([3.0, -3.0]))
    assert out[1] == pytest.approx(3.0 + 2 * math.pi - 6.0)


def test_linear_calibrations():
    row = np.array([[3.0, 5.0, 7.0, 9.0, 11.0]])
    assert np.allclose(csikit.lt_calibrate(row, indices=[1, 2, 3, 4, 5]), -6.0)
    fit = csikit.regress_symbol(row[0])
    assert fit["a"] == pytest.approx(2.0)
    assert fit["r1"] == pytest.approx(3.0)
    assert np.allclose(csikit.lrr_calibrate(np.array([[1.0, 2.0, 3.0]])), -1.0)


def test_sg_kernel_and_smoothers():
    assert np.allclose(csikit.sg_kernel(2, 5), np.array([-3, 12, 17, 12, -3]) / 35, atol=1e-12)
    t = np.linspace(0, 1, 40)
    quad = 0.3 - t + 0.5 * t**2
    assert np.allclose(csikit.sg_apply(quad, 2, 7), quad, atol=1e-10)
    m = np.tile(quad[:, None], (1, 12))
    assert np.allclose(csikit.sg_time(m, window=7), m, atol=1e-10)
    assert np.allclose(csikit.sg_freq(m.T.copy(), window=7), m.T, atol=1e-10)
    assert np.allclose(csikit.sg_2d(m, 2, 5, 5), m, atol=1e-9)


def test_rebuild_and_gap_stats():
    mu, sigma, d = csikit.gap_stats(np.array([0.0, 1.0, 3.0, 6.0]))
    assert (mu, d) == (2.0, mu + sigma)
    phase, flags = csikit.rebuild_symbol(np.array([0.0, 5.0, 5.5]), 2.0)
    assert list(phase) == [0.0, 2.0, 2.5]
    assert flags == [False, True, False]


def test_synth_process_and_stats():
    data = csikit.synthesize(7, symbols=200, subcarriers=52)
    meas = data["measured"]
    assert meas.shape == (200, 52)
    amp, _, _ = csikit.decompose(meas)
    for method in csikit.method_names():
        out, phase, report = csikit.process(meas, method)
        assert out.shape == meas.shape
        assert np.allclose(np.abs(out), amp, rtol=1e-15, atol=0)
        assert (report is not None) == (method == "tsfr")
    _, _, report = csikit.process(meas, "tsfr")
    details = report.as_dict()
    profile = csikit.exceedance_profile(report)
    assert sum(profile) == details["exceedance"].sum()
    assert np.all(details["modified_fraction"] <= 1.0)

    hist = csikit.diff_histogram(csikit.lrr_calibrate(csikit.decompose(meas)[1]), bins=31)
    assert sum(hist["counts"]) == 200 * 51
    d, groups = csikit.ds_series(np.zeros((4, 6)), labels=["a", "b", "a", "b"])
    assert np.all(d == 0) and groups["a"] == (2, 0.0)


def test_tsfr_result_dict():
    data = csikit.synthesize(3, symbols=50, subcarriers=30)
    _, phase, _ = csikit.decompose(data["measured"])
    result = csikit.tsfr(phase)
    rebuilt = result["rebuilt"]
    thresholds = result["report"].as_dict()["thresholds"]
    steps = np.abs(np.diff(rebuilt, axis=1)).max(axis=1)
    assert np.all(steps <= thresholds[:, 2] + 1e-12)


def test_csif_round_trip(tmp_path):
    m = np.array([[1 + 0j, 1j]])
    blob = csikit.encode_csif(m)
    assert len(blob) == 48 and blob[:4] == b"CSIF"
    assert np.array_equal(csikit.decode_csif(blob), m)
    real = np.array([[0.0, 1.5]])
    path = tmp_path / "p.csif"
    csikit.write_csif(str(path), real)
    assert np.array_equal(csikit.read_csif(str(path)), real)
    with pytest.raises(csikit.FormatError):
        csikit.decode_csif(blob[:-1])
    with pytest.raises(OSError):
        csikit.read_csif(str(tmp_path / "missing.csif"))


def test_errors_map_to_value_error():
    with pytest.raises(ValueError):
        csikit.process(np.ones((3, 4), dtype=complex), "bogus")
    with pytest.raises(csikit.DataError):
        csikit.decompose(np.ones((2, 1), dtype=complex))
