import json
import math

import numpy as np
import pytest

import t2x


def test_default_scales():
    d = t2x.dispersion(t2x.Config())
    assert abs(d["q0"] * 1e3 - 44.0) / 44.0 < 0.03
    assert abs(d["Omega0"] * 1e3 - 69.0) / 69.0 < 0.05
    assert abs(d["cut_angle_deg"] - 22.8) < 0.3


def test_config_round_trip_and_errors():
    cfg = t2x.Config.parse("[pump]\ntau_p_fs = 150\n")
    assert t2x.Config.parse(cfg.emit()) == cfg
    bad = t2x.Config.parse("[pump]\ntau_p_fs = -5\n")
    with pytest.raises(t2x.ConfigError, match="pump.tau_p_fs"):
        t2x.dispersion(bad)
    with pytest.raises(t2x.ConfigError):
        t2x.Config.parse("[pump]\nbogus = 1\n")


def test_gaussian_regime_constant():
    p = t2x.gaussian_params(t2x.Config())
    assert abs(float(p["regime_constant_2D_sigma_nu_sigma_p"]) - 0.57) < 0.01
    assert t2x.sigma_tau(0.2, 0.1, 0.0) == pytest.approx(0.5 * math.sqrt(1 / 0.16 + 100.0), rel=1e-14)


def test_correlation_map_shape_and_normalization():
    cfg = t2x.Config()
    cfg.set("grid.n_x1", "21")
    r = t2x.correlation_map(cfg, threads=2)
    v = r["values"]
    assert v.shape == (21, r["t2_fs"].size)
    assert v.max() == pytest.approx(1.0)
    assert v.min() > -1e-9
    assert float(r["metrics"]["ridge_r2"]) > 0.99


def test_run_writes_files_and_reports_errors(tmp_path):
    code, err, files = t2x.run("gauss", t2x.Config(), tmp_path / "g")
    assert code == 0 and err == ""
    assert sorted(f.name for f in files) == ["gauss.meta", "gmap.csv"]

    bad = t2x.Config()
    bad.set("pump.tau_p_fs", "-5")
    code, err, files = t2x.run("correlate", bad, tmp_path / "c")
    assert code == 2
    e = json.loads(err)
    assert e["key"] == "pump.tau_p_fs"
    assert not any((tmp_path / "c").iterdir())


def test_phi_map_is_complex_array():
    cfg = t2x.Config()
    cfg.set("phimap.n_q", "25")
    cfg.set("phimap.n_omega", "31")
    r = t2x.phi_map(cfg)
    assert r["values"].dtype == np.complex128
    assert r["values"].shape == (25, 31)
    assert np.all(np.abs(r["values"]) <= 1.0 + 1e-12)
