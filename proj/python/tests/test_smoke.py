import json
import math

import numpy as np
import pytest

import covlocc


def test_scenarios_and_labels():
    assert covlocc.scenarios() == ["semicov", "full-sim", "full-ind", "protocol"]
    assert len(covlocc.labels("full-sim")) == 14
    assert "s_7+" in covlocc.labels("semicov")


def test_semicovariant_point():
    r = covlocc.solve_point("semicov", 0.6, 0.8)
    assert r["status"] == "optimal"
    assert abs(r["fidelity"] - 0.9216) < 1e-6
    assert r["choi"].shape == (16, 16)
    assert covlocc.check_tp(r["choi"]) < 1e-8
    assert covlocc.covariance_residual(r["choi"], "semicov") < 1e-8
    assert abs(covlocc.channel_fidelity(r["choi"], 0.6, 0.8) - r["fidelity"]) < 1e-9


def test_protocol_midpoint():
    r = covlocc.solve_point("protocol", 1 / math.sqrt(2), 0.0)
    assert abs(r["fidelity"] - 0.5) < 1e-4


def test_analytic():
    assert covlocc.analytic_fidelity("full-sim", 0.0, 1.0) == pytest.approx(0.6)
    assert covlocc.analytic_fidelity("semicov", 0.9, 0.1) is None


def test_published_kraus_round_trip():
    kraus = covlocc.published_kraus("full-sim", 0.25)
    assert len(kraus) == 9
    total = sum(k.conj().T @ k for k in kraus)
    assert np.allclose(total, np.eye(4), atol=1e-12)
    choi = covlocc.choi_from_kraus(kraus)
    back = covlocc.choi_from_kraus(covlocc.kraus_from_choi(choi))
    assert np.allclose(back, choi, atol=1e-9)
    lo, hi = covlocc.d011_ppt_interval()
    assert 0 <= lo < hi <= 1


def test_bad_parameters():
    with pytest.raises(ValueError):
        covlocc.published_kraus("full-sim", 1.5)
    with pytest.raises(ValueError):
        covlocc.solve_point("semicov", 1.2, 0.5)
    with pytest.raises(ValueError):
        covlocc.check_tp(np.eye(4))


def test_export_json():
    text = covlocc.export_json("full-ind", 0.0, 1.0, True, "full-ind-a0-c1-ppt", '{"a": 0.0}')
    doc = json.loads(text)
    assert doc["format"] == "covlocc-sdp/1"
    assert doc["labels"] == ["p_1", "p_2", "p_3", "p_4"]
    assert text == covlocc.export_json("full-ind", 0.0, 1.0, True, "full-ind-a0-c1-ppt", '{"a": 0.0}')


def test_sweep_csv():
    lines = covlocc.sweep_csv("full-ind", 3).strip().splitlines()
    assert lines[0].startswith("scenario,a,c,ppt,fidelity")
    assert len(lines) == 10
