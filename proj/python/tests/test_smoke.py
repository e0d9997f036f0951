import numpy as np
import pytest

import bekk_ergo as be


def test_scalar_model_moments():
    r = be.check(be.example("scalar"))
    assert r["stationary"]
    assert r["rho_AB"] == pytest.approx(0.9)
    assert r["Sigma"][0][0] == pytest.approx(10.0)


def test_scalar_certificate_constants():
    c = be.certificate(be.example("scalar"))
    assert c["alpha0"] == pytest.approx(14 / 15, abs=1e-12)
    assert c["b"] == pytest.approx(151 / 15, abs=1e-12)


def test_simulation_is_reproducible():
    m = be.example("ex-2x2")
    x1, s1, meta = be.simulate(m, n=200, seed=3)
    x2, s2, _ = be.simulate(m, n=200, seed=3)
    assert x1.shape == (200, 2)
    assert s1.shape == (200, 3)
    assert np.array_equal(x1, x2) and np.array_equal(s1, s2)
    assert meta["model_hash"] == be.model_hash(m)


def test_vech_roundtrip_and_operators():
    s = np.array([[2.0, 0.5], [0.5, 1.0]])
    v = be.vech(s)
    assert np.allclose(v, [2.0, 0.5, 1.0])
    assert np.allclose(be.unvech(v), s)
    H, K = be.elimination_duplication(2)
    assert np.array_equal(H @ K.T, np.eye(3))


def test_off_variety_start_is_flagged():
    m = be.example("ex-3.3.11")
    r = be.offstate_probe(m, be.example_off_start("ex-3.3.11"), horizon=100)
    assert r["on_manifold"] is False


def test_invalid_model_raises():
    m = be.example("scalar")
    m["C"] = [[-1.0]]
    with pytest.raises(be.ValidationError):
        be.check(m)
