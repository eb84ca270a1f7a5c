import math

import pytest

import powerdiff as pd


def test_two_point_path():
    path = pd.SamplePath([4.0, 4.2], 0.01)
    r = pd.sigma_known_gamma(path, 0.5, 0.5)
    assert r.gamma_hat is None
    assert r.sigma_hat == pytest.approx(math.sqrt(math.log(1.01) / 0.01), rel=1e-13)


def test_simulate_and_estimate():
    cfg = pd.SimConfig()
    cfg.n_steps = 5000
    cfg.y0 = 1.5
    cfg.seed = 3
    model = pd.ModelSpec.ckls(1.0, 1.5, 0.3, 0.6)
    path = pd.euler_maruyama(model, cfg)
    assert len(path) == 5001
    assert min(path.values) > 0
    assert path.values == pd.euler_maruyama(model, cfg).values

    joint = pd.joint_estimate(path)
    assert len(joint.objective_curve) == 30
    assert 0 < joint.gamma_hat <= 1
    assert joint.sigma_hat == pytest.approx(0.3, rel=0.5)
    assert pd.sigma_known_gamma(path, 0.6, 0.6).sigma_hat == pytest.approx(0.3, rel=0.1)
    assert 0 < pd.gamma_ratio_estimate(path).gamma_hat <= 1
    assert 0 < pd.gamma_known_sigma(path, 0.3).gamma_hat <= 1


def test_aux_and_oracle():
    aux = pd.compute_aux(pd.SamplePath([1.0, 1.1, 0.9, 1.2], 0.1), 0.5)
    assert len(aux.eta) == 3
    assert pd.log_modulus_complex_oracle(aux.eta) == pytest.approx(aux.log_modulus_running[-1], rel=1e-12)
    assert pd.log_modulus_complex_oracle([0.1, -0.2]) == pytest.approx(0.0245856, rel=1e-5)


def test_random_delay_model():
    spec = pd.sample_delay_drift(7)
    assert 1 <= spec.n_terms <= 5
    assert 0 <= spec.lambda_ <= 0.2
    cfg = pd.SimConfig()
    cfg.seed = 11
    model, path = pd.simulate_random_delay(0.3, 0.5, cfg)
    assert model.drift_name == "random-delay"
    assert 0.1 <= path.values[0] <= 10


def test_cir_backout_round_trip():
    mean, var = pd.cir_moments(2.0, 1.0, 0.3, 1.0, 1.0)
    a, b = pd.cir_backout(mean, var, 0.3, 1.0, 1.0)
    assert a == pytest.approx(2.0, abs=1e-6)
    assert b == pytest.approx(1.0, abs=1e-6)


def test_errors():
    flat = pd.SamplePath([2.0, 2.0, 2.0], 0.1)
    with pytest.raises(pd.DegenerateError):
        pd.joint_estimate(flat)
    with pytest.raises(ValueError):
        pd.SamplePath([1.0, -1.0], 0.1)
    with pytest.raises(ValueError):
        pd.ModelSpec.ckls(1.0, 1.0, 0.3, 1.5).validate()
    s = pd.error_stats([0.3, 0.1], [0.0, 0.0])
    assert s.rmse == pytest.approx(math.sqrt(0.05))
    assert s.mae == pytest.approx(0.2)
    assert s.bias == pytest.approx(0.2)
    with pytest.raises(ValueError):
        pd.error_stats([1.0], [1.0, 2.0])


def test_reproduce_table_small():
    rows = pd.reproduce_table("t1b", trials=20, seed=1)
    assert [r["paper_rmse"] for r in rows][0] == 0.0136
    assert len(rows) == 4
    with pytest.raises(ValueError):
        pd.reproduce_table("t9")
