import math

import numpy as np
import pytest

import phaseinv


def psi_oracle(theta, q):
    out = 1.0
    for a, b in zip(q, q[1:] + q[:1]):
        out /= math.sin((theta[a - 1] - theta[b - 1]) / 2)
    return out


def test_version():
    assert phaseinv.__version__ == "0.1.0"


def test_psi_matches_product_formula():
    theta = [0.1, 1.3, 2.9, 4.4, 5.5]
    q = [1, 3, 2, 5, 4]
    assert phaseinv.psi(theta, q) == pytest.approx(psi_oracle(theta, q), rel=1e-13)
    assert phaseinv.big_psi(theta, [1, 2, 3, 4, 5], q) == pytest.approx(
        psi_oracle(theta, q) / psi_oracle(theta, [1, 2, 3, 4, 5]), rel=1e-13
    )


def test_n4_sum_vanishes():
    theta = [0.2, 1.9, 3.1, 5.0]
    total = sum(phaseinv.psi(theta, q) for q in ([1, 2, 3, 4], [1, 3, 4, 2], [1, 4, 2, 3]))
    assert abs(total) < 1e-12


def test_decomposition_round_trip():
    q1, q2 = [1, 2, 3, 4, 5, 6], [1, 4, 6, 2, 5, 3]
    d = phaseinv.decompose(q1, q2)
    theta = [0.3, 1.2, 2.2, 3.4, 4.6, 5.7]
    value = phaseinv.evaluate_decomposition(theta, d["sign"], d["factors"])
    assert value == pytest.approx(phaseinv.big_psi(theta, q1, q2), rel=1e-12)


def test_simulation_conserves_big_psi():
    model = phaseinv.Model.kuramoto_sakaguchi(K=1.0, delta=0.0)
    tr = phaseinv.simulate(model, [0.1, 1.4, 2.8, 4.0, 5.2], t_end=1.0, dt=1e-3, record_every=100)
    assert tr["states"].shape == (11, 5)
    q1, q2 = [1, 2, 3, 4, 5], [1, 3, 5, 2, 4]
    values = [phaseinv.big_psi(list(s), q1, q2) for s in tr["states"]]
    assert np.max(np.abs(np.array(values) / values[0] - 1)) < 1e-9


def test_pf_eigenrelation_and_lambda():
    model = phaseinv.Model.higher_order(K=1.0, delta=0.4)
    theta = [0.4, 1.7, 3.3, 4.2]
    r = phaseinv.verify_pf_eigenrelation(model, [1, 2, 3, 4], theta)
    assert r["rel_residual"] < 1e-4
    z1 = np.mean(np.exp(1j * np.array(theta)))
    z2 = np.mean(np.exp(2j * np.array(theta)))
    want = (-2 * abs(z1) ** 2 + abs(z2) ** 2) * math.cos(0.4)
    assert phaseinv.lambda_analytic(model, theta) == pytest.approx(want, rel=1e-12)


def test_sampler_and_histogram():
    samples = phaseinv.sample_clipped_psi(3, [1, 2, 3], clip=100.0, count=20000, seed=3)
    assert samples.shape == (20000, 3)
    again = phaseinv.sample_clipped_psi(3, [1, 2, 3], clip=100.0, count=20000, seed=3)
    assert np.array_equal(samples, again)
    big = phaseinv.sample_clipped_psi(3, [1, 2, 3], clip=100.0, count=100000, seed=4)
    c = phaseinv.compare_histogram(big, [1, 2, 3], bins=10, heavy_threshold=100.0)
    assert c["heavy_bin_count"] > 0
    assert c["p_value"] > 1e-4


def test_ranks():
    assert phaseinv.invariant_rank(6)["rank"] == 3
    assert phaseinv.psi_linear_rank(4)["rank"] == 2


def test_certify_and_presets():
    report = phaseinv.certify(points=5)
    assert report["passed"] is True
    assert phaseinv.preset("fig2a")["model"]["kind"] == "kuramoto_sakaguchi"


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        phaseinv.psi([0.0, 1.0, 2.0], [1, 1, 2])
    with pytest.raises(ArithmeticError):
        phaseinv.psi([0.0, 0.0, 2.0], [1, 2, 3])
