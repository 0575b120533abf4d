import math

import numpy as np
import pytest

import smoothsmc


def test_certificate_reference_gains():
    cert = smoothsmc.certify(m=3, k1=2, k2=2.5, k3=4, k4=30)
    assert cert["gain_condition"]["lhs"] == 1080.0
    assert cert["gain_condition"]["rhs"] == 962.5
    assert cert["all_pd"]
    assert cert["p1"] == 0.75


def test_certificate_statuses():
    assert smoothsmc.certify(k4=20)["gain_condition"]["status"] == "uncertified"
    assert smoothsmc.certify(m=2)["gain_condition"]["status"] == "baseline-exempt"


def test_eigen_and_kron():
    assert smoothsmc.eig_sym([[2, 1], [1, 2]]) == pytest.approx([1, 3])
    big = smoothsmc.kron_with_identity([[1, 2], [2, 5]], 3)
    assert np.allclose(np.linalg.eigvalsh(big), np.repeat(smoothsmc.eig_sym([[1, 2], [2, 5]]), 3))
    with pytest.raises(ValueError):
        smoothsmc.eig_sym([[1, 2], [3, 4]])


def test_lemma_functions():
    assert smoothsmc.settling_time_lemma1(1, 1, 0.5, 1) == pytest.approx(2 * math.log(2))
    t3 = smoothsmc.solve_theta3(0.7, 1.3, 2.2, 0.75, 0.5)
    d1, d2 = smoothsmc.residual_sets(2.2, 0.7, 1.3, t3, 0.75, 0.5)
    assert d1 == pytest.approx(d2, rel=1e-9)


def test_run_and_replay():
    report, traj = smoothsmc.run("exp1", "amssosmc", sim={"horizon": 2.0})
    assert report["report"]["settled"]
    assert traj["x1"].shape == (2001, 3)
    cfg = report["config"]
    again, traj2 = smoothsmc.run(cfg["experiment"], cfg["method"], cfg["gains"], cfg["sim"], cfg["disturbance"])
    assert np.array_equal(traj["u"], traj2["u"])
    assert again["report"] == report["report"]


def test_smooth_chatters_less():
    smooth, _ = smoothsmc.run("exp1", "amssosmc")
    base, _ = smoothsmc.run("exp1", "amstsmc-baseline")
    assert smooth["report"]["chattering_index"] < base["report"]["chattering_index"]


def test_usage_errors():
    with pytest.raises(smoothsmc.UsageError):
        smoothsmc.run("exp3", "amssosmc")
