"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import bregman_opt as b


def test_divergence_values():
    assert b.divergence("shannon", [1.0, 1.0], [1.0, 1.0]) == 0.0
    assert b.divergence("shannon", [2.0], [1.0]) == pytest.approx(
        2 * math.log(2) - 1, rel=1e-14
    )
    assert b.divergence("burg", [2.0], [1.0]) == pytest.approx(
        1 - math.log(2), rel=1e-14
    )
    assert b.divergence("euclidean", [1.0, 3.0], [2.0, -1.0]) == pytest.approx(8.5)


def test_domain_errors_raise_value_error():
    with pytest.raises(ValueError):
        b.divergence("burg", [-1.0], [1.0])
    with pytest.raises(ValueError):
        b.divergence("nope", [1.0], [1.0])


def test_theta_sequences():
    assert b.theta_explicit(2.0, 2) == 0.5
    assert b.theta_next_root(2.0, 1.0) == pytest.approx(
        (math.sqrt(5) - 1) / 2, abs=1e-14
    )
    assert b.theta_next_gain_equality(2.0, 0.5, 1.0, 4.0) == pytest.approx(
        (math.sqrt(65) - 1) / 32, abs=1e-12
    )
    assert b.theta_next_gain_explicit(3.0, 0.5, 2.0) == pytest.approx(5 / 13)


def test_gain_bound():
    gain, gamma = b.gain_bound("shannon", [1.0], [2.0], [1.0])
    assert gamma == 2.0
    assert gain == pytest.approx(1 / (2 * math.log(2) - 1), rel=1e-12)


def test_generate_and_solve():
    inst = b.gen_doptimal(8, 20, 1)
    assert inst.L == 1.0
    assert inst.kernel == "burg"
    assert inst.x0.sum() == pytest.approx(1.0)

    bpg = b.solve(inst, "bpg", iters=200)
    accel = b.solve(inst, "abpg-g", gamma=2.0, iters=200)
    assert np.all(np.diff(bpg["F"]) <= 1e-10 * np.abs(bpg["F"][:-1]) + 1e-15)
    assert accel["F"][-1] <= bpg["F"][-1]
    assert accel["G"][1] > 0


def test_solve_is_deterministic():
    inst = b.gen_poisson(20, 12, 7, reg="l2", reg_lambda=0.001)
    t1 = b.solve(inst, "abpg-g", iters=100)
    t2 = b.solve(inst, "abpg-g", iters=100)
    assert np.array_equal(t1["F"], t2["F"])
    assert np.array_equal(t1["theta"], t2["theta"], equal_nan=True)


def test_instance_roundtrip(tmp_path):
    inst = b.gen_relentropy(10, 15, 3, reg="l1", reg_lambda=0.001)
    path = str(tmp_path / "inst.json")
    inst.save(path)
    loaded = b.load_instance(path)
    assert loaded.m == inst.m
    assert loaded.n == inst.n
    x = np.full(inst.n, 1.0)
    assert loaded.objective_value(x) == inst.objective_value(x)


def test_libsvm(tmp_path):
    path = tmp_path / "mini.libsvm"
    path.write_text("1 1:0.5 3:2.0\n-1 2:1.5\n")
    feats, labels = b.load_libsvm(str(path))
    assert feats.shape == (3, 2)
    assert feats[0, 0] == 0.5
    assert feats[2, 0] == 2.0
    assert labels[1] == -1.0
    bad = tmp_path / "bad.libsvm"
    bad.write_text("1 3:x\n")
    with pytest.raises(ValueError):
        b.load_libsvm(str(bad))


def test_harness_helpers():
    assert b.geo_mean_gain([4.0, 1.0], 2.0) == pytest.approx(16 ** (1 / 3))
    gaps = [math.nan] + [100.0 / k for k in range(1, 101)]
    assert b.fit_rate_slope(gaps, 10, 100) == pytest.approx(-1.0, abs=1e-10)
