import numpy as np
import pytest

from src.brauer.strict_action import (StrictActionData, check_strict_action, random_strict_samples, weyl_pair,
                                      weyl_strict_action)


def encode(matrix):
    return np.stack([matrix.real, matrix.imag], axis=-1).tolist()


def test_weyl_pair_commutation():
    X, Z = weyl_pair(5)
    assert np.allclose(Z @ X, np.exp(2j * np.pi / 5) * X @ Z)


def test_weyl_action_is_strict(rng):
    data = weyl_strict_action(4)
    report = check_strict_action(data, random_strict_samples(data, 50, rng))
    assert report.passed
    assert report.samples == 3 ** 3 + 50 + 1


def test_generators_from_json(rng):
    X, Z = weyl_pair(3)
    data = StrictActionData.from_json({"n": 2, "N": 3, "alpha_generators": [encode(X), encode(Z)]})
    assert data.dimension == 3
    assert check_strict_action(data, random_strict_samples(data, 20, rng)).passed
    assert check_strict_action(StrictActionData.from_json({"weyl": 3}), random_strict_samples(data, 5, rng)).passed


def test_non_periodic_ubar_fails_u_homomorphism():
    X, Z = weyl_pair(4)
    data = StrictActionData.from_generators(2, 4, [X, Z], [np.exp(1j * np.pi / 4) * np.eye(4)])
    # s^t = 3 and t^v = 1 sum to the period, where ubar does not wrap around
    samples = [(np.array([1, 0]), np.array([0, 3]), np.array([1, 0]), np.array([1, 0]))]
    report = check_strict_action(data, samples)
    assert "u_homomorphism" in {failure["condition"] for failure in report.failures}


def test_mismatched_generators_are_rejected():
    with pytest.raises(ValueError):
        StrictActionData.from_generators(2, 3, [np.eye(3), np.eye(2)], [np.eye(3)])
    with pytest.raises(ValueError):
        StrictActionData.from_generators(2, 3, [np.eye(3)], [np.eye(3)])
