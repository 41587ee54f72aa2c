from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.brauer.classification import (BrauerClass, FiberAction, action_from_obstruction, assemble_obstruction,
                                       brauer_inv, brauer_mul, classify, dd_class, mackey, random_brauer_class,
                                       restrict_subtorus, sign_conventions, subtori, validate_fiber_action)
from src.cohomology import AntisymmetricPairing, Cocycle2, Phase, PhaseArray, Tricharacter, random_phase_table
from src.exterior import DualVector


def conditions(report):
    return {failure["condition"] for failure in report.failures}


def test_classify_generator_of_three_torus():
    action = FiberAction(Cocycle2.trivial(3), Tricharacter.from_coeffs(3, [1]))
    x = classify(action)
    assert x.to_json() == {"n": 3, "m": [1], "theta": [[0, 0, 0], [0, 0, 0], [0, 0, 0]]}
    assert dd_class(x).coeffs.tolist() == [1]


def test_classify_reads_theta_from_commutators():
    action = FiberAction(Cocycle2.standard([[0, Fraction(1, 3)], [0, 0]]), Tricharacter.trivial(2))
    x = classify(action)
    assert x.m.coeffs.tolist() == []
    assert mackey(x).entry(1, 2) == Phase(Fraction(1, 3))
    assert mackey(x).entry(2, 1) == Phase(Fraction(2, 3))


def test_brauer_group_operations():
    theta = AntisymmetricPairing.from_upper(3, [Fraction(1, 2), 0, Fraction(1, 4)])
    x = BrauerClass(DualVector(3, 3, [1]), theta)
    y = BrauerClass(DualVector(3, 3, [2]), theta)
    product = brauer_mul(x, y)
    assert product.m.coeffs.tolist() == [3]
    assert product.theta == AntisymmetricPairing.from_upper(3, [0, 0, Fraction(1, 2)])
    assert brauer_mul(x, brauer_inv(x)).is_zero()


def test_restriction_to_subtorus():
    x = BrauerClass(DualVector(4, 3, [0, 0, 2, 0]), AntisymmetricPairing.zero(4))
    restricted = restrict_subtorus(x, (1, 3, 4))
    assert restricted.n == 3
    assert restricted.m.coeffs.tolist() == [2]
    assert restrict_subtorus(x, (1, 2, 3)).is_zero()
    with pytest.raises(ValueError):
        restrict_subtorus(x, (3, 1, 4))


def test_brauer_class_needs_integral_m():
    with pytest.raises(ValueError):
        BrauerClass(DualVector(3, 3, [Fraction(1, 2)]), AntisymmetricPairing.zero(3))


def test_realized_action_is_valid():
    action = action_from_obstruction(DualVector(3, 3, [1]), AntisymmetricPairing.from_upper(3, [Fraction(1, 4), 0, 0]))
    report = validate_fiber_action(action, box=1)
    assert report.passed
    assert report.header["exhaustive"]


def test_unnormalized_table_fails_validation():
    num = np.zeros((3,) * 4, dtype=np.int64)
    # ω(0, e1) = 1/4
    num[1, 1, 2, 1] = 1
    action = FiberAction(Cocycle2.table(2, PhaseArray(num, 4), 1), Tricharacter.trivial(2))
    report = validate_fiber_action(action, box=1)
    assert not report.passed
    assert "normalization" in conditions(report)
    assert report.header["violations"]["normalization"] == 1


def test_non_integral_tricharacter_is_rejected():
    action = FiberAction(Cocycle2.trivial(3), Tricharacter.from_coeffs(3, [Fraction(1, 2)]))
    report = validate_fiber_action(action, box=1)
    assert {"lattice_trivial", "cocycle"} <= conditions(report)
    with pytest.raises(ValueError):
        classify(action)


def test_large_box_is_sampled():
    report = validate_fiber_action(FiberAction.trivial(4), box=2, max_triples=1000)
    assert report.passed
    assert not report.header["exhaustive"]


def test_equivalent_actions_have_equal_classes(rng):
    x = random_brauer_class(rng, 3)
    action = action_from_obstruction(x.m, x.theta)
    twisted = action.twisted(random_phase_table(rng, 3, 4), 4, out_box=2)
    assert twisted.omega.form == "table"
    assert validate_fiber_action(twisted, box=1).passed
    assert classify(twisted) == x


def test_assemble_obstruction_from_one_subtorus():
    chi = assemble_obstruction(4, {"p": [2], "q": [0]}, [[1, 3, 4]])
    assert chi.points == ["p", "q"]
    assert chi["p"].coeffs.tolist() == [0, 0, 2, 0]
    assert chi.vanishes_at("q")
    assert not chi.vanishes()
    x = BrauerClass(chi["p"], AntisymmetricPairing.zero(4))
    assert dd_class(restrict_subtorus(x, (1, 3, 4))).coeffs.tolist() == [2]


def test_assemble_obstruction_defaults_to_all_subtori():
    chi = assemble_obstruction(4, {"p": [1, 0, 0, -1]})
    assert chi["p"].coeffs.tolist() == [1, 0, 0, -1]
    assert subtori(4) == [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)]


@pytest.mark.parametrize("subtorus_list, dd", [
    ([[3, 1, 4]], [1]),
    ([[1, 2, 5]], [1]),
    ([[1, 2, 3], [1, 2, 3]], [1, 1]),
    ([[1, 2, 3]], [1, 2]),
    ([[1, 2, 3]], [{"num": 1, "den": 2}]),
])
def test_assemble_obstruction_rejects_bad_input(subtorus_list, dd):
    with pytest.raises(ValueError):
        assemble_obstruction(4, {"p": dd}, subtorus_list)


def test_sign_conventions_are_reported():
    assert sign_conventions() == {"subtorus_sign": 1, "dd_sign": 1}


def test_json_round_trip_of_action():
    action = action_from_obstruction(DualVector(3, 3, [2]), AntisymmetricPairing.from_upper(3, [Fraction(1, 3), 0, 0]))
    assert classify(FiberAction.from_json(action.to_json())) == classify(action)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_classification_is_a_homomorphism(seed):
    rng = np.random.default_rng(seed)
    x, y = random_brauer_class(rng, 4), random_brauer_class(rng, 4)
    a, b = action_from_obstruction(x.m, x.theta), action_from_obstruction(y.m, y.theta)
    assert classify(a) == x
    assert classify(a * b) == brauer_mul(x, y)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_restriction_commutes_with_dd(seed):
    x = random_brauer_class(np.random.default_rng(seed), 5)
    for indices in subtori(5):
        assert dd_class(restrict_subtorus(x, indices)).coeffs[0] == dd_class(x).coefficient(indices)
