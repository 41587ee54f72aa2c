from fractions import Fraction

import numpy as np
import pytest

from src.brauer.classification import FiberAction, action_from_obstruction
from src.brauer.induced_rep import InducedRepresentation, MonomialOperator, induced_rep
from src.cohomology import AntisymmetricPairing, Cocycle2, Tricharacter
from src.exterior import DualVector


def rational_action(N):
    return action_from_obstruction(DualVector.zero(2, 3), AntisymmetricPairing.from_upper(2, [Fraction(1, N)]))


@pytest.mark.parametrize("N", [3, 4, 5])
def test_commutation_phases_read_off_theta(N, rng):
    representation = induced_rep(rational_action(N), N, rng=rng)
    assert representation.report.passed
    phases = representation.commutation_phases()
    assert phases[0][1] == Fraction(1, N)
    assert phases[1][0] == Fraction(N - 1, N)
    assert phases[0][0] == 0


def test_obstructed_action_on_three_torus(rng):
    action = action_from_obstruction(DualVector(3, 3, [1]), AntisymmetricPairing.zero(3))
    representation = induced_rep(action, 4, rng=rng)
    assert representation.report.passed
    assert representation.dimension == 4 ** 6
    assert representation.commutation_phases() == [[0] * 3] * 3

    generators = representation.generators()
    assert set(generators) == {"W_1", "W_2", "W_3", "V_12", "V_13", "V_23", "u_12", "u_13", "u_23", "u_123"}
    # u(0, e1^e2^e3 / N) is the scalar U(e1^e2^e3 / N)
    central = generators["u_123"]
    assert np.array_equal(central.perm, np.arange(representation.dimension))
    assert np.all(central.exps == 1)


def test_float_mode_agrees(rng):
    representation = induced_rep(rational_action(4), 4, samples=10, rng=rng, mode="float")
    assert representation.report.passed
    assert representation.report.header["mode"] == "float"


def test_trivial_action_gives_regular_representation():
    representation = InducedRepresentation(FiberAction.trivial(2), 3)
    assert representation.is_regular()
    assert not InducedRepresentation(rational_action(3), 3).is_regular()


def test_denominator_must_divide_period():
    with pytest.raises(ValueError):
        InducedRepresentation(rational_action(3), 4)


def test_table_cocycles_are_rejected():
    action = FiberAction(Cocycle2.trivial(2).to_table(1), Tricharacter.trivial(2))
    with pytest.raises(ValueError):
        InducedRepresentation(action, 3)


def test_monomial_operator_algebra():
    shift = MonomialOperator([1, 2, 0], [0, 1, 2], 3)
    identity = MonomialOperator([0, 1, 2], [0, 0, 0], 3)
    assert shift @ shift.adjoint() == identity
    assert shift.scaled(1).scalar_ratio(shift) == 1
    assert np.allclose((shift @ shift).to_dense(), shift.to_dense() @ shift.to_dense())
    assert np.allclose(shift.apply([1, 2, 3]), shift.to_dense() @ np.array([1, 2, 3]))
