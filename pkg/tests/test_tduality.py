from fractions import Fraction

import pytest

from src.brauer.classification import BrauerClass
from src.brauer.tduality import (CLASSICAL, NONASSOCIATIVE, NONCOMMUTATIVE, FamilyOverBase, example_families,
                                 mackey_winding, phase_step, refine_loop, t_duality_decision)
from src.cohomology import AntisymmetricPairing
from src.exterior import DualVector


def pairing(value):
    return AntisymmetricPairing.from_upper(2, [value])


def square(values, loops=(("a", "b", "c", "d"),)):
    vertices = ["a", "b", "c", "d"]
    classes = {vertex: BrauerClass(DualVector.zero(2, 3), pairing(value)) for vertex, value in zip(vertices, values)}
    return FamilyOverBase(vertices, [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")], classes, loops)


QUARTERS = [0, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]


def test_winding_around_square():
    family = square(QUARTERS)
    assert mackey_winding(family, ["a", "b", "c", "d"]) == [1]
    assert mackey_winding(family, ["d", "c", "b", "a"]) == [-1]
    assert mackey_winding(family, ["a", "b", "c", "d", "a"]) == [1]


def test_back_and_forth_loop_has_no_winding():
    assert mackey_winding(square(QUARTERS), ["a", "b", "a"]) == [0]


def test_phase_step_lifts_across_zero():
    assert phase_step(pairing(Fraction(7, 8)), pairing(Fraction(1, 8))) == [Fraction(1, 4)]


def test_ambiguous_half_step_raises():
    with pytest.raises(ValueError):
        phase_step(pairing(0), pairing(Fraction(1, 2)))


def test_step_beyond_bound_raises():
    with pytest.raises(ValueError):
        phase_step(pairing(0), pairing(Fraction(9, 20)))
    assert phase_step(pairing(0), pairing(Fraction(9, 20)), epsilon=Fraction(19, 40)) == [Fraction(9, 20)]


def test_loop_must_follow_edges():
    with pytest.raises(ValueError):
        mackey_winding(square(QUARTERS), ["a", "c"])


def test_example_verdicts():
    for verdict, family in example_families().items():
        assert t_duality_decision(family).verdict == verdict


def test_verdict_evidence():
    families = example_families()
    obstructed = t_duality_decision(families[NONASSOCIATIVE])
    assert obstructed.evidence["nonzero_m"] == {"p": [1]}
    winding = t_duality_decision(families[NONCOMMUTATIVE])
    assert winding.to_json()["evidence"]["loops"][0]["winding"] == [1]
    assert t_duality_decision(families[CLASSICAL]).evidence == {"nonzero_m": {}, "loops": []}


def test_constant_theta_is_classical():
    assert t_duality_decision(square([Fraction(1, 3)] * 4)).verdict == CLASSICAL


def test_refinement_keeps_winding():
    family = square(QUARTERS)
    refined = refine_loop(family, "a", "b", "ab")
    assert refined.loops[0] == ["a", "ab", "b", "c", "d", "a"]
    assert refined.classes["ab"].theta == pairing(Fraction(1, 8))
    assert mackey_winding(refined, refined.loops[0]) == [1]
    twice = refine_loop(refined, "c", "d", "cd")
    assert t_duality_decision(twice).verdict == NONCOMMUTATIVE


def test_m_must_be_locally_constant():
    classes = {"a": BrauerClass(DualVector(3, 3, [1]), AntisymmetricPairing.zero(3)),
               "b": BrauerClass.zero(3)}
    with pytest.raises(ValueError):
        FamilyOverBase(["a", "b"], [("a", "b")], classes)


def test_unknown_vertices_raise():
    with pytest.raises(KeyError):
        FamilyOverBase(["a"], [("a", "b")], {"a": BrauerClass.zero(2)})
    with pytest.raises(KeyError):
        FamilyOverBase(["a", "b"], [], {"a": BrauerClass.zero(2)})


def test_family_from_json():
    def theta(k):
        return [[0, {"num": k, "den": 4}], [{"num": -k, "den": 4}, 0]]

    payload = {"vertices": ["a", "b", "c", "d"], "edges": [["a", "b"], ["b", "c"], ["c", "d"], ["d", "a"]],
               "loops": [["a", "b", "c", "d"]], "epsilon": {"num": 2, "den": 5},
               "classes": {vertex: {"n": 2, "m": [], "theta": theta(k)} for k, vertex in enumerate("abcd")}}
    family = FamilyOverBase.from_json(payload)
    assert family.epsilon == Fraction(2, 5)
    assert t_duality_decision(family).verdict == NONCOMMUTATIVE


def test_exact_family_rejects_float_epsilon():
    payload = {"vertices": ["a"], "classes": {"a": {"n": 2, "m": [], "theta": [[0, 0], [0, 0]]}}, "epsilon": 0.4}
    with pytest.raises(ValueError):
        FamilyOverBase.from_json(payload, exact=True)
    payload["epsilon"] = {"num": 2, "den": 5}
    assert FamilyOverBase.from_json(payload, exact=True).epsilon == Fraction(2, 5)
