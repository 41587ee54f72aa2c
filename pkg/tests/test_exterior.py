from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.exterior import (DualVector, MultiVector, basis, det_triple, pair, random_lattice_vector, wedge,
                          wedge3_coords, wedge_all)

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=12)


def vectors(n, grade=1):
    return st.lists(small_fractions, min_size=comb(n, grade), max_size=comb(n, grade)).map(
        lambda coeffs: MultiVector(n, grade, coeffs, exact=True))


def e(n, *indices):
    return MultiVector.basis_element(n, indices)


def test_basis_is_lexicographic():
    assert basis(4, 2) == ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))
    assert basis(3, 3) == ((1, 2, 3),)
    assert basis(2, 3) == ()


def test_wedge_of_vector_with_itself_vanishes():
    assert wedge(e(3, 1), e(3, 1)).is_zero()


def test_wedge_basis_antisymmetry():
    assert wedge(e(3, 2), e(3, 1)) == -e(3, 1, 2)
    assert e(3, 2, 1) == -e(3, 1, 2)


def test_wedge_of_sums():
    result = wedge(e(3, 1) + e(3, 2), e(3, 2) + e(3, 3))
    assert result.coeffs.tolist() == [1, 1, 1]


def test_pair_picks_out_coefficient():
    phi = DualVector(4, 1, [1, 0, 2, 0])
    x = MultiVector.vector([0, 0, 1, 0])
    assert pair(phi, x) == 2

    form = DualVector(4, 3, [0, 0, 2, 0])
    assert pair(form, wedge_all([e(4, 1), e(4, 3), e(4, 4)])) == 2


def test_det_triple_examples():
    assert det_triple(e(3, 1), e(3, 2), e(3, 3)).coeffs.tolist() == [1]
    assert det_triple(e(3, 2), e(3, 1), e(3, 3)).coeffs.tolist() == [-1]
    assert det_triple(e(3, 1), e(3, 1) + e(3, 2), e(3, 3)).coeffs.tolist() == [1]
    assert det_triple(e(2, 1), e(2, 2), e(2, 1)).coeffs.tolist() == []


def test_grade_overflow_raises():
    with pytest.raises(ValueError):
        wedge(e(4, 1, 2), e(4, 3, 4))


def test_dimension_mismatch_raises():
    with pytest.raises(ValueError):
        wedge(e(3, 1), e(4, 2))
    with pytest.raises(ValueError):
        e(3, 1) + e(4, 1)


def test_exact_mode_rejects_floats():
    with pytest.raises(ValueError):
        MultiVector(2, 1, [0.5, 1], exact=True)


def test_mixed_modes_raise():
    with pytest.raises(ValueError):
        e(3, 1) + MultiVector.vector([1.0, 0.0, 0.0], exact=False)


def test_integral_flag_is_checked():
    with pytest.raises(ValueError):
        MultiVector(2, 1, [Fraction(1, 2), 0], integral=True)


def test_coefficient_applies_permutation_sign():
    xi = MultiVector(4, 3, [1, 2, 3, 4])
    assert xi.coefficient((1, 2, 4)) == 2
    assert xi.coefficient((2, 1, 4)) == -2
    assert xi.coefficient((1, 1, 4)) == 0


def test_json_keeps_fractions_exact():
    x = MultiVector(3, 2, [1, Fraction(1, 2), 0])
    payload = x.to_json()
    assert payload["coeffs"] == [1, {"num": 1, "den": 2}, 0]
    assert MultiVector.from_json(payload) == x


def test_lattice_closure(rng):
    for _ in range(20):
        k, l = random_lattice_vector(rng, 4, 1), random_lattice_vector(rng, 4, 2)
        product = wedge(k, l)
        assert product.is_integral()
        assert product.integral


@given(vectors(4), vectors(4))
def test_wedge_is_antisymmetric_on_vectors(a, b):
    assert wedge(a, b) == -wedge(b, a)


@given(vectors(4), vectors(4, 2))
def test_vector_and_bivector_commute(a, eta):
    assert wedge(a, eta) == wedge(eta, a)


@settings(max_examples=50)
@given(vectors(5), vectors(5), vectors(5))
def test_wedge_is_associative(a, b, c):
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


@settings(max_examples=50)
@given(vectors(4), vectors(4), vectors(4), small_fractions)
def test_wedge_is_bilinear(a, b, c, s):
    assert wedge(a * s + b, c) == wedge(a, c) * s + wedge(b, c)


@given(vectors(4), vectors(4), vectors(4))
def test_det_triple_matches_coordinate_formula(a, b, c):
    expected = wedge3_coords(a.coeffs, b.coeffs, c.coeffs)
    assert np.all(det_triple(a, b, c).coeffs == expected)
