from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.exterior import MultiVector, wedge
from src.twogroup import (GBigon, H1Element, H2Element, boundary, check_coherence, check_crossed_module, conj,
                          g_associator, g_mul, g_vertical, h1_inv, h1_mul, h2_inv, h2_mul,
                          random_coherence_samples, random_crossed_module_samples)


def e(n, *indices):
    return MultiVector.basis_element(n, indices)


def zero(n, grade):
    return MultiVector.zero(n, grade)


def test_h1_product_example():
    product = h1_mul(H1Element(e(2, 1), zero(2, 2)), H1Element(e(2, 2), zero(2, 2)))
    assert product == H1Element(e(2, 1) + e(2, 2), e(2, 1, 2))


def test_h1_inverse():
    a = H1Element(e(3, 1) + e(3, 2), e(3, 2, 3))
    assert h1_mul(a, h1_inv(a)) == H1Element.unit(3)


def test_conjugation_example():
    h = conj(H1Element(e(3, 1), zero(3, 2)), H2Element(e(3, 2, 3), zero(3, 3)))
    assert h == H2Element(e(3, 2, 3), e(3, 1, 2, 3))


def test_boundary_forgets_xi():
    assert boundary(H2Element(e(3, 1, 3), e(3, 1, 2, 3))) == H1Element(zero(3, 1), e(3, 1, 3))


def test_associator_is_minus_triple_wedge():
    bigon = g_associator(e(3, 1), e(3, 2), e(3, 3))
    assert bigon.t == e(3, 1) + e(3, 2) + e(3, 3)
    assert bigon.xi == -e(3, 1, 2, 3)


def test_integral_quotient_reduces_xi():
    bigon = GBigon(e(3, 1), MultiVector(3, 3, [Fraction(3, 2)]), quotient="integral")
    assert bigon.xi.coeffs.tolist() == [Fraction(1, 2)]
    doubled = g_mul(bigon, bigon)
    assert doubled.xi.coeffs.tolist() == [0]


def test_h2_inverse():
    a = H2Element(e(3, 1, 2) + e(3, 2, 3), MultiVector(3, 3, [Fraction(2, 3)]))
    assert h2_mul(a, h2_inv(a)) == H2Element(zero(3, 2), zero(3, 3))


def test_vertical_composite_adds_xi_on_one_arrow():
    first = GBigon(e(3, 2), MultiVector(3, 3, [Fraction(1, 4)]))
    second = GBigon(e(3, 2), MultiVector(3, 3, [Fraction(1, 2)]))
    assert g_vertical(first, second) == GBigon(e(3, 2), MultiVector(3, 3, [Fraction(3, 4)]))
    with pytest.raises(ValueError):
        g_vertical(first, GBigon(e(3, 1), zero(3, 3)))


def test_crossed_module_laws_hold(rng):
    report = check_crossed_module(random_crossed_module_samples(rng, n=5, count=1000))
    assert report.samples == 1000
    assert report.passed


def test_corrupted_conjugation_fails_equivariance(rng):
    def doubled(g, h):
        return H2Element(h.theta * 2, h.xi + wedge(g.t, h.theta))

    report = check_crossed_module(random_crossed_module_samples(rng, n=4, count=20), conj_map=doubled)
    assert not report.passed
    assert "equivariance" in {failure["condition"] for failure in report.failures}


def test_coherence_laws_hold(rng):
    report = check_coherence(random_coherence_samples(rng, n=5, count=500))
    assert report.passed
    assert report.header["associator_sign"] == -1


def test_coherence_holds_modulo_lattice(rng):
    assert check_coherence(random_coherence_samples(rng, n=4, count=50), quotient="integral").passed


def test_sign_flipped_associator_still_satisfies_pentagon(rng):
    def flipped(t_1, t_2, t_3, quotient=None):
        bigon = g_associator(t_1, t_2, t_3, quotient)
        return GBigon(bigon.t, -bigon.xi, quotient)

    report = check_coherence(random_coherence_samples(rng, n=4, count=30), associator=flipped)
    conditions = {failure["condition"] for failure in report.failures}
    assert "omega_iota_cocycle" in conditions
    assert "phi_associator" in conditions
    assert "pentagon" not in conditions


def test_wrong_phi_orientation_fails(rng):
    def positive(g):
        return H2Element(g.eta, MultiVector.zero(g.n, 3, g.exact))

    report = check_coherence(random_coherence_samples(rng, n=3, count=10), phi_map=positive)
    assert "phi_arrows" in {failure["condition"] for failure in report.failures}


def test_float_mode_uses_tolerance(rng):
    report = check_crossed_module(random_crossed_module_samples(rng, n=4, count=50, exact=False), tol=1e-9)
    assert report.passed


@settings(max_examples=30)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_h1_product_is_associative(seed):
    samples = random_crossed_module_samples(np.random.default_rng(seed), n=4, count=3)
    a, b, c = (sample[0] for sample in samples)
    assert h1_mul(h1_mul(a, b), c) == h1_mul(a, h1_mul(b, c))
