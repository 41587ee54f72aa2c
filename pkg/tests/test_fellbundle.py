from fractions import Fraction

import numpy as np
import pytest

from src.cohomology import Phase
from src.fellbundle.associator import (ASSOCIATOR_ORIENTATION, AssociatorUndefinedError, associator_defect,
                                       check_action_axioms, fiber_associator, random_axiom_samples)
from src.fellbundle.cyclotomic import CyclotomicRing
from src.fellbundle.grid import Grid, GridTricharacter
from src.fellbundle.sections import (FellSection, Kernel, convolve, dual_action, fiber_mult, hs_norm,
                                     hs_norm_via_convolution, inner_product, involute, kernel_adjoint, kernel_mult,
                                     left_action, load_tables, phi, phi_inv, random_homogeneous, random_kernel,
                                     random_section, random_values, right_action, save_tables)
from src.fellbundle.suites import FELL_SUITES, run_fell_suite

E1, E2, E3 = np.eye(3, dtype=np.int64)


@pytest.fixture
def chi():
    return GridTricharacter(Grid(3, 4), [1])


def convolve_oracle(f, g, chi):
    """
        Direct triple loop over (t, s, r) on complex values.
    """
    grid = chi.grid
    F, G = f.to_complex(), g.to_complex()
    out = np.zeros((grid.size, grid.size), dtype=np.complex128)
    for t, s, r in np.ndindex(grid.size, grid.size, grid.size):
        p_t, p_s, p_r = grid.points[t], grid.points[s], grid.points[r]
        phase = chi.value(p_r, p_t, p_s)
        out[t, s] += phase * F[r, grid.index(p_s + p_t - p_r)] * G[grid.index(p_t - p_r), s]
    return out


def test_cyclotomic_reduction():
    ring = CyclotomicRing(4)
    # 1 + ζ² = 0 in Z[i]
    assert ring.is_zero(np.array([1, 0, 1, 0]))
    assert not ring.is_zero(np.array([1, 1, 0, 0]))
    assert ring.equal(ring.mul(ring.root_power(3), ring.root_power(2)), ring.root_power(1))
    assert ring.ratio_exponent(ring.root_power(3), ring.root_power(1)) == 2


def test_tricharacter_on_grid(chi):
    assert chi.exponent(E1, E2, E3) == 1
    assert chi.exponent(E2, E1, E3) == 3
    assert chi.exponent(E1 * 5, E2, E3) == 1
    assert GridTricharacter(Grid(3, 4), [4]).trivial
    with pytest.raises(ValueError):
        GridTricharacter(Grid(3, 4), [1, 2])


def test_delta_convolution(chi):
    grid = chi.grid
    f = FellSection.delta(grid, E1, E2 + E3)
    g = FellSection.delta(grid, E2, E3)
    expected = FellSection.delta(grid, E1 + E2, E3, value_exponent=1)
    assert convolve(f, g, chi).equals(expected)
    # mismatched columns multiply to zero
    assert convolve(f, FellSection.delta(grid, E2, E1), chi).is_zero()


@pytest.mark.parametrize("m", [[0], [1], [3]])
def test_convolution_matches_triple_loop(m, rng):
    chi = GridTricharacter(Grid(3, 2), m)
    f, g = random_section(rng, chi.grid), random_section(rng, chi.grid, fibers=3)
    assert np.allclose(convolve(f, g, chi).to_complex(), convolve_oracle(f, g, chi))


def test_float_convolution_matches_triple_loop(rng):
    chi = GridTricharacter(Grid(3, 3), [1])
    f, g = random_section(rng, chi.grid, exact=False, fibers=4), random_section(rng, chi.grid, exact=False, fibers=4)
    assert np.allclose(convolve(f, g, chi).data, convolve_oracle(f, g, chi))


def test_phi_is_a_multiplicative_bijection(rng):
    grid = Grid(3, 2)
    chi = GridTricharacter(grid, [1])
    K_1, K_2 = random_kernel(rng, grid), random_kernel(rng, grid)
    f, g = phi(K_1), phi(K_2)
    assert phi_inv(f).equals(K_1)
    assert phi(kernel_mult(K_1, K_2, chi)).equals(convolve(f, g, chi))
    assert phi(kernel_adjoint(K_1)).equals(involute(f))


def test_involution_is_anti_multiplicative(chi, rng):
    f = random_section(rng, chi.grid, fibers=3)
    g = random_section(rng, chi.grid, fibers=3)
    assert involute(involute(f)).equals(f)
    assert involute(convolve(f, g, chi)).equals(convolve(involute(g), involute(f), chi))


def test_hilbert_schmidt_norms(rng):
    grid = Grid(3, 2)
    chi = GridTricharacter(grid, [1])
    K = random_kernel(rng, grid)
    f = phi(K)
    assert hs_norm(f) == pytest.approx(hs_norm(K))
    assert hs_norm_via_convolution(f, chi) == pytest.approx(hs_norm(f))
    assert hs_norm(FellSection.delta(grid, E1, E2)) == pytest.approx(1.0)


def test_dual_action_is_multiplicative(chi, rng):
    f = random_section(rng, chi.grid, fibers=2)
    g = random_section(rng, chi.grid, fibers=2)
    sigma = np.array([1, 2, 3])
    assert dual_action(sigma, convolve(f, g, chi)).equals(convolve(dual_action(sigma, f), dual_action(sigma, g), chi))


def test_associator_of_basis_deltas(chi):
    grid = chi.grid
    f = FellSection.delta(grid, E1, E2 + E3)
    g = FellSection.delta(grid, E2, E3)
    h = FellSection.delta(grid, E3, np.zeros(3, dtype=np.int64))
    defect = associator_defect(f, g, h, chi)
    assert ASSOCIATOR_ORIENTATION == -1
    assert defect.chi == Phase(Fraction(1, 4))
    assert defect.phase == Phase(Fraction(3, 4))
    assert defect.matches()
    assert defect.to_json()["chi_inverse"] == Phase(Fraction(3, 4))


def test_associator_is_trivial_without_triple_wedge(chi, rng):
    grid = chi.grid
    sections = [random_homogeneous(rng, grid, point) for point in (E1, E2, E1 + E2)]
    defect = associator_defect(*sections, chi)
    assert defect.chi_exponent == 0
    assert defect.phase.is_zero()


def test_associator_needs_homogeneous_sections(chi, rng):
    f = random_section(rng, chi.grid, fibers=2)
    g = random_homogeneous(rng, chi.grid, E2)
    with pytest.raises(ValueError):
        associator_defect(f, g, g, chi)


def test_associator_undefined_for_vanishing_products(chi):
    zeros = CyclotomicRing(4).zeros((chi.grid.size,))
    with pytest.raises(AssociatorUndefinedError):
        fiber_associator(E1, E2, E3, zeros, zeros, zeros, chi)


def test_fibre_multiplication_shifts_first_slice(chi):
    grid = chi.grid
    ring = CyclotomicRing(4)
    h_1, h_2 = ring.zeros((grid.size,)), ring.zeros((grid.size,))
    h_2[0] = ring.root_power(0)
    h_1[grid.index(E3)] = ring.root_power(0)
    assert ring.is_zero(fiber_mult(E1, E2, h_1, h_2, chi)).all()

    h_1 = ring.zeros((grid.size,))
    h_1[grid.index(E2)] = ring.root_power(0)
    product = fiber_mult(E1, E2, h_1, h_2, chi)
    assert ring.equal(product[0], ring.root_power(0))
    assert ring.is_zero(product[1:]).all()


def test_fibre_multiplication_is_balanced(chi, rng):
    grid, ring = chi.grid, CyclotomicRing(4)
    t, u = np.array([1, 0, 2]), np.array([0, 3, 1])
    h_1, h_2, a = (random_values(rng, ring, (grid.size,)) for _ in range(3))
    assert ring.equal(fiber_mult(t, u, right_action(h_1, a, grid), h_2, chi),
                      fiber_mult(t, u, h_1, left_action(u, a, h_2, grid), chi))


def test_inner_product_is_sesquilinear_over_functions(chi, rng):
    grid, ring = chi.grid, CyclotomicRing(4)
    h_1, h_2, a = (random_values(rng, ring, (grid.size,)) for _ in range(3))
    pairing = inner_product(h_1, h_2, grid)
    assert ring.equal(inner_product(right_action(h_1, a, grid), h_2, grid), ring.mul(ring.conj(a), pairing))
    assert ring.equal(inner_product(h_1, right_action(h_2, a, grid), grid), ring.mul(pairing, a))


def test_action_axioms_hold(chi, rng):
    report = check_action_axioms(chi, random_axiom_samples(rng, chi, 30))
    assert report.passed, report.failures


def test_action_axioms_in_float_mode(chi, rng):
    samples = random_axiom_samples(rng, chi, 10, exact=False, delta=False)
    assert check_action_axioms(chi, samples, exact=False, tol=1e-9).passed


def test_action_axioms_report_bimodule_conditions(chi, rng):
    report = check_action_axioms(chi, random_axiom_samples(rng, chi, 3))
    assert report.passed, report.failures
    assert report.residuals["balanced"] == 0.0
    assert report.residuals["inner_product"] == 0.0


def test_unshifted_multiplication_is_not_balanced(chi, rng):
    ring = CyclotomicRing(4)

    def unshifted(t_1, t_2, h_1, h_2, _):
        return ring.mul(h_1, h_2)

    report = check_action_axioms(chi, random_axiom_samples(rng, chi, 3, delta=False), multiply=unshifted)
    assert "balanced" in {failure["condition"] for failure in report.failures}


def test_untwisted_multiplication_fails_associator(chi, rng):
    untwisted = GridTricharacter(chi.grid, [0])

    def plain(t_1, t_2, h_1, h_2, _):
        return fiber_mult(t_1, t_2, h_1, h_2, untwisted)

    report = check_action_axioms(chi, random_axiom_samples(rng, chi, 5), multiply=plain)
    conditions = {failure["condition"] for failure in report.failures}
    assert "associator" in conditions
    assert "unit_law" not in conditions


def test_tables_round_trip_through_zarr(chi, rng, tmp_path):
    f = random_section(rng, chi.grid, fibers=2)
    K = random_kernel(rng, chi.grid)
    path = save_tables(str(tmp_path / "tables.zarr"), {"f": f, "K": K}, chi)
    tables, loaded_chi = load_tables(path)
    assert loaded_chi.coeffs.tolist() == [1]
    assert isinstance(tables["f"], FellSection) and isinstance(tables["K"], Kernel)
    assert tables["f"].equals(f) and tables["K"].equals(K)

    again = save_tables(str(tmp_path / "tables.zarr"), {"f": f}, chi)
    assert again != path


@pytest.mark.parametrize("name", FELL_SUITES)
def test_suites_pass_at_desk_scale(name):
    report, tables, chi = run_fell_suite(name, n=3, N=3, m=[1], pairs=3, triples=10)
    assert report.passed, report.failures
    assert report.header["measure_weight"] == Fraction(1, 27)
    assert tables or name == "axioms"


def test_unknown_suite_raises():
    with pytest.raises(ValueError):
        run_fell_suite("pentagon")
