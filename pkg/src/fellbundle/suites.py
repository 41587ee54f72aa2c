import logging

import numpy as np

from config.load_configs import FELL_BUNDLE_CONFIG
from src.fellbundle.associator import (ASSOCIATOR_ORIENTATION, AssociatorUndefinedError, associator_defect,
                                       check_action_axioms, random_axiom_samples)
from src.fellbundle.grid import Grid, GridTricharacter
from src.fellbundle.sections import (convolve, hs_norm, hs_norm_via_convolution, involute, kernel_adjoint,
                                     kernel_mult, measure_weight, phi, phi_inv, random_homogeneous, random_kernel)
from src.reports import CheckReport

logger = logging.getLogger(__name__)

FELL_SUITES = ("phi", "associator", "axioms", "norms")


def _compare(report, condition, left, right, inputs, tol):
    equal = left.equals(right, tol)
    residual = 0.0 if left.exact and equal else left.max_residual(right)
    report.record_residual(condition, residual)
    if not equal:
        report.fail(inputs, residual, condition)


def phi_suite(chi, rng, pairs, exact=True, tol=1e-12):
    """
        Φ is a bijection intertwining kernel_mult with convolve and the kernel
        adjoint with involute; involute is an anti-multiplicative involution.
    """
    report = CheckReport("phi")
    tables = {}
    for index in range(pairs):
        K_1, K_2 = random_kernel(rng, chi.grid, exact), random_kernel(rng, chi.grid, exact)
        f, g = phi(K_1), phi(K_2)
        inputs = {"pair": index}
        report.count()
        _compare(report, "round_trip", phi_inv(f), K_1, inputs, tol)
        product = convolve(f, g, chi)
        _compare(report, "multiplication", phi(kernel_mult(K_1, K_2, chi)), product, inputs, tol)
        _compare(report, "adjoint", phi(kernel_adjoint(K_1)), involute(f), inputs, tol)
        _compare(report, "involution", involute(involute(f)), f, inputs, tol)
        _compare(report, "anti_multiplicative", involute(product), convolve(involute(g), involute(f), chi), inputs, tol)
        if index == 0:
            tables = {"K_1": K_1, "K_2": K_2, "f": f, "g": g, "f_g": product}
    return report, tables


def norms_suite(chi, rng, pairs, exact=True, tol=1e-12):
    """
        The two Hilbert-Schmidt norm formulas agree and Φ is isometric.
    """
    report = CheckReport("norms")
    tables = {}
    for index in range(pairs):
        K = random_kernel(rng, chi.grid, exact)
        f = phi(K)
        inputs = {"sample": index}
        report.count()
        for condition, left, right in (("convolution_formula", hs_norm(f), hs_norm_via_convolution(f, chi)),
                                       ("isometry", hs_norm(f), hs_norm(K))):
            residual = abs(left - right)
            report.record_residual(condition, residual)
            if residual > max(tol, 1e-12) * max(1.0, left):
                report.fail(inputs, residual, condition)
        if index == 0:
            tables = {"K": K, "f": f}
    return report, tables


def associator_suite(chi, rng, triples, exact=True, tol=1e-12):
    """
        associator_defect on random homogeneous triples equals χ(t∧u∧v)^σ, and
        is trivial whenever t∧u∧v = 0 (the first triple repeats a fibre).
    """
    grid = chi.grid
    report = CheckReport("associator", {"orientation": ASSOCIATOR_ORIENTATION})
    tables = {}
    for index in range(triples):
        if index == 0 and grid.n >= 3:
            fibres = np.eye(grid.n, dtype=np.int64)[:3]
        elif index == 1:
            point = rng.integers(0, grid.N, size=grid.n)
            fibres = np.stack([point, rng.integers(0, grid.N, size=grid.n), point])
        else:
            fibres = rng.integers(0, grid.N, size=(3, grid.n))
        sections = [random_homogeneous(rng, grid, fibre, exact) for fibre in fibres]
        inputs = {"t": fibres[0], "u": fibres[1], "v": fibres[2]}
        report.count()
        try:
            defect = associator_defect(*sections, chi)
        except AssociatorUndefinedError as error:
            report.fail(inputs, str(error), "defined")
            continue
        report.record_residual("orientation", 0.0 if exact and defect.matches() else
                               max(defect.phase.distance(defect.expected), defect.residual))
        if not defect.matches(tol):
            report.fail(inputs, defect, "orientation")
        if defect.chi_exponent == 0 and not defect.phase.is_zero(tol):
            report.fail(inputs, defect, "trivial_wedge")
        if index == 0:
            tables = {"f": sections[0], "g": sections[1], "h": sections[2]}
    return report, tables


def axioms_suite(chi, rng, triples, exact=True, tol=1e-12):
    samples = random_axiom_samples(rng, chi, triples, exact)
    return check_action_axioms(chi, samples, exact, tol), {}


SUITE_RUNNERS = {"phi": (phi_suite, "pairs"), "norms": (norms_suite, "pairs"),
                 "associator": (associator_suite, "triples"), "axioms": (axioms_suite, "triples")}


def run_fell_suite(name, n=FELL_BUNDLE_CONFIG.n, N=FELL_BUNDLE_CONFIG.N, m=FELL_BUNDLE_CONFIG.m, exact=True,
                   seed=FELL_BUNDLE_CONFIG.seed, pairs=FELL_BUNDLE_CONFIG.pairs, triples=FELL_BUNDLE_CONFIG.triples,
                   tol=FELL_BUNDLE_CONFIG.tolerance):
    """
        Run one Fell-bundle suite on a freshly seeded grid model.

        Parameters
        -------------------
        name (str):
            One of phi, associator, axioms, norms.
        n, N (int):
            Grid dimension and period.
        m (list):
            Integral tricharacter coefficients, C(n,3) of them.
        exact (bool):
            Z[ζ_N] arithmetic (True) or complex128.
        seed (int)
        pairs, triples (int):
            Sample counts for the pair based (phi, norms) and triple based
            (associator, axioms) suites.
        tol (float):
            Float mode tolerance.

        Returns
        -------------------
        report (CheckReport):
            With header n, N, m, exact, measure_weight and orientation.
        tables (dict):
            The first sample's sections/kernels, for saving.
        chi (GridTricharacter)
    """
    if name not in SUITE_RUNNERS:
        raise ValueError(f"Unknown Fell-bundle suite {name!r}; choose from {list(FELL_SUITES)}.")
    grid = Grid(n, N)
    chi = GridTricharacter(grid, m)
    runner, count_key = SUITE_RUNNERS[name]
    count = pairs if count_key == "pairs" else triples
    rng = np.random.default_rng(seed)
    report, tables = runner(chi, rng, count, exact, tol)
    report.header.update({"n": n, "N": N, "m": [int(value) for value in chi.coeffs], "exact": exact,
                          "measure_weight": measure_weight(grid), "orientation": ASSOCIATOR_ORIENTATION,
                          "suite": name, "seed": seed})
    logger.debug("fell suite %s: %d samples, %d failures", name, report.samples, len(report.failures))
    return report, tables, chi
