import logging
from fractions import Fraction

import numpy as np

from src.cohomology import Phase
from src.exterior import wedge3_coords
from src.fellbundle.cyclotomic import ring_for
from src.fellbundle.grid import GridTricharacter
from src.fellbundle.sections import (FellSection, convolve, convolve_fiber, fiber_involute, fiber_mult,
                                     inner_product, left_action, random_values, right_action)
from src.reports import CheckReport

logger = logging.getLogger(__name__)

# f•(g•h) = χ(t∧u∧v)^ASSOCIATOR_ORIENTATION · ((f•g)•h) for homogeneous f, g, h
# on the fibres t, u, v. Frozen by the delta-triple oracle in the tests.
ASSOCIATOR_ORIENTATION = -1


class AssociatorUndefinedError(ArithmeticError):
    pass


class AssociatorDefect:

    def __init__(self, phase: Phase, chi_exponent: int, N: int, residual: float = 0.0):
        """
            The constant phase ρ with f•(g•h) = ρ·((f•g)•h), reported next to
            χ(t∧u∧v) and its inverse.

            Attributes
            -------------------
            phase (Phase):
                ρ as an element of R/Z (exact multiple of 1/N in exact mode).
            chi_exponent (int):
                e with χ(t∧u∧v) = ζ_N^e.
            N (int)
            residual (float):
                Spread of the entrywise ratios about ρ (float mode only).
        """
        self.phase = phase
        self.chi_exponent = int(chi_exponent) % N
        self.N = N
        self.residual = residual

    @property
    def chi(self):
        return Phase(Fraction(self.chi_exponent, self.N), self.phase.exact)

    @property
    def expected(self):
        return self.chi * ASSOCIATOR_ORIENTATION

    def matches(self, tol=1e-12):
        return (self.phase - self.expected).is_zero(tol)

    def to_json(self):
        return {"defect": self.phase, "chi": self.chi, "chi_inverse": -self.chi,
                "orientation": ASSOCIATOR_ORIENTATION, "matches": self.matches()}

    def __repr__(self):
        return f"AssociatorDefect({self.phase}, chi_exponent={self.chi_exponent})"


def ratio_phase(left, right, ring) -> (Phase, float):
    """
        The phase ρ with left = ρ·right on every entry.

        Raises
        -------------------
        AssociatorUndefinedError:
            If both products vanish identically or their ratio is not a constant
            phase.
    """
    if not np.any(ring.nonzero(right)) and not np.any(ring.nonzero(left)):
        raise AssociatorUndefinedError("Both parenthesisations vanish identically; the defect is undefined.")
    if ring.exact:
        exponent = ring.ratio_exponent(left, right)
        if exponent is None:
            raise AssociatorUndefinedError("The two parenthesisations are not related by an N-th root of unity.")
        return Phase(Fraction(exponent, ring.N), True), 0.0
    ratio = ring.ratio(left, right)
    if ratio is None:
        raise AssociatorUndefinedError("The entrywise ratio of the two parenthesisations is not constant.")
    return Phase(float(np.angle(ratio) / (2 * np.pi)), False), abs(abs(ratio) - 1.0)


def _fibre(section: FellSection):
    fibers = section.fibers()
    if len(fibers) != 1:
        raise ValueError(f"Associator defects need homogeneous sections, got support on {len(fibers)} fibres.")
    return fibers[0]


def associator_defect(f: FellSection, g: FellSection, h: FellSection, chi: GridTricharacter) -> AssociatorDefect:
    """
        Compare the two parenthesisations of f•g•h for sections supported on
        single fibres t, u, v.
    """
    t, u, v = _fibre(f), _fibre(g), _fibre(h)
    total = t + u + v
    left = convolve_fiber(f, convolve(g, h, chi), chi, total)
    right = convolve_fiber(convolve(f, g, chi), h, chi, total)
    phase, residual = ratio_phase(left, right, f.ring)
    return AssociatorDefect(phase, int(chi.exponent(t, u, v)), chi.N, residual)


def fiber_associator(t, u, v, h_1, h_2, h_3, chi: GridTricharacter, exact=True, multiply=fiber_mult):
    """
        The same defect computed on fibre slices with a fibre multiplication map.
    """
    ring = ring_for(chi.N, exact)
    t, u, v = (np.asarray(point, dtype=np.int64) for point in (t, u, v))
    left = multiply(t, u + v, h_1, multiply(u, v, h_2, h_3, chi), chi)
    right = multiply(t + u, v, multiply(t, u, h_1, h_2, chi), h_3, chi)
    phase, residual = ratio_phase(left, right, ring)
    return AssociatorDefect(phase, int(chi.exponent(t, u, v)), chi.N, residual)


def random_axiom_samples(rng, chi: GridTricharacter, count, exact=True, delta=True):
    """
        Samples for check_action_axioms. The first sample uses the fibres
        e₁, e₂, e₃ when n ≥ 3. With delta=True the slices are chained ζ-power
        deltas, so both parenthesisations are non-zero.

        Returns
        -------------------
        samples (list):
            Dicts with fibres t, u, v, slices h_1, h_2, h_3, a function a on the
            grid, a scalar exponent e and a dual point sigma.
    """
    grid = chi.grid
    ring = ring_for(grid.N, exact)
    samples = []
    for index in range(count):
        if index == 0 and grid.n >= 3:
            t, u, v = np.eye(grid.n, dtype=np.int64)[:3]
        else:
            t, u, v = rng.integers(0, grid.N, size=(3, grid.n))
        if delta:
            d = rng.integers(0, grid.N, size=grid.n)
            slices = []
            for anchor in (d + v + u, d + v, d):
                slice_ = ring.zeros((grid.size,))
                slice_[grid.index(anchor)] = ring.root_power(rng.integers(grid.N))
                slices.append(slice_)
        else:
            slices = [random_values(rng, ring, (grid.size,)) for _ in range(3)]
        samples.append({"t": t, "u": u, "v": v, "h_1": slices[0], "h_2": slices[1], "h_3": slices[2],
                        "a": random_values(rng, ring, (grid.size,)), "e": int(rng.integers(grid.N)),
                        "sigma": rng.integers(0, grid.N, size=grid.n)})
    return samples


def _compare(report, ring, condition, left, right, inputs, tol):
    equal = ring.equal(left, right, tol)
    residual = 0.0 if ring.exact and equal else float(np.max(np.abs(ring.to_complex(left) - ring.to_complex(right)),
                                                            initial=0.0))
    report.record_residual(condition, residual)
    if not equal:
        report.fail(inputs, residual, condition)


def check_action_axioms(chi: GridTricharacter, samples, exact=True, tol=1e-12, multiply=fiber_mult) -> CheckReport:
    """
        The action axioms of the twisted fibre bundle on homogeneous samples:
        unit fibre and unit law, additivity of the χ-phases and their commutation
        with the fibre multiplication, and the associator law. A-balancing, the
        A-valued inner product, the dual action and the involution on fibre slices
        are checked alongside.

        Parameters
        -------------------
        chi (GridTricharacter)
        samples (list):
            As produced by random_axiom_samples.
        exact (bool):
            Z[ζ_N] slices (True) or complex128 slices.
        tol (float):
            Float mode tolerance.
        multiply (callable):
            Fibre multiplication (t₁, t₂, h₁, h₂, χ) -> slice; replaced only by
            negative controls.

        Returns
        -------------------
        report (CheckReport):
            Conditions unit_fiber, unit_law, scalar_additivity, scalar_commutation,
            associator, balanced, inner_product, dual_action and involution.
    """
    grid = chi.grid
    ring = ring_for(grid.N, exact)
    zero = np.zeros(grid.n, dtype=np.int64)
    one = ring.ones((grid.size,))
    report = CheckReport("action_axioms", {"n": grid.n, "N": grid.N, "m": [int(value) for value in chi.coeffs],
                                           "exact": exact, "orientation": ASSOCIATOR_ORIENTATION})
    for sample in samples:
        t, u, v = (np.asarray(sample[key], dtype=np.int64) for key in ("t", "u", "v"))
        h_1, h_2, h_3, a = sample["h_1"], sample["h_2"], sample["h_3"], sample["a"]
        inputs = {"t": t, "u": u, "v": v}
        report.count()

        _compare(report, ring, "unit_fiber", multiply(zero, zero, a, h_3, chi), ring.mul(a, h_3), inputs, tol)
        _compare(report, ring, "unit_law", multiply(zero, t, one, h_1, chi), h_1, inputs, tol)
        _compare(report, ring, "unit_law", multiply(t, zero, h_1, one, chi), h_1, inputs, tol)

        first = wedge3_coords(t, u, v)
        second = wedge3_coords(v, t, t + u)
        additive = (chi.exponent_coords(first + second) - chi.exponent_coords(first)
                    - chi.exponent_coords(second)) % grid.N
        report.record_residual("scalar_additivity", float(additive != 0))
        if additive:
            report.fail(inputs, int(additive), "scalar_additivity")

        product = multiply(t, u, h_1, h_2, chi)
        scaled = ring.twist(product, sample["e"])
        _compare(report, ring, "scalar_commutation", multiply(t, u, ring.twist(h_1, sample["e"]), h_2, chi), scaled,
                 inputs, tol)
        _compare(report, ring, "scalar_commutation", multiply(t, u, h_1, ring.twist(h_2, sample["e"]), chi), scaled,
                 inputs, tol)

        try:
            defect = fiber_associator(t, u, v, h_1, h_2, h_3, chi, exact, multiply)
        except AssociatorUndefinedError as error:
            report.fail(inputs, str(error), "associator")
        else:
            residual = max(defect.phase.distance(defect.expected), defect.residual)
            report.record_residual("associator", 0.0 if exact and defect.matches() else residual)
            if not defect.matches(tol):
                report.fail(inputs, {"defect": defect.phase, "expected": defect.expected}, "associator")

        _compare(report, ring, "balanced", multiply(t, u, right_action(h_1, a, grid, exact), h_2, chi),
                 multiply(t, u, h_1, left_action(u, a, h_2, grid, exact), chi), inputs, tol)
        _compare(report, ring, "inner_product", inner_product(right_action(h_1, a, grid, exact), h_2, grid, exact),
                 ring.mul(ring.conj(np.asarray(a)), inner_product(h_1, h_2, grid, exact)), inputs, tol)

        sigma = np.asarray(sample["sigma"], dtype=np.int64)
        _compare(report, ring, "dual_action",
                 multiply(t, u, ring.twist(h_1, int(sigma @ t)), ring.twist(h_2, int(sigma @ u)), chi),
                 ring.twist(product, int(sigma @ (t + u))), inputs, tol)

        _compare(report, ring, "involution", fiber_involute(t + u, product, grid, exact),
                 multiply(-u, -t, fiber_involute(u, h_2, grid, exact), fiber_involute(t, h_1, grid, exact), chi),
                 inputs, tol)

    logger.debug("checked action axioms on %d samples, %d failures", report.samples, len(report.failures))
    return report
