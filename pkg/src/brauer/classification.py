import logging
from math import comb

import numpy as np

from config.load_configs import CHECK_CONFIG
from src.cohomology import (AntisymmetricPairing, Cocycle2, ObstructionFunction, PhaseArray, Tricharacter, box_points,
                            box_triples, coboundary1, cocycle_defects, commutator_pairing, random_pairing,
                            standard_cocycle)
from src.exterior import DualVector, basis, random_lattice_vector, to_exact
from src.reports import CheckReport

logger = logging.getLogger(__name__)

# p*_ijk(1) = +e_i∧e_j∧e_k and DD(A) = +m; both signs are conventions.
SUBTORUS_SIGN = 1
DD_SIGN = 1

MAX_REPORTED_FAILURES = 20


class FiberAction:

    def __init__(self, omega: Cocycle2, U: Tricharacter):
        """
            Data (ω, U) of an action of the 2-group on the fibre C: a normalized
            2-cocycle ω on Zⁿ and a character U of Λ³Rⁿ with
            ω(k+l,m) ω(k,l) U(k∧l∧m) = ω(k,l+m) ω(l,m).
        """
        if not isinstance(omega, Cocycle2) or not isinstance(U, Tricharacter):
            raise ValueError("A FiberAction needs a Cocycle2 and a Tricharacter.")
        if omega.n != U.n:
            raise ValueError(f"Dimension mismatch: ω on Z^{omega.n}, U on Λ³R^{U.n}.")
        self.omega = omega
        self.U = U

    @property
    def n(self):
        return self.omega.n

    @classmethod
    def trivial(cls, n, exact=True):
        return cls(Cocycle2.trivial(n, exact), Tricharacter.trivial(n, exact))

    def __mul__(self, other):
        """
            Pointwise product (tensor product of the fibre actions).
        """
        if not isinstance(other, FiberAction):
            raise ValueError(f"Cannot multiply a FiberAction by {type(other).__name__}.")
        return FiberAction(self.omega * other.omega, self.U * other.U)

    def twisted(self, V: PhaseArray, box: int, out_box: int = None):
        """
            The equivalent action (ω′, U) with ω′(k,l) = ω(k,l) V(k+l) V(k)⁻¹ V(l)⁻¹,
            i.e. ω multiplied by the inverse coboundary of V. The result is a table
            cocycle on out_box.
        """
        return FiberAction(self.omega * coboundary1(V, box, out_box).inverse(), self.U)

    def to_json(self):
        return {"omega": self.omega.to_json(), "U": self.U.to_json()}

    @classmethod
    def from_json(cls, payload, exact=None):
        try:
            omega = Cocycle2.from_json(payload["omega"], exact)
            U = Tricharacter.from_json(payload["U"], n=omega.n, exact=exact)
        except (KeyError, TypeError) as error:
            raise ValueError(f"Malformed fiber action payload {payload!r}.") from error
        return cls(omega, U)

    def __repr__(self):
        return f"FiberAction({self.omega!r}, {self.U!r})"


class BrauerClass:

    def __init__(self, m: DualVector, theta: AntisymmetricPairing):
        """
            Invariant of an equivariant Brauer class over the n-torus: the integral
            vector m in Zᵏ (k = C(n,3), Λ³Zⁿ-dual coordinates) and the pairing Θ
            in H²(Zⁿ, T).
        """
        if not isinstance(m, DualVector) or m.grade != 3:
            raise ValueError(f"m must be a grade 3 DualVector, got {m!r}.")
        if not m.is_integral():
            raise ValueError(f"m must be integral, got {m.coeffs.tolist()}.")
        if not isinstance(theta, AntisymmetricPairing):
            theta = AntisymmetricPairing(theta)
        if theta.n != m.n:
            raise ValueError(f"Dimension mismatch: m over n={m.n}, Θ over n={theta.n}.")
        self.m = DualVector(m.n, 3, m.integer_coeffs().tolist(), integral=True)
        self.theta = theta

    @property
    def n(self):
        return self.m.n

    @classmethod
    def zero(cls, n, exact=True):
        return cls(DualVector.zero(n, 3), AntisymmetricPairing.zero(n, exact))

    def __eq__(self, other):
        if not isinstance(other, BrauerClass):
            return NotImplemented
        return self.m == other.m and self.theta == other.theta

    def __hash__(self):
        return hash((self.m, self.theta))

    def equals(self, other, tol=CHECK_CONFIG.float_tolerance):
        return self.m == other.m and self.theta.equals(other.theta, tol)

    def is_zero(self, tol=CHECK_CONFIG.float_tolerance):
        return self.m.is_zero() and self.theta.is_zero(tol)

    def __repr__(self):
        return f"BrauerClass(m={[int(value) for value in self.m.coeffs]}, theta={self.theta.to_json()})"

    def to_json(self):
        return {"n": self.n, "m": [int(value) for value in self.m.coeffs], "theta": self.theta.to_json()}

    @classmethod
    def from_json(cls, payload, exact=None):
        try:
            n = int(payload["n"])
            m = DualVector(n, 3, payload["m"], integral=True, exact=True)
            theta = AntisymmetricPairing(payload["theta"], exact)
        except (KeyError, TypeError) as error:
            raise ValueError(f"Malformed Brauer class payload {payload!r}.") from error
        return cls(m, theta)


def _table_triple_mask(k, l, m, box):
    """
        Triples whose lookups ω(k+l,m), ω(k,l), ω(k,l+m), ω(l,m) all lie in the box.
    """
    inside = np.ones(len(k), dtype=bool)
    for vectors in (k, l, m, k + l, l + m):
        inside &= np.all(np.abs(vectors) <= box, axis=1)
    return inside


def validate_fiber_action(a: FiberAction, box=CHECK_CONFIG.validation_box, max_triples=CHECK_CONFIG.max_triples,
                          seed=CHECK_CONFIG.seed, tol=CHECK_CONFIG.float_tolerance):
    """
        Check the conditions on (ω, U):

            normalization:  ω(0,l) = ω(k,0) = 1
            homomorphism:   U is a homomorphism (structural: U is given by a linear form)
            cocycle:        ω(k+l,m) ω(k,l) U(k∧l∧m) = ω(k,l+m) ω(l,m) on [-box,box]ⁿ
            lattice_trivial: U is trivial on Λ³Zⁿ

        Parameters
        -------------------
        a (FiberAction):
            The action to validate.
        box (int):
            Triples are drawn from [-box,box]ⁿ. For table cocycles only triples
            whose lookups stay inside the declared table box are checked.
        max_triples (int):
            Enumerate the box when it has at most this many triples, otherwise
            sample (see cohomology.box_triples). The header records which.

        Returns
        -------------------
        report (CheckReport):
            At most MAX_REPORTED_FAILURES failing triples are listed per
            condition; header["violations"] holds the full counts.
    """
    n = a.n
    report = CheckReport("fiber-action", header={"box": box, "u_homomorphism": "structural"})
    violations = {"normalization": 0, "cocycle": 0, "lattice_trivial": 0}

    normal_box = box if a.omega.form == 'standard' else min(box, a.omega.box)
    points = box_points(n, normal_box)
    zero = np.zeros_like(points)
    for name, values in (("left", a.omega.evaluate(zero, points)), ("right", a.omega.evaluate(points, zero))):
        bad = np.flatnonzero(~values.zero_mask(tol))
        violations["normalization"] += len(bad)
        for index in bad[:MAX_REPORTED_FAILURES]:
            report.fail({"side": name, "k": points[index]}, values.phase(index), condition="normalization")
    report.count(2 * len(points))

    k, l, m, exhaustive = box_triples(n, box, max_triples=max_triples, seed=seed)
    if a.omega.form == 'table':
        inside = _table_triple_mask(k, l, m, a.omega.box)
        k, l, m = k[inside], l[inside], m[inside]
    defects = cocycle_defects(a.omega, a.U, k, l, m)
    bad = np.flatnonzero(~defects.zero_mask(tol))
    violations["cocycle"] = len(bad)
    for index in bad[:MAX_REPORTED_FAILURES]:
        report.fail({"k": k[index], "l": l[index], "m": m[index]}, defects.phase(index), condition="cocycle")
    report.count(len(k))
    if not defects.exact:
        report.record_residual("cocycle", defects.distances().max(initial=0.0))

    if not a.U.integral:
        violations["lattice_trivial"] = 1
        report.fail({"c": a.U.c}, a.U.c.fractional_part(), condition="lattice_trivial")
    report.count()

    report.header["exhaustive"] = exhaustive
    report.header["violations"] = violations
    logger.debug("validated fiber action on %d triples (exhaustive=%s)", len(k), exhaustive)
    return report


def classify(a: FiberAction) -> BrauerClass:
    """
        The invariant (m, Θ) of a fibre action: m is U's coefficient vector, Θ the
        commutator pairing of ω.
    """
    if not a.U.integral:
        raise ValueError(f"U with coefficients {a.U.c.coeffs.tolist()} is not trivial on Λ³Zⁿ; "
                         "this is not a valid fibre action.")
    return BrauerClass(DualVector(a.n, 3, a.U.c.integer_coeffs().tolist(), integral=True),
                       commutator_pairing(a.omega))


def _check_same_n(x, y):
    if x.n != y.n:
        raise ValueError(f"Dimension mismatch: {x.n} and {y.n}.")


def brauer_mul(x: BrauerClass, y: BrauerClass) -> BrauerClass:
    _check_same_n(x, y)
    return BrauerClass(x.m + y.m, x.theta + y.theta)


def brauer_inv(x: BrauerClass) -> BrauerClass:
    return BrauerClass(-x.m, -x.theta)


def restrict_subtorus(x: BrauerClass, indices) -> BrauerClass:
    """
        Restriction to the 3-subtorus spanned by e_i, e_j, e_k (1 ≤ i < j < k ≤ n).
    """
    indices = tuple(int(index) for index in indices)
    if len(indices) != 3 or not (1 <= indices[0] < indices[1] < indices[2] <= x.n):
        raise ValueError(f"Subtorus indices must satisfy 1 <= i < j < k <= {x.n}, got {indices}.")
    coefficient = SUBTORUS_SIGN * x.m.coefficient(indices)
    return BrauerClass(DualVector(3, 3, [coefficient], integral=True), x.theta.restrict(indices))


def dd_class(x: BrauerClass) -> DualVector:
    """
        Dixmier-Douady invariant in H³(Tⁿ, Z) ≅ Zᵏ; the Θ component maps to zero.
    """
    return DD_SIGN * x.m


def mackey(x: BrauerClass) -> AntisymmetricPairing:
    return x.theta


def action_from_obstruction(m: DualVector, theta: AntisymmetricPairing) -> FiberAction:
    """
        A fibre action realizing (m, Θ): the standard cocycle of Θ with U the
        character whose coefficients are m.
    """
    if not isinstance(theta, AntisymmetricPairing):
        theta = AntisymmetricPairing(theta)
    if m.n != theta.n:
        raise ValueError(f"Dimension mismatch: m over n={m.n}, Θ over n={theta.n}.")
    if not m.is_integral():
        raise ValueError(f"m must be integral, got {m.coeffs.tolist()}.")
    return FiberAction(standard_cocycle(theta), Tricharacter(DualVector(m.n, 3, m.integer_coeffs().tolist())))


def sign_conventions():
    return {"subtorus_sign": SUBTORUS_SIGN, "dd_sign": DD_SIGN}


def random_brauer_class(rng, n, denominator=CHECK_CONFIG.denominator, bound=3):
    return BrauerClass(random_lattice_vector(rng, n, 3, bound, dual=True), random_pairing(rng, n, denominator))


def subtori(n):
    return list(basis(n, 3))


def assemble_obstruction(n, dd_values: dict, subtorus_list=None) -> ObstructionFunction:
    """
        Lifting obstruction over a finite set of orbits, assembled from the
        Dixmier-Douady values of the restrictions to 3-subtori.

        Parameters
        -------------------
        n (int):
            Dimension of the torus.
        dd_values (dict):
            Base point -> list of integers, one per entry of subtorus_list.
        subtorus_list (list):
            Index triples (i, j, k), 1 ≤ i < j < k ≤ n. Default: all C(n,3) of them
            in lexicographic order. Subtori not listed contribute zero.

        Returns
        -------------------
        chi (ObstructionFunction):
            Grade 3 values m(p) with m(p)_ijk = DD_SIGN·SUBTORUS_SIGN·dd(p)_ijk, so
            that dd_class∘restrict_subtorus returns the input.
    """
    positions = {indices: position for position, indices in enumerate(subtori(n))}
    subtorus_list = subtori(n) if subtorus_list is None else [tuple(int(index) for index in indices)
                                                             for indices in subtorus_list]
    for indices in subtorus_list:
        if indices not in positions:
            raise ValueError(f"Subtorus {list(indices)} is not an increasing triple in 1..{n}.")
    if len(set(subtorus_list)) != len(subtorus_list):
        raise ValueError(f"Repeated subtorus in {[list(indices) for indices in subtorus_list]}.")

    values = {}
    for point, dd in dd_values.items():
        dd = list(dd)
        if len(dd) != len(subtorus_list):
            raise ValueError(f"Point {point!r} has {len(dd)} DD values for {len(subtorus_list)} subtori.")
        coeffs = [0] * comb(n, 3)
        for indices, value in zip(subtorus_list, dd):
            value = to_exact(value)
            if value.denominator != 1:
                raise ValueError(f"DD value {value} at point {point!r} is not an integer.")
            coeffs[positions[indices]] = DD_SIGN * SUBTORUS_SIGN * int(value)
        values[point] = DualVector(n, 3, coeffs, integral=True, exact=True)
    return ObstructionFunction(values)
