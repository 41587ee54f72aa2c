import itertools
import logging
from fractions import Fraction
from functools import lru_cache
from math import comb
from numbers import Integral, Rational

import numpy as np

logger = logging.getLogger(__name__)

MAX_GRADE = 3


@lru_cache(maxsize=None)
def basis(n: int, grade: int):
    """
        Lexicographic basis {e_i1 ^ ... ^ e_ik : i1 < ... < ik} of the kth
        exterior power, as tuples of 1-based indices. This is the single
        canonical ordering used for coefficients, files and Brauer classes.
    """
    check_dimension(n)
    check_grade(grade)
    return tuple(itertools.combinations(range(1, n + 1), grade))


@lru_cache(maxsize=None)
def basis_index(n: int, grade: int):
    return {indices: position for position, indices in enumerate(basis(n, grade))}


def check_dimension(n):
    if not isinstance(n, Integral) or n < 1:
        raise ValueError(f"Dimension must be a positive integer, got {n}.")


def check_grade(grade):
    if not isinstance(grade, Integral) or grade < 0:
        raise ValueError(f"Grade must be a non-negative integer, got {grade}.")
    if grade > MAX_GRADE:
        raise ValueError(f"Grade {grade} exceeds the supported maximum {MAX_GRADE}.")


def permutation_sign(indices):
    """
        Sign of the permutation sorting indices, or 0 if an index repeats.
    """
    if len(set(indices)) != len(indices):
        return 0
    sign = 1
    values = list(indices)
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if values[i] > values[j]:
                sign = -sign
    return sign


@lru_cache(maxsize=None)
def _wedge_table(n: int, p: int, q: int):
    """
        Non-zero structure constants of the wedge product Λᵖ x Λ^q -> Λ^(p+q) as
        integer arrays (left index, right index, target index, sign).
    """
    target = basis_index(n, p + q)
    rows = []
    for i, left in enumerate(basis(n, p)):
        for j, right in enumerate(basis(n, q)):
            sign = permutation_sign(left + right)
            if sign == 0:
                continue
            rows.append((i, j, target[tuple(sorted(left + right))], sign))
    if not rows:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, empty, empty
    table = np.array(rows, dtype=np.int64)
    return table[:, 0], table[:, 1], table[:, 2], table[:, 3]


def to_exact(value):
    """
        Convert an int, Fraction or {"num","den"} mapping to a Fraction. Floats are
        rejected: exact mode never accepts float-valued input.
    """
    if isinstance(value, bool):
        raise ValueError(f"Boolean {value} is not a valid coefficient.")
    if isinstance(value, dict):
        try:
            return Fraction(int(value["num"]), int(value["den"]))
        except (KeyError, TypeError, ZeroDivisionError) as error:
            raise ValueError(f"Malformed rational {value}.") from error
    if isinstance(value, (Integral, np.integer)):
        return Fraction(int(value))
    if isinstance(value, Rational):
        return Fraction(int(value.numerator), int(value.denominator))
    raise ValueError(f"Exact mode rejects the non-rational value {value!r}.")


def to_float(value):
    if isinstance(value, bool):
        raise ValueError(f"Boolean {value} is not a valid coefficient.")
    if isinstance(value, dict):
        return float(to_exact(value))
    if isinstance(value, (Rational, np.integer, np.floating, float)):
        return float(value)
    raise ValueError(f"Value {value!r} is not a real number.")


def is_exact_value(value):
    if isinstance(value, dict):
        return True
    return isinstance(value, (Rational, np.integer)) and not isinstance(value, bool)


def coefficient_array(values, exact=None):
    """
        Build the coefficient array of a graded element.

        Parameters
        -------------------
        values (iterable):
            Ints, Fractions, {"num","den"} mappings or floats.
        exact (bool):
            Force exact (object array of Fractions) or float (float64) storage.
            Default: exact iff every value is rational.

        Returns
        -------------------
        coeffs (np.ndarray), exact (bool)
    """
    values = list(values)
    if exact is None:
        exact = all(is_exact_value(value) for value in values)
    if exact:
        coeffs = np.empty(len(values), dtype=object)
        for position, value in enumerate(values):
            coeffs[position] = to_exact(value)
        return coeffs, True
    return np.array([to_float(value) for value in values], dtype=np.float64), False


def encode_number(value):
    """
        JSON form of a coefficient: int when integral, {"num","den"} for other
        rationals, float otherwise.
    """
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value.numerator)
        return {"num": int(value.numerator), "den": int(value.denominator)}
    return float(value)


class GradedVector:

    kind = "graded"

    def __init__(self, n: int, grade: int, coeffs, integral: bool = False, exact=None):
        """
            Coefficient vector over the lexicographic basis of the grade-k exterior
            power of R^n (k <= 3). Shared implementation of MultiVector and
            DualVector.

            Attributes
            -------------------
            n (int):
                The dimension of the underlying vector space.
            grade (int):
                The exterior degree k.
            coeffs (np.ndarray):
                Length C(n,k); object array of Fractions in exact mode, float64
                otherwise.
            exact (bool):
                Whether the coefficients are exact rationals.
            integral (bool):
                When set, asserts that every coefficient is an integer (lattice
                element).
        """
        check_dimension(n)
        check_grade(grade)
        self.n = int(n)
        self.grade = int(grade)
        self.coeffs, self.exact = coefficient_array(coeffs, exact)

        if len(self.coeffs) != comb(self.n, self.grade):
            raise ValueError(f"A grade {self.grade} element in dimension {self.n} needs "
                             f"{comb(self.n, self.grade)} coefficients, got {len(self.coeffs)}.")

        self.integral = bool(integral)
        if self.integral and not self.is_integral():
            raise ValueError(f"Coefficients {self.coeffs.tolist()} are flagged integral but are not integers.")

    @classmethod
    def zero(cls, n, grade, exact=True):
        if exact:
            return cls(n, grade, [0] * comb(n, grade), exact=True)
        return cls(n, grade, [0.0] * comb(n, grade), exact=False)

    @classmethod
    def basis_element(cls, n, indices, exact=True):
        """
            The basis element e_i ^ e_j ^ ... (1-based indices in any order, with
            the permutation sign applied).
        """
        indices = tuple(indices)
        grade = len(indices)
        sign = permutation_sign(indices)
        element = cls.zero(n, grade, exact=exact)
        if sign != 0:
            key = tuple(sorted(indices))
            if key[0] < 1 or key[-1] > n:
                raise ValueError(f"Basis indices {indices} out of range for dimension {n}.")
            element.coeffs[basis_index(n, grade)[key]] = Fraction(sign) if exact else float(sign)
        return element

    def _new(self, coeffs, exact=None):
        return type(self)(self.n, self.grade, coeffs, exact=self.exact if exact is None else exact)

    def _check_compatible(self, other):
        if type(other) is not type(self):
            raise ValueError(f"Cannot combine {type(self).__name__} with {type(other).__name__}.")
        if other.n != self.n:
            raise ValueError(f"Dimension mismatch: {self.n} and {other.n}.")
        if other.grade != self.grade:
            raise ValueError(f"Grade mismatch: {self.grade} and {other.grade}.")
        check_modes(self, other)

    def __add__(self, other):
        self._check_compatible(other)
        return self._new(self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check_compatible(other)
        return self._new(self.coeffs - other.coeffs)

    def __neg__(self):
        return self._new(-self.coeffs)

    def __mul__(self, scalar):
        if isinstance(scalar, GradedVector):
            return NotImplemented
        if self.exact:
            return self._new(self.coeffs * to_exact(scalar))
        return self._new(self.coeffs * to_float(scalar))

    __rmul__ = __mul__

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        if (other.n, other.grade, other.exact) != (self.n, self.grade, self.exact):
            return False
        return bool(np.all(self.coeffs == other.coeffs))

    def __hash__(self):
        return hash((type(self).__name__, self.n, self.grade, tuple(self.coeffs.tolist())))

    def __repr__(self):
        terms = ", ".join(str(value) for value in self.coeffs.tolist())
        return f"{type(self).__name__}(n={self.n}, grade={self.grade}, coeffs=[{terms}])"

    def isclose(self, other, tol=1e-12):
        self._check_compatible_loose(other)
        return bool(np.all(np.abs(self.as_float().coeffs - other.as_float().coeffs) <= tol))

    def _check_compatible_loose(self, other):
        if type(other) is not type(self) or other.n != self.n or other.grade != self.grade:
            raise ValueError(f"Cannot compare {self!r} with {other!r}.")

    def is_zero(self, tol=0.0):
        if self.exact:
            return all(value == 0 for value in self.coeffs)
        return bool(np.all(np.abs(self.coeffs) <= tol))

    def is_integral(self, tol=1e-9):
        if self.exact:
            return all(value.denominator == 1 for value in self.coeffs)
        return bool(np.all(np.abs(self.coeffs - np.round(self.coeffs)) <= tol))

    def as_float(self):
        if not self.exact:
            return self
        return type(self)(self.n, self.grade, [float(value) for value in self.coeffs], exact=False)

    def integer_coeffs(self):
        """
            The coefficients as an int64 array; raises if they are not integral.
        """
        if not self.is_integral():
            raise ValueError(f"{self!r} is not integral.")
        if self.exact:
            return np.array([int(value) for value in self.coeffs], dtype=np.int64)
        return np.round(self.coeffs).astype(np.int64)

    def fractional_part(self):
        """
            Reduction modulo the integer lattice: every coefficient mapped to [0,1).
        """
        if self.exact:
            return self._new([value - (value.numerator // value.denominator) for value in self.coeffs])
        return self._new(self.coeffs - np.floor(self.coeffs))

    def coefficient(self, indices):
        """
            Coefficient of the basis element with the given (sorted or unsorted)
            1-based indices, including the permutation sign.
        """
        indices = tuple(indices)
        sign = permutation_sign(indices)
        if len(indices) != self.grade:
            raise ValueError(f"Expected {self.grade} indices, got {indices}.")
        if sign == 0:
            return Fraction(0) if self.exact else 0.0
        return sign * self.coeffs[basis_index(self.n, self.grade)[tuple(sorted(indices))]]

    def to_json(self):
        payload = {"n": self.n, "grade": self.grade, "coeffs": [encode_number(value) for value in self.coeffs]}
        if self.integral:
            payload["integral"] = True
        return payload

    @classmethod
    def from_json(cls, payload, exact=None):
        try:
            return cls(payload["n"], payload["grade"], payload["coeffs"],
                       integral=payload.get("integral", False), exact=exact)
        except (KeyError, TypeError) as error:
            raise ValueError(f"Malformed {cls.__name__} payload {payload!r}.") from error


class MultiVector(GradedVector):
    """
        Element of the kth exterior power of R^n (or of Z^n when integral):
        vectors t (grade 1), bivectors eta, theta (grade 2), trivectors xi (grade 3).
    """

    kind = "multivector"

    @classmethod
    def vector(cls, coords, exact=None):
        coords = list(coords)
        return cls(len(coords), 1, coords, exact=exact)

    @classmethod
    def scalar(cls, n, value):
        return cls(n, 0, [value])


class DualVector(GradedVector):
    """
        Antisymmetric k-linear form on R^n, stored over the same lexicographic
        basis as MultiVector so that pairing with a basis wedge returns the
        matching coefficient. Holds tricharacter coefficients, lifting
        obstruction values and Brauer class m-vectors.
    """

    kind = "dualvector"


def check_modes(*elements):
    modes = {element.exact for element in elements}
    if len(modes) > 1:
        raise ValueError("Exact and float coefficients cannot be mixed; convert with as_float() first.")


def wedge(u: MultiVector, v: MultiVector) -> MultiVector:
    """
        Wedge product of a grade p and a grade q multivector (p + q <= 3).
    """
    if not isinstance(u, MultiVector) or not isinstance(v, MultiVector):
        raise ValueError("wedge expects two MultiVectors.")
    if u.n != v.n:
        raise ValueError(f"Dimension mismatch in wedge: {u.n} and {v.n}.")
    if u.grade + v.grade > MAX_GRADE:
        raise ValueError(f"Grade overflow: {u.grade} + {v.grade} > {MAX_GRADE}.")
    check_modes(u, v)

    left, right, target, sign = _wedge_table(u.n, u.grade, v.grade)
    size = comb(u.n, u.grade + v.grade)

    if u.exact:
        out = [Fraction(0)] * size
        for i, j, k, s in zip(left.tolist(), right.tolist(), target.tolist(), sign.tolist()):
            term = u.coeffs[i] * v.coeffs[j]
            out[k] = out[k] + term if s > 0 else out[k] - term
        result = MultiVector(u.n, u.grade + v.grade, out, exact=True)
    else:
        out = np.zeros(size, dtype=np.float64)
        np.add.at(out, target, sign * u.coeffs[left] * v.coeffs[right])
        result = MultiVector(u.n, u.grade + v.grade, out, exact=False)

    if u.integral and v.integral:
        result.integral = True
    return result


def wedge_all(vectors):
    """
        t1 ^ t2 ^ ... ^ tk for a non-empty sequence of grade-1 multivectors.
    """
    vectors = list(vectors)
    if not vectors:
        raise ValueError("wedge_all needs at least one factor.")
    result = vectors[0]
    for vector in vectors[1:]:
        result = wedge(result, vector)
    return result


def det_triple(t: MultiVector, u: MultiVector, v: MultiVector) -> MultiVector:
    for factor in (t, u, v):
        if factor.grade != 1:
            raise ValueError(f"det_triple expects grade 1 arguments, got grade {factor.grade}.")
    return wedge(wedge(t, u), v)


def pair(phi: DualVector, x: MultiVector):
    """
        Evaluate an antisymmetric k-form on a k-multivector: the sum of
        componentwise products over the lexicographic basis.
    """
    if not isinstance(phi, DualVector) or not isinstance(x, MultiVector):
        raise ValueError("pair expects a DualVector and a MultiVector.")
    if phi.n != x.n:
        raise ValueError(f"Dimension mismatch in pair: {phi.n} and {x.n}.")
    if phi.grade != x.grade:
        raise ValueError(f"Grade mismatch in pair: {phi.grade} and {x.grade}.")
    check_modes(phi, x)
    if phi.exact:
        return sum((a * b for a, b in zip(phi.coeffs, x.coeffs)), Fraction(0))
    return float(np.dot(phi.coeffs, x.coeffs))


def random_multivector(rng, n, grade, exact=True, denominator=12, scale=4):
    """
        Random multivector with rational coefficients num/denominator, |num| <=
        scale*denominator (exact) or uniform floats in [-scale, scale].
    """
    size = comb(n, grade)
    if exact:
        numerators = rng.integers(-scale * denominator, scale * denominator + 1, size=size)
        return MultiVector(n, grade, [Fraction(int(num), denominator) for num in numerators], exact=True)
    return MultiVector(n, grade, rng.uniform(-scale, scale, size=size), exact=False)


def random_lattice_vector(rng, n, grade, bound=3, dual=False):
    cls = DualVector if dual else MultiVector
    values = [int(value) for value in rng.integers(-bound, bound + 1, size=comb(n, grade))]
    return cls(n, grade, values, integral=True, exact=True)


# Vectorised coordinate helpers. Arguments are integer or float arrays whose
# last axis holds coordinates; leading axes broadcast.

def wedge2_coords(a, b):
    n = np.shape(a)[-1]
    if n < 2:
        shape = np.broadcast_shapes(np.shape(a)[:-1], np.shape(b)[:-1])
        return np.zeros(shape + (0,), dtype=np.result_type(a, b))
    return np.stack([a[..., i - 1] * b[..., j - 1] - a[..., j - 1] * b[..., i - 1]
                     for i, j in basis(n, 2)], axis=-1)


def wedge3_coords(a, b, c):
    n = np.shape(a)[-1]
    if n < 3:
        shape = np.broadcast_shapes(np.shape(a)[:-1], np.shape(b)[:-1], np.shape(c)[:-1])
        return np.zeros(shape + (0,), dtype=np.result_type(a, b, c))
    columns = []
    for i, j, k in basis(n, 3):
        i, j, k = i - 1, j - 1, k - 1
        columns.append(a[..., i] * (b[..., j] * c[..., k] - b[..., k] * c[..., j])
                       - a[..., j] * (b[..., i] * c[..., k] - b[..., k] * c[..., i])
                       + a[..., k] * (b[..., i] * c[..., j] - b[..., j] * c[..., i]))
    return np.stack(columns, axis=-1)


def vector_wedge_bivector_coords(a, eta):
    """
        Coordinates of a ^ eta for a vector a (last axis n) and a bivector eta
        (last axis C(n,2)).
    """
    n = np.shape(a)[-1]
    if n < 3:
        shape = np.broadcast_shapes(np.shape(a)[:-1], np.shape(eta)[:-1])
        return np.zeros(shape + (0,), dtype=np.result_type(a, eta))
    index = basis_index(n, 2)
    columns = []
    for i, j, k in basis(n, 3):
        columns.append(a[..., i - 1] * eta[..., index[(j, k)]]
                       - a[..., j - 1] * eta[..., index[(i, k)]]
                       + a[..., k - 1] * eta[..., index[(i, j)]])
    return np.stack(columns, axis=-1)


def pair_coords(coeffs, x):
    """
        Pairing of a fixed coefficient vector with arrays of coordinates (last
        axis), e.g. an integral tricharacter with many trivectors at once.
    """
    coeffs = np.asarray(coeffs)
    if np.shape(x)[-1] != coeffs.shape[0]:
        raise ValueError(f"Coordinate length {np.shape(x)[-1]} does not match {coeffs.shape[0]} coefficients.")
    if coeffs.shape[0] == 0:
        return np.zeros(np.shape(x)[:-1], dtype=np.result_type(coeffs, x))
    return np.tensordot(x, coeffs, axes=([-1], [0]))
