import itertools
import logging
from fractions import Fraction
from math import comb, gcd, lcm

import numpy as np

from config.load_configs import CHECK_CONFIG
from src.exterior import (DualVector, MultiVector, basis, encode_number, is_exact_value, pair, pair_coords,
                          to_exact, to_float, wedge3_coords, wedge_all)

logger = logging.getLogger(__name__)


class Phase:

    def __init__(self, value, exact=None):
        """
            Element of the circle R/Z, stored in [0,1) as an exact Fraction or a
            float. Addition is modulo 1; exact and float phases never mix.
        """
        if isinstance(value, Phase):
            exact = value.exact if exact is None else exact
            value = value.value
        if exact is None:
            exact = is_exact_value(value)
        self.exact = bool(exact)
        if self.exact:
            value = to_exact(value)
            self.value = value - (value.numerator // value.denominator)
        else:
            self.value = to_float(value) % 1.0

    def _coerce(self, other):
        other = other if isinstance(other, Phase) else Phase(other)
        if other.exact != self.exact:
            raise ValueError("Exact and float phases cannot be mixed.")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        return Phase(self.value + other.value, self.exact)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return Phase(self.value - other.value, self.exact)

    def __neg__(self):
        return Phase(-self.value, self.exact)

    def __mul__(self, integer):
        if isinstance(integer, Phase) or not isinstance(integer, (int, np.integer)):
            raise ValueError(f"Phases can only be multiplied by integers, got {integer!r}.")
        return Phase(self.value * int(integer), self.exact)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Phase):
            try:
                other = Phase(other)
            except ValueError:
                return NotImplemented
        return self.exact == other.exact and self.value == other.value

    def __hash__(self):
        return hash((self.exact, self.value))

    def __repr__(self):
        return f"Phase({self.value})"

    def distance(self, other=0):
        """
            Distance to another phase on the circle, as a float in [0, 1/2].
        """
        other = other if isinstance(other, Phase) else Phase(other, self.exact)
        difference = float((self - other).value)
        return min(difference, 1.0 - difference)

    def is_zero(self, tol=CHECK_CONFIG.float_tolerance):
        if self.exact:
            return self.value == 0
        return self.distance() <= tol

    def lift(self):
        """
            Real representative in (-1/2, 1/2].
        """
        value = self.value
        return value - 1 if value > Fraction(1, 2) else value

    def to_complex(self):
        return complex(np.exp(2j * np.pi * float(self.value)))

    def to_json(self):
        return encode_number(self.value) if self.exact else float(self.value)

    @classmethod
    def from_json(cls, payload, exact=None):
        return cls(payload, exact)


class PhaseArray:

    def __init__(self, num, den=None):
        """
            Array of phases. Exact arrays hold integer numerators over one common
            denominator (num/den mod 1); float arrays hold values in [0,1).

            Parameters
            -------------------
            num (array):
                Integer numerators (exact) or float values (den is None).
            den (int):
                Common denominator for exact arrays, None for float arrays.
        """
        if den is None:
            self.den = None
            self.num = np.mod(np.asarray(num, dtype=np.float64), 1.0)
        else:
            den = int(den)
            if den < 1:
                raise ValueError(f"Denominator must be positive, got {den}.")
            self.den = den
            self.num = np.mod(np.asarray(num, dtype=np.int64), den)

    @property
    def exact(self):
        return self.den is not None

    @property
    def shape(self):
        return self.num.shape

    @classmethod
    def from_values(cls, values, exact=None):
        """
            Build from a nested list of Fractions, ints, {"num","den"} mappings or
            floats (or Phases).
        """
        array = np.array(values, dtype=object)
        flat = [value.value if isinstance(value, Phase) else value for value in array.ravel().tolist()]
        if exact is None:
            exact = all(is_exact_value(value) for value in flat)
        if not exact:
            return cls(np.array([to_float(value) for value in flat], dtype=np.float64).reshape(array.shape))
        fractions = [to_exact(value) for value in flat]
        den = lcm(*[value.denominator for value in fractions]) if fractions else 1
        num = np.array([value.numerator * (den // value.denominator) for value in fractions], dtype=np.int64)
        return cls(num.reshape(array.shape), den)

    @classmethod
    def zeros(cls, shape, exact=True):
        if exact:
            return cls(np.zeros(shape, dtype=np.int64), 1)
        return cls(np.zeros(shape, dtype=np.float64))

    def _aligned(self, other):
        if not isinstance(other, PhaseArray):
            raise ValueError(f"Cannot combine PhaseArray with {type(other).__name__}.")
        if self.exact != other.exact:
            raise ValueError("Exact and float phases cannot be mixed.")
        if not self.exact:
            return self.num, other.num, None
        den = lcm(self.den, other.den)
        return self.num * (den // self.den), other.num * (den // other.den), den

    def __add__(self, other):
        left, right, den = self._aligned(other)
        return PhaseArray(left + right, den)

    def __sub__(self, other):
        left, right, den = self._aligned(other)
        return PhaseArray(left - right, den)

    def __neg__(self):
        return PhaseArray(-self.num, self.den)

    def __getitem__(self, index):
        return PhaseArray(self.num[index], self.den)

    def transpose(self, *axes):
        return PhaseArray(np.transpose(self.num, axes or None), self.den)

    def reduced(self):
        """
            Same phases with the smallest common denominator.
        """
        if not self.exact:
            return self
        divisor = gcd(self.den, *[int(value) for value in np.unique(self.num)])
        return PhaseArray(self.num // divisor, self.den // divisor)

    def zero_mask(self, tol=CHECK_CONFIG.float_tolerance):
        if self.exact:
            return self.num == 0
        return np.minimum(self.num, 1.0 - self.num) <= tol

    def all_zero(self, tol=CHECK_CONFIG.float_tolerance):
        return bool(np.all(self.zero_mask(tol)))

    def equals(self, other, tol=CHECK_CONFIG.float_tolerance):
        return (self - other).all_zero(tol)

    def distances(self):
        values = self.num / self.den if self.exact else self.num
        return np.minimum(values, 1.0 - values)

    def phase(self, index=()):
        if self.exact:
            return Phase(Fraction(int(self.num[index]), self.den), True)
        return Phase(float(self.num[index]), False)

    def as_float(self):
        if not self.exact:
            return self
        return PhaseArray(self.num / self.den)

    def to_complex(self):
        values = self.num / self.den if self.exact else self.num
        return np.exp(2j * np.pi * values)

    def to_json(self):
        if self.exact:
            return _nested(self.num, lambda value: encode_number(Fraction(int(value), self.den)))
        return self.num.tolist()


def _nested(array, encode):
    if array.ndim == 0:
        return encode(array.item())
    return [_nested(item, encode) for item in array]


def box_points(n, box):
    """
        All integer points of [-box, box]ⁿ in lexicographic order, shape (P, n).
    """
    axis = np.arange(-box, box + 1, dtype=np.int64)
    return np.array(list(itertools.product(axis, repeat=n)), dtype=np.int64).reshape(-1, n)


def unit_vectors(n):
    return np.eye(n, dtype=np.int64)


def box_triples(n, box, rng=None, max_triples=CHECK_CONFIG.max_triples, seed=CHECK_CONFIG.seed):
    """
        Integer triples (k, l, m) from [-box, box]ⁿ for brute-force validation.
        All triples are enumerated when there are at most max_triples of them;
        otherwise a seeded sample of that size is drawn and every triple of
        generators (± unit vectors and 0) is appended.

        Returns
        -------------------
        k, l, m (np.ndarray):
            Arrays of shape (T, n).
        exhaustive (bool):
            Whether the whole box was enumerated.
    """
    points = box_points(n, box)
    count = len(points) ** 3
    if count <= max_triples:
        index = np.array(list(itertools.product(range(len(points)), repeat=3)), dtype=np.int64).reshape(-1, 3)
        logger.debug("enumerating all %d triples of the box [-%d,%d]^%d", count, box, box, n)
        return points[index[:, 0]], points[index[:, 1]], points[index[:, 2]], True

    rng = np.random.default_rng(seed) if rng is None else rng
    sample = rng.integers(-box, box + 1, size=(3, max_triples, n), dtype=np.int64)
    generators = np.concatenate([np.zeros((1, n), dtype=np.int64), unit_vectors(n), -unit_vectors(n)])
    generators = generators[np.all(np.abs(generators) <= box, axis=1)]
    index = np.array(list(itertools.product(range(len(generators)), repeat=3)), dtype=np.int64)
    logger.debug("sampling %d of %d triples of the box [-%d,%d]^%d plus %d generator triples",
                 max_triples, count, box, box, n, len(index))
    return (np.concatenate([sample[0], generators[index[:, 0]]]),
            np.concatenate([sample[1], generators[index[:, 1]]]),
            np.concatenate([sample[2], generators[index[:, 2]]]), False)


def _as_int_vectors(values, n):
    if isinstance(values, MultiVector):
        values = values.integer_coeffs()
    array = np.asarray(values)
    if array.dtype == object or not np.issubdtype(array.dtype, np.integer):
        if not np.all(np.equal(np.mod(np.asarray(array, dtype=np.float64), 1), 0)):
            raise ValueError(f"Expected integer vectors, got {values!r}.")
        array = np.asarray(array, dtype=np.float64).astype(np.int64)
    if array.shape[-1] != n:
        raise ValueError(f"Expected vectors of length {n}, got shape {array.shape}.")
    return array


class AntisymmetricPairing:

    def __init__(self, values, exact=None):
        """
            Antisymmetric n x n matrix of phases Θ (Θ_ij = -Θ_ji mod 1, Θ_ii = 0),
            the complete invariant of a class in H²(Zⁿ, T). Its ℓ = C(n,2) free
            entries are the strict upper triangle in lexicographic pair order.
        """
        matrix = values if isinstance(values, PhaseArray) else PhaseArray.from_values(values, exact)
        if matrix.num.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"Pairing must be a square matrix, got shape {matrix.shape}.")
        if not (matrix + matrix.transpose()).all_zero() or not matrix[np.diag_indices(matrix.shape[0])].all_zero():
            raise ValueError(f"Matrix {matrix.to_json()} is not antisymmetric modulo 1.")
        self.matrix = matrix.reduced()

    @property
    def n(self):
        return self.matrix.shape[0]

    @property
    def exact(self):
        return self.matrix.exact

    @classmethod
    def zero(cls, n, exact=True):
        return cls(PhaseArray.zeros((n, n), exact))

    @classmethod
    def from_upper(cls, n, entries, exact=None):
        """
            Build Θ from its ℓ upper entries Θ_ij, i<j, in lexicographic pair order.
        """
        entries = list(entries)
        if len(entries) != comb(n, 2):
            raise ValueError(f"Expected {comb(n, 2)} upper entries for n={n}, got {len(entries)}.")
        upper = PhaseArray.from_values(entries, exact)
        num = np.zeros((n, n), dtype=upper.num.dtype)
        for position, (i, j) in enumerate(basis(n, 2)):
            num[i - 1, j - 1] = upper.num[position]
            num[j - 1, i - 1] = -upper.num[position]
        return cls(PhaseArray(num, upper.den))

    def entry(self, i, j):
        """
            Θ_ij for 1-based indices.
        """
        return self.matrix.phase((i - 1, j - 1))

    def upper(self):
        return [self.entry(i, j) for i, j in basis(self.n, 2)]

    def upper_array(self):
        rows, cols = zip(*[(i - 1, j - 1) for i, j in basis(self.n, 2)]) if self.n > 1 else ((), ())
        return PhaseArray(self.matrix.num[list(rows), list(cols)], self.matrix.den)

    def restrict(self, indices):
        indices = [index - 1 for index in indices]
        return AntisymmetricPairing(self.matrix[np.ix_(indices, indices)])

    def __add__(self, other):
        self._check(other)
        return AntisymmetricPairing(self.matrix + other.matrix)

    def __sub__(self, other):
        self._check(other)
        return AntisymmetricPairing(self.matrix - other.matrix)

    def __neg__(self):
        return AntisymmetricPairing(-self.matrix)

    def _check(self, other):
        if not isinstance(other, AntisymmetricPairing) or other.n != self.n:
            raise ValueError(f"Cannot combine pairings of sizes {self.n} and {getattr(other, 'n', None)}.")

    def equals(self, other, tol=CHECK_CONFIG.float_tolerance):
        self._check(other)
        return self.matrix.equals(other.matrix, tol)

    def __eq__(self, other):
        if not isinstance(other, AntisymmetricPairing):
            return NotImplemented
        return other.n == self.n and self.exact == other.exact and self.matrix.equals(other.matrix, 0.0)

    def __hash__(self):
        return hash(tuple(self.upper()))

    def is_zero(self, tol=CHECK_CONFIG.float_tolerance):
        return self.matrix.all_zero(tol)

    def __repr__(self):
        return f"AntisymmetricPairing({self.matrix.to_json()})"

    def to_json(self):
        return self.matrix.to_json()

    @classmethod
    def from_json(cls, payload, exact=None):
        return cls(payload, exact)


class Cocycle2:

    def __init__(self, n, form, theta_hat=None, values=None, box=None):
        """
            Normalized T-valued 2-cocycle on Zⁿ, written additively (phases).

            Attributes
            -------------------
            n (int):
                Rank of the lattice.
            form (str):
                'standard': ω(k,l) = kᵀ Θ̂ l mod 1 for a strictly upper triangular
                phase matrix Θ̂. 'table': explicit phases on [-box,box]ⁿ x [-box,box]ⁿ.
            theta_hat (PhaseArray):
                The n x n matrix Θ̂ (standard form).
            values (PhaseArray):
                Table of shape (2box+1,)*2n, indexed by k+box then l+box (table form).
            box (int):
                The declared box of a table; lookups outside it raise IndexError.
        """
        if form not in ('standard', 'table'):
            raise ValueError(f"Cocycle form must be 'standard' or 'table', got {form!r}.")
        self.n = int(n)
        self.form = form
        self.theta_hat = theta_hat
        self.values = values
        self.box = box

        if form == 'standard':
            if theta_hat.shape != (self.n, self.n):
                raise ValueError(f"Θ̂ must be {self.n} x {self.n}, got {theta_hat.shape}.")
            if not theta_hat[np.tril_indices(self.n)].all_zero(0.0):
                raise ValueError(f"Θ̂ {theta_hat.to_json()} must be strictly upper triangular.")
        else:
            if values.shape != (2 * box + 1,) * (2 * self.n):
                raise ValueError(f"Table shape {values.shape} does not match box {box} in dimension {self.n}.")

    @property
    def exact(self):
        return (self.theta_hat if self.form == 'standard' else self.values).exact

    @classmethod
    def standard(cls, theta_hat, exact=None):
        matrix = theta_hat if isinstance(theta_hat, PhaseArray) else PhaseArray.from_values(theta_hat, exact)
        if matrix.num.ndim != 2:
            raise ValueError(f"Θ̂ must be a square matrix, got shape {matrix.shape}.")
        return cls(matrix.shape[0], 'standard', theta_hat=matrix.reduced())

    @classmethod
    def trivial(cls, n, exact=True):
        return cls.standard(PhaseArray.zeros((n, n), exact))

    @classmethod
    def table(cls, n, values, box):
        return cls(n, 'table', values=values, box=int(box))

    def evaluate(self, k, l):
        """
            Vectorised ω(k,l) for integer arrays of shape (..., n).
        """
        k = _as_int_vectors(k, self.n)
        l = _as_int_vectors(l, self.n)
        if self.form == 'standard':
            if self.exact:
                return PhaseArray(np.einsum('...i,ij,...j->...', k, self.theta_hat.num, l), self.theta_hat.den)
            return PhaseArray(np.einsum('...i,ij,...j->...', k.astype(np.float64), self.theta_hat.num, l.astype(np.float64)))
        k, l = np.broadcast_arrays(k, l)
        if np.any(np.abs(k) > self.box) or np.any(np.abs(l) > self.box):
            raise IndexError(f"Cocycle table lookup outside the declared box [-{self.box},{self.box}]^{self.n}.")
        index = tuple(np.moveaxis(k + self.box, -1, 0)) + tuple(np.moveaxis(l + self.box, -1, 0))
        return self.values[index]

    def __call__(self, k, l):
        return self.evaluate(k, l).phase()

    def to_table(self, box=CHECK_CONFIG.table_box):
        """
            Table form of this cocycle on [-box,box]ⁿ.
        """
        if self.form == 'table':
            if box > self.box:
                raise IndexError(f"Requested box {box} exceeds the declared box {self.box}.")
            offset = self.box - box
            window = (slice(offset, offset + 2 * box + 1),) * (2 * self.n)
            return Cocycle2.table(self.n, self.values[window], box)
        points = box_points(self.n, box)
        values = self.evaluate(points[:, None, :], points[None, :, :])
        return Cocycle2.table(self.n, PhaseArray(values.num.reshape((2 * box + 1,) * (2 * self.n)), values.den), box)

    def __mul__(self, other):
        """
            Pointwise product of cocycles (sum of phases).
        """
        if not isinstance(other, Cocycle2) or other.n != self.n:
            raise ValueError("Cocycle product needs two cocycles on the same lattice.")
        if self.form == 'standard' and other.form == 'standard':
            return Cocycle2.standard(self.theta_hat + other.theta_hat)
        box = min(cocycle.box for cocycle in (self, other) if cocycle.form == 'table')
        return Cocycle2.table(self.n, self.to_table(box).values + other.to_table(box).values, box)

    def inverse(self):
        if self.form == 'standard':
            return Cocycle2.standard(-self.theta_hat)
        return Cocycle2.table(self.n, -self.values, self.box)

    def is_normalized(self, box=None, tol=CHECK_CONFIG.float_tolerance):
        """
            ω(0,l) = ω(k,0) = 0 on the box (the declared box for tables).
        """
        if self.form == 'standard':
            return True
        box = self.box if box is None else min(box, self.box)
        points = box_points(self.n, box)
        zero = np.zeros_like(points)
        return self.evaluate(zero, points).all_zero(tol) and self.evaluate(points, zero).all_zero(tol)

    def __repr__(self):
        if self.form == 'standard':
            return f"Cocycle2(standard, theta_hat={self.theta_hat.to_json()})"
        return f"Cocycle2(table, n={self.n}, box={self.box})"

    def to_json(self):
        if self.form == 'standard':
            return {"form": "standard", "theta_hat": self.theta_hat.to_json()}
        return {"form": "table", "n": self.n, "box": self.box, "values": self.values.to_json()}

    @classmethod
    def from_json(cls, payload, exact=None):
        try:
            form = payload["form"]
            if form == "standard":
                return cls.standard(payload["theta_hat"], exact)
            if form == "table":
                box = int(payload["box"])
                values = PhaseArray.from_values(payload["values"], exact)
                n = payload.get("n", values.num.ndim // 2)
                return cls.table(n, values, box)
        except (KeyError, TypeError) as error:
            raise ValueError(f"Malformed cocycle payload {payload!r}.") from error
        raise ValueError(f"Unknown cocycle form {form!r}.")


class Tricharacter:

    def __init__(self, c: DualVector):
        """
            Character U(ξ) = exp(2πi pair(c, ξ)) of Λ³Rⁿ, held additively as the
            phase pair(c, ξ) mod 1. U is trivial on Λ³Zⁿ exactly when c is integral.
        """
        if not isinstance(c, DualVector) or c.grade != 3:
            raise ValueError(f"A tricharacter needs a grade 3 DualVector, got {c!r}.")
        self.c = c
        if c.exact:
            self.den = lcm(*[value.denominator for value in c.coeffs]) if len(c.coeffs) else 1
            self.num = np.array([int(value * self.den) for value in c.coeffs], dtype=np.int64)
        else:
            self.den = None
            self.num = c.coeffs

    @property
    def n(self):
        return self.c.n

    @property
    def exact(self):
        return self.c.exact

    @property
    def integral(self):
        return self.c.is_integral()

    @classmethod
    def trivial(cls, n, exact=True):
        return cls(DualVector.zero(n, 3, exact))

    @classmethod
    def from_coeffs(cls, n, coeffs, exact=None):
        return cls(DualVector(n, 3, coeffs, exact=exact))

    def __call__(self, xi: MultiVector) -> Phase:
        return Phase(pair(self.c, xi), self.exact)

    def evaluate_coords(self, xi):
        """
            Vectorised phases on integer trivector coordinates (..., C(n,3)).
        """
        return PhaseArray(pair_coords(self.num, xi), self.den)

    def evaluate_triples(self, k, l, m):
        return self.evaluate_coords(wedge3_coords(k, l, m))

    def __mul__(self, other):
        if not isinstance(other, Tricharacter):
            raise ValueError(f"Cannot multiply a Tricharacter by {type(other).__name__}.")
        return Tricharacter(self.c + other.c)

    def inverse(self):
        return Tricharacter(-self.c)

    def __eq__(self, other):
        if not isinstance(other, Tricharacter):
            return NotImplemented
        return self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return f"Tricharacter(c={self.c.coeffs.tolist()})"

    def to_json(self):
        return {"c": [encode_number(value) for value in self.c.coeffs], "integral": self.integral, "n": self.n}

    @classmethod
    def from_json(cls, payload, n=None, exact=None):
        try:
            coeffs = payload["c"]
            n = payload.get("n", n)
        except (KeyError, TypeError) as error:
            raise ValueError(f"Malformed tricharacter payload {payload!r}.") from error
        if n is None:
            raise ValueError("Tricharacter payload needs the dimension n.")
        character = cls.from_coeffs(n, coeffs, exact)
        if payload.get("integral") and not character.integral:
            raise ValueError(f"Tricharacter {coeffs} is declared integral but is not.")
        return character


class ObstructionFunction:

    def __init__(self, values: dict):
        """
            Locally constant function on a finite set of base points (orbits) with
            values in the grade g dual of ΛᵍRⁿ; for g = 3 this is the lifting
            obstruction. All values share n and grade.
        """
        if not values:
            raise ValueError("An obstruction function needs at least one base point.")
        values = {str(point): value for point, value in values.items()}
        shapes = {(value.n, value.grade) for value in values.values()}
        if len(shapes) != 1 or not all(isinstance(value, DualVector) for value in values.values()):
            raise ValueError(f"Obstruction values must be DualVectors of one dimension and grade, got {sorted(shapes)}.")
        self.values = dict(sorted(values.items()))
        self.n, self.grade = shapes.pop()

    @property
    def points(self):
        return list(self.values)

    def __getitem__(self, point):
        if point not in self.values:
            raise KeyError(f"Unknown base point {point!r}; known points are {self.points}.")
        return self.values[point]

    def vanishes(self):
        return all(value.is_zero() for value in self.values.values())

    def vanishes_at(self, point):
        return self[point].is_zero()

    def to_json(self):
        return {"points": {point: [encode_number(value) for value in coeffs.coeffs] for point, coeffs in self.values.items()},
                "n": self.n, "grade": self.grade}

    @classmethod
    def from_json(cls, payload, exact=None):
        try:
            n = payload["n"]
            grade = payload.get("grade", 3)
            points = payload["points"]
            return cls({point: DualVector(n, grade, coeffs, exact=exact) for point, coeffs in points.items()})
        except (KeyError, TypeError, AttributeError) as error:
            raise ValueError(f"Malformed obstruction payload {payload!r}.") from error


# Operations

def phase_table(function, n, box, exact=True):
    """
        Sample a phase-valued map on Zⁿ over [-box,box]ⁿ into a PhaseArray of shape
        (2box+1,)*n. function receives an integer vector and returns a phase.
    """
    points = box_points(n, box)
    values = PhaseArray.from_values([function(point) for point in points], exact)
    return PhaseArray(values.num.reshape((2 * box + 1,) * n), values.den)


def coboundary1(V: PhaseArray, box: int, out_box: int = None) -> Cocycle2:
    """
        The coboundary ∂V(k,l) = V(k) + V(l) - V(k+l) as a table cocycle.

        Parameters
        -------------------
        V (PhaseArray):
            Values of V on [-box,box]ⁿ, shape (2box+1,)*n, with V(0) = 0.
        box (int):
            The box V is sampled on.
        out_box (int):
            Box of the resulting table; needs 2*out_box <= box so that k+l stays
            inside V's box. Default box // 2.
    """
    n = V.num.ndim
    if V.shape != (2 * box + 1,) * n:
        raise ValueError(f"V has shape {V.shape}, expected {(2 * box + 1,) * n} for box {box}.")
    out_box = box // 2 if out_box is None else out_box
    if 2 * out_box > box:
        raise ValueError(f"Output box {out_box} needs V sampled on a box of at least {2 * out_box}, got {box}.")
    if not V[(box,) * n].all_zero():
        raise ValueError(f"V must satisfy V(0) = 0, got {V.phase((box,) * n)}.")

    points = box_points(n, out_box)
    k = points[:, None, :]
    l = points[None, :, :]

    def lookup(vectors):
        return V[tuple(np.moveaxis(vectors + box, -1, 0))]

    table = lookup(k) + lookup(l) - lookup(k + l)
    shape = (2 * out_box + 1,) * (2 * n)
    return Cocycle2.table(n, PhaseArray(table.num.reshape(shape), table.den), out_box)


def cocycle_defects(omega: Cocycle2, U: Tricharacter, k, l, m) -> PhaseArray:
    """
        Vectorised defect ω(k+l,m) + ω(k,l) + U(k∧l∧m) - ω(k,l+m) - ω(l,m).
    """
    if omega.n != U.n:
        raise ValueError(f"Dimension mismatch: cocycle on Z^{omega.n}, tricharacter on Λ³R^{U.n}.")
    k, l, m = (_as_int_vectors(vectors, omega.n) for vectors in (k, l, m))
    lhs = omega.evaluate(k + l, m) + omega.evaluate(k, l) + U.evaluate_triples(k, l, m)
    return lhs - omega.evaluate(k, l + m) - omega.evaluate(l, m)


def cocycle_defect(omega: Cocycle2, U: Tricharacter, k, l, m) -> Phase:
    """
        Phase of ω(k+l,m)ω(k,l)U(k∧l∧m) / (ω(k,l+m)ω(l,m)); zero exactly when
        the twisted cocycle condition holds at (k,l,m).
    """
    return cocycle_defects(omega, U, k, l, m).phase()


def commutator_pairing(omega: Cocycle2) -> AntisymmetricPairing:
    """
        Θ_ij = ω(e_i,e_j) - ω(e_j,e_i).
    """
    e = unit_vectors(omega.n)
    values = omega.evaluate(e[:, None, :], e[None, :, :])
    return AntisymmetricPairing(values - values.transpose())


def cohomologous(omega_1: Cocycle2, omega_2: Cocycle2, tol=CHECK_CONFIG.float_tolerance) -> bool:
    return commutator_pairing(omega_1).equals(commutator_pairing(omega_2), tol)


def standard_cocycle(theta: AntisymmetricPairing) -> Cocycle2:
    """
        Standard representative: Θ̂ = strict upper triangle of Θ.
    """
    if not isinstance(theta, AntisymmetricPairing):
        theta = AntisymmetricPairing(theta)
    mask = np.triu(np.ones((theta.n, theta.n), dtype=bool), k=1)
    if theta.exact:
        return Cocycle2.standard(PhaseArray(np.where(mask, theta.matrix.num, 0), theta.matrix.den))
    return Cocycle2.standard(PhaseArray(np.where(mask, theta.matrix.num, 0.0)))


def cocycle_from_obstruction(chi: ObstructionFunction, vectors, point):
    """
        Value ψ(t₁, ..., t_g, p) = pair(χ(p), t₁∧...∧t_g) of the group cocycle
        associated with an obstruction function.
    """
    value = chi[point]
    vectors = list(vectors)
    if len(vectors) != chi.grade:
        raise ValueError(f"Expected {chi.grade} vectors, got {len(vectors)}.")
    return pair(value, wedge_all(vectors))


def coboundary3_residual(chi: ObstructionFunction, vectors, point):
    """
        ψ(t₂,t₃,t₄) - ψ(t₁+t₂,t₃,t₄) + ψ(t₁,t₂+t₃,t₄) - ψ(t₁,t₂,t₃+t₄) + ψ(t₁,t₂,t₃)
        for the grade 3 cocycle ψ of chi (trivial coefficients); identically zero.
    """
    t_1, t_2, t_3, t_4 = vectors

    def psi(*arguments):
        return cocycle_from_obstruction(chi, arguments, point)

    return (psi(t_2, t_3, t_4) - psi(t_1 + t_2, t_3, t_4) + psi(t_1, t_2 + t_3, t_4)
            - psi(t_1, t_2, t_3 + t_4) + psi(t_1, t_2, t_3))


def random_pairing(rng, n, denominator=CHECK_CONFIG.denominator):
    numerators = rng.integers(0, denominator, size=comb(n, 2))
    return AntisymmetricPairing.from_upper(n, [Fraction(int(value), denominator) for value in numerators])


def random_phase_table(rng, n, box, denominator=CHECK_CONFIG.denominator):
    """
        Random exact V on [-box,box]ⁿ with V(0) = 0.
    """
    num = rng.integers(0, denominator, size=(2 * box + 1,) * n)
    num[(box,) * n] = 0
    return PhaseArray(num, denominator)
