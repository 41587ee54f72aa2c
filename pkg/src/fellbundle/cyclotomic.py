import logging
from functools import lru_cache

import numpy as np
import sympy

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def cyclotomic_coefficients(N: int):
    """
        Integer coefficients of the Nth cyclotomic polynomial, lowest degree
        first (monic, degree φ(N)).
    """
    x = sympy.Symbol('x')
    polynomial = sympy.Poly(sympy.cyclotomic_poly(N, x), x)
    return np.array([int(value) for value in reversed(polynomial.all_coeffs())], dtype=np.int64)


class CyclotomicRing:

    exact = True

    def __init__(self, N: int):
        """
            Exact arithmetic in Z[ζ_N], ζ_N = exp(2πi/N). An element is an integer
            vector of length N (coefficients of 1, ζ, ..., ζ^(N-1)) stored in the
            trailing axis of an int64 array. Products are cyclic convolutions,
            multiplication by ζ^e is a roll, and equality is tested after
            reduction modulo the cyclotomic polynomial.
        """
        if N < 1:
            raise ValueError(f"N must be positive, got {N}.")
        self.N = int(N)
        self.modulus = cyclotomic_coefficients(self.N)
        self.degree = len(self.modulus) - 1

    def __repr__(self):
        return f"CyclotomicRing(N={self.N})"

    def zeros(self, shape):
        return np.zeros(tuple(shape) + (self.N,), dtype=np.int64)

    def ones(self, shape):
        values = self.zeros(shape)
        values[..., 0] = 1
        return values

    def root_power(self, exponents):
        """
            ζ^e for an integer array e.
        """
        exponents = np.mod(np.asarray(exponents, dtype=np.int64), self.N)
        values = self.zeros(exponents.shape)
        np.put_along_axis(values, exponents[..., None], 1, axis=-1)
        return values

    def from_integers(self, integers):
        values = self.zeros(np.shape(integers))
        values[..., 0] = integers
        return values

    def shape(self, values):
        return values.shape[:-1]

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def scale(self, a, integer):
        return a * int(integer)

    def mul(self, a, b):
        a, b = np.broadcast_arrays(a, b)
        out = np.zeros_like(a)
        for power in range(self.N):
            out = out + a[..., power:power + 1] * np.roll(b, power, axis=-1)
        return out

    def twist(self, a, exponents):
        """
            ζ^e · a elementwise: out[..., j] = a[..., j - e].
        """
        exponents = np.mod(np.asarray(exponents, dtype=np.int64), self.N)
        exponents = np.broadcast_to(exponents, a.shape[:-1])
        columns = np.mod(np.arange(self.N)[None, :] - exponents.reshape(-1, 1), self.N)
        flat = a.reshape(-1, self.N)
        return np.take_along_axis(flat, columns, axis=-1).reshape(a.shape)

    def conj(self, a):
        return a[..., np.mod(-np.arange(self.N), self.N)]

    def sum(self, a, axis):
        axis = axis if axis >= 0 else axis - 1
        return a.sum(axis=axis)

    def reduce(self, a):
        """
            Canonical representative of degree < φ(N), modulo the cyclotomic
            polynomial.
        """
        reduced = np.array(a, dtype=np.int64, copy=True)
        for power in range(self.N - 1, self.degree - 1, -1):
            leading = reduced[..., power:power + 1]
            reduced[..., power - self.degree:power + 1] -= leading * self.modulus
        return reduced[..., :self.degree]

    def is_zero(self, a):
        return ~np.any(self.reduce(a) != 0, axis=-1)

    def equal(self, a, b, tol=None):
        return bool(np.all(self.is_zero(a - b)))

    def nonzero(self, a):
        """
            Boolean mask of entries that are non-zero elements of Z[ζ_N].
        """
        return ~self.is_zero(a)

    def to_complex(self, a):
        powers = np.exp(2j * np.pi * np.arange(self.N) / self.N)
        return a @ powers

    def abs2(self, a):
        return np.abs(self.to_complex(a)) ** 2

    def ratio_exponent(self, a, b):
        """
            The exponent e with a = ζ^e b on every entry, or None. b must not be
            identically zero.
        """
        for exponent in range(self.N):
            if self.equal(a, self.twist(b, exponent)):
                return exponent
        return None


class ComplexRing:

    exact = False

    def __init__(self, N: int, tol: float = 1e-12):
        """
            Floating point counterpart of CyclotomicRing on complex128 entries.
        """
        self.N = int(N)
        self.tol = tol

    def __repr__(self):
        return f"ComplexRing(N={self.N})"

    def zeros(self, shape):
        return np.zeros(tuple(shape), dtype=np.complex128)

    def ones(self, shape):
        return np.ones(tuple(shape), dtype=np.complex128)

    def root_power(self, exponents):
        return np.exp(2j * np.pi * np.mod(np.asarray(exponents), self.N) / self.N)

    def from_integers(self, integers):
        return np.asarray(integers, dtype=np.complex128)

    def shape(self, values):
        return values.shape

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def scale(self, a, integer):
        return a * integer

    def mul(self, a, b):
        return a * b

    def twist(self, a, exponents):
        return a * self.root_power(exponents)

    def conj(self, a):
        return np.conj(a)

    def sum(self, a, axis):
        return a.sum(axis=axis)

    def is_zero(self, a):
        return np.abs(a) <= self.tol

    def equal(self, a, b, tol=None):
        tol = self.tol if tol is None else tol
        return bool(np.all(np.abs(a - b) <= tol))

    def nonzero(self, a):
        return ~self.is_zero(a)

    def to_complex(self, a):
        return a

    def abs2(self, a):
        return np.abs(a) ** 2

    def ratio(self, a, b):
        """
            The constant ratio a/b over entries where b is non-zero, as a complex
            number, or None if it is not constant (entries where b vanishes must
            vanish in a too).
        """
        support = np.abs(b) > self.tol
        if not np.any(support) or np.any(np.abs(a[~support]) > self.tol):
            return None
        ratios = a[support] / b[support]
        if np.max(np.abs(ratios - ratios.flat[0])) > max(self.tol, 1e-9):
            return None
        return complex(ratios.flat[0])


def ring_for(N, exact=True, tol=1e-12):
    return CyclotomicRing(N) if exact else ComplexRing(N, tol)
