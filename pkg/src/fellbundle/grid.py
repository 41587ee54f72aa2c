import itertools
import logging
from functools import cached_property
from math import comb

import numpy as np

from src.exterior import DualVector, pair_coords, wedge3_coords

logger = logging.getLogger(__name__)


class Grid:

    def __init__(self, n: int, N: int):
        """
            The discrete torus (Z/N)ⁿ standing in for Rⁿ. Points are integer
            vectors mod N, enumerated lexicographically; all shifts are done
            through precomputed index tables.

            Attributes
            -------------------
            n (int):
                Dimension.
            N (int):
                Period, at least 2.
            points (np.ndarray):
                Shape (G, n), G = Nⁿ.
        """
        if n < 1:
            raise ValueError(f"Grid dimension must be positive, got {n}.")
        if N < 2:
            raise ValueError(f"Grid period must be at least 2, got {N}.")
        self.n = int(n)
        self.N = int(N)
        self.size = self.N ** self.n
        self.points = np.array(list(itertools.product(range(self.N), repeat=self.n)), dtype=np.int64)

    def __eq__(self, other):
        if not isinstance(other, Grid):
            return NotImplemented
        return (self.n, self.N) == (other.n, other.N)

    def __hash__(self):
        return hash((self.n, self.N))

    def __repr__(self):
        return f"Grid(n={self.n}, N={self.N})"

    def index(self, point):
        """
            Flat index of an integer point (reduced mod N); works on arrays (..., n).
        """
        point = np.mod(np.asarray(point, dtype=np.int64), self.N)
        if point.shape[-1] != self.n:
            raise ValueError(f"Grid points need {self.n} coordinates, got shape {point.shape}.")
        return np.ravel_multi_index(tuple(np.moveaxis(point, -1, 0)), (self.N,) * self.n)

    def point(self, index):
        return self.points[index]

    @cached_property
    def add(self):
        """
            add[a, b] = index(p_a + p_b).
        """
        return self.index(self.points[:, None, :] + self.points[None, :, :])

    @cached_property
    def sub(self):
        """
            sub[a, b] = index(p_a - p_b).
        """
        return self.index(self.points[:, None, :] - self.points[None, :, :])

    @cached_property
    def neg(self):
        return self.index(-self.points)

    @property
    def zero(self):
        return 0


class GridTricharacter:

    def __init__(self, grid: Grid, m):
        """
            χ(ξ) = exp(2πi pair(m, ξ)/N) on integral trivectors, for an integral m.
            Shifting any argument of χ(a∧b∧c) by N changes pair(m, ·) by a
            multiple of N, so χ is well defined on the grid.

            Attributes
            -------------------
            grid (Grid)
            m (DualVector):
                Integral grade 3 coefficients, C(n,3) of them.
            linear (np.ndarray):
                linear[t, s, i] = pair(m, e_i∧p_t∧p_s) mod N, so that the exponent
                of χ(r∧t∧s) is linear[t, s] · r.
        """
        if not isinstance(m, DualVector):
            m = DualVector(grid.n, 3, list(m), integral=True)
        if m.n != grid.n or m.grade != 3:
            raise ValueError(f"χ on a grid of dimension {grid.n} needs a grade 3 DualVector over n={grid.n}.")
        if not m.is_integral():
            raise ValueError(f"χ needs integral coefficients, got {m.coeffs.tolist()}.")
        self.grid = grid
        self.m = m
        self.coeffs = m.integer_coeffs()

    @property
    def n(self):
        return self.grid.n

    @property
    def N(self):
        return self.grid.N

    @property
    def trivial(self):
        return not np.any(np.mod(self.coeffs, self.N))

    @cached_property
    def linear(self):
        if comb(self.n, 3) == 0:
            return np.zeros((self.grid.size, self.grid.size, self.n), dtype=np.int64)
        points = self.grid.points
        columns = []
        for unit in np.eye(self.n, dtype=np.int64):
            trivectors = wedge3_coords(unit[None, None, :], points[:, None, :], points[None, :, :])
            columns.append(np.mod(pair_coords(self.coeffs, trivectors), self.N))
        return np.stack(columns, axis=-1)

    def exponent(self, a, b, c):
        """
            Exponent e (mod N) with χ(a∧b∧c) = ζ^e, for integer point arrays.
        """
        if comb(self.n, 3) == 0:
            shape = np.broadcast_shapes(np.shape(a)[:-1], np.shape(b)[:-1], np.shape(c)[:-1])
            return np.zeros(shape, dtype=np.int64)
        return np.mod(pair_coords(self.coeffs, wedge3_coords(np.asarray(a), np.asarray(b), np.asarray(c))), self.N)

    def exponent_coords(self, xi):
        """
            Exponent of χ(ξ) for integral trivector coordinates (..., C(n,3)).
        """
        return np.mod(pair_coords(self.coeffs, np.asarray(xi, dtype=np.int64)), self.N)

    def value(self, a, b, c):
        return np.exp(2j * np.pi * self.exponent(a, b, c) / self.N)

    def to_json(self):
        return {"n": self.n, "N": self.N, "m": [int(value) for value in self.coeffs]}

    def __repr__(self):
        return f"GridTricharacter(n={self.n}, N={self.N}, m={self.coeffs.tolist()})"
