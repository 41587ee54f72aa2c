import logging
from fractions import Fraction

import numpy as np

from src.fellbundle.cyclotomic import ring_for
from src.fellbundle.grid import Grid, GridTricharacter
from src.serialisation import load_tables_zarr, save_tables_zarr

logger = logging.getLogger(__name__)


class GridTable:

    kind = "table"

    def __init__(self, grid: Grid, data, exact: bool):
        """
            Table of values over grid x grid, in Z[ζ_N] (exact, int64 array with a
            trailing axis of length N) or complex128 (float).

            Attributes
            -------------------
            grid (Grid)
            data (np.ndarray):
                Shape (G, G, N) exact or (G, G) float, G = Nⁿ.
            exact (bool)
            ring (CyclotomicRing or ComplexRing):
                Arithmetic for the entries.
        """
        self.grid = grid
        self.exact = bool(exact)
        self.ring = ring_for(grid.N, self.exact)
        expected = (grid.size, grid.size) + ((grid.N,) if self.exact else ())
        data = np.asarray(data, dtype=np.int64 if self.exact else np.complex128)
        if data.shape != expected:
            raise ValueError(f"{type(self).__name__} data must have shape {expected}, got {data.shape}.")
        if not self.exact and not np.all(np.isfinite(data)):
            raise ValueError(f"{type(self).__name__} entries must be finite.")
        self.data = data

    @classmethod
    def zeros(cls, grid, exact=True):
        return cls(grid, ring_for(grid.N, exact).zeros((grid.size, grid.size)), exact)

    @classmethod
    def delta(cls, grid, first, second, exact=True, value_exponent=0):
        """
            ζ^value_exponent at (first, second), zero elsewhere.
        """
        table = cls.zeros(grid, exact)
        ring = table.ring
        table.data[grid.index(first), grid.index(second)] = ring.root_power(value_exponent)
        return table

    def _new(self, data):
        return type(self)(self.grid, data, self.exact)

    def _check(self, other):
        if not isinstance(other, GridTable) or other.grid != self.grid:
            raise ValueError(f"Grid mismatch: {self.grid!r} and {getattr(other, 'grid', None)!r}.")
        if other.exact != self.exact:
            raise ValueError("Exact and float tables cannot be mixed.")

    def __add__(self, other):
        self._check(other)
        return self._new(self.data + other.data)

    def __sub__(self, other):
        self._check(other)
        return self._new(self.data - other.data)

    def scaled(self, exponent):
        """
            ζ^exponent times the table.
        """
        return self._new(self.ring.twist(self.data, exponent))

    def equals(self, other, tol=None):
        self._check(other)
        return self.ring.equal(self.data, other.data, tol)

    def max_residual(self, other):
        self._check(other)
        return float(np.max(np.abs(self.to_complex() - other.to_complex()), initial=0.0))

    def to_complex(self):
        return self.ring.to_complex(self.data)

    def as_float(self):
        if not self.exact:
            return self
        return type(self)(self.grid, self.to_complex(), False)

    def support_rows(self):
        """
            Indices of the first coordinate where the table is not identically zero.
        """
        nonzero = self.ring.nonzero(self.data)
        return np.flatnonzero(np.any(nonzero, axis=1))

    def is_zero(self):
        return len(self.support_rows()) == 0

    def to_json(self):
        """
            {"n", "N", "kind", "exact", "data"}: data row-major over (first,
            second); complex entries as [re, im], exact entries as their N
            coefficients over powers of ζ_N.
        """
        return {"n": self.grid.n, "N": self.grid.N, "kind": self.kind, "exact": self.exact,
                "data": self.data.reshape(-1, self.grid.N).tolist() if self.exact
                else np.stack([self.data.real.ravel(), self.data.imag.ravel()], axis=-1).tolist()}

    @classmethod
    def from_json(cls, payload):
        try:
            grid = Grid(payload["n"], payload["N"])
            exact = bool(payload.get("exact", False))
            data = np.asarray(payload["data"], dtype=np.int64 if exact else np.float64)
        except (KeyError, TypeError) as error:
            raise ValueError(f"Malformed table payload: {error}.") from error
        if exact:
            return cls(grid, data.reshape(grid.size, grid.size, grid.N), True)
        return cls(grid, (data[:, 0] + 1j * data[:, 1]).reshape(grid.size, grid.size), False)


class FellSection(GridTable):
    """
        Section f(t, s) of the Fell bundle over the grid. The first coordinate t
        labels the fibre; the fibre E_t is the slice f(t, ·).
    """

    kind = "section"

    @classmethod
    def homogeneous(cls, grid, t, values, exact=True):
        """
            Section supported on the single fibre t with slice values.
        """
        section = cls.zeros(grid, exact)
        section.data[grid.index(t)] = values
        return section

    def fiber(self, t):
        return self.data[self.grid.index(t)]

    def fibers(self):
        return [self.grid.points[index] for index in self.support_rows()]


class Kernel(GridTable):
    """
        Integral kernel K(x, y) on the grid.
    """

    kind = "kernel"


def _check_chi(grid, chi):
    if not isinstance(chi, GridTricharacter) or chi.grid != grid:
        raise ValueError(f"χ must be a GridTricharacter on {grid!r}.")


def _check_pair(f, g, chi=None):
    f._check(g)
    if chi is not None:
        _check_chi(f.grid, chi)


# Fibre-level operations

def fiber_mult(t_1, t_2, h_1, h_2, chi: GridTricharacter, exact=None):
    """
        ω_(t₁,t₂)(h₁⊗h₂)(s) = χ(t₁∧t₂∧s) h₁(s+t₂) h₂(s); a slice of the fibre at
        t₁+t₂.
    """
    grid = chi.grid
    exact = np.asarray(h_1).dtype == np.int64 if exact is None else exact
    ring = ring_for(grid.N, exact)
    t_2_index = grid.index(t_2)
    exponents = chi.exponent(np.asarray(t_1)[None, :], np.asarray(t_2)[None, :], grid.points)
    shifted = np.asarray(h_1)[grid.add[:, t_2_index]]
    return ring.twist(ring.mul(shifted, np.asarray(h_2)), exponents)


def fiber_involute(t, h, grid: Grid, exact=None):
    """
        h*(s) = conj h(s-t), a slice of the fibre at -t (the fibre -t of
        involute applied to the section supported on t).
    """
    exact = np.asarray(h).dtype == np.int64 if exact is None else exact
    ring = ring_for(grid.N, exact)
    return ring.conj(np.asarray(h)[grid.sub[:, grid.index(t)]])


def left_action(t, a, h, grid: Grid, exact=None):
    """
        (a·h)(s) = a(s+t) h(s) for a function a on the grid and h in the fibre at t.
    """
    exact = np.asarray(h).dtype == np.int64 if exact is None else exact
    ring = ring_for(grid.N, exact)
    return ring.mul(np.asarray(a)[grid.add[:, grid.index(t)]], np.asarray(h))


def right_action(h, a, grid: Grid, exact=None):
    """
        (h·a)(s) = h(s) a(s).
    """
    exact = np.asarray(h).dtype == np.int64 if exact is None else exact
    return ring_for(grid.N, exact).mul(np.asarray(h), np.asarray(a))


def inner_product(h_1, h_2, grid: Grid, exact=None):
    """
        <h₁, h₂>(s) = conj h₁(s) h₂(s), a function on the grid.
    """
    exact = np.asarray(h_1).dtype == np.int64 if exact is None else exact
    ring = ring_for(grid.N, exact)
    return ring.mul(ring.conj(np.asarray(h_1)), np.asarray(h_2))


# Section-level operations

def convolve(f: FellSection, g: FellSection, chi: GridTricharacter) -> FellSection:
    """
        (f•g)(t,s) = Σ_r χ(r∧t∧s) f(r, s+t-r) g(t-r, s).

        Summation runs over r in lexicographic order, skipping fibres r on which
        f vanishes identically.
    """
    _check_pair(f, g, chi)
    grid, ring = f.grid, f.ring
    out = ring.zeros((grid.size, grid.size))
    linear = chi.linear
    columns = np.arange(grid.size)
    for r in f.support_rows():
        t_minus_r = grid.sub[:, r]
        f_values = f.data[r][grid.add[columns[None, :], t_minus_r[:, None]]]
        g_values = g.data[t_minus_r]
        exponents = np.mod(linear @ grid.points[r], grid.N)
        out = out + ring.twist(ring.mul(f_values, g_values), exponents)
    return FellSection(grid, out, f.exact)


def convolve_fiber(f: FellSection, g: FellSection, chi: GridTricharacter, t):
    """
        The single fibre (f•g)(t, ·).
    """
    _check_pair(f, g, chi)
    grid, ring = f.grid, f.ring
    t_index = grid.index(t)
    out = ring.zeros((grid.size,))
    for r in f.support_rows():
        t_minus_r = grid.sub[t_index, r]
        f_values = f.data[r][grid.add[:, t_minus_r]]
        g_values = g.data[t_minus_r]
        exponents = np.mod(chi.linear[t_index] @ grid.points[r], grid.N)
        out = out + ring.twist(ring.mul(f_values, g_values), exponents)
    return out


def involute(f: FellSection) -> FellSection:
    """
        f*(t,s) = conj f(-t, s+t).
    """
    grid = f.grid
    rows = grid.neg[:, None]
    columns = grid.add[np.arange(grid.size)[None, :], np.arange(grid.size)[:, None]]
    return FellSection(grid, f.ring.conj(f.data[rows, columns]), f.exact)


def phi(K: Kernel) -> FellSection:
    """
        Φ(K)(x,y) = K(x+y, y).
    """
    grid = K.grid
    return FellSection(grid, K.data[grid.add, np.arange(grid.size)[None, :]], K.exact)


def phi_inv(f: FellSection) -> Kernel:
    """
        K(u,v) = f(u-v, v).
    """
    grid = f.grid
    return Kernel(grid, f.data[grid.sub, np.arange(grid.size)[None, :]], f.exact)


def kernel_mult(K_1: Kernel, K_2: Kernel, chi: GridTricharacter) -> Kernel:
    """
        K₃(x,y) = Σ_r χ(x∧r∧y) K₁(x,r) K₂(r,y), so that Φ(K₃) = Φ(K₁)•Φ(K₂).
    """
    _check_pair(K_1, K_2, chi)
    grid, ring = K_1.grid, K_1.ring
    out = ring.zeros((grid.size, grid.size))
    # χ(x∧r∧y) = χ(r∧x∧y)⁻¹
    for r in range(grid.size):
        exponents = np.mod(-(chi.linear @ grid.points[r]), grid.N)
        product = ring.mul(K_1.data[:, r][:, None], K_2.data[r][None, :])
        out = out + ring.twist(product, exponents)
    return Kernel(grid, out, K_1.exact)


def kernel_adjoint(K: Kernel) -> Kernel:
    """
        K*(x,y) = conj K(y,x).
    """
    return Kernel(K.grid, K.ring.conj(np.swapaxes(K.data, 0, 1)), K.exact)


def hs_norm(f: GridTable) -> float:
    """
        Hilbert-Schmidt norm sqrt(Σ_(r,s) |f(r,s)|²).
    """
    return float(np.sqrt(np.sum(f.ring.abs2(f.data))))


def hs_norm_via_convolution(f: FellSection, chi: GridTricharacter) -> float:
    """
        sqrt(Σ_s (f*•f)(0,s)); agrees with hs_norm.
    """
    zero = np.zeros(f.grid.n, dtype=np.int64)
    values = f.ring.to_complex(convolve_fiber(involute(f), f, chi, zero))
    return float(np.sqrt(max(np.sum(values).real, 0.0)))


def dual_action(sigma, f: FellSection) -> FellSection:
    """
        α_σ(f)(t,s) = exp(2πi <σ,t>/N) f(t,s) for σ in the dual grid (Z/N)ⁿ.
    """
    grid = f.grid
    sigma = np.asarray(sigma, dtype=np.int64)
    if sigma.shape != (grid.n,):
        raise ValueError(f"σ must have {grid.n} integer coordinates, got {sigma.tolist()}.")
    exponents = np.broadcast_to((grid.points @ sigma)[:, None], (grid.size, grid.size))
    return FellSection(grid, f.ring.twist(f.data, exponents), f.exact)


# Random inputs

def random_values(rng, ring, shape, bound=2):
    """
        Random entries: small integer coefficients over powers of ζ_N (exact) or
        complex numbers with parts uniform in [-1, 1] (float).
    """
    if ring.exact:
        return rng.integers(-bound, bound + 1, size=tuple(shape) + (ring.N,), dtype=np.int64)
    return rng.uniform(-1, 1, size=shape) + 1j * rng.uniform(-1, 1, size=shape)


def random_section(rng, grid, exact=True, fibers=None):
    """
        Random section, supported on the given number of random fibres (all
        fibres when fibers is None).
    """
    ring = ring_for(grid.N, exact)
    data = random_values(rng, ring, (grid.size, grid.size))
    if fibers is not None:
        keep = rng.choice(grid.size, size=min(fibers, grid.size), replace=False)
        mask = np.zeros(grid.size, dtype=bool)
        mask[keep] = True
        data[~mask] = 0
    return FellSection(grid, data, exact)


def random_kernel(rng, grid, exact=True):
    ring = ring_for(grid.N, exact)
    return Kernel(grid, random_values(rng, ring, (grid.size, grid.size)), exact)


def random_homogeneous(rng, grid, t, exact=True, delta=False):
    """
        Random section supported on the fibre t; with delta=True a single ζ-power
        at a random s.
    """
    ring = ring_for(grid.N, exact)
    if delta:
        values = ring.zeros((grid.size,))
        values[rng.integers(grid.size)] = ring.root_power(rng.integers(grid.N))
    else:
        values = random_values(rng, ring, (grid.size,))
    return FellSection.homogeneous(grid, t, values, exact)


# Storage

def measure_weight(grid: Grid):
    return Fraction(1, grid.N ** grid.n)


def save_tables(path, tables: dict, chi: GridTricharacter):
    """
        Write sections or kernels into a new zarr group with attributes n, N, m,
        kind, exact and the measure weight 1/Nⁿ the plain sums omit.

        Returns
        -------------------
        path (str):
            The (unique) path written.
    """
    if not tables:
        raise ValueError("Nothing to save.")
    kinds = {table.kind for table in tables.values()}
    exact = {table.exact for table in tables.values()}
    if len(exact) != 1:
        raise ValueError("Exact and float tables cannot be saved in one group.")
    attributes = {"n": chi.n, "N": chi.N, "m": [int(value) for value in chi.coeffs],
                  "kind": kinds.pop() if len(kinds) == 1 else "mixed", "exact": exact.pop(),
                  "measure_weight": measure_weight(chi.grid),
                  "kinds": {name: table.kind for name, table in tables.items()}}
    path = save_tables_zarr(path, {name: table.data for name, table in tables.items()}, attributes)
    logger.debug("saved %d tables to %s", len(tables), path)
    return path


def load_tables(path):
    """
        Read back the tables written by save_tables.

        Returns
        -------------------
        tables (dict):
            Name -> FellSection or Kernel.
        chi (GridTricharacter)
    """
    arrays, attributes = load_tables_zarr(path)
    try:
        grid = Grid(attributes["n"], attributes["N"])
        chi = GridTricharacter(grid, attributes["m"])
        exact = bool(attributes["exact"])
        kinds = attributes.get("kinds", {})
    except KeyError as error:
        raise ValueError(f"Zarr group {path} is missing attribute {error}.") from error
    classes = {"section": FellSection, "kernel": Kernel}
    tables = {name: classes.get(kinds.get(name, "section"), FellSection)(grid, data, exact)
              for name, data in arrays.items()}
    return tables, chi
