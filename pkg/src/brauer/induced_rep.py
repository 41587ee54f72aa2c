import itertools
import logging
from fractions import Fraction
from math import comb

import numpy as np

from config.load_configs import CHECK_CONFIG
from src.brauer.classification import FiberAction
from src.exterior import basis, vector_wedge_bivector_coords, wedge2_coords
from src.reports import CheckReport

logger = logging.getLogger(__name__)

# W_i W_j = exp(2πi Θ_ij) W_j W_i for W(g)f(x) = ω′(x,g) f(x·g).
COMMUTATION_CONVENTION = "W_i W_j = exp(2 pi i theta_ij) W_j W_i"


class MonomialOperator:

    def __init__(self, perm, exps, N):
        """
            Unitary (Af)[x] = ζ^exps[x] f[perm[x]] with ζ = exp(2πi/N), stored
            exactly as a permutation and an array of exponents mod N.
        """
        self.perm = np.asarray(perm, dtype=np.int64)
        self.exps = np.mod(np.asarray(exps, dtype=np.int64), N)
        self.N = int(N)

    @property
    def dimension(self):
        return len(self.perm)

    def __matmul__(self, other):
        # (AB f)[x] = ζ^(a[x] + b[p_A[x]]) f[p_B[p_A[x]]]
        return MonomialOperator(other.perm[self.perm], self.exps + other.exps[self.perm], self.N)

    def adjoint(self):
        inverse = np.empty_like(self.perm)
        inverse[self.perm] = np.arange(self.dimension)
        return MonomialOperator(inverse, -self.exps[inverse], self.N)

    def scaled(self, exponent):
        return MonomialOperator(self.perm, self.exps + int(exponent), self.N)

    def scalar_ratio(self, other):
        """
            The exponent e with self = ζ^e other, or None if they are not
            proportional.
        """
        if not np.array_equal(self.perm, other.perm):
            return None
        difference = np.mod(self.exps - other.exps, self.N)
        if np.all(difference == difference[0]):
            return int(difference[0])
        return None

    def __eq__(self, other):
        if not isinstance(other, MonomialOperator):
            return NotImplemented
        return self.N == other.N and np.array_equal(self.perm, other.perm) and np.array_equal(self.exps, other.exps)

    def phases(self):
        return np.exp(2j * np.pi * self.exps / self.N)

    def apply(self, f):
        """
            Apply to a vector (complex float arithmetic).
        """
        return self.phases() * np.asarray(f)[self.perm]

    def to_dense(self):
        matrix = np.zeros((self.dimension, self.dimension), dtype=np.complex128)
        matrix[np.arange(self.dimension), self.perm] = self.phases()
        return matrix

    def to_json(self):
        return {"N": self.N, "perm": self.perm, "exps": self.exps}


class InducedRepresentation:

    def __init__(self, action: FiberAction, N: int):
        """
            Projective representation of H¹ = Zⁿ x Λ²Rⁿ induced by a fibre action
            (ω, U), on the finite periodic model l²((Z/N)ⁿ x (Z/N)^ℓ), where the
            second factor indexes η = j/N modulo Λ²Zⁿ. W(g)f(x) = ω′(x,g) f(x·g)
            with ω′((k₁,η₁),(k₂,η₂)) = U(k₁∧η₂) ω(k₁,k₂), and
            u(θ,ξ)f(k,η) = U(ξ + k∧θ) f(k, η+θ) for H² elements with θ, ξ in
            (1/N)-lattices.

            Attributes
            -------------------
            n, N (int):
                Rank and period.
            ell (int):
                C(n,2), the number of η coordinates.
            dimension (int):
                N^(n+ℓ).
            A (np.ndarray):
                Integer matrix NΘ̂, so ω(k,l) = kᵀAl / N.
            c (np.ndarray):
                Integer coefficients of U.
            report (CheckReport):
                Relation residuals, filled by verify().
    """
        if N < 2:
            raise ValueError(f"The period N must be at least 2, got {N}.")
        omega = action.omega
        if omega.form != 'standard':
            raise ValueError("The induced representation needs ω in standard form with rational entries.")
        if not omega.exact or not action.U.exact:
            raise ValueError("The induced representation needs exact rational data, got float phases.")
        if N % omega.theta_hat.den != 0:
            raise ValueError(f"Θ̂ has denominator {omega.theta_hat.den}, which does not divide N={N}.")
        if not action.U.integral:
            raise ValueError(f"U coefficients {action.U.c.coeffs.tolist()} are not integral; U(k∧j/N) "
                             f"would not be periodic in k and j modulo N={N}.")

        self.action = action
        self.n = action.n
        self.N = int(N)
        self.ell = comb(self.n, 2)
        self.dimension = self.N ** (self.n + self.ell)
        self.A = omega.theta_hat.num * (self.N // omega.theta_hat.den)
        self.c = action.U.c.integer_coeffs()

        shape = (self.N,) * (self.n + self.ell)
        coords = np.stack(np.unravel_index(np.arange(self.dimension), shape), axis=-1).astype(np.int64)
        self._shape = shape
        self.K = coords[:, :self.n]
        self.J = coords[:, self.n:]
        self.report = None

    def _index(self, K, J):
        return np.ravel_multi_index(tuple(np.concatenate([K % self.N, J % self.N], axis=1).T), self._shape)

    def _u_exponent(self, k, j):
        """
            N·U(k∧j/N) for integer k (..., n) and j (..., ℓ).
        """
        trivectors = vector_wedge_bivector_coords(k, j)
        if trivectors.shape[-1] == 0:
            return np.zeros(trivectors.shape[:-1], dtype=np.int64)
        return trivectors @ self.c

    def omega_prime(self, g_1, g_2):
        """
            Exponent (mod N) of ω′(g₁,g₂) for g = (k, j), η = j/N.
        """
        (k_1, _), (k_2, j_2) = g_1, g_2
        k_1, k_2, j_2 = (np.asarray(value, dtype=np.int64) for value in (k_1, k_2, j_2))
        return int(np.mod(self._u_exponent(k_1, j_2) + k_1 @ self.A @ k_2, self.N))

    def multiply(self, g_1, g_2):
        """
            (k₁,η₁)(k₂,η₂) = (k₁+k₂, η₁+η₂+k₁∧k₂) with η = j/N, reduced mod N.
        """
        (k_1, j_1), (k_2, j_2) = g_1, g_2
        k_1, j_1, k_2, j_2 = (np.asarray(value, dtype=np.int64) for value in (k_1, j_1, k_2, j_2))
        return (np.mod(k_1 + k_2, self.N), np.mod(j_1 + j_2 + self.N * wedge2_coords(k_1, k_2), self.N))

    def W(self, k, j=None):
        k = np.asarray(k, dtype=np.int64)
        j = np.zeros(self.ell, dtype=np.int64) if j is None else np.asarray(j, dtype=np.int64)
        perm = self._index(self.K + k, self.J + j)
        exps = self._u_exponent(self.K, j[None, :]) + self.K @ self.A @ k
        return MonomialOperator(perm, exps, self.N)

    def u(self, theta, xi=None):
        """
            u(θ,ξ) for θ = theta/N (ℓ integers) and ξ = xi/N (C(n,3) integers).
        """
        theta = np.asarray(theta, dtype=np.int64)
        xi = np.zeros(len(self.c), dtype=np.int64) if xi is None else np.asarray(xi, dtype=np.int64)
        perm = self._index(self.K, self.J + theta)
        exps = int(xi @ self.c) if len(self.c) else 0
        exps = exps + self._u_exponent(self.K, theta[None, :])
        return MonomialOperator(perm, exps, self.N)

    def generators(self):
        """
            W_i = W(e_i, 0), V_ab = W(0, e_a∧e_b / N), u_ab = u(e_a∧e_b / N, 0),
            u_abc = u(0, e_a∧e_b∧e_c / N).
        """
        operators = {}
        for i in range(self.n):
            operators[f"W_{i + 1}"] = self.W(np.eye(self.n, dtype=np.int64)[i])
        zero_k = np.zeros(self.n, dtype=np.int64)
        for position, (a, b) in enumerate(basis(self.n, 2)):
            unit = np.eye(self.ell, dtype=np.int64)[position]
            operators[f"V_{a}{b}"] = self.W(zero_k, unit)
            operators[f"u_{a}{b}"] = self.u(unit)
        for position, indices in enumerate(basis(self.n, 3)):
            operators["u_" + "".join(str(index) for index in indices)] = self.u(
                np.zeros(self.ell, dtype=np.int64), np.eye(len(self.c), dtype=np.int64)[position])
        return operators

    def commutation_phases(self):
        """
            Matrix of Fractions λ_ij with W_i W_j = exp(2πi λ_ij) W_j W_i.
        """
        W = [self.W(np.eye(self.n, dtype=np.int64)[i]) for i in range(self.n)]
        phases = [[Fraction(0)] * self.n for _ in range(self.n)]
        for i, j in itertools.product(range(self.n), repeat=2):
            exponent = (W[i] @ W[j]).scalar_ratio(W[j] @ W[i])
            if exponent is None:
                raise ArithmeticError(f"W_{i + 1} and W_{j + 1} do not commute up to a phase.")
            phases[i][j] = Fraction(exponent, self.N)
        return phases

    def _random_element(self, rng):
        return (rng.integers(0, self.N, size=self.n), rng.integers(0, self.N, size=self.ell))

    def _generator_elements(self):
        elements = []
        for i in range(self.n):
            elements.append((np.eye(self.n, dtype=np.int64)[i], np.zeros(self.ell, dtype=np.int64)))
        for position in range(self.ell):
            elements.append((np.zeros(self.n, dtype=np.int64), np.eye(self.ell, dtype=np.int64)[position]))
        return elements

    def verify(self, samples=CHECK_CONFIG.coherence_samples // 10, rng=None, mode='exact', tol=1e-12):
        """
            Check on all generator pairs plus seeded random samples:

                projective:  W(g₁)W(g₂) = ω′(g₁,g₂) W(g₁g₂)
                boundary:    u(θ,ξ) = U(ξ) W(0,θ)
                equivariance: W(g) u(h) W(g)* = u(c_g h)
                u_homomorphism: u(h₁)u(h₂) = u(h₁+h₂)

            In exact mode residuals are exponent mismatches (must be 0); in float
            mode the operators are compared through their complex phases.
        """
        rng = np.random.default_rng(CHECK_CONFIG.seed) if rng is None else rng
        report = CheckReport("induced-rep", header={"n": self.n, "N": self.N, "convention": COMMUTATION_CONVENTION,
                                                    "mode": mode})

        def compare(left, right, inputs, condition):
            if mode == 'exact':
                mismatched = (not np.array_equal(left.perm, right.perm)) or not np.array_equal(left.exps, right.exps)
                residual = 0 if not mismatched else int(np.count_nonzero(left.exps != right.exps) or 1)
            else:
                mismatched = not np.array_equal(left.perm, right.perm)
                residual = float(np.max(np.abs(left.phases() - right.phases()), initial=0.0)) if not mismatched else 2.0
                report.record_residual(condition, residual)
                mismatched = residual > tol
            report.count()
            if mismatched:
                report.fail(inputs, residual, condition=condition)

        elements = self._generator_elements()
        pairs = list(itertools.product(elements, repeat=2))
        pairs += [(self._random_element(rng), self._random_element(rng)) for _ in range(samples)]
        for g_1, g_2 in pairs:
            left = self.W(*g_1) @ self.W(*g_2)
            right = self.W(*self.multiply(g_1, g_2)).scaled(self.omega_prime(g_1, g_2))
            compare(left, right, {"g_1": g_1, "g_2": g_2}, "projective")

        h_elements = [(theta, np.zeros(len(self.c), dtype=np.int64)) for _, theta in elements[self.n:]]
        h_elements += [(np.zeros(self.ell, dtype=np.int64), xi) for xi in np.eye(len(self.c), dtype=np.int64)]
        h_elements += [(rng.integers(0, self.N, size=self.ell), rng.integers(0, self.N, size=len(self.c)))
                       for _ in range(max(1, samples // 4))]

        for theta, xi in h_elements:
            xi_phase = int(xi @ self.c) if len(self.c) else 0
            compare(self.u(theta, xi), self.W(np.zeros(self.n, dtype=np.int64), theta).scaled(xi_phase),
                    {"theta": theta, "xi": xi}, "boundary")
            for g in elements[:self.n] + [self._random_element(rng)]:
                k = np.asarray(g[0], dtype=np.int64)
                conjugated = self.W(*g) @ self.u(theta, xi) @ self.W(*g).adjoint()
                shifted = xi + vector_wedge_bivector_coords(k, theta) if len(self.c) else xi
                compare(conjugated, self.u(theta, shifted), {"g": g, "theta": theta, "xi": xi}, "equivariance")

        for (theta_1, xi_1), (theta_2, xi_2) in itertools.product(h_elements[:6], repeat=2):
            compare(self.u(theta_1, xi_1) @ self.u(theta_2, xi_2), self.u(theta_1 + theta_2, xi_1 + xi_2),
                    {"h_1": (theta_1, xi_1), "h_2": (theta_2, xi_2)}, "u_homomorphism")

        logger.debug("induced representation n=%d N=%d dimension=%d: %d relations checked",
                     self.n, self.N, self.dimension, report.samples)
        self.report = report
        return report

    def is_regular(self):
        """
            Whether every W(g), g ≠ 0, is a fixed-point-free permutation with no
            phases and all W(g) commute (the regular representation of the
            finite abelian quotient).
        """
        for g in self._generator_elements():
            operator = self.W(*g)
            if np.any(operator.exps != 0) or np.any(operator.perm == np.arange(self.dimension)):
                return False
        phases = self.commutation_phases()
        return all(value == 0 for row in phases for value in row)

    def to_json(self):
        payload = {"n": self.n, "N": self.N, "dimension": self.dimension, "convention": COMMUTATION_CONVENTION,
                   "commutation_phases": self.commutation_phases()}
        if self.report is not None:
            payload["report"] = self.report.to_json()
        return payload


def induced_rep(action: FiberAction, N: int, samples=CHECK_CONFIG.coherence_samples // 10, rng=None, mode='exact'):
    """
        Build the induced projective representation of a rational fibre action on
        the period-N model and verify its relations.

        Returns
        -------------------
        representation (InducedRepresentation):
            With .generators(), .commutation_phases() and the filled .report.
    """
    representation = InducedRepresentation(action, N)
    representation.verify(samples=samples, rng=rng, mode=mode)
    return representation
