import itertools
import logging

import numpy as np

from config.load_configs import CHECK_CONFIG
from src.exterior import wedge2_coords
from src.reports import CheckReport

logger = logging.getLogger(__name__)


class StrictActionData:

    def __init__(self, n, N, alpha, ubar, dimension, tolerance=1e-12):
        """
            Candidate data (ᾱ, ū) of a strict action on M_d, sampled on the finite
            group S = (Z/N)ⁿ. Automorphisms are conjugations, so ᾱ_s is given by a
            unitary A_s determined up to phase.

            Attributes
            -------------------
            n (int):
                Rank of S.
            N (int):
                Period of S; wedges s∧t are integer bivector coordinates mod N.
            alpha (callable):
                s (integer n-vector mod N) -> d x d unitary A_s with ᾱ_s = Ad A_s.
            ubar (callable):
                eta (integer C(n,2)-vector mod N) -> d x d unitary ū(eta).
            dimension (int):
                d.
            tolerance (float):
                Float comparison tolerance for the matrix relations.
        """
        if N < 1:
            raise ValueError(f"Period must be positive, got {N}.")
        self.n = int(n)
        self.N = int(N)
        self.alpha = alpha
        self.ubar = ubar
        self.dimension = int(dimension)
        self.tolerance = tolerance

    def A(self, s):
        return np.asarray(self.alpha(np.mod(np.asarray(s, dtype=np.int64), self.N)), dtype=np.complex128)

    def U(self, eta):
        return np.asarray(self.ubar(np.mod(np.asarray(eta, dtype=np.int64), self.N)), dtype=np.complex128)

    def wedge(self, s, t):
        return np.mod(wedge2_coords(np.asarray(s, dtype=np.int64), np.asarray(t, dtype=np.int64)), self.N)

    def act(self, s, x):
        """
            ᾱ_s(x) = A_s x A_s*.
        """
        A = self.A(s)
        return A @ x @ A.conj().T

    @classmethod
    def from_generators(cls, n, N, alpha_generators, ubar_generators, tolerance=1e-12):
        """
            ᾱ_s = Ad(A₁^s₁ ... Aₙ^sₙ) and ū(η) = U₁^η₁ ... U_ℓ^η_ℓ from one unitary per
            unit vector and per basis bivector.
        """
        alpha_generators = [np.asarray(matrix, dtype=np.complex128) for matrix in alpha_generators]
        ubar_generators = [np.asarray(matrix, dtype=np.complex128) for matrix in ubar_generators]
        if len(alpha_generators) != n:
            raise ValueError(f"Expected {n} alpha generators, got {len(alpha_generators)}.")
        shapes = {matrix.shape for matrix in alpha_generators + ubar_generators}
        if len(shapes) != 1 or len(next(iter(shapes))) != 2 or len(set(next(iter(shapes)))) != 1:
            raise ValueError(f"All generators must be square matrices of one size, got shapes {sorted(shapes)}.")
        dimension = next(iter(shapes))[0]

        def product(generators, exponents):
            result = np.eye(dimension, dtype=np.complex128)
            for matrix, exponent in zip(generators, exponents):
                result = result @ np.linalg.matrix_power(matrix, int(exponent))
            return result

        return cls(n, N, lambda s: product(alpha_generators, s), lambda eta: product(ubar_generators, eta),
                   dimension, tolerance)

    @classmethod
    def from_json(cls, payload):
        """
            {"weyl": N} for the Weyl pair action, or {"n", "N", "alpha_generators",
            "ubar_generators"} with matrices as nested [re, im] pairs.
        """
        try:
            if "weyl" in payload:
                return weyl_strict_action(int(payload["weyl"]))
            n, N = int(payload["n"]), int(payload["N"])
            alpha = [_decode_matrix(matrix) for matrix in payload["alpha_generators"]]
            ubar = [_decode_matrix(matrix) for matrix in payload.get("ubar_generators", [])]
        except (KeyError, TypeError) as error:
            raise ValueError(f"Malformed strict action payload: {error}.") from error
        if not ubar:
            ubar = [np.eye(len(alpha[0]), dtype=np.complex128)] * (n * (n - 1) // 2)
        return cls.from_generators(n, N, alpha, ubar, payload.get("tolerance", 1e-12))


def _decode_matrix(rows):
    array = np.asarray(rows, dtype=np.float64)
    if array.ndim != 3 or array.shape[-1] != 2:
        raise ValueError(f"Matrices must be given as nested [re, im] pairs, got shape {array.shape}.")
    return array[..., 0] + 1j * array[..., 1]


def _scalar_residual(M):
    """
        Distance of M from the unitary scalars: ||M - M₀₀ I|| + | |M₀₀| - 1 |.
    """
    scalar = M[0, 0]
    return float(np.linalg.norm(M - scalar * np.eye(len(M))) + abs(abs(scalar) - 1.0))


def weyl_pair(N):
    """
        Shift X e_j = e_(j+1) and clock Z e_j = ζ^j e_j on C^N, ζ = exp(2πi/N);
        ZX = ζ XZ.
    """
    X = np.roll(np.eye(N, dtype=np.complex128), 1, axis=0)
    Z = np.diag(np.exp(2j * np.pi * np.arange(N) / N))
    return X, Z


def weyl_strict_action(N):
    """
        Strict action of (Z/N)² on M_N by ᾱ_(a,b) = Ad(XᵃZᵇ) with ū ≡ 1.
    """
    X, Z = weyl_pair(N)

    def alpha(s):
        return np.linalg.matrix_power(X, int(s[0])) @ np.linalg.matrix_power(Z, int(s[1]))

    def ubar(eta):
        return np.eye(N, dtype=np.complex128)

    return StrictActionData(2, N, alpha, ubar, N)


def random_strict_samples(data: StrictActionData, count, rng=None):
    """
        Samples (s, t, v, w) from S; all generator triples come first.
    """
    rng = np.random.default_rng(CHECK_CONFIG.seed) if rng is None else rng
    units = [np.eye(data.n, dtype=np.int64)[i] for i in range(data.n)] + [np.zeros(data.n, dtype=np.int64)]
    samples = [(s, t, v, units[0]) for s, t, v in itertools.product(units, repeat=3)]
    samples += [tuple(rng.integers(0, data.N, size=data.n) for _ in range(4)) for _ in range(count)]
    return samples


def check_strict_action(d: StrictActionData, samples, tol=None):
    """
        Verify the relations of a strict action on samples (s, t, v, w):

            (1) twisted_homomorphism: ᾱ_s ᾱ_t = Ad ū(s∧t) ᾱ_(s+t)
            (2) u_homomorphism:       ū(s∧t) ū(t∧v) = ū(s∧t + t∧v)
            (3) central_fixed:        z = ᾱ_s(ū(t∧v)) ū(t∧v)* is central and ᾱ_w-fixed
            (4) exchange:             ᾱ_s(ū(t∧v)) ū(t∧v)* = ū(s∧v) ᾱ_t(ū(s∧v))*
            (5) assembled:            (t,η) -> Ad ū(η) ∘ ᾱ_t is a homomorphism of H¹

        Automorphisms are compared as conjugations (phase-insensitive); the
        relations between unitaries are compared exactly up to the tolerance.
    """
    tol = d.tolerance if tol is None else tol
    report = CheckReport("strict-action", header={"automorphisms": "phase-insensitive", "N": d.N, "n": d.n})

    def record(condition, residual, inputs):
        report.record_residual(condition, residual)
        if residual > tol:
            report.fail(inputs, residual, condition=condition)

    for s, t, v, w in samples:
        inputs = {"s": s, "t": t, "v": v, "w": w}
        report.count()

        A_s, A_t, A_st = d.A(s), d.A(t), d.A(np.add(s, t))
        M = np.linalg.inv(d.U(d.wedge(s, t)) @ A_st) @ A_s @ A_t
        record("twisted_homomorphism", _scalar_residual(M), inputs)

        eta_1, eta_2 = d.wedge(s, t), d.wedge(t, v)
        residual = np.linalg.norm(d.U(eta_1) @ d.U(eta_2) - d.U(eta_1 + eta_2))
        record("u_homomorphism", residual, inputs)

        u_tv = d.U(d.wedge(t, v))
        z = d.act(s, u_tv) @ u_tv.conj().T
        central = _scalar_residual(z)
        fixed = np.linalg.norm(d.act(w, z) - z)
        record("central_fixed", central + fixed, inputs)

        u_sv = d.U(d.wedge(s, v))
        exchange = u_sv @ d.act(t, u_sv).conj().T
        record("exchange", np.linalg.norm(z - exchange), inputs)

        # α(t,η) = Ad ū(η) ᾱ_t, with (t₁,η₁)(t₂,η₂) = (t₁+t₂, η₁+η₂+t₁∧t₂)
        eta_a, eta_b = d.wedge(t, v), d.wedge(v, t + s)
        left = d.U(eta_a) @ d.A(s) @ d.U(eta_b) @ d.A(w)
        right = d.U(eta_a + eta_b + d.wedge(s, w)) @ d.A(np.add(s, w))
        record("assembled", _scalar_residual(np.linalg.inv(right) @ left), inputs)

    zero = np.zeros(d.n, dtype=np.int64)
    report.count()
    if _scalar_residual(d.A(zero)) > tol:
        report.fail({"s": zero}, _scalar_residual(d.A(zero)), condition="unit")

    logger.debug("strict action check over %d samples, %d failures", report.samples, len(report.failures))
    return report
