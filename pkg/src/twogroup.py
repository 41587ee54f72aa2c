import logging

from config.load_configs import CHECK_CONFIG
from src.exterior import MultiVector, random_multivector, wedge
from src.reports import CheckReport

logger = logging.getLogger(__name__)

QUOTIENTS = (None, 'integral')

# Orientation of the transformation relating iota.pi to the identity functor.
PHI_ORIENTATION = "phi: (t,eta) => (t,0) with value (-eta,0)"
ASSOCIATOR_SIGN = -1


def _require_grade(vector, grade, name):
    if not isinstance(vector, MultiVector):
        raise ValueError(f"{name} must be a MultiVector, got {type(vector).__name__}.")
    if vector.grade != grade:
        raise ValueError(f"{name} must have grade {grade}, got grade {vector.grade}.")


def _require_same_n(*elements):
    dimensions = {element.n for element in elements}
    if len(dimensions) > 1:
        raise ValueError(f"Dimension mismatch: {sorted(dimensions)}.")


def _zero(n, grade, exact):
    return MultiVector.zero(n, grade, exact=exact)


def _close(u, v, tol):
    if u.exact and v.exact:
        return u == v
    return u.isclose(v, tol)


class H1Element:

    def __init__(self, t: MultiVector, eta: MultiVector):
        """
            Element (t, eta) of H¹ = Rⁿ x Λ²Rⁿ with product
            (t₁,η₁)(t₂,η₂) = (t₁+t₂, η₁+η₂+t₁∧t₂).
        """
        _require_grade(t, 1, "t")
        _require_grade(eta, 2, "eta")
        _require_same_n(t, eta)
        self.t = t
        self.eta = eta

    @property
    def n(self):
        return self.t.n

    @property
    def exact(self):
        return self.t.exact

    @classmethod
    def unit(cls, n, exact=True):
        return cls(_zero(n, 1, exact), _zero(n, 2, exact))

    def __eq__(self, other):
        if not isinstance(other, H1Element):
            return NotImplemented
        return self.t == other.t and self.eta == other.eta

    def __hash__(self):
        return hash((self.t, self.eta))

    def __repr__(self):
        return f"H1Element(t={self.t.coeffs.tolist()}, eta={self.eta.coeffs.tolist()})"

    def isclose(self, other, tol):
        return _close(self.t, other.t, tol) and _close(self.eta, other.eta, tol)

    def difference(self, other):
        """
            Coordinatewise difference, used as a residual (not the group quotient).
        """
        return {"t": self.t - other.t, "eta": self.eta - other.eta}

    def to_json(self):
        return {"t": self.t.to_json(), "eta": self.eta.to_json()}

    @classmethod
    def from_json(cls, payload, exact=None):
        try:
            return cls(MultiVector.from_json(payload["t"], exact), MultiVector.from_json(payload["eta"], exact))
        except (KeyError, TypeError) as error:
            raise ValueError(f"Malformed H1Element payload {payload!r}.") from error


class H2Element:

    def __init__(self, theta: MultiVector, xi: MultiVector):
        """
            Element (theta, xi) of the abelian group H² = Λ²Rⁿ x Λ³Rⁿ.
        """
        _require_grade(theta, 2, "theta")
        _require_grade(xi, 3, "xi")
        _require_same_n(theta, xi)
        self.theta = theta
        self.xi = xi

    @property
    def n(self):
        return self.theta.n

    @property
    def exact(self):
        return self.theta.exact

    @classmethod
    def unit(cls, n, exact=True):
        return cls(_zero(n, 2, exact), _zero(n, 3, exact))

    def __eq__(self, other):
        if not isinstance(other, H2Element):
            return NotImplemented
        return self.theta == other.theta and self.xi == other.xi

    def __hash__(self):
        return hash((self.theta, self.xi))

    def __repr__(self):
        return f"H2Element(theta={self.theta.coeffs.tolist()}, xi={self.xi.coeffs.tolist()})"

    def isclose(self, other, tol, quotient=None):
        if not _close(self.theta, other.theta, tol):
            return False
        return _xi_equal(self.xi, other.xi, quotient, tol)

    def difference(self, other):
        return {"theta": self.theta - other.theta, "xi": self.xi - other.xi}

    def to_json(self):
        return {"theta": self.theta.to_json(), "xi": self.xi.to_json()}

    @classmethod
    def from_json(cls, payload, exact=None):
        try:
            return cls(MultiVector.from_json(payload["theta"], exact), MultiVector.from_json(payload["xi"], exact))
        except (KeyError, TypeError) as error:
            raise ValueError(f"Malformed H2Element payload {payload!r}.") from error


def _check_quotient(quotient):
    if quotient not in QUOTIENTS:
        raise ValueError(f"Unsupported quotient {quotient!r}; options are {QUOTIENTS}.")


def _reduce_xi(xi, quotient):
    if quotient == 'integral':
        return xi.fractional_part()
    return xi


def _xi_equal(xi_1, xi_2, quotient, tol=0.0):
    difference = _reduce_xi(xi_1 - xi_2, quotient)
    if difference.exact:
        return difference.is_zero()
    # a float difference close to 1 is also close to the lattice
    if quotient == 'integral':
        coeffs = difference.coeffs
        return bool(((coeffs <= tol) | (coeffs >= 1 - tol)).all())
    return difference.is_zero(tol)


class GBigon:

    def __init__(self, t: MultiVector, xi: MultiVector, quotient=None):
        """
            Bigon xi: t => t of the 2-group G. Every bigon of G is an endo-bigon,
            so source and range share the single field t.

            Attributes
            -------------------
            t (MultiVector):
                Grade 1, the arrow.
            xi (MultiVector):
                Grade 3, the bigon value. Reduced to [0,1) coordinates when the
                quotient is 'integral' (values in Λ³Rⁿ/Λ³Zⁿ).
            quotient (str or None):
                None for Λ³Rⁿ, 'integral' for the quotient by the lattice Λ³Zⁿ.
        """
        _require_grade(t, 1, "t")
        _require_grade(xi, 3, "xi")
        _require_same_n(t, xi)
        _check_quotient(quotient)
        self.t = t
        self.quotient = quotient
        self.xi = _reduce_xi(xi, quotient)

    @property
    def n(self):
        return self.t.n

    def __eq__(self, other):
        if not isinstance(other, GBigon):
            return NotImplemented
        return self.quotient == other.quotient and self.t == other.t and self.xi == other.xi

    def __hash__(self):
        return hash((self.t, self.xi, self.quotient))

    def __repr__(self):
        return f"GBigon(t={self.t.coeffs.tolist()}, xi={self.xi.coeffs.tolist()}, quotient={self.quotient})"

    def isclose(self, other, tol):
        return _close(self.t, other.t, tol) and _xi_equal(self.xi, other.xi, self.quotient, tol)

    def to_json(self):
        payload = {"t": self.t.to_json(), "xi": self.xi.to_json()}
        if self.quotient is not None:
            payload["quotient"] = self.quotient
        return payload


# Crossed module H

def h1_mul(a: H1Element, b: H1Element) -> H1Element:
    _require_same_n(a, b)
    return H1Element(a.t + b.t, a.eta + b.eta + wedge(a.t, b.t))


def h1_inv(a: H1Element) -> H1Element:
    return H1Element(-a.t, -a.eta)


def h2_mul(a: H2Element, b: H2Element) -> H2Element:
    _require_same_n(a, b)
    return H2Element(a.theta + b.theta, a.xi + b.xi)


def h2_inv(a: H2Element) -> H2Element:
    return H2Element(-a.theta, -a.xi)


def boundary(h: H2Element) -> H1Element:
    return H1Element(_zero(h.n, 1, h.exact), h.theta)


def conj(g: H1Element, h: H2Element) -> H2Element:
    """
        Action c_(t,eta)(theta, xi) = (theta, xi + t∧theta).
    """
    _require_same_n(g, h)
    return H2Element(h.theta, h.xi + wedge(g.t, h.theta))


# 2-group G

def g_mul(b_1: GBigon, b_2: GBigon) -> GBigon:
    """
        Horizontal composite of bigons at t₁ and t₂, a bigon at t₁+t₂.
    """
    _require_same_n(b_1, b_2)
    if b_1.quotient != b_2.quotient:
        raise ValueError(f"Quotient mismatch: {b_1.quotient} and {b_2.quotient}.")
    return GBigon(b_1.t + b_2.t, b_1.xi + b_2.xi, quotient=b_1.quotient)


def g_vertical(b_1: GBigon, b_2: GBigon) -> GBigon:
    """
        Vertical composite of two bigons on the same arrow.
    """
    if b_1.t != b_2.t:
        raise ValueError(f"Vertical composition needs bigons on the same arrow, got {b_1.t!r} and {b_2.t!r}.")
    if b_1.quotient != b_2.quotient:
        raise ValueError(f"Quotient mismatch: {b_1.quotient} and {b_2.quotient}.")
    return GBigon(b_1.t, b_1.xi + b_2.xi, quotient=b_1.quotient)


def g_associator(t_1: MultiVector, t_2: MultiVector, t_3: MultiVector, quotient=None) -> GBigon:
    """
        Associator of G: the bigon -t₁∧t₂∧t₃ at t₁+t₂+t₃.
    """
    _require_same_n(t_1, t_2, t_3)
    return GBigon(t_1 + t_2 + t_3, -wedge(wedge(t_1, t_2), t_3), quotient=quotient)


# Morphisms iota: G -> H, pi: H -> G and the transformation Phi

def iota(t: MultiVector) -> H1Element:
    _require_grade(t, 1, "t")
    return H1Element(t, _zero(t.n, 2, t.exact))


def iota_bigon(b: GBigon) -> H2Element:
    return H2Element(_zero(b.n, 2, b.xi.exact), b.xi)


def omega_iota(t_1: MultiVector, t_2: MultiVector) -> H2Element:
    """
        Multiplication bigon of iota: (-t₁∧t₂, 0) from iota(t₁)iota(t₂) to iota(t₁+t₂).
    """
    _require_same_n(t_1, t_2)
    return H2Element(-wedge(t_1, t_2), _zero(t_1.n, 3, t_1.exact))


def pi(g: H1Element) -> MultiVector:
    return g.t


def pi_bigon(h: H2Element, at: H1Element, quotient=None) -> GBigon:
    _require_same_n(h, at)
    return GBigon(at.t, h.xi, quotient=quotient)


def omega_pi(a: H1Element, b: H1Element, quotient=None) -> GBigon:
    _require_same_n(a, b)
    return GBigon(a.t + b.t, wedge(a.t, b.eta), quotient=quotient)


def phi(g: H1Element) -> H2Element:
    """
        The bigon Phi(t,eta): (t,eta) => (t,0) = iota(pi(t,eta)), with value (-eta, 0).
    """
    return H2Element(-g.eta, _zero(g.n, 3, g.exact))


def omega_iota_pi(a: H1Element, b: H1Element) -> H2Element:
    """
        Multiplication bigon of the composite iota.pi: omega_iota(pi a, pi b)
        followed by iota(omega_pi(a, b)).
    """
    return h2_mul(omega_iota(pi(a), pi(b)), iota_bigon(omega_pi(a, b)))


def omega_iota_pi_from_phi(a: H1Element, b: H1Element, phi_map=phi) -> H2Element:
    """
        The same multiplication bigon forced by Phi: Phi(ab) - Phi(a) - c_a(Phi(b)).
    """
    return h2_mul(phi_map(h1_mul(a, b)), h2_inv(h2_mul(phi_map(a), conj(a, phi_map(b)))))


def associator_from_phi(t_1: MultiVector, t_2: MultiVector, t_3: MultiVector, phi_map=phi) -> H2Element:
    """
        The associator of G recovered from the square of Phi-bigons around the two
        bracketings of t₁t₂t₃ in H; equals iota_bigon(g_associator(t₁,t₂,t₃)).
    """
    _require_same_n(t_1, t_2, t_3)
    total = t_1 + t_2 + t_3
    right = phi_map(H1Element(total, wedge(t_1, t_2 + t_3)))
    left = phi_map(H1Element(total, wedge(t_1 + t_2, t_3)))
    inner_right = conj(iota(t_1), phi_map(H1Element(t_2 + t_3, wedge(t_2, t_3))))
    inner_left = phi_map(H1Element(t_1 + t_2, wedge(t_1, t_2)))
    return h2_mul(h2_mul(right, h2_inv(left)), h2_mul(inner_right, h2_inv(inner_left)))


# Checkers

def random_h1(rng, n, exact=True, denominator=CHECK_CONFIG.denominator):
    return H1Element(random_multivector(rng, n, 1, exact, denominator), random_multivector(rng, n, 2, exact, denominator))


def random_h2(rng, n, exact=True, denominator=CHECK_CONFIG.denominator):
    return H2Element(random_multivector(rng, n, 2, exact, denominator), random_multivector(rng, n, 3, exact, denominator))


def random_crossed_module_samples(rng, n=CHECK_CONFIG.n, count=CHECK_CONFIG.crossed_module_samples,
                                  exact=True, denominator=CHECK_CONFIG.denominator):
    return [(random_h1(rng, n, exact, denominator), random_h2(rng, n, exact, denominator),
             random_h2(rng, n, exact, denominator)) for _ in range(count)]


def random_coherence_samples(rng, n=CHECK_CONFIG.n, count=CHECK_CONFIG.coherence_samples,
                             exact=True, denominator=CHECK_CONFIG.denominator):
    """
        Samples (t₁, t₂, t₃, t₄, eta₁, eta₂) for check_coherence.
    """
    samples = []
    for _ in range(count):
        vectors = tuple(random_multivector(rng, n, 1, exact, denominator) for _ in range(4))
        bivectors = tuple(random_multivector(rng, n, 2, exact, denominator) for _ in range(2))
        samples.append(vectors + bivectors)
    return samples


def check_crossed_module(samples, conj_map=conj, boundary_map=boundary, tol=CHECK_CONFIG.float_tolerance):
    """
        Verify the two crossed-module laws on every sample (g, h, h'):

            boundary(c_g(h)) = g boundary(h) g⁻¹
            c_boundary(h)(h') = h h' h⁻¹

        Parameters
        -------------------
        samples (iterable):
            Tuples (H1Element, H2Element, H2Element).
        conj_map, boundary_map (callable):
            The action and boundary under test. Defaults are the library maps;
            pass corrupted maps for negative controls.
        tol (float):
            Tolerance used only when the samples hold float coefficients.

        Returns
        -------------------
        report (CheckReport)
    """
    report = CheckReport("crossed-module")
    for g, h, h_prime in samples:
        report.count()

        lhs = boundary_map(conj_map(g, h))
        rhs = h1_mul(h1_mul(g, boundary_map(h)), h1_inv(g))
        if not lhs.isclose(rhs, tol):
            report.fail({"g": g, "h": h, "h_prime": h_prime}, lhs.difference(rhs), condition="equivariance")

        lhs = conj_map(boundary_map(h), h_prime)
        rhs = h2_mul(h2_mul(h, h_prime), h2_inv(h))
        if not lhs.isclose(rhs, tol):
            report.fail({"g": g, "h": h, "h_prime": h_prime}, lhs.difference(rhs), condition="peiffer")

    logger.debug("crossed-module check over %d samples, %d failures", report.samples, len(report.failures))
    return report


def check_coherence(samples, associator=g_associator, phi_map=phi, quotient=None, tol=CHECK_CONFIG.float_tolerance):
    """
        Verify the coherence laws of G and of the morphisms iota, pi, Phi on
        samples (t₁, t₂, t₃, t₄, eta₁, eta₂):

            omega_iota_cocycle: c_(t₁,0)(ω_ι(t₂,t₃)) - ω_ι(t₁+t₂,t₃) + ω_ι(t₁,t₂+t₃)
                                - ω_ι(t₁,t₂) - ι(a(t₁,t₂,t₃)) = 0
            pentagon:           a(t₂,t₃,t₄) - a(t₁+t₂,t₃,t₄) + a(t₁,t₂+t₃,t₄)
                                - a(t₁,t₂,t₃+t₄) + a(t₁,t₂,t₃) = 0
            pi_iota:            π∘ι is the identity on arrows and bigons
            phi_arrows, phi_bigons, phi_multiplication:
                                ι∘π agrees with the functor induced by Φ
            phi_associator:     the associator recovered from Φ equals ι(a)

        The Rⁿ-action on Λ³ in the pentagon is trivial. With quotient='integral'
        every ξ comparison is made modulo Λ³Zⁿ.
    """
    _check_quotient(quotient)
    report = CheckReport("coherence", header={"phi": PHI_ORIENTATION, "associator_sign": ASSOCIATOR_SIGN,
                                              "lambda3_action": "trivial", "quotient": quotient})

    for sample in samples:
        t_1, t_2, t_3, t_4, eta_1, eta_2 = sample
        inputs = {"t": [t_1, t_2, t_3, t_4], "eta": [eta_1, eta_2]}
        report.count()

        def assoc(u, v, w):
            return associator(u, v, w, quotient=quotient)

        # (i) cocycle condition of omega_iota, with defect given by the associator
        residual = h2_mul(conj(iota(t_1), omega_iota(t_2, t_3)), h2_inv(omega_iota(t_1 + t_2, t_3)))
        residual = h2_mul(residual, omega_iota(t_1, t_2 + t_3))
        residual = h2_mul(residual, h2_inv(omega_iota(t_1, t_2)))
        residual = h2_mul(residual, h2_inv(iota_bigon(assoc(t_1, t_2, t_3))))
        if not residual.isclose(H2Element.unit(t_1.n, t_1.exact), tol, quotient):
            report.fail(inputs, residual, condition="omega_iota_cocycle")

        # (ii) pentagon
        xi = (assoc(t_2, t_3, t_4).xi - assoc(t_1 + t_2, t_3, t_4).xi + assoc(t_1, t_2 + t_3, t_4).xi
              - assoc(t_1, t_2, t_3 + t_4).xi + assoc(t_1, t_2, t_3).xi)
        if not _xi_equal(xi, _zero(t_1.n, 3, t_1.exact), quotient, tol):
            report.fail(inputs, xi, condition="pentagon")

        # (iii) iota and pi are inverse on arrows and bigons
        bigon = assoc(t_1, t_2, t_3)
        if pi(iota(t_1)) != t_1 or not pi_bigon(iota_bigon(bigon), iota(bigon.t), quotient).isclose(bigon, tol):
            report.fail(inputs, {"arrow": pi(iota(t_1)) - t_1}, condition="pi_iota")

        a = H1Element(t_1, eta_1)
        b = H1Element(t_2, eta_2)

        # Phi(g) is a bigon g => iota(pi(g))
        target = h1_mul(boundary(phi_map(a)), a)
        if not target.isclose(iota(pi(a)), tol):
            report.fail(inputs, target.difference(iota(pi(a))), condition="phi_arrows")

        # Ad Phi sends a bigon h: g => ∂h g to iota(pi(h))
        h = H2Element(eta_2, wedge(wedge(t_2, t_3), t_4))
        conjugated = h2_mul(h2_mul(phi_map(h1_mul(boundary(h), a)), h), h2_inv(phi_map(a)))
        if not conjugated.isclose(iota_bigon(pi_bigon(h, a)), tol, quotient):
            report.fail(inputs, conjugated.difference(iota_bigon(pi_bigon(h, a))), condition="phi_bigons")

        direct = omega_iota_pi(a, b)
        from_phi = omega_iota_pi_from_phi(a, b, phi_map=phi_map)
        if not direct.isclose(from_phi, tol, quotient):
            report.fail(inputs, direct.difference(from_phi), condition="phi_multiplication")

        recovered = associator_from_phi(t_1, t_2, t_3, phi_map=phi_map)
        expected = iota_bigon(assoc(t_1, t_2, t_3))
        if not recovered.isclose(expected, tol, quotient):
            report.fail(inputs, recovered.difference(expected), condition="phi_associator")

    logger.debug("coherence check over %d samples, %d failures", report.samples, len(report.failures))
    return report
