import logging

import numpy as np

from config.load_configs import CHECK_CONFIG, CLI_CONFIG, FELL_BUNDLE_CONFIG
from src.brauer.classification import (FiberAction, assemble_obstruction, classify, dd_class, mackey,
                                       sign_conventions, validate_fiber_action)
from src.brauer.induced_rep import induced_rep
from src.brauer.strict_action import StrictActionData, check_strict_action, random_strict_samples
from src.brauer.tduality import FamilyOverBase, t_duality_decision
from src.commands.selftest import run_selftest
from src.exterior import MultiVector
from src.fellbundle.associator import ASSOCIATOR_ORIENTATION
from src.fellbundle.sections import save_tables
from src.fellbundle.suites import run_fell_suite
from src.twogroup import (GBigon, H1Element, H2Element, check_coherence, check_crossed_module, g_associator,
                          random_coherence_samples, random_crossed_module_samples)

logger = logging.getLogger(__name__)

CHECK_KINDS = ("crossed-module", "coherence", "fiber-action", "strict-action", "induced-rep")

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_INPUT_ERROR = 2


def _exact(mode):
    if mode not in ('exact', 'float'):
        raise ValueError(f"Mode must be 'exact' or 'float', got {mode!r}.")
    return mode == 'exact'


def _rng(payload, seed):
    return np.random.default_rng(payload.get("seed", seed) if isinstance(payload, dict) else seed)


def _require_dict(payload, what):
    if not isinstance(payload, dict):
        raise ValueError(f"{what} input must be a JSON object, got {type(payload).__name__}.")


def _crossed_module_samples(payload, exact, seed):
    if "random" in payload:
        options = payload["random"]
        return random_crossed_module_samples(_rng(options, seed), options.get("n", CHECK_CONFIG.n),
                                             options.get("count", CHECK_CONFIG.crossed_module_samples), exact)
    return [(H1Element.from_json(sample["g"], exact), H2Element.from_json(sample["h"], exact),
             H2Element.from_json(sample["h_prime"], exact)) for sample in payload["samples"]]


def _coherence_samples(payload, exact, seed):
    if "random" in payload:
        options = payload["random"]
        return random_coherence_samples(_rng(options, seed), options.get("n", CHECK_CONFIG.n),
                                        options.get("count", CHECK_CONFIG.coherence_samples), exact)
    samples = []
    for sample in payload["samples"]:
        vectors = [MultiVector.from_json(vector, exact) for vector in sample["t"]]
        bivectors = [MultiVector.from_json(bivector, exact) for bivector in sample["eta"]]
        if len(vectors) != 4 or len(bivectors) != 2:
            raise ValueError(f"Coherence samples need 4 vectors t and 2 bivectors eta, got {len(vectors)} and "
                             f"{len(bivectors)}.")
        samples.append(tuple(vectors + bivectors))
    return samples


def scaled_associator(sign):
    """
        The associator with ξ multiplied by sign·(-1); sign = -1 is the library
        associator, +1 a corrupted one.
    """
    if sign == -1:
        return g_associator

    def associator(t_1, t_2, t_3, quotient=None):
        bigon = g_associator(t_1, t_2, t_3, quotient)
        return GBigon(bigon.t, bigon.xi * (-sign), quotient)

    return associator


def cmd_check(kind, payload, mode=CLI_CONFIG.mode, tol=CLI_CONFIG.tol, seed=CHECK_CONFIG.seed):
    """
        Run one of the law checkers on a JSON payload.

        Parameters
        -------------------
        kind (str):
            crossed-module, coherence, fiber-action, strict-action or induced-rep.
        payload (dict):
            crossed-module: {"samples": [{"g", "h", "h_prime"}]} or {"random": {"n", "count", "seed"}}
            coherence:      {"samples": [{"t": [4 vectors], "eta": [2 bivectors]}]} or {"random": ...},
                            optional "associator_sign" (default -1) and "quotient" (null or "integral")
            fiber-action:   {"omega", "U"} plus optional "box" and "max_triples"
            strict-action:  {"weyl": N} or generator matrices, optional "samples" (count)
            induced-rep:    {"action": {"omega", "U"}, "N", "samples"}
        mode (str):
            exact or float.
        tol (float):
            Float mode tolerance.

        Returns
        -------------------
        payload (dict), exit code (int):
            The report, and 0 when it passed, 1 otherwise.
    """
    if kind not in CHECK_KINDS:
        raise ValueError(f"Unknown check kind {kind!r}; choose from {list(CHECK_KINDS)}.")
    _require_dict(payload, kind)
    exact = _exact(mode)

    try:
        if kind == "crossed-module":
            report = check_crossed_module(_crossed_module_samples(payload, exact, seed), tol=tol)
        elif kind == "coherence":
            report = check_coherence(_coherence_samples(payload, exact, seed),
                                     associator=scaled_associator(payload.get("associator_sign", -1)),
                                     quotient=payload.get("quotient"), tol=tol)
        elif kind == "fiber-action":
            report = validate_fiber_action(FiberAction.from_json(payload, exact),
                                           box=payload.get("box", CHECK_CONFIG.validation_box),
                                           max_triples=payload.get("max_triples", CHECK_CONFIG.max_triples),
                                           seed=seed, tol=tol)
        elif kind == "strict-action":
            data = StrictActionData.from_json(payload)
            samples = random_strict_samples(data, payload.get("samples", 100), _rng(payload, seed))
            report = check_strict_action(data, samples, tol=payload.get("tolerance"))
        else:
            representation = induced_rep(FiberAction.from_json(payload["action"], True), int(payload["N"]),
                                         samples=payload.get("samples", CHECK_CONFIG.coherence_samples // 10),
                                         rng=_rng(payload, seed), mode=mode)
            report = representation.report
            report.header["commutation_phases"] = representation.commutation_phases()
    except (KeyError, TypeError) as error:
        raise ValueError(f"Malformed {kind} input: missing or invalid field {error}.") from error

    logger.debug("check %s: %d samples, passed=%s", kind, report.samples, report.passed)
    return report.to_json(), EXIT_OK if report.passed else EXIT_FAILURES


def cmd_classify(payload, mode=CLI_CONFIG.mode, tol=CLI_CONFIG.tol, seed=CHECK_CONFIG.seed):
    """
        Validate and classify a fibre action.

        Returns
        -------------------
        payload (dict):
            {"n", "m", "theta", "dd", "mackey", "conventions"}
        exit code (int)
    """
    _require_dict(payload, "classify")
    action = FiberAction.from_json(payload, _exact(mode))
    report = validate_fiber_action(action, seed=seed, tol=tol)
    if not report.passed:
        conditions = sorted({failure["condition"] for failure in report.failures})
        raise ValueError(f"Input is not a valid fibre action; failed conditions: {conditions}.")
    brauer_class = classify(action)
    result = brauer_class.to_json()
    result.update({"dd": [int(value) for value in dd_class(brauer_class).coeffs],
                   "mackey": mackey(brauer_class).to_json(), "conventions": sign_conventions()})
    return result, EXIT_OK


def cmd_obstruction(payload):
    """
        Assemble the lifting obstruction from per-point DD values of 3-subtorus
        restrictions.

        Parameters
        -------------------
        payload (dict):
            {"n": int, "subtori": [[i, j, k], ...] (optional), "dd": {point: [ints]}}

        Returns
        -------------------
        payload (dict):
            {"obstruction", "liftable", "pointwise", "conventions"}; liftable iff
            the obstruction vanishes at every point.
        exit code (int)
    """
    _require_dict(payload, "obstruction")
    try:
        chi = assemble_obstruction(int(payload["n"]), payload["dd"], payload.get("subtori"))
    except (KeyError, TypeError, AttributeError) as error:
        raise ValueError(f"Malformed obstruction input: {error}.") from error
    result = {"obstruction": chi.to_json(), "liftable": chi.vanishes(),
              "pointwise": {point: chi.vanishes_at(point) for point in chi.points}, "conventions": sign_conventions()}
    return result, EXIT_OK


def cmd_tdual(payload, mode=CLI_CONFIG.mode):
    _require_dict(payload, "tdual")
    family = FamilyOverBase.from_json(payload, _exact(mode))
    result = t_duality_decision(family).to_json()
    result["conventions"] = sign_conventions()
    return result, EXIT_OK


def cmd_fell_demo(n=FELL_BUNDLE_CONFIG.n, N=FELL_BUNDLE_CONFIG.N, m=FELL_BUNDLE_CONFIG.m, suite="axioms",
                  seed=FELL_BUNDLE_CONFIG.seed, mode=CLI_CONFIG.mode, tol=FELL_BUNDLE_CONFIG.tolerance, save=None):
    """
        Run a Fell-bundle suite and optionally save the first sample's tables to a
        zarr group.
    """
    report, tables, chi = run_fell_suite(suite, n, N, m, exact=_exact(mode), seed=seed, tol=tol)
    result = report.to_json()
    if save is not None and tables:
        result["saved"] = save_tables(save, tables, chi)
    result["orientation"] = ASSOCIATOR_ORIENTATION
    return result, EXIT_OK


def cmd_selftest(suites=None, stress=False, save_stats=None, seed=CHECK_CONFIG.seed, progress=True):
    summary = run_selftest(suites, stress=stress, save_stats=save_stats, seed=seed, progress=progress)
    return summary, EXIT_OK if summary["passed"] else EXIT_FAILURES
