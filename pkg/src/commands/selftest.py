import logging
import os
import time
from fractions import Fraction

import numpy as np
import pandas as pd
from tqdm import tqdm

from config.load_configs import CHECK_CONFIG, FELL_BUNDLE_CONFIG, SELFTEST_CONFIG
from src.brauer.classification import (DD_SIGN, SUBTORUS_SIGN, action_from_obstruction, brauer_mul, classify,
                                       dd_class, random_brauer_class, restrict_subtorus, subtori,
                                       validate_fiber_action)
from src.brauer.induced_rep import induced_rep
from src.brauer.strict_action import check_strict_action, random_strict_samples, weyl_strict_action
from src.brauer.tduality import example_families, refine_loop, t_duality_decision
from src.cohomology import (AntisymmetricPairing, ObstructionFunction, Tricharacter, box_triples,
                            coboundary1, coboundary3_residual, cocycle_defects, commutator_pairing,
                            random_pairing, random_phase_table, standard_cocycle)
from src.exterior import (DualVector, MultiVector, det_triple, random_lattice_vector, random_multivector, wedge,
                          wedge3_coords)
from src.fellbundle.suites import FELL_SUITES, run_fell_suite
from src.reports import CheckReport
from src.serialisation import create_unique_directory_file, save_config_used
from src.twogroup import (check_coherence, check_crossed_module, random_coherence_samples,
                          random_crossed_module_samples)

logger = logging.getLogger(__name__)

SELFTEST_SUITES = ("exterior", "twogroup", "cohomology", "brauer", "fellbundle")
CONFIG_NAMES = ("check_config", "fell_bundle_config", "cli_config", "selftest_config")


def exterior_suite(rng, stress=False, count=200):
    report = CheckReport("exterior")
    n = CHECK_CONFIG.n
    for _ in range(count * (5 if stress else 1)):
        a, b, c = (random_multivector(rng, n, 1) for _ in range(3))
        eta = random_multivector(rng, n, 2)
        inputs = {"a": a, "b": b, "c": c}
        report.count()
        if wedge(a, b) != -wedge(b, a):
            report.fail(inputs, wedge(a, b) + wedge(b, a), "antisymmetry")
        if wedge(a, eta) != wedge(eta, a):
            report.fail(inputs, wedge(a, eta) - wedge(eta, a), "antisymmetry")
        if wedge(wedge(a, b), c) != wedge(a, wedge(b, c)):
            report.fail(inputs, wedge(wedge(a, b), c) - wedge(a, wedge(b, c)), "associativity")
        if wedge(a + b, c) != wedge(a, c) + wedge(b, c):
            report.fail(inputs, wedge(a + b, c) - wedge(a, c) - wedge(b, c), "bilinearity")
        oracle = MultiVector(n, 3, list(wedge3_coords(a.coeffs, b.coeffs, c.coeffs)))
        if det_triple(a, b, c) != oracle:
            report.fail(inputs, det_triple(a, b, c) - oracle, "coordinates")
        k, l = random_lattice_vector(rng, n, 1), random_lattice_vector(rng, n, 2)
        if not wedge(k, l).is_integral():
            report.fail({"k": k, "l": l}, wedge(k, l), "lattice_closure")
    return [report]


def twogroup_suite(rng, stress=False):
    scale = 5 if stress else 1
    crossed = random_crossed_module_samples(rng, count=CHECK_CONFIG.crossed_module_samples * scale)
    coherence = random_coherence_samples(rng, count=CHECK_CONFIG.coherence_samples * scale)
    quotient = check_coherence(coherence, quotient='integral')
    quotient.law = "coherence-integral-quotient"
    return [check_crossed_module(crossed), check_coherence(coherence), quotient]


def cohomology_suite(rng, stress=False, count=20):
    report = CheckReport("cohomology")
    n = 3
    k, l, m, _ = box_triples(n, CHECK_CONFIG.validation_box, rng=rng)
    for _ in range(count * (5 if stress else 1)):
        theta = random_pairing(rng, n)
        omega = standard_cocycle(theta)
        inputs = {"theta": theta}
        report.count()
        if not cocycle_defects(omega, Tricharacter.trivial(n), k, l, m).all_zero():
            report.fail(inputs, "non-zero defect", "standard_cocycle")
        if commutator_pairing(omega) != theta:
            report.fail(inputs, commutator_pairing(omega) - theta, "round_trip")
        V = random_phase_table(rng, n, CHECK_CONFIG.table_box)
        twisted = omega * coboundary1(V, CHECK_CONFIG.table_box)
        if commutator_pairing(twisted) != theta:
            report.fail(inputs, commutator_pairing(twisted) - theta, "coboundary_invariance")
        other = random_pairing(rng, n)
        if commutator_pairing(omega * standard_cocycle(other)) != theta + other:
            report.fail(inputs, commutator_pairing(omega * standard_cocycle(other)) - theta - other, "additivity")
        chi = ObstructionFunction({"p": random_lattice_vector(rng, n, 3, dual=True)})
        vectors = [random_multivector(rng, n, 1) for _ in range(4)]
        if coboundary3_residual(chi, vectors, "p") != 0:
            report.fail(inputs, coboundary3_residual(chi, vectors, "p"), "obstruction_cocycle")
    return [report]


def _classification_report(rng, n=4, pairs=100):
    report = CheckReport("classification", {"n": n, "box": CHECK_CONFIG.validation_box})
    max_triples = CHECK_CONFIG.max_triples // 10
    for index in range(pairs):
        x, y = random_brauer_class(rng, n), random_brauer_class(rng, n)
        a, b = action_from_obstruction(x.m, x.theta), action_from_obstruction(y.m, y.theta)
        inputs = {"x": x, "y": y}
        report.count()
        if classify(a) != x:
            report.fail(inputs, classify(a), "round_trip")
        if classify(a * b) != brauer_mul(x, y):
            report.fail(inputs, classify(a * b), "homomorphism")
        if index < 5:
            validation = validate_fiber_action(a * b, max_triples=max_triples)
            if not validation.passed:
                report.fail(inputs, validation.header["violations"], "validation")
            V = random_phase_table(rng, n, CHECK_CONFIG.table_box)
            if classify(a.twisted(V, CHECK_CONFIG.table_box)) != x:
                report.fail(inputs, "twisted action classifies differently", "equivalence")
        for indices in subtori(n):
            restricted = dd_class(restrict_subtorus(x, indices)).coeffs[0]
            if restricted != SUBTORUS_SIGN * dd_class(x).coefficient(indices):
                report.fail({"x": x, "subtorus": list(indices)}, restricted, "subtorus")

    generator = classify(action_from_obstruction(DualVector(3, 3, [1], integral=True), AntisymmetricPairing.zero(3)))
    report.count()
    if [int(value) for value in dd_class(generator).coeffs] != [DD_SIGN]:
        report.fail({"m": [1]}, dd_class(generator), "generator")
    return report


def brauer_suite(rng, stress=False):
    reports = [_classification_report(rng, pairs=100 * (5 if stress else 1))]

    for N in (3, 4, 5):
        action = action_from_obstruction(DualVector.zero(2, 3),
                                         AntisymmetricPairing.from_upper(2, [Fraction(1, N)]))
        representation = induced_rep(action, N, rng=rng)
        representation.report.law = f"induced-rep-n2-N{N}"
        reports.append(representation.report)
    action = action_from_obstruction(DualVector(3, 3, [1], integral=True), AntisymmetricPairing.zero(3))
    representation = induced_rep(action, 4, rng=rng)
    representation.report.law = "induced-rep-n3-N4"
    reports.append(representation.report)

    data = weyl_strict_action(4)
    reports.append(check_strict_action(data, random_strict_samples(data, 50, rng)))

    report = CheckReport("t-duality")
    for verdict, family in example_families().items():
        report.count()
        decision = t_duality_decision(family)
        if decision.verdict != verdict:
            report.fail({"expected": verdict}, decision.verdict, "verdict")
        for u, v in family.edges[:1]:
            refined = refine_loop(family, u, v, f"{u}{v}")
            if t_duality_decision(refined).verdict != verdict:
                report.fail({"expected": verdict, "refined": [u, v]}, t_duality_decision(refined).verdict,
                            "refinement")
    reports.append(report)
    return reports


def fellbundle_suite(rng, stress=False):
    """
        All four grid suites at the desk scale; stress raises N to the stress
        period with fewer samples.
    """
    N = FELL_BUNDLE_CONFIG.stress_N if stress else FELL_BUNDLE_CONFIG.N
    pairs = max(FELL_BUNDLE_CONFIG.pairs // 10, 1) if stress else FELL_BUNDLE_CONFIG.pairs
    seed = int(rng.integers(2 ** 31))
    reports = []
    for name in FELL_SUITES:
        report, _, _ = run_fell_suite(name, N=N, seed=seed, pairs=pairs)
        report.law = f"fell-{name}"
        reports.append(report)
    return reports


SUITES = {"exterior": exterior_suite, "twogroup": twogroup_suite, "cohomology": cohomology_suite,
          "brauer": brauer_suite, "fellbundle": fellbundle_suite}


def run_selftest(suites=None, stress=False, save_stats=None, seed=CHECK_CONFIG.seed, progress=True):
    """
        Run the invariant suites of every module.

        Parameters
        -------------------
        suites (list):
            Suite names; default from selftest_config.yaml.
        stress (bool):
            Larger sample counts and the Fell-bundle stress period.
        save_stats (bool):
            Write stats.csv (one row per report) and the configs used into a new
            directory under stats_path. Default from selftest_config.yaml.
        seed (int)
        progress (bool):
            Show a tqdm progress bar.

        Returns
        -------------------
        summary (dict):
            {"passed", "suites": {name: {"passed", "seconds", "reports"}}} plus
            "stats_directory" when statistics were saved.
    """
    suites = list(SELFTEST_CONFIG.suites) if suites is None else list(suites)
    unknown = [name for name in suites if name not in SUITES]
    if unknown:
        raise ValueError(f"Unknown self-test suites {unknown}; choose from {list(SELFTEST_SUITES)}.")
    save_stats = SELFTEST_CONFIG.save_stats if save_stats is None else save_stats

    results = {}
    rows = []
    for name in tqdm(suites, desc="selftest", disable=not progress):
        start = time.perf_counter()
        reports = SUITES[name](np.random.default_rng(seed), stress)
        seconds = time.perf_counter() - start
        results[name] = {"passed": all(report.passed for report in reports), "seconds": round(seconds, 3),
                         "reports": [report.to_json() for report in reports]}
        for report in reports:
            rows.append({"suite": name, "law": report.law, "samples": report.samples,
                         "failures": len(report.failures), "passed": report.passed, "suite_seconds": seconds})
        logger.debug("suite %s finished in %.3f s", name, seconds)

    summary = {"passed": all(result["passed"] for result in results.values()), "stress": stress, "suites": results}
    if save_stats:
        directory = create_unique_directory_file(os.path.join(SELFTEST_CONFIG.stats_path, "selftest"))
        os.makedirs(directory)
        pd.DataFrame(rows).to_csv(os.path.join(directory, "stats.csv"), index=False)
        for config_name in CONFIG_NAMES:
            save_config_used(config_name, directory)
        summary["stats_directory"] = directory
    return summary
