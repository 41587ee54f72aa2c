import logging
from fractions import Fraction

import numpy as np

from config.load_configs import CHECK_CONFIG
from src.brauer.classification import BrauerClass
from src.cohomology import AntisymmetricPairing, Phase
from src.exterior import DualVector

logger = logging.getLogger(__name__)

CLASSICAL = "Classical"
NONCOMMUTATIVE = "NoncommutativeTorusBundle"
NONASSOCIATIVE = "NonassociativeOnly"

DEFAULT_EPSILON = Fraction(2, 5)


class FamilyOverBase:

    def __init__(self, vertices, edges, classes: dict, loops=(), epsilon=DEFAULT_EPSILON):
        """
            Brauer classes over a finite graph modelling the orbit space X.

            Attributes
            -------------------
            vertices (list):
                Vertex names (strings).
            edges (list):
                Undirected edges [u, v].
            classes (dict):
                Vertex -> BrauerClass; all of one dimension n.
            loops (list):
                Closed vertex sequences probing H¹(X, Z^ℓ). The closing edge back
                to the first vertex is implied (repeating it is allowed).
            epsilon (Fraction or float):
                Continuity bound < 1/2 on the phase step of each Θ entry along an
                edge.
        """
        self.vertices = [str(vertex) for vertex in vertices]
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError(f"Duplicate vertices in {self.vertices}.")
        known = set(self.vertices)
        self.edges = []
        for edge in edges:
            if len(edge) != 2:
                raise ValueError(f"Edges must join two vertices, got {edge}.")
            u, v = str(edge[0]), str(edge[1])
            for vertex in (u, v):
                if vertex not in known:
                    raise KeyError(f"Edge {edge} uses unknown vertex {vertex!r}.")
            self.edges.append((u, v))
        self.classes = {}
        for vertex, brauer_class in classes.items():
            if str(vertex) not in known:
                raise KeyError(f"Class given for unknown vertex {vertex!r}.")
            self.classes[str(vertex)] = brauer_class
        missing = known - set(self.classes)
        if missing:
            raise KeyError(f"No Brauer class for vertices {sorted(missing)}.")
        dimensions = {brauer_class.n for brauer_class in self.classes.values()}
        if len(dimensions) != 1:
            raise ValueError(f"All classes must share one dimension, got {sorted(dimensions)}.")
        self.n = dimensions.pop()

        self.epsilon = epsilon
        if not 0 < epsilon < Fraction(1, 2):
            raise ValueError(f"The continuity bound must lie in (0, 1/2), got {epsilon}.")
        self.loops = [self._closed([str(vertex) for vertex in loop]) for loop in loops]
        self._check_m_locally_constant()

    def _closed(self, loop):
        if not loop:
            raise ValueError("Loops must contain at least one vertex.")
        for vertex in loop:
            if vertex not in self.classes:
                raise KeyError(f"Loop {loop} uses unknown vertex {vertex!r}.")
        return loop if len(loop) > 1 and loop[0] == loop[-1] else loop + [loop[0]]

    def neighbours(self, vertex):
        return [v for u, v in self.edges if u == vertex] + [u for u, v in self.edges if v == vertex]

    def has_edge(self, u, v):
        return (u, v) in self.edges or (v, u) in self.edges

    def _check_m_locally_constant(self):
        for u, v in self.edges:
            if self.classes[u].m != self.classes[v].m:
                raise ValueError(f"m jumps along edge ({u}, {v}): {self.classes[u]!r} vs {self.classes[v]!r}; "
                                 "m must be constant on connected components.")

    def to_json(self):
        return {"vertices": self.vertices, "edges": [list(edge) for edge in self.edges],
                "loops": [loop for loop in self.loops], "classes": {vertex: self.classes[vertex] for vertex in self.vertices},
                "epsilon": self.epsilon}

    @classmethod
    def from_json(cls, payload, exact=None):
        try:
            vertices = payload["vertices"]
            classes = {vertex: BrauerClass.from_json(value, exact) for vertex, value in payload["classes"].items()}
            edges = payload.get("edges", [])
            loops = payload.get("loops", [])
            epsilon = payload.get("epsilon", DEFAULT_EPSILON)
        except (TypeError, AttributeError) as error:
            raise ValueError(f"Malformed family payload: {error}.") from error
        if isinstance(epsilon, dict):
            epsilon = Fraction(int(epsilon["num"]), int(epsilon["den"]))
        elif exact and isinstance(epsilon, float):
            raise ValueError(f"Exact mode needs epsilon as an integer or {{\"num\", \"den\"}} object, got {epsilon!r}.")
        return cls(vertices, edges, classes, loops, epsilon)


def phase_step(theta_u: AntisymmetricPairing, theta_v: AntisymmetricPairing, epsilon=DEFAULT_EPSILON):
    """
        Real lifts in (-1/2, 1/2) of the steps of the ℓ upper Θ entries from u to v.
    """
    steps = []
    for before, after in zip(theta_u.upper(), theta_v.upper()):
        step = (after - before).lift()
        if abs(step) == Fraction(1, 2) or (not isinstance(step, Fraction) and abs(abs(step) - 0.5) <= CHECK_CONFIG.float_tolerance):
            raise ValueError(f"Ambiguous phase step of 1/2 from {before} to {after}.")
        if abs(step) >= epsilon:
            raise ValueError(f"Phase step {step} from {before} to {after} exceeds the continuity bound {epsilon}.")
        steps.append(step)
    return steps


def mackey_winding(f: FamilyOverBase, loop):
    """
        For each of the ℓ entries Θ_ij (i<j), the sum of the lifted phase steps
        around the loop: the pairing of [M(A)] in H¹(X, Z^ℓ) with the loop.
    """
    loop = f._closed([str(vertex) for vertex in loop])
    ell = len(f.classes[loop[0]].theta.upper())
    totals = [Fraction(0)] * ell
    for u, v in zip(loop[:-1], loop[1:]):
        if u == v:
            continue
        if not f.has_edge(u, v):
            raise ValueError(f"Loop step ({u}, {v}) is not an edge of the base graph.")
        steps = phase_step(f.classes[u].theta, f.classes[v].theta, f.epsilon)
        totals = [total + step for total, step in zip(totals, steps)]

    windings = []
    for total in totals:
        if isinstance(total, Fraction):
            if total.denominator != 1:
                raise ArithmeticError(f"Winding {total} around {loop} is not an integer.")
            windings.append(int(total))
        else:
            rounded = int(np.round(total))
            if abs(total - rounded) > CHECK_CONFIG.float_tolerance * len(loop):
                raise ArithmeticError(f"Winding {total} around {loop} is not an integer.")
            windings.append(rounded)
    return windings


class TDualityDecision:

    def __init__(self, verdict, evidence):
        """
            Outcome of the T-duality decision: one of Classical,
            NoncommutativeTorusBundle or NonassociativeOnly, and the evidence
            (vertices with m ≠ 0, loops with non-zero Mackey winding).
        """
        self.verdict = verdict
        self.evidence = evidence

    def to_json(self):
        return {"verdict": self.verdict, "evidence": self.evidence}

    def __repr__(self):
        return f"TDualityDecision({self.verdict})"


def t_duality_decision(f: FamilyOverBase) -> TDualityDecision:
    """
        NonassociativeOnly iff the lifting obstruction m is non-zero somewhere
        (the dual Fell bundle is non-associative); otherwise
        NoncommutativeTorusBundle iff some loop has non-zero Mackey winding;
        otherwise Classical.
    """
    nonzero_m = {vertex: [int(value) for value in f.classes[vertex].m.coeffs]
                 for vertex in f.vertices if not f.classes[vertex].m.is_zero()}
    windings = [{"loop": loop, "winding": mackey_winding(f, loop)} for loop in f.loops]

    if nonzero_m:
        verdict = NONASSOCIATIVE
    elif any(any(entry["winding"]) for entry in windings):
        verdict = NONCOMMUTATIVE
    else:
        verdict = CLASSICAL

    evidence = {"nonzero_m": nonzero_m, "loops": [entry for entry in windings if any(entry["winding"])]}
    logger.debug("T-duality decision %s over %d vertices and %d loops", verdict, len(f.vertices), len(f.loops))
    return TDualityDecision(verdict, evidence)


def refine_loop(f: FamilyOverBase, u, v, new_vertex) -> FamilyOverBase:
    """
        Subdivide the edge (u, v) by a new vertex whose Θ is the midpoint of the
        lifted step from u to v (and whose m is that of u). Loops through the edge
        are rerouted through the new vertex.
    """
    u, v, new_vertex = str(u), str(v), str(new_vertex)
    if not f.has_edge(u, v):
        raise ValueError(f"({u}, {v}) is not an edge.")
    if new_vertex in f.classes:
        raise ValueError(f"Vertex {new_vertex!r} already exists.")

    theta_u = f.classes[u].theta
    steps = phase_step(theta_u, f.classes[v].theta, f.epsilon)
    midpoint = [phase + Phase(step / 2, theta_u.exact) for phase, step in zip(theta_u.upper(), steps)]
    theta = AntisymmetricPairing.from_upper(f.n, midpoint, exact=theta_u.exact)
    classes = dict(f.classes)
    classes[new_vertex] = BrauerClass(f.classes[u].m, theta)

    edges = [edge for edge in f.edges if edge not in ((u, v), (v, u))] + [(u, new_vertex), (new_vertex, v)]

    loops = []
    for loop in f.loops:
        refined = [loop[0]]
        for a, b in zip(loop[:-1], loop[1:]):
            if {a, b} == {u, v}:
                refined.append(new_vertex)
            refined.append(b)
        loops.append(refined)

    return FamilyOverBase(f.vertices + [new_vertex], edges, classes, loops, f.epsilon)


def example_families():
    """
        One family per verdict: trivial classes over a square, the square with
        Θ₁₂ = 0, 1/4, 1/2, 3/4 (Mackey winding one) and a single orbit with m = (1).

        Returns
        -------------------
        families (dict):
            Expected verdict -> FamilyOverBase.
    """
    square = ["a", "b", "c", "d"]
    edges = [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]
    trivial = FamilyOverBase(square, edges, {vertex: BrauerClass.zero(2) for vertex in square}, [square])
    winding = FamilyOverBase(square, edges,
                             {vertex: BrauerClass(DualVector.zero(2, 3), AntisymmetricPairing.from_upper(2, [Fraction(step, 4)]))
                              for step, vertex in enumerate(square)}, [square])
    obstructed = FamilyOverBase(["p"], [], {"p": BrauerClass(DualVector(3, 3, [1], integral=True),
                                                             AntisymmetricPairing.zero(3))})
    return {CLASSICAL: trivial, NONCOMMUTATIVE: winding, NONASSOCIATIVE: obstructed}
