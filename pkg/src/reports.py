import json

from src.serialisation import NumpyEncoder, encode_value


class CheckReport:

    def __init__(self, law: str, header: dict = None):
        """
            Outcome of running a law checker over a collection of samples. Checkers
            never raise on a violated law, they record it here.

            Attributes
            -------------------
            law (str):
                Name of the law or group of laws being checked.
            samples (int):
                Number of samples evaluated.
            failures (list):
                One dict per failing sample: {"inputs", "residual"} plus an optional
                "condition" naming the sub-law.
            header (dict):
                Convention metadata (sign choices, orientations, box sizes).
            residuals (dict):
                Largest absolute residual seen per condition (float mode checks).
        """
        self.law = law
        self.samples = 0
        self.failures = []
        self.header = dict(header) if header else {}
        self.residuals = {}

    @property
    def passed(self):
        return len(self.failures) == 0

    def count(self, number=1):
        self.samples += number

    def fail(self, inputs, residual, condition=None):
        failure = {"inputs": encode_value(inputs), "residual": encode_value(residual)}
        if condition is not None:
            failure["condition"] = condition
        self.failures.append(failure)

    def record_residual(self, condition, value):
        value = float(value)
        self.residuals[condition] = max(self.residuals.get(condition, 0.0), value)

    def merge(self, other, prefix=None):
        """
            Fold another report's samples, failures and residuals into this one.
        """
        self.samples += other.samples
        for failure in other.failures:
            failure = dict(failure)
            if prefix is not None:
                failure["condition"] = f"{prefix}:{failure.get('condition', other.law)}"
            self.failures.append(failure)
        for condition, value in other.residuals.items():
            key = condition if prefix is None else f"{prefix}:{condition}"
            self.record_residual(key, value)
        return self

    def to_json(self):
        payload = {
            "law": self.law,
            "samples": self.samples,
            "failures": sorted(self.failures, key=lambda failure: json.dumps(failure, sort_keys=True, cls=NumpyEncoder)),
            "passed": self.passed,
        }
        if self.header:
            payload["header"] = encode_value(self.header)
        if self.residuals:
            payload["residuals"] = dict(sorted(self.residuals.items()))
        return payload

    def __repr__(self):
        return f"CheckReport(law={self.law!r}, samples={self.samples}, failures={len(self.failures)})"
