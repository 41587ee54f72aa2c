import os
import yaml

CONFIG_DIRECTORY = os.path.dirname(os.path.abspath(__file__))


def read_config(file_name):
    path = os.path.join(CONFIG_DIRECTORY, file_name)
    if not os.path.exists(path):
        raise FileNotFoundError(f"Config file {path} not found. Run config/default_configs.py to restore the defaults.")
    with open(path, "r") as file_object:
        return yaml.full_load(file_object)


class CheckConfigs:
    def __init__(self):
        config = read_config("check_config.yaml")

        self.coherence_samples = config["coherence_samples"]
        self.crossed_module_samples = config["crossed_module_samples"]
        self.denominator = config["denominator"]
        self.float_tolerance = config["float_tolerance"]
        self.max_triples = config["max_triples"]
        self.n = config["n"]
        self.seed = config["seed"]
        self.table_box = config["table_box"]
        self.validation_box = config["validation_box"]

        for key, value in config.items():
            if not hasattr(self, key):
                setattr(self, key, value)

class FellBundleConfigs:
    def __init__(self):
        config = read_config("fell_bundle_config.yaml")

        self.m = config["m"]
        self.n = config["n"]
        self.N = config["N"]
        self.pairs = config["pairs"]
        self.seed = config["seed"]
        self.stress_N = config["stress_N"]
        self.tolerance = config["tolerance"]
        self.triples = config["triples"]

        for key, value in config.items():
            if not hasattr(self, key):
                setattr(self, key, value)

class CliConfigs:
    def __init__(self):
        config = read_config("cli_config.yaml")

        self.mode = config["mode"]
        self.tol = config["tol"]

        if self.mode not in ('exact', 'float'):
            raise ValueError(f"cli_config.yaml mode must be 'exact' or 'float', got {self.mode}.")

        for key, value in config.items():
            if not hasattr(self, key):
                setattr(self, key, value)

class SelfTestConfigs:
    def __init__(self):
        config = read_config("selftest_config.yaml")

        self.save_stats = config["save_stats"]
        self.stats_path = config["stats_path"]
        self.suites = config["suites"]

        for key, value in config.items():
            if not hasattr(self, key):
                setattr(self, key, value)

CHECK_CONFIG = CheckConfigs()
FELL_BUNDLE_CONFIG = FellBundleConfigs()
CLI_CONFIG = CliConfigs()
SELFTEST_CONFIG = SelfTestConfigs()
