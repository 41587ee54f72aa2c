import os
import yaml

CONFIG_DIRECTORY = os.path.dirname(os.path.abspath(__file__))

check_config = dict()
check_config["seed"] = 0
check_config["n"] = 5
check_config["crossed_module_samples"] = 1000
check_config["coherence_samples"] = 500
check_config["denominator"] = 12
check_config["validation_box"] = 2
check_config["table_box"] = 4
check_config["max_triples"] = 200000 # Above this many box triples, validation samples instead of enumerating
check_config["float_tolerance"] = 1e-9

fell_bundle_config = dict()
fell_bundle_config["n"] = 3
fell_bundle_config["N"] = 4
fell_bundle_config["m"] = [1]
fell_bundle_config["stress_N"] = 8
fell_bundle_config["pairs"] = 50
fell_bundle_config["triples"] = 200
fell_bundle_config["seed"] = 0
fell_bundle_config["tolerance"] = 1e-12

cli_config = dict()
cli_config["mode"] = 'exact' # Options: 'exact' or 'float'
cli_config["tol"] = 1e-9

selftest_config = dict()
selftest_config["suites"] = ['exterior', 'twogroup', 'cohomology', 'brauer', 'fellbundle']
selftest_config["save_stats"] = False
selftest_config["stats_path"] = 'selftest_runs'


def set_default_configs():

    with open(os.path.join(CONFIG_DIRECTORY, "check_config.yaml"), "w") as file_object:
        yaml.dump(check_config, file_object)

    with open(os.path.join(CONFIG_DIRECTORY, "fell_bundle_config.yaml"), "w") as file_object:
        yaml.dump(fell_bundle_config, file_object)

    with open(os.path.join(CONFIG_DIRECTORY, "cli_config.yaml"), "w") as file_object:
        yaml.dump(cli_config, file_object)

    with open(os.path.join(CONFIG_DIRECTORY, "selftest_config.yaml"), "w") as file_object:
        yaml.dump(selftest_config, file_object)


if __name__ == "__main__":
    set_default_configs()
