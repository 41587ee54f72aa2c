import json
import os
from fractions import Fraction

import numpy as np
import yaml
import zarr


class NumpyEncoder(json.JSONEncoder):
    """
        Encoder to deal with numpy data types, Fractions and library objects not
        compatible with json
    """
    def default(self, data):
        if isinstance(data, np.integer):
            return int(data)
        if isinstance(data, np.floating):
            return float(data)
        if isinstance(data, np.ndarray):
            return encode_value(data)
        if isinstance(data, Fraction):
            return encode_value(data)
        if isinstance(data, complex):
            return [data.real, data.imag]
        if hasattr(data, "to_json"):
            return data.to_json()
        return super(NumpyEncoder, self).default(data)


def encode_value(value):
    """
        Recursively convert a value to plain JSON types. Fractions become ints or
        {"num","den"}, objects with to_json() are asked for their payload, complex
        numbers become [re, im].
    """
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value.numerator)
        return {"num": int(value.numerator), "den": int(value.denominator)}
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.ndarray):
        return [encode_value(item) for item in value.tolist()] if value.ndim else encode_value(value.item())
    if isinstance(value, dict):
        return {str(key): encode_value(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode_value(item) for item in value]
    if hasattr(value, "to_json"):
        return value.to_json()
    return value


def dumps(payload):
    """
        Deterministic JSON text: keys sorted, fixed indentation, no timestamps.
    """
    return json.dumps(encode_value(payload), cls=NumpyEncoder, sort_keys=True, indent=2)


def write_json(payload, path):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w") as file_object:
        file_object.write(dumps(payload) + "\n")


def read_json(path):
    if not os.path.exists(path):
        raise FileNotFoundError(f"Input file {path} not found.")
    with open(path, "r") as file_object:
        return json.load(file_object)


def create_unique_directory_file(path):
    """
        Checks if a directory/file name already exists. If it does,
        it returns a new name with _(i) appended.
    """
    name, extension = os.path.splitext(path)
    c = 1
    while os.path.exists(path):
        path = name + '_(' + str(c) + ')' + extension
        c += 1
    return path


def save_tables_zarr(path, tables: dict, attributes: dict):
    """
        Save a set of named arrays into a new zarr group.

        Parameters
        -------------------
        path (str):
            Location of the zarr group. An existing path is never overwritten; a
            unique variant is created instead.
        tables (dict):
            Array name -> numpy array.
        attributes (dict):
            Group attributes (must be JSON compatible after encode_value).

        Returns
        -------------------
        path (str):
            The path actually written.
    """
    path = create_unique_directory_file(path)
    group = zarr.open(path, mode='w')
    for key, value in encode_value(attributes).items():
        group.attrs[key] = value
    for name, table in tables.items():
        group[name] = np.asarray(table)
    return path


def load_tables_zarr(path):
    if not os.path.exists(path):
        raise FileNotFoundError(f"Zarr group {path} not found.")
    group = zarr.open(path, mode='r')
    tables = {name: np.asarray(group[name][...]) for name in group.array_keys()}
    return tables, dict(group.attrs)


def save_config_used(config_name, save_directory):
    """
        Copy a YAML config file into a run directory as <name>_used.yaml.
    """
    config_directory = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "config")
    with open(os.path.join(config_directory, f"{config_name}.yaml"), "r") as file_object:
        config = yaml.full_load(file_object)
    with open(os.path.join(save_directory, f"{config_name}_used.yaml"), "w") as file_object:
        yaml.dump(config, file_object)
