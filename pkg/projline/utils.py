import copy
import os
import random

import numpy as np
import yaml

CONFIG_ENV = "PROJLINE_CONFIG"


def seed_everything(seed):
    random.seed(seed)
    os.environ["PYTHONHASHSEED"] = str(seed)
    np.random.seed(seed)
    return np.random.default_rng(seed)


def default_projline_config():
    return {
        "bounds": {
            # build_coordinate_model refuses larger moduli
            "model_max_prime": 101,
            # dense composition tables beyond this are too large to verify
            "verify_max_prime": 23,
            "associativity_max_prime": 11,
            "census_max_prime": 11,
            "census_default_prime": 7,
            "pgl_max_prime": 31,
            "cayley_max_prime": 7,
            # (p+1)! bijections are enumerated outright
            "bijection_max_prime": 7,
        },
        "verify": {
            "max_violations": 100,
            "witnesses_per_axiom": 1,
            "early_exit": False,
        },
        "sampling": {
            "seed": 0,
            "census_samples": 3,
            "dil_samples": 1000,
        },
        "progress": False,
    }


def _merge(base, override, path=""):
    for key, value in override.items():
        if key not in base:
            raise KeyError(f"Unknown configuration key '{path}{key}'.")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise KeyError(f"Configuration key '{path}{key}' expects a mapping.")
            _merge(base[key], value, path=f"{path}{key}.")
        else:
            base[key] = value
    return base


def load_config(config=None):
    """Defaults overridden by a YAML file (argument, else $PROJLINE_CONFIG)."""
    merged = default_projline_config()
    if config is None:
        config = os.getenv(CONFIG_ENV)
    if config is None:
        return merged
    if isinstance(config, dict):
        return _merge(merged, copy.deepcopy(config))
    assert type(config) is str
    with open(config, "r") as f:
        override = yaml.load(f, Loader=yaml.FullLoader) or {}
    return _merge(merged, override)
