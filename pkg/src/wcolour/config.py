"""Configuration constants, built-in patterns and experiment defaults for wcolour."""

import json
import os
from pathlib import Path

from platformdirs import user_config_dir

from .errors import InvalidInputError

APP_NAME = "wcolour"

# Built-in pattern graphs: name, description, vertex count and edge list
PATTERN_CONFIG = {
    "k2": {
        "name": "Single edge",
        "v0": 2,
        "edges": [(0, 1)],
    },
    "path3": {
        "name": "Path on 3 vertices",
        "v0": 3,
        "edges": [(0, 1), (1, 2)],
    },
    "triangle": {
        "name": "Triangle",
        "v0": 3,
        "edges": [(0, 1), (0, 2), (1, 2)],
    },
    "c4": {
        "name": "Cycle on 4 vertices",
        "v0": 4,
        "edges": [(0, 1), (1, 2), (2, 3), (0, 3)],
    },
    "k4": {
        "name": "Complete graph on 4 vertices",
        "v0": 4,
        "edges": [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
    },
}

# Weight laws accepted by --dist, as "name:param"
DIST_CONFIG = {
    "constant": {
        "name": "Constant weight",
        "param": "w0",
        "help": "every edge gets weight w0 (integer >= 1)",
    },
    "pareto": {
        "name": "Ceiled Pareto",
        "param": "alpha",
        "help": "ceil of a Pareto draw on [1, inf) with tail exponent alpha > 0",
    },
}

EXPERIMENT_KINDS = ("t1a", "t1b", "t2", "concentration")

# Per-kind trial budgets; entries may be overridden from the user defaults file
EXPERIMENT_DEFAULTS = {
    "t1a": {"trials": 100},
    "t1b": {"trials": 100},
    "t2": {"trials": 50, "colourings": 200},
    "concentration": {"trials": 100},
}

# Output column order per experiment kind
RECORD_COLUMNS = {
    "t1a": [
        "experiment", "n", "p", "beta", "seed_path", "mu", "max_degree",
        "greedy_max", "local_bound", "two_stage_max", "bad_count", "exact_chi_w",
        "ratio",
    ],
    "t1b": [
        "experiment", "n", "p", "beta", "seed_path", "max_degree", "max_weight",
        "ratio", "growth_exponent", "lower_exponent",
    ],
    "t2": [
        "experiment", "n", "beta", "theta", "theta_th", "r", "M", "K",
        "graph_seed", "fraction", "stderr", "y_count", "z_count", "copies",
    ],
    "concentration": [
        "experiment", "n", "p", "eps", "seed_path", "max_degree",
        "deviation_fraction", "e_nei", "chernoff_bound",
    ],
}

OUTPUT_FORMATS = ("csv", "jsonl", "json")

EXIT_CONTRACT = 1
EXIT_INVALID = 2
EXIT_INCONCLUSIVE = 3

# Largest n for which sweeps also run the exact solver
EXACT_MAX_N = 12
DEFAULT_EXACT_BUDGET = 2_000_000

# Largest colouring space the exhaustive oracle will visit
EXHAUSTIVE_MAX_COLOURINGS = 10**6

# Largest pattern handled by brute-force isomorphism
PATTERN_MAX_VERTICES = 10

BANNER = """
██╗    ██╗ ██████╗ ██████╗ ██╗      ██████╗ ██╗   ██╗██████╗
██║    ██║██╔════╝██╔═══██╗██║     ██╔═══██╗██║   ██║██╔══██╗
██║ █╗ ██║██║     ██║   ██║██║     ██║   ██║██║   ██║██████╔╝
██║███╗██║██║     ██║   ██║██║     ██║   ██║██║   ██║██╔══██╗
╚███╔███╔╝╚██████╗╚██████╔╝███████╗╚██████╔╝╚██████╔╝██║  ██║
 ╚══╝╚══╝  ╚═════╝ ╚═════╝ ╚══════╝ ╚═════╝  ╚═════╝ ╚═╝  ╚═╝
"""

TAGLINE = "Weighted colourings of random graphs"


def config_dir() -> Path:
    """Directory holding the user defaults file (WCOLOUR_CONFIG_DIR wins)."""
    override = os.getenv("WCOLOUR_CONFIG_DIR")
    if override:
        return Path(override)
    return Path(user_config_dir(APP_NAME))


def load_user_defaults() -> dict:
    """Return EXPERIMENT_DEFAULTS merged with the user's defaults.json, if any."""
    merged = {kind: dict(values) for kind, values in EXPERIMENT_DEFAULTS.items()}
    path = config_dir() / "defaults.json"
    if not path.is_file():
        return merged

    try:
        with open(path, "r", encoding="utf-8") as f:
            overrides = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidInputError(f"cannot read defaults file {path}: {e}") from e

    if not isinstance(overrides, dict):
        raise InvalidInputError(f"defaults file {path} must hold a JSON object")
    for kind, values in overrides.items():
        if kind not in merged or not isinstance(values, dict):
            raise InvalidInputError(f"defaults file {path}: unknown section '{kind}'")
        for key, value in values.items():
            if not isinstance(value, int) or value < 1:
                raise InvalidInputError(f"defaults file {path}: {kind}.{key} must be a positive integer")
            merged[kind][key] = value
    return merged
