"""
wcolour - weighted colourings of random graphs

Usage:
    wcolour gen --n 5 --p 1 --seed 7
    wcolour exact --graph tri.el --weights w.el
    wcolour sweep --kind t2 --n 300 --beta 0.7 --theta 0.3 --theta 0.8

Or run as a module:
    python -m wcolour --help
"""

# Import UI app which has all the CLI configuration
from .ui import app

# Import commands to register them with the app
# The @app.command() decorators in commands.py register them automatically
from . import commands as _commands  # noqa: F401 - imported for side effects

# Re-export key items for external use
from .colouring import Colouring, exact_chi_w, greedy_colour, two_stage_colour, verify_weighted
from .config import BANNER, PATTERN_CONFIG, TAGLINE
from .errors import ContractViolation, InvalidInputError, WColourError
from .experiments import ExperimentConfig, TrialRecord, emit, replay, run
from .graph import EdgeWeightMap, Graph, gen_gnp
from .patterns import PatternGraph, enumerate_copies, is_balanced
from .seeding import Seed
from .threshold import estimate_good_fraction, theta_threshold
from .ui import console, show_banner
from .weights import WeightDistributionSpec, sample_weights

__all__ = [
    "app",
    "console",
    "show_banner",
    "BANNER",
    "PATTERN_CONFIG",
    "TAGLINE",
    "Colouring",
    "ContractViolation",
    "EdgeWeightMap",
    "ExperimentConfig",
    "Graph",
    "InvalidInputError",
    "PatternGraph",
    "Seed",
    "TrialRecord",
    "WColourError",
    "WeightDistributionSpec",
    "emit",
    "enumerate_copies",
    "estimate_good_fraction",
    "exact_chi_w",
    "gen_gnp",
    "greedy_colour",
    "is_balanced",
    "replay",
    "run",
    "sample_weights",
    "theta_threshold",
    "two_stage_colour",
    "verify_weighted",
]


def main():
    """Main entry point for the CLI."""
    app()


if __name__ == "__main__":
    main()
