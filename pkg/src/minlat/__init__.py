"""Minimum latency problem solvers: multi-start ILS with RVND and data-mining hybrids."""
from .core import (InvalidInstanceError, InvalidTourError, Instance, MLPError, Solution, Variant, latency_cost,
                   make_solution, validate_tour)
from .exact import brute_force
from .search import ConfigError, EliteSet, RunLog, SearchParams, Strategy, solve
from .tsplib import generate_instance, load_tsplib, parse_tsplib

__all__ = [
    "ConfigError", "EliteSet", "Instance", "InvalidInstanceError", "InvalidTourError", "MLPError", "RunLog",
    "SearchParams", "Solution", "Strategy", "Variant", "brute_force", "generate_instance", "latency_cost",
    "load_tsplib", "make_solution", "parse_tsplib", "solve", "validate_tour",
]
__version__ = "0.1.0"
