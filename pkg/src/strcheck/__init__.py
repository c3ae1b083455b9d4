"""Explicit-state invariant checking with stubborn sets and transaction reduction."""

from .gcl import parse, parse_expr, parse_file, pretty
from .model import Model, Phase, PhasedState, State
from .reference import reference_model
from .result import ExplorationResult, Limits, ResourceBoundExceeded
from .strategies import STRATEGIES, run_strategy

__all__ = [
    "STRATEGIES",
    "ExplorationResult",
    "Limits",
    "Model",
    "Phase",
    "PhasedState",
    "ResourceBoundExceeded",
    "State",
    "parse",
    "parse_expr",
    "parse_file",
    "pretty",
    "reference_model",
    "run_strategy",
]
