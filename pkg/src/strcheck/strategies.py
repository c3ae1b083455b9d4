"""Uniform entry point for the four exploration strategies."""

from __future__ import annotations

from .commutativity import DependencyMatrix, visibility
from .model import Model
from .oracle.full import explore_full
from .por import explore_por
from .result import ExplorationResult, Limits
from .stubborn import StubbornHook
from .tr import MoverOracle, classify_movers_static, explore_tr

STRATEGIES = ("none", "tr", "str", "spor")


def run_strategy(
    model: Model,
    strategy: str,
    limits: Limits | None = None,
    subsumption: bool = True,
    exhaustive_nes: bool = False,
    on_stubborn: StubbornHook = None,
    oracle: MoverOracle | None = None,
    stop_on_violation: bool = True,
) -> ExplorationResult:
    """Explore ``model`` with one of ``STRATEGIES``; ``oracle`` overrides tr/str movers."""
    if strategy == "none":
        return explore_full(model, limits)
    dep = DependencyMatrix(model)
    vis = visibility(model)
    if strategy == "spor":
        return explore_por(
            model,
            dep,
            vis,
            limits,
            stop_on_violation=stop_on_violation,
            exhaustive_nes=exhaustive_nes,
            on_stubborn=on_stubborn,
        )
    if strategy in ("tr", "str"):
        if oracle is None:
            oracle = (
                classify_movers_static(model, dep)
                if strategy == "tr"
                else MoverOracle.dynamic(model, dep, on_stubborn)
            )
        return explore_tr(
            model,
            oracle,
            vis,
            limits,
            subsumption=subsumption,
            stop_on_violation=stop_on_violation,
            strategy=strategy,
        )
    raise ValueError(f"unknown strategy {strategy!r}")
