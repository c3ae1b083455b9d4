"""The differential validation pipeline run by ``strcheck validate`` and the tests."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ..commutativity import DependencyMatrix, visibility
from ..gcl import pretty
from ..model import Model
from ..por import ignoring_violations
from ..result import ExplorationResult, StateSpaceTooLarge
from ..strategies import run_strategy
from ..tr import MoverOracle, classify_movers_static
from .full import explore_full
from .soundness import SoundnessReport, check_soundness, minimize
from .transaction import PREMISE_BOUND, check_reduction_premise, reference_rts, transaction_system

OracleFactory = Callable[[Model, str], MoverOracle]


def default_oracle(model: Model, strategy: str) -> MoverOracle:
    dep = DependencyMatrix(model)
    return classify_movers_static(model, dep) if strategy == "tr" else MoverOracle.dynamic(model, dep)


def structural_errors(model: Model, result: ExplorationResult, oracle: MoverOracle,
                      full: ExplorationResult) -> list[str]:
    """Strategy-specific invariants beyond reachability and verdict."""
    errors = []
    if result.strategy == "spor":
        missed = ignoring_violations(result)
        if missed:
            errors.append(f"ignoring proviso: {len(missed)} enabled actions never selected")
        return errors
    external = result.details["external"]
    if not external <= result.reached or not external <= full.reached:
        errors.append("external states are not reachable base states")
    if result.external_states != len(external):
        errors.append("external-state count differs from distinct base states")
    if not result.violated:
        try:
            ts = transaction_system(model, oracle, visibility(model), PREMISE_BOUND)
        except StateSpaceTooLarge:
            return errors
        expected = reference_rts(ts)
        if external != expected:
            errors.append(
                f"external states {len(external)} differ from reference reduction {len(expected)}"
            )
        premise = check_reduction_premise(ts)
        if not premise.passed:
            errors.append(f"reduction premise items failing: {premise.failed_items()}")
    return errors


def differential(
    model: Model,
    strategy: str,
    oracle_factory: OracleFactory = default_oracle,
    full: ExplorationResult | None = None,
) -> SoundnessReport:
    full = full or explore_full(model)
    oracle = oracle_factory(model, strategy) if strategy in ("tr", "str") else None
    reduced = run_strategy(model, strategy, oracle=oracle, stop_on_violation=False)
    report = check_soundness(full, reduced, model)
    report.failures += structural_errors(model, reduced, oracle, full)
    return report


@dataclass
class SuiteReport:
    reports: list[tuple[str, SoundnessReport]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for _, r in self.reports)

    @property
    def failures(self) -> list[tuple[str, SoundnessReport]]:
        return [(n, r) for n, r in self.reports if not r.passed]


def run_suite(
    models: list[Model],
    strategies: tuple[str, ...] = ("tr", "str", "spor"),
    oracle_factory: OracleFactory = default_oracle,
    shrink: bool = True,
) -> SuiteReport:
    """Differentially check each model under each strategy; shrink failures."""
    suite = SuiteReport()
    for model in models:
        full = explore_full(model)
        for strategy in strategies:
            report = differential(model, strategy, oracle_factory, full)
            if not report.passed and shrink:
                small = minimize(
                    model, lambda m: not differential(m, strategy, oracle_factory).passed
                )
                report.counterexample = pretty(small)
            suite.reports.append((model.name, report))
    return suite
