"""Enumerative checks of the stubborn-set preservation results and the mover lemmas."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..commutativity import AccordMode, DependencyMatrix
from ..model import Model, State
from ..statespace import state_graph
from ..stubborn import StubbornResult, lmv, rmv, validate_stubborn


@dataclass
class StubbornAudit:
    """Hook for explorers: records every produced set and re-validates it."""

    model: Model
    dep: DependencyMatrix
    seen: list[tuple[State, StubbornResult]] = field(default_factory=list)

    def __call__(self, state: State, result: StubbornResult) -> None:
        self.seen.append((state, result))

    def violations(self) -> list[str]:
        out = []
        for q, res in self.seen:
            for v in validate_stubborn(self.model, q, res, self.dep):
                out.append(f"{self.model.describe(q)}: {v}")
        return out


def check_strong_preservation(model: Model, dep: DependencyMatrix, sets) -> list[str]:
    """A strong stubborn set stays strong stubborn after any enabled action outside it."""
    out = []
    for q, res in sets:
        if res.star is not AccordMode.STRONG or res.semi:
            continue
        for b in sorted(model.enabled(q) - res.actions):
            q2 = model._fire(q, b)
            bad = validate_stubborn(model, q2, res, dep)
            if bad:
                out.append(f"strong set lost after {model.action(b)}: {bad[0]}")
    return out


def check_semi_preservation(model: Model, dep: DependencyMatrix, sets) -> list[str]:
    """Semi-stubborn sets survive outside actions (right ones only if nothing in B is disabled)."""
    out = []
    for q, res in sets:
        if not res.semi or res.star is AccordMode.STRONG:
            continue
        en = model.enabled(q)
        for b in sorted(en - res.actions):
            q2 = model._fire(q, b)
            if res.star is AccordMode.RIGHT and not (en & res.actions) <= model.enabled(q2):
                continue
            bad = validate_stubborn(model, q2, res, dep)
            if bad:
                out.append(f"{res.star.value} semi set lost after {model.action(b)}: {bad[0]}")
    return out


def check_left_mover_stability(model: Model, dep: DependencyMatrix) -> list[str]:
    """lmv for a process is never destroyed by another process's step."""
    out = []
    graph = state_graph(model)
    for q1 in graph.states:
        for i in range(len(model.processes)):
            if not lmv(model, q1, i, dep):
                continue
            for b, q2 in graph.succ[q1]:
                if model.action(b).pid != i and not lmv(model, q2, i, dep):
                    out.append(f"lmv_{i} lost at {model.describe(q1)} by {model.action(b)}")
    return out


def check_right_mover_stability(model: Model, dep: DependencyMatrix) -> list[str]:
    """rmv(q1, a, q2) and q2 -b-> q3 remotely imply q1 -b-> q4 -a-> q3 with rmv(q4, a, q3)."""
    out = []
    graph = state_graph(model)
    for q1 in graph.states:
        for a, q2 in graph.succ[q1]:
            if not rmv(model, q1, a, q2, dep):
                continue
            i = model.action(a).pid
            for b, q3 in graph.succ[q2]:
                if model.action(b).pid == i:
                    continue
                where = f"{model.action(a)} then {model.action(b)} at {model.describe(q1)}"
                if not model.is_enabled(q1, b):
                    out.append(f"remote action not enabled before: {where}")
                    continue
                q4 = model._fire(q1, b)
                if not model.is_enabled(q4, a) or model._fire(q4, a) != q3:
                    out.append(f"square does not close: {where}")
                elif not rmv(model, q4, a, q3, dep):
                    out.append(f"rmv not retained after moving: {where}")
    return out
