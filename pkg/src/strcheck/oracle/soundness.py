"""Differential comparison of a reduced run against full exploration."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ..expr import Const, Expr, Unary, Binary, Var
from ..model import Assign, Edge, Model, ModelError, ProcessSource
from ..result import ExplorationResult


@dataclass
class SoundnessReport:
    strategy: str
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    counterexample: str | None = None

    @property
    def passed(self) -> bool:
        return not self.failures

    def __str__(self) -> str:
        head = f"{self.strategy}: {'pass' if self.passed else 'FAIL'}"
        lines = [head] + [f"  - {f}" for f in self.failures] + [f"  note: {n}" for n in self.notes]
        if self.counterexample:
            lines.append("  minimized model:")
            lines += ["    " + ln for ln in self.counterexample.splitlines()]
        return "\n".join(lines)


def trace_errors(model: Model, result: ExplorationResult) -> list[str]:
    """A reported violation must be a real run that ends in a state falsifying Y."""
    trace = result.violation
    if trace is None:
        return []
    errors = []
    if trace[0][1] != model.initial_state():
        errors.append("trace does not start in the initial state")
    for (_, prev), (a, cur) in zip(trace, trace[1:]):
        if a is None or not model.is_enabled(prev, a) or model._fire(prev, a) != cur:
            errors.append(f"trace step {a} is not a model transition")
            break
    if model.holds(trace[-1][1]):
        errors.append("trace ends in a state satisfying Y")
    return errors


def check_soundness(
    full: ExplorationResult, reduced: ExplorationResult, model: Model | None = None
) -> SoundnessReport:
    """Reached states within full, same verdict; deadlock sets equal for POR."""
    report = SoundnessReport(reduced.strategy)
    extra = reduced.reached - full.reached
    if extra:
        report.failures.append(f"{len(extra)} reduced states unreachable in the full system")
    if full.violated != reduced.violated:
        report.failures.append(
            f"verdict differs: full violated={full.violated}, reduced violated={reduced.violated}"
        )
    if model is not None:
        report.failures += trace_errors(model, reduced)
    full_dl, red_dl = set(full.deadlocks), set(reduced.deadlocks)
    if red_dl - full.reached:
        report.failures.append("reduced run reports a deadlock the full system cannot reach")
    if reduced.strategy == "spor":
        if full_dl != red_dl:
            report.failures.append(
                f"deadlock sets differ: full {len(full_dl)}, reduced {len(red_dl)}"
            )
        else:
            report.notes.append(f"deadlock sets equal ({len(full_dl)})")
    elif full_dl - red_dl:
        report.notes.append(f"deadlocks pruned: {len(full_dl - red_dl)}")
    return report


# counterexample shrinking -------------------------------------------------


def _subst(e: Expr, name: str, value: int) -> Expr:
    if isinstance(e, Var):
        return Const(value) if e.name == name else e
    if isinstance(e, Unary):
        return Unary(e.op, _subst(e.arg, name, value))
    if isinstance(e, Binary):
        return Binary(e.op, _subst(e.left, name, value), _subst(e.right, name, value))
    return e


def without_variable(model: Model, name: str) -> Model:
    """Freeze ``name`` at its initial value and drop it from the model."""
    decl = next(v for v in model.vars if v.name == name)
    sources = []
    for src in model.sources:
        edges = []
        for e in src.edges:
            stmts = []
            for s in e.stmts:
                if isinstance(s, Assign):
                    if s.var != name:
                        stmts.append(Assign(s.var, _subst(s.expr, name, decl.init)))
                elif s.var != name:
                    stmts.append(s)
            edges.append(Edge(e.source, _subst(e.guard, name, decl.init), tuple(stmts), e.target))
        sources.append(ProcessSource(src.name, tuple(edges)))
    keep = [v for v in model.vars if v.name != name]
    return Model.build(model.name, keep, _subst(model.property_y, name, decl.init), sources)


def minimize(model: Model, still_fails: Callable[[Model], bool]) -> Model:
    """Greedily drop actions and variables while ``still_fails`` keeps holding."""
    changed = True
    while changed:
        changed = False
        for a in reversed(range(len(model.actions))):
            try:
                smaller = model.without_actions([a])
            except ModelError:
                continue
            if smaller.actions and _fails(still_fails, smaller):
                model, changed = smaller, True
                break
        if changed:
            continue
        for v in model.vars:
            try:
                smaller = without_variable(model, v.name)
            except ModelError:
                continue
            if _fails(still_fails, smaller):
                model, changed = smaller, True
                break
    return model


def _fails(pred: Callable[[Model], bool], model: Model) -> bool:
    try:
        return pred(model)
    except Exception:
        return False
