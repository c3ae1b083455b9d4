"""Acceptance criteria 1-9.

Each test records named sub-checks and fails if any of them fails. A summary
line per criterion is printed at the end of the pytest run (see conftest.py)
and when this file is executed directly.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache

import pytest

from strcheck.commutativity import DependencyMatrix
from strcheck.oracle.full import explore_full
from strcheck.oracle.random_models import random_model
from strcheck.oracle.suite import default_oracle, run_suite
from strcheck.oracle.theorems import (
    StubbornAudit,
    check_left_mover_stability,
    check_right_mover_stability,
    check_semi_preservation,
    check_strong_preservation,
)
from strcheck.oracle.transaction import (
    check_reduction_premise,
    inject_post_to_pre,
    reference_rts,
    transaction_system,
)
from strcheck.reference import REFERENCE_NAMES, reference_model
from strcheck.result import StateSpaceTooLarge
from strcheck.strategies import run_strategy
from strcheck.tr import MoverOracle, SelfCheckError, explore_tr

RANDOM_SEEDS = range(100)


@dataclass
class Criterion:
    number: int
    title: str
    checks: list[tuple[str, bool, str]] = field(default_factory=list)

    def check(self, name: str, ok: bool, detail: object = "") -> None:
        self.checks.append((name, bool(ok), str(detail)))

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        failed = [f"{n} ({d})" if d else n for n, ok, d in self.checks if not ok]
        tail = f" - failed: {'; '.join(failed)}" if failed else ""
        return f"criterion {self.number} [{self.title}]: {status}{tail}"

    def report(self) -> str:
        rows = [self.line()]
        for name, ok, detail in self.checks:
            rows.append(f"  [{'ok' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else ""))
        return "\n".join(rows)


RESULTS: dict[int, Criterion] = {}


def criterion(number: int, title: str) -> Criterion:
    c = Criterion(number, title)
    RESULTS[number] = c
    return c


def finish(c: Criterion) -> None:
    print(c.report())
    assert c.passed, c.report()


def timed(fn, *args, **kwargs):
    start = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - start


@lru_cache(maxsize=None)
def random_models():
    return tuple(random_model(s) for s in RANDOM_SEEDS)


def reference_models():
    return [reference_model(n) for n in REFERENCE_NAMES]


# 1-5: figure-level examples ----------------------------------------------


def test_criterion_1_independent_processes():
    c = criterion(1, "indep(3,4): n^p full, 2^p STR, at most n*p POR")
    m = reference_model("indep(3,4)")
    full, t_full = timed(run_strategy, m, "none")
    strr, t_str = timed(run_strategy, m, "str")
    spor, t_spor = timed(run_strategy, m, "spor")
    c.check("full = 64", full.states_visited == 64, full.states_visited)
    c.check("STR external_states = 8", strr.external_states == 8, strr.external_states)
    c.check("SPOR states <= 12", spor.states_visited <= 12, spor.states_visited)
    slowest = max(t_full, t_str, t_spor)
    c.check("each run < 1 s", slowest < 1.0, f"{slowest:.3f}s")
    finish(c)


def test_criterion_2_prog1():
    c = criterion(2, "prog1")
    m = reference_model("prog1")
    full, strr, spor = (run_strategy(m, s) for s in ("none", "str", "spor"))
    c.check("full = 9", full.states_visited == 9, full.states_visited)
    c.check("STR external_states = 4", strr.external_states == 4, strr.external_states)
    c.check("SPOR states <= 7 and < 9", spor.states_visited <= 7, spor.states_visited)
    finish(c)


def test_criterion_3_prog2():
    c = criterion(3, "prog2: static TR gains nothing, STR does")
    m = reference_model("prog2")
    full, tr, strr = (run_strategy(m, s) for s in ("none", "tr", "str"))
    c.check(
        "static TR external_states = full",
        tr.external_states == full.states_visited,
        f"{tr.external_states} vs {full.states_visited}",
    )
    c.check(
        "STR external_states < static TR",
        strr.external_states < tr.external_states,
        f"{strr.external_states} vs {tr.external_states}",
    )
    finish(c)


def test_criterion_4_lockpair():
    c = criterion(4, "lockpair")
    m = reference_model("lockpair")
    full, strr = run_strategy(m, "none"), run_strategy(m, "str")
    c.check("full = 16", full.states_visited == 16, f"got {full.states_visited}")
    c.check("STR external_states = 4", strr.external_states == 4, f"got {strr.external_states}")
    finish(c)


def test_criterion_5_deadlock2():
    c = criterion(5, "deadlock2")
    m = reference_model("deadlock2")
    full, strr, spor = (run_strategy(m, s) for s in ("none", "str", "spor"))
    c.check("STR external_states = 4", strr.external_states == 4, f"got {strr.external_states}")
    c.check("STR finds no violation", not strr.violated)
    c.check("SPOR deadlocks >= 1", spor.deadlock_count >= 1, spor.deadlock_count)
    c.check("SPOR deadlock set = full", set(spor.deadlocks) == set(full.deadlocks))
    finish(c)


# 6: differential soundness -----------------------------------------------


def test_criterion_6_differential_soundness():
    c = criterion(6, "differential soundness over 100 random models")
    suite, elapsed = timed(run_suite, list(random_models()), ("tr", "str", "spor"))
    for strategy in ("tr", "str", "spor"):
        bad = [n for n, r in suite.failures if r.strategy == strategy]
        c.check(f"{strategy}: zero failures", not bad, ", ".join(bad))
    c.check("runs checked", len(suite.reports) == 300, len(suite.reports))
    c.check("runtime < 5 min", elapsed < 300, f"{elapsed:.1f}s")
    finish(c)


# 7: stubborn sets and mover stability -------------------------------------


def audited_runs(models) -> list[StubbornAudit]:
    """Repeat the (deterministic) POR and STR runs of criteria 1-6 with an audit hook."""
    audits = []
    for m in models:
        audit = StubbornAudit(m, DependencyMatrix(m))
        for stop in (True, False):
            run_strategy(m, "spor", on_stubborn=audit, stop_on_violation=stop)
            oracle = MoverOracle.dynamic(m, audit.dep, on_stubborn=audit)
            run_strategy(m, "str", oracle=oracle, stop_on_violation=stop)
        audits.append(audit)
    return audits


def test_criterion_7_stubborn_validity_and_mover_stability():
    c = criterion(7, "stubborn validity, preservation and mover stability")
    audits = audited_runs(reference_models() + list(random_models()))
    invalid = [v for a in audits for v in a.violations()]
    c.check(
        f"all {sum(len(a.seen) for a in audits)} produced sets valid", not invalid, invalid[:1]
    )
    for m, audit in zip(reference_models(), audits):
        dep = audit.dep
        for label, errors in (
            ("strong-set preservation", check_strong_preservation(m, dep, audit.seen)),
            ("semi-set preservation", check_semi_preservation(m, dep, audit.seen)),
            ("left-mover stability", check_left_mover_stability(m, dep)),
            ("right-mover stability", check_right_mover_stability(m, dep)),
        ):
            c.check(f"{label} on {m.name}", not errors, errors[0] if errors else "")
    finish(c)


# 8: reduction premise ----------------------------------------------------


def test_criterion_8_reduction_premise():
    c = criterion(8, "reduction premise items 1-9")
    for m in reference_models():
        for strategy in ("tr", "str"):
            ts = transaction_system(m, default_oracle(m, strategy))
            report = check_reduction_premise(ts)
            c.check(f"{m.name}/{strategy}: items 1-9", report.passed, report.failed_items())
    lockpair = reference_model("lockpair")
    ts = transaction_system(lockpair, default_oracle(lockpair, "str"))
    injected = check_reduction_premise(inject_post_to_pre(ts))
    c.check("injected edge fails exactly item 3", injected.failed_items() == [3],
            injected.failed_items())
    finish(c)


# 9: structural self-checks --------------------------------------------------


def test_criterion_9_structural_checks():
    c = criterion(9, "STR structural self-checks")
    models = reference_models() + list(random_models())
    fired, not_within, not_bijective, rts_mismatch, compared = [], [], [], [], 0
    for m in models:
        oracle = MoverOracle.dynamic(m)
        try:
            res = explore_tr(m, oracle, stop_on_violation=False)
        except SelfCheckError as err:
            fired.append(f"{m.name}: {err}")
            continue
        full = explore_full(m)
        if not res.reached <= full.reached:
            not_within.append(m.name)
        external = res.details["external"]
        if len(external) != res.external_states or not external <= full.reached:
            not_bijective.append(m.name)
        try:
            ts = transaction_system(m, oracle)
        except StateSpaceTooLarge:
            continue
        compared += 1
        if external != reference_rts(ts):
            rts_mismatch.append(m.name)
    c.check("no self-check assertion fired", not fired, fired[:1])
    c.check("reach(STR) within reach(full)", not not_within, not_within[:3])
    c.check("external states biject with base states", not not_bijective, not_bijective[:3])
    c.check(f"V1 = reach(RTS) on {compared} models", not rts_mismatch, rts_mismatch[:3])
    c.check("every model cross-checked", compared == len(models), compared)
    finish(c)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
