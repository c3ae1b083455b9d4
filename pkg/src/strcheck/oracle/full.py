"""Unreduced breadth-first exploration: the ground truth for every comparison."""

from __future__ import annotations

from collections import deque

from ..model import Model, State
from ..result import Budget, ExplorationResult, Limits, build_trace


def explore_full(model: Model, limits: Limits | None = None) -> ExplorationResult:
    """Every reachable state, every deadlock and the first (shortest) violation."""
    budget = Budget(limits)
    q0 = model.initial_state()
    parents: dict[State, tuple[State, int]] = {}
    seen = {q0}
    queue = deque([q0])
    deadlocks: list[State] = []
    violation = None
    transitions = 0
    peak = 1
    while queue:
        q = queue.popleft()
        if violation is None and not model.holds(q):
            violation = build_trace(parents, q, q0)
        succ = model.successors(q)
        if not succ and model.is_deadlock(q):
            deadlocks.append(q)
        for a, t in succ:
            transitions += 1
            if t not in seen:
                seen.add(t)
                budget.check(len(seen))
                parents[t] = (q, a)
                queue.append(t)
        peak = max(peak, len(queue))
    return ExplorationResult(
        strategy="none",
        model=model.name,
        states_visited=len(seen),
        transitions=transitions,
        external_states=len(seen),
        deadlocks=deadlocks,
        violation=violation,
        wall_time=budget.elapsed(),
        peak_queue_size=peak,
        reached=frozenset(seen),
    )
