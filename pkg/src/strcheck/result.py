"""Exploration results and resource limits shared by all explorers."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from .model import State

Trace = list[tuple[Optional[int], State]]  # first entry has no action


class ResourceBoundExceeded(Exception):
    """A state or time limit was hit; not a verification verdict."""


class StateSpaceTooLarge(ResourceBoundExceeded):
    pass


@dataclass(frozen=True)
class Limits:
    max_states: int | None = None
    timeout_ms: int | None = None


class Budget:
    """Tracks states and elapsed time against ``Limits``."""

    def __init__(self, limits: Limits | None):
        self.limits = limits or Limits()
        self.start = time.perf_counter()
        self._deadline = (
            None
            if self.limits.timeout_ms is None
            else self.start + self.limits.timeout_ms / 1000.0
        )
        self._ticks = 0

    def check(self, states: int) -> None:
        if self.limits.max_states is not None and states > self.limits.max_states:
            raise ResourceBoundExceeded(f"state limit {self.limits.max_states} exceeded")
        self._ticks += 1
        if self._deadline is not None and self._ticks % 64 == 0:
            if time.perf_counter() > self._deadline:
                raise ResourceBoundExceeded(f"time limit {self.limits.timeout_ms} ms exceeded")

    def elapsed(self) -> float:
        return time.perf_counter() - self.start


@dataclass
class ExplorationResult:
    strategy: str
    model: str
    states_visited: int
    transitions: int
    external_states: int
    deadlocks: list[State] = field(default_factory=list)
    violation: Trace | None = None
    wall_time: float = 0.0
    peak_queue_size: int = 0
    reached: frozenset[State] = frozenset()
    notes: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict, repr=False)

    @property
    def violated(self) -> bool:
        return self.violation is not None

    @property
    def deadlock_count(self) -> int:
        return len(self.deadlocks)

    def summary(self) -> dict:
        return {
            "model": self.model,
            "strategy": self.strategy,
            "states": self.states_visited,
            "transitions": self.transitions,
            "external_states": self.external_states,
            "deadlocks": self.deadlock_count,
            "violated": self.violated,
            "time_ms": round(self.wall_time * 1000.0, 3),
        }


def build_trace(parents: dict, target, initial) -> Trace:
    """Follow ``parents[s] = (prev, action)`` back to ``initial``."""
    steps = []
    cur = target
    while cur != initial:
        prev, action = parents[cur]
        steps.append((action, cur))
        cur = prev
    steps.append((None, initial))
    steps.reverse()
    return steps
