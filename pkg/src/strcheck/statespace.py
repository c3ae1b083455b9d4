"""Exhaustive enumeration of a model's reachable state graph."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .model import Model, State
from .result import StateSpaceTooLarge

DEFAULT_BOUND = 10**6


@dataclass(frozen=True)
class StateGraph:
    """Reachable states in BFS order with labelled successor lists."""

    states: tuple[State, ...]
    succ: dict[State, tuple[tuple[int, State], ...]]

    def __len__(self) -> int:
        return len(self.states)

    def __contains__(self, state: State) -> bool:
        return state in self.succ

    def edges(self):
        for q in self.states:
            for a, t in self.succ[q]:
                yield q, a, t


def _enumerate(model: Model, bound: int) -> StateGraph:
    q0 = model.initial_state()
    succ: dict[State, tuple[tuple[int, State], ...]] = {}
    order = [q0]
    seen = {q0}
    queue = deque([q0])
    while queue:
        q = queue.popleft()
        out = tuple(model.successors(q))
        succ[q] = out
        for _, t in out:
            if t not in seen:
                if len(seen) >= bound:
                    raise StateSpaceTooLarge(f"more than {bound} reachable states")
                seen.add(t)
                order.append(t)
                queue.append(t)
    return StateGraph(tuple(order), succ)


@lru_cache(maxsize=64)
def _cached(model: Model, bound: int) -> StateGraph:
    return _enumerate(model, bound)


def state_graph(model: Model, bound: int = DEFAULT_BOUND) -> StateGraph:
    """Reachable graph of ``model``; raises StateSpaceTooLarge past ``bound`` states."""
    return _cached(model, bound)
