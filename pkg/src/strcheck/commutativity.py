"""Commutativity relations, necessary enabling sets and visibility.

All relations read ``alpha ; beta`` as "alpha then beta".  ``alpha`` right-commutes
with ``beta`` when every execution ``alpha ; beta`` can be replaced by
``beta ; alpha`` with the same end state; left-commutation is the converse.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

from .expr import free_vars
from .model import Action, HintKind, Model, State
from .statespace import DEFAULT_BOUND, StateGraph, state_graph


class AccordMode(enum.Enum):
    RIGHT = "right"
    LEFT = "left"
    STRONG = "strong"
    FULL = "full"


class NotDisabled(Exception):
    pass


# exact relations ----------------------------------------------------------


def _after(model: Model, q: State, a: int) -> State | None:
    return model._fire(q, a) if model.is_enabled(q, a) else None


def _right(model: Model, states: Iterable[State], a: int, b: int) -> bool:
    for q in states:
        q2 = _after(model, q, a)
        if q2 is None:
            continue
        q3 = _after(model, q2, b)
        if q3 is None:
            continue
        q4 = _after(model, q, b)
        if q4 is None or _after(model, q4, a) != q3:
            return False
    return True


def _strong(model: Model, states: Iterable[State], a: int, b: int) -> bool:
    # diamond: co-enabled actions stay enabled after each other and meet
    for q in states:
        qa, qb = _after(model, q, a), _after(model, q, b)
        if qa is None or qb is None:
            continue
        qab, qba = _after(model, qa, b), _after(model, qb, a)
        if qab is None or qba is None or qab != qba:
            return False
    return True


def exact_commutes(
    model: Model,
    alpha: int,
    beta: int,
    mode: AccordMode,
    bound: int = DEFAULT_BOUND,
    graph: StateGraph | None = None,
) -> bool:
    """Decide the relation over every reachable state."""
    if model.action(alpha).pid == model.action(beta).pid:
        return False
    states = (graph or state_graph(model, bound)).states
    if mode is AccordMode.RIGHT:
        return _right(model, states, alpha, beta)
    if mode is AccordMode.LEFT:
        return _right(model, states, beta, alpha)
    if mode is AccordMode.FULL:
        return _right(model, states, alpha, beta) and _right(model, states, beta, alpha)
    return _strong(model, states, alpha, beta)


def relational_commutes(
    model: Model,
    alpha: int,
    beta: int,
    mode: AccordMode,
    bound: int = DEFAULT_BOUND,
) -> bool:
    """Same relations, computed as compositions of explicit pair sets."""
    if model.action(alpha).pid == model.action(beta).pid:
        return False
    graph = state_graph(model, bound)
    rel: dict[int, set[tuple[State, State]]] = {alpha: set(), beta: set()}
    for q, a, t in graph.edges():
        if a in rel:
            rel[a].add((q, t))
    # the reachable graph is closed under steps, so these pairs are all of T_a
    def compose(r1, r2):
        by_src: dict[State, set[State]] = {}
        for x, y in r2:
            by_src.setdefault(x, set()).add(y)
        return {(x, z) for x, y in r1 for z in by_src.get(y, ())}

    ab = compose(rel[alpha], rel[beta])
    ba = compose(rel[beta], rel[alpha])
    if mode is AccordMode.RIGHT:
        return ab <= ba
    if mode is AccordMode.LEFT:
        return ba <= ab
    if mode is AccordMode.FULL:
        return ab == ba
    dom = {x for x, _ in rel[alpha]} & {x for x, _ in rel[beta]}
    ab_c = {p for p in ab if p[0] in dom}
    ba_c = {p for p in ba if p[0] in dom}
    defined = {x for x, _ in ab_c} == dom == {x for x, _ in ba_c}
    return defined and ab_c == ba_c


# static approximation -----------------------------------------------------


def _disjoint(a: Action, b: Action) -> bool:
    return not (a.writes & (b.reads | b.writes)) and not (b.writes & a.reads)


def _lock_op(a: Action, var: str) -> bool:
    return a.hint.kind in (HintKind.ACQUIRE, HintKind.RELEASE) and a.hint.var == var


def static_accords(model: Model, alpha: int, beta: int, mode: AccordMode) -> bool:
    """Sound syntactic under-approximation of ``exact_commutes``."""
    a, b = model.action(alpha), model.action(beta)
    if a.pid == b.pid:
        return False
    if _disjoint(a, b):
        return True
    var = a.hint.var
    if var is None or not _lock_op(b, var):
        return False
    if mode is AccordMode.RIGHT:
        return a.hint.kind is HintKind.ACQUIRE
    if mode is AccordMode.LEFT:
        return a.hint.kind is HintKind.RELEASE
    return False


class DependencyMatrix:
    """For each mode and action, the actions it does not accord with."""

    def __init__(self, model: Model, exact: bool = False, bound: int = DEFAULT_BOUND):
        self.model = model
        self.exact = exact
        graph = state_graph(model, bound) if exact else None
        ids = range(len(model.actions))
        self._dep: dict[AccordMode, list[frozenset[int]]] = {}
        for mode in (AccordMode.RIGHT, AccordMode.LEFT, AccordMode.STRONG, AccordMode.FULL):
            rows = []
            for a in ids:
                if exact:
                    row = [b for b in ids if not exact_commutes(model, a, b, mode, graph=graph)]
                else:
                    row = [b for b in ids if not static_accords(model, a, b, mode)]
                rows.append(frozenset(row))
            self._dep[mode] = rows

    def accords(self, alpha: int, beta: int, mode: AccordMode) -> bool:
        return beta not in self._dep[mode][alpha]

    def dependents(self, mode: AccordMode, alpha: int) -> frozenset[int]:
        """Actions ``beta`` with which ``alpha`` does not ``mode``-commute."""
        return self._dep[mode][alpha]


# necessary enabling sets --------------------------------------------------


def nes_candidates(model: Model, state: State, alpha: int) -> list[frozenset[int]]:
    """NES candidates for a disabled action, one per cause of disabledness."""
    a = model.action(alpha)
    pc_active = state.pcs[a.pid] == a.source_loc
    if pc_active and model.is_enabled(state, alpha):
        raise NotDisabled(f"{a} is enabled")
    out = []
    guard_vars = free_vars(a.guard)
    guard_false = not model._guard_fns[alpha](state.values)
    if guard_false:
        out.append(frozenset(b.action_id for b in model.actions if b.writes & guard_vars))
    if not pc_active:
        out.append(
            frozenset(
                b.action_id for b in model.processes[a.pid].actions if b.target_loc == a.source_loc
            )
        )
    return out


# visibility ---------------------------------------------------------------


@dataclass(frozen=True)
class VisibilitySets:
    enabling: frozenset[int]  # may turn Y from false to true
    disabling: frozenset[int]  # may turn Y from true to false

    @property
    def visible(self) -> frozenset[int]:
        return self.enabling | self.disabling


def visibility(model: Model, exact: bool = False, bound: int = DEFAULT_BOUND) -> VisibilitySets:
    if not exact:
        vis = frozenset(a.action_id for a in model.actions if a.writes & model.y_reads)
        return VisibilitySets(vis, vis)
    enabling, disabling = set(), set()
    graph = state_graph(model, bound)
    for q, a, t in graph.edges():
        before, after = model.holds(q), model.holds(t)
        if after and not before:
            enabling.add(a)
        elif before and not after:
            disabling.add(a)
    return VisibilitySets(frozenset(enabling), frozenset(disabling))
