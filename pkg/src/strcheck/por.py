"""Stubborn-set partial-order reduction with the ignoring and visibility provisos."""

from __future__ import annotations

from .commutativity import AccordMode, DependencyMatrix, VisibilitySets, visibility
from .model import Model, State
from .result import Budget, ExplorationResult, Limits, build_trace
from .stubborn import StubbornHook, StubbornResult, closure_stubborn


def choose_stubborn(
    model: Model,
    state: State,
    dep: DependencyMatrix,
    vis: VisibilitySets,
    exhaustive: bool = False,
) -> StubbornResult | None:
    """Strong stubborn set with the fewest enabled actions over all enabled seeds."""
    en = model.enabled(state)
    best: StubbornResult | None = None
    for seed in sorted(en):
        res = closure_stubborn(model, state, AccordMode.STRONG, {seed}, dep, exhaustive)
        if res.actions & en & vis.visible and not vis.visible <= res.actions:
            res = closure_stubborn(
                model, state, AccordMode.STRONG, res.actions | vis.visible, dep, exhaustive
            )
        if best is None or len(res.actions & en) < len(best.actions & en):
            best = res
    return best


def explore_por(
    model: Model,
    dep: DependencyMatrix | None = None,
    vis: VisibilitySets | None = None,
    limits: Limits | None = None,
    stop_on_violation: bool = True,
    exhaustive_nes: bool = False,
    on_stubborn: StubbornHook = None,
) -> ExplorationResult:
    """DFS over ``por(q) = en(q) ∩ B`` with on-the-fly Tarjan for the ignoring proviso.

    ``details["graph"]`` maps each state to its reduced successors and
    ``details["por"]`` to its selected actions, for post-hoc checks.
    """
    dep = dep or DependencyMatrix(model)
    vis = vis or visibility(model)
    budget = Budget(limits)
    q0 = model.initial_state()

    index: dict[State, int] = {}
    low: dict[State, int] = {}
    on_stack: set[State] = set()
    tarjan: list[State] = []
    graph: dict[State, list[State]] = {}
    selected: dict[State, frozenset[int]] = {}
    enabled: dict[State, frozenset[int]] = {}
    parents: dict[State, tuple[State, int]] = {}
    frames: list[list] = []  # [state, successors, position]
    deadlocks: list[State] = []
    transitions = 0
    expansions = 0
    peak = 0
    violation = None

    def visit(q: State) -> None:
        nonlocal violation
        budget.check(len(index) + 1)
        index[q] = low[q] = len(index)
        tarjan.append(q)
        on_stack.add(q)
        en = model.enabled(q)
        enabled[q] = en
        graph[q] = []
        if not model.holds(q) and violation is None:
            violation = build_trace(parents, q, q0)
        if not en:
            if model.is_deadlock(q):
                deadlocks.append(q)
            selected[q] = frozenset()
            frames.append([q, [], 0])
            return
        res = choose_stubborn(model, q, dep, vis, exhaustive_nes)
        if on_stubborn is not None:
            on_stubborn(q, res)
        por = res.actions & en
        selected[q] = por
        frames.append([q, [(a, model._fire(q, a)) for a in sorted(por)], 0])

    visit(q0)
    while frames and not (violation is not None and stop_on_violation):
        peak = max(peak, len(frames))
        frame = frames[-1]
        q, succ, pos = frame
        if pos < len(succ):
            frame[2] += 1
            a, t = succ[pos]
            transitions += 1
            graph[q].append(t)
            if t not in index:
                parents[t] = (q, a)
                visit(t)
            elif t in on_stack:
                low[q] = min(low[q], index[t])
            continue
        if low[q] == index[q]:
            start = len(tarjan) - 1
            while tarjan[start] != q:
                start -= 1
            members = tarjan[start:]
            member_set = set(members)
            bottom = all(t in member_set for m in members for t in graph[m])
            if bottom:
                ignored = set().union(*(enabled[m] for m in members)) - set().union(
                    *(selected[m] for m in members)
                )
                if ignored:
                    extra = enabled[q] - selected[q]
                    if not extra:
                        raise AssertionError("ignoring proviso cannot be repaired at SCC root")
                    selected[q] = enabled[q]
                    succ.extend((a, model._fire(q, a)) for a in sorted(extra))
                    expansions += 1
                    continue
            del tarjan[start:]
            on_stack.difference_update(members)
        frames.pop()
        if frames:
            p = frames[-1][0]
            low[p] = min(low[p], low[q])

    notes = [f"root expansions: {expansions}"] if expansions else []
    return ExplorationResult(
        strategy="spor",
        model=model.name,
        states_visited=len(index),
        transitions=transitions,
        external_states=len(index),
        deadlocks=deadlocks,
        violation=violation,
        wall_time=budget.elapsed(),
        peak_queue_size=peak,
        reached=frozenset(index),
        notes=notes,
        details={"graph": graph, "por": selected, "enabled": enabled},
    )


def ignoring_violations(result: ExplorationResult) -> list[tuple[State, int]]:
    """Literal ignoring check: each enabled action is selected somewhere downstream."""
    graph: dict[State, list[State]] = result.details["graph"]
    por: dict[State, frozenset[int]] = result.details["por"]
    enabled: dict[State, frozenset[int]] = result.details["enabled"]
    preds: dict[State, list[State]] = {q: [] for q in graph}
    for q, succ in graph.items():
        for t in succ:
            preds[t].append(q)
    actions = set().union(*enabled.values()) if enabled else set()
    out = []
    for a in sorted(actions):
        good = {q for q, sel in por.items() if a in sel}
        work = list(good)
        while work:
            t = work.pop()
            for p in preds[t]:
                if p not in good:
                    good.add(p)
                    work.append(p)
        out.extend((q, a) for q, en in enabled.items() if a in en and q not in good)
    return out
