"""Transaction reduction: an outer search over external states and, per process,
an inner search that runs one transaction through its pre (R) and post (L) phases.

The same search runs with dynamic movers (stubborn transaction reduction) or
with a static Lipton classification of actions.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .commutativity import AccordMode, DependencyMatrix, VisibilitySets, static_accords, visibility
from .model import Model, Phase, PhasedState, State
from .result import Budget, ExplorationResult, Limits, build_trace
from .stubborn import StubbornHook, lmv as dyn_lmv, rmv as dyn_rmv

MOVER_KINDS = ("both", "left", "right", "non")


class SelfCheckError(AssertionError):
    """An internal invariant of the transaction search was violated."""


@dataclass
class MoverOracle:
    """Decides rmv/lmv either dynamically (stubborn sets) or from a static table."""

    model: Model
    mode: str  # "dynamic" or "static"
    classification: dict[int, str] | None = None
    dep: DependencyMatrix | None = None
    on_stubborn: StubbornHook = None
    _rmv: dict = field(default_factory=dict, repr=False)
    _lmv: dict = field(default_factory=dict, repr=False)

    @classmethod
    def dynamic(cls, model: Model, dep: DependencyMatrix | None = None,
                on_stubborn: StubbornHook = None) -> "MoverOracle":
        return cls(model, "dynamic", None, dep or DependencyMatrix(model), on_stubborn)

    def rmv(self, q: State, alpha: int, q_next: State) -> bool:
        if self.mode == "static":
            return self.classification[alpha] in ("right", "both")
        key = (q, alpha)
        if key not in self._rmv:
            self._rmv[key] = dyn_rmv(self.model, q, alpha, q_next, self.dep, self.on_stubborn)
        return self._rmv[key]

    def lmv(self, q: State, pid: int) -> bool:
        if self.mode == "static":
            # every action leaving the current location must move left
            loc = q.pcs[pid]
            return all(
                self.classification[a.action_id] in ("left", "both")
                for a in self.model.actions_at(pid, loc)
            )
        key = (q, pid)
        if key not in self._lmv:
            self._lmv[key] = dyn_lmv(self.model, q, pid, self.dep, self.on_stubborn)
        return self._lmv[key]


def classify_movers_static(model: Model, dep: DependencyMatrix | None = None) -> MoverOracle:
    """Lipton classification: right (left) mover iff it accords with every remote action."""
    table = {}
    for a in model.actions:
        remote = [b.action_id for b in model.actions if b.pid != a.pid]
        if dep is not None:
            right = all(dep.accords(a.action_id, b, AccordMode.RIGHT) for b in remote)
            left = all(dep.accords(a.action_id, b, AccordMode.LEFT) for b in remote)
        else:
            right = all(static_accords(model, a.action_id, b, AccordMode.RIGHT) for b in remote)
            left = all(static_accords(model, a.action_id, b, AccordMode.LEFT) for b in remote)
        table[a.action_id] = (
            "both" if right and left else "right" if right else "left" if left else "non"
        )
    return MoverOracle(model, "static", table, dep)


def all_movers_oracle(model: Model) -> MoverOracle:
    """Deliberately wrong oracle calling every action a both-mover (fault injection)."""
    return MoverOracle(model, "static", {a.action_id: "both" for a in model.actions})


def phase_step(
    model: Model,
    q: State,
    h: tuple[Phase, ...],
    alpha: int,
    q_next: State,
    oracle: MoverOracle,
    vis: VisibilitySets,
) -> Phase:
    """New phase of the acting process: R if it may stay in the pre-phase, else L, else N.

    R is withheld when the process reaches a location without outgoing edges:
    its final action has to commit the transaction.
    """
    i = model.action(alpha).pid
    if (
        h[i] != Phase.L
        and alpha not in vis.disabling
        and not model.is_terminal(i, q_next.pcs[i])
        and oracle.rmv(q, alpha, q_next)
    ):
        out = Phase.R
    elif oracle.lmv(q_next, i) and not (
        model.enabled(q_next) & model.process_actions(i) & vis.enabling
    ):
        out = Phase.L
    else:
        out = Phase.N
    if h[i] == Phase.L and out == Phase.R:
        raise SelfCheckError("post-phase stepped back into the pre-phase")
    return out


def with_phase(h: tuple[Phase, ...], i: int, p: Phase) -> tuple[Phase, ...]:
    return h[:i] + (p,) + h[i + 1 :]


def scc_root(members: list[PhasedState], pid: int, bottom: bool) -> PhasedState | None:
    """Representative of a closed inner SCC that must be forced external, if any.

    Only bottom SCCs lying wholly in the post-phase qualify; the representative is
    the member with the least base state so the choice does not depend on search order.
    """
    if not bottom or any(m.phases[pid] != Phase.L for m in members):
        return None
    return min(members, key=lambda m: m.base)


def explore_tr(
    model: Model,
    oracle: MoverOracle,
    vis: VisibilitySets | None = None,
    limits: Limits | None = None,
    subsumption: bool = True,
    stop_on_violation: bool = True,
    strategy: str | None = None,
) -> ExplorationResult:
    """Run the two-level transaction search; see module docstring."""
    vis = vis or visibility(model)
    budget = Budget(limits)
    nproc = len(model.processes)
    all_n = (Phase.N,) * nproc
    q0 = model.initial_state()
    start = PhasedState(q0, all_n)

    queue1: deque[PhasedState] = deque([start])
    in_q1: set[State] = {q0}
    visited1: set[State] = set()
    touched: set[State] = {q0}
    parents: dict[PhasedState, tuple[PhasedState, int]] = {}
    forced: list[set[State]] = [set() for _ in range(nproc)]
    deadlocks: list[State] = []
    counters = {"transitions": 0, "forced": 0, "peak": 1}
    violation = None

    def check(q: State, ps: PhasedState) -> None:
        nonlocal violation
        if violation is None and not model.holds(q):
            violation = [(a, s.base) for a, s in build_trace(parents, ps, start)]

    def propagate(q: State, via: PhasedState | None, action: int | None) -> None:
        if q in visited1 or q in in_q1:
            return
        node = PhasedState(q, all_n)
        if via is not None and node not in parents:
            parents[node] = (via, action)
        in_q1.add(q)
        queue1.append(node)
        counters["peak"] = max(counters["peak"], len(queue1))

    check(q0, start)
    while queue1 and not (violation is not None and stop_on_violation):
        node = queue1.popleft()
        if any(p != Phase.N for p in node.phases):
            raise SelfCheckError("outer queue holds a non-external state")
        q = node.base
        in_q1.discard(q)
        visited1.add(q)
        if model.is_deadlock(q):
            deadlocks.append(q)
        for i in range(nproc):
            _transaction(model, oracle, vis, node, i, subsumption, budget, touched, visited1,
                         in_q1, parents, forced, counters, check, propagate)
            if violation is not None and stop_on_violation:
                break

    return ExplorationResult(
        strategy=strategy or ("str" if oracle.mode == "dynamic" else "tr"),
        model=model.name,
        states_visited=len(touched),
        transitions=counters["transitions"],
        external_states=len(visited1),
        deadlocks=deadlocks,
        violation=violation,
        wall_time=budget.elapsed(),
        peak_queue_size=counters["peak"],
        reached=frozenset(touched),
        notes=[f"forced roots: {counters['forced']}"] if counters["forced"] else [],
        details={"external": frozenset(visited1)},
    )


def _transaction(model, oracle, vis, root, i, subsumption, budget, touched, visited1, in_q1,
                 parents, forced, counters, check, propagate) -> None:
    """Inner search for process ``i`` from the external state ``root`` (Tarjan DFS)."""
    own = model.process_actions(i)
    seen: dict[State, set[Phase]] = {}  # V2: base -> phases of i already visited
    index: dict[PhasedState, int] = {}
    low: dict[PhasedState, int] = {}
    stack: list[PhasedState] = []
    on_stack: set[PhasedState] = set()
    exits: dict[PhasedState, bool] = {}  # has an edge leaving the inner graph
    done: dict[PhasedState, bool] = {}  # finished node -> its SCC can reach an exit
    out_nodes: dict[PhasedState, list[PhasedState]] = {}

    def subsumed(q: State, p: Phase) -> bool:
        if subsumption and (q in visited1 or q in in_q1):
            return True
        got = seen.get(q, ())
        if subsumption:
            return any(g > p for g in got)
        return False

    def successors(node: PhasedState) -> list[tuple[int, State]]:
        q = node.base
        return [(a, model._fire(q, a)) for a in sorted(model.enabled(q) & own)]

    def visit(node: PhasedState) -> None:
        index[node] = low[node] = len(index)
        stack.append(node)
        on_stack.add(node)
        seen.setdefault(node.base, set()).add(node.phases[i])
        exits[node] = False
        out_nodes[node] = []
        frames.append([node, successors(node), 0])

    frames: list[list] = []
    visit(root)
    while frames:
        frame = frames[-1]
        node, succ, pos = frame
        if pos < len(succ):
            frame[2] += 1
            a, q2 = succ[pos]
            counters["transitions"] += 1
            p = phase_step(model, node.base, node.phases, a, q2, oracle, vis)
            if p == Phase.L and q2 in forced[i]:
                p = Phase.N
            nxt = PhasedState(q2, with_phase(node.phases, i, p))
            if any(nxt.phases[j] != node.phases[j] for j in range(len(nxt.phases)) if j != i):
                raise SelfCheckError("inner step changed a remote phase")
            if nxt not in parents and nxt != root:
                parents[nxt] = (node, a)
            if q2 not in touched:
                touched.add(q2)
                budget.check(len(touched))
            check(q2, nxt)
            if p == Phase.N:
                exits[node] = True
                propagate(q2, node, a)
                continue
            if nxt in index:
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
                out_nodes[node].append(nxt)
                continue
            if subsumed(q2, p):
                exits[node] = True
                continue
            out_nodes[node].append(nxt)
            visit(nxt)
            continue
        frames.pop()
        if low[node] == index[node]:
            start = stack.index(node)
            members = stack[start:]
            member_set = set(members)
            bottom = not any(exits[m] for m in members) and all(
                t in member_set for m in members for t in out_nodes[m]
            )
            reaches_exit = any(exits[m] for m in members) or any(
                done.get(t, False) for m in members for t in out_nodes[m] if t not in member_set
            )
            chosen = scc_root(members, i, bottom)
            if chosen is not None:
                forced[i].add(chosen.base)
                counters["forced"] += 1
                via, action = parents[chosen]
                propagate(chosen.base, via, action)
                reaches_exit = True
            if not reaches_exit and any(m.phases[i] == Phase.L for m in members):
                raise SelfCheckError("post-phase states cannot finish their transaction")
            for m in members:
                done[m] = reaches_exit
            del stack[start:]
            on_stack.difference_update(members)
        if frames:
            parent = frames[-1][0]
            low[parent] = min(low[parent], low[node])
