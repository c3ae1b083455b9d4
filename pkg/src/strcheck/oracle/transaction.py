"""The unreduced transaction system over phased states, the reduction premise checker
and a reference computation of the reduced transaction system's external states."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import networkx as nx

from ..commutativity import VisibilitySets, visibility
from ..model import Model, Phase, PhasedState, State
from ..result import StateSpaceTooLarge
from ..tr import MoverOracle, phase_step, with_phase

PREMISE_BOUND = 10**4

Edges = dict[PhasedState, list[PhasedState]]


@dataclass
class TransactionSystem:
    """Phased states reachable under all interleavings, with per-process edges."""

    nprocs: int
    initial: PhasedState
    nodes: set[PhasedState]
    edges: list[Edges]  # edges[i][s] = i-successors of s
    holds: dict[PhasedState, bool]
    forced: list[set[State]] = field(default_factory=list)

    def in_phase(self, s: PhasedState, i: int, p: Phase) -> bool:
        return s.phases[i] == p


def _build(model: Model, oracle: MoverOracle, vis: VisibilitySets, forced, bound: int):
    nprocs = len(model.processes)
    init = PhasedState(model.initial_state(), (Phase.N,) * nprocs)
    nodes = {init}
    edges: list[Edges] = [dict() for _ in range(nprocs)]
    queue = deque([init])
    while queue:
        s = queue.popleft()
        for i in range(nprocs):
            edges[i].setdefault(s, [])
        for a, q2 in model.successors(s.base):
            i = model.action(a).pid
            p = phase_step(model, s.base, s.phases, a, q2, oracle, vis)
            if p == Phase.L and q2 in forced[i]:
                p = Phase.N
            t = PhasedState(q2, with_phase(s.phases, i, p))
            edges[i][s].append(t)
            if t not in nodes:
                if len(nodes) >= bound:
                    raise StateSpaceTooLarge(f"transaction system exceeds {bound} phased states")
                nodes.add(t)
                queue.append(t)
    return init, nodes, edges


def _stuck_post_roots(nodes, edges: list[Edges], i: int) -> set[State]:
    """Least base of each bottom SCC (over i-edges) lying wholly in L_i."""
    g = nx.DiGraph()
    g.add_nodes_from(n for n in nodes if n.phases[i] == Phase.L)
    for s in list(g.nodes):
        for t in edges[i][s]:
            g.add_edge(s, t)
    out = set()
    for comp in nx.strongly_connected_components(g):
        if any(n not in comp for s in comp for n in g.successors(s)):
            continue
        if all(n.phases[i] == Phase.L for n in comp):
            out.add(min(n.base for n in comp))
    return out


def transaction_system(
    model: Model,
    oracle: MoverOracle,
    vis: VisibilitySets | None = None,
    bound: int = PREMISE_BOUND,
) -> TransactionSystem:
    """Enumerate all phased states; force post-phase bottom SCCs external until stable."""
    vis = vis or visibility(model)
    nprocs = len(model.processes)
    forced: list[set[State]] = [set() for _ in range(nprocs)]
    while True:
        init, nodes, edges = _build(model, oracle, vis, forced, bound)
        grew = False
        for i in range(nprocs):
            new = _stuck_post_roots(nodes, edges, i) - forced[i]
            if new:
                forced[i] |= new
                grew = True
        if not grew:
            break
    holds = {n: model.holds(n.base) for n in nodes}
    return TransactionSystem(nprocs, init, nodes, edges, holds, forced)


# premise ------------------------------------------------------------------


PREMISE_ITEMS = {
    1: "phases partition the states",
    2: "local steps keep remote phases",
    3: "post-phase never steps into the pre-phase",
    4: "steps into the pre-phase right-commute with remote steps",
    5: "steps from the post-phase left-commute with remote steps",
    6: "post-phase states reach an external state locally",
    7: "equivalence up to one process's phase keeps the other phases",
    8: "steps into the pre-phase do not falsify Y",
    9: "steps from the post-phase do not establish Y",
}


@dataclass
class PremiseReport:
    results: dict[int, str | None]  # item -> None if it holds, else a counterexample
    actuation: str | None = None

    @property
    def passed(self) -> bool:
        return all(v is None for v in self.results.values())

    def failed_items(self) -> list[int]:
        return [k for k, v in sorted(self.results.items()) if v is not None]

    def __str__(self) -> str:
        lines = []
        for k, v in sorted(self.results.items()):
            status = "pass" if v is None else f"FAIL ({v})"
            lines.append(f"item {k} [{PREMISE_ITEMS[k]}]: {status}")
        act = "pass" if self.actuation is None else f"FAIL ({self.actuation})"
        lines.append(f"post-phase actuation: {act}")
        return "\n".join(lines)


def _fmt(*states: PhasedState) -> str:
    return " -> ".join(
        f"<{s.base.values},{s.base.pcs},{''.join(p.name for p in s.phases)}>" for s in states
    )


def _same_except(a: PhasedState, b: PhasedState, skip: set[int]) -> bool:
    return a.base == b.base and all(
        x == y for k, (x, y) in enumerate(zip(a.phases, b.phases)) if k not in skip
    )


def check_reduction_premise(ts: TransactionSystem) -> PremiseReport:
    """Check the nine premise items of the reduction theorem by enumeration."""
    P = ts.nprocs
    E = ts.edges
    res: dict[int, str | None] = {k: None for k in PREMISE_ITEMS}

    def fail(item: int, msg: str) -> None:
        if res[item] is None:
            res[item] = msg

    for s in ts.nodes:
        if len(s.phases) != P or any(p not in (Phase.R, Phase.L, Phase.N) for p in s.phases):
            fail(1, _fmt(s))
    for i in range(P):
        for s in ts.nodes:
            for t in E[i].get(s, ()):
                if any(s.phases[j] != t.phases[j] for j in range(P) if j != i):
                    fail(2, _fmt(s, t))
                if s.phases[i] == Phase.L and t.phases[i] == Phase.R:
                    fail(3, _fmt(s, t))
                if t.phases[i] == Phase.R and ts.holds[s] and not ts.holds[t]:
                    fail(8, _fmt(s, t))
                if s.phases[i] == Phase.L and not ts.holds[s] and ts.holds[t]:
                    fail(9, _fmt(s, t))

    for i in range(P):
        for j in range(P):
            if i == j:
                continue
            for s1 in ts.nodes:
                # item 4: s1 ->i s2 in R_i, s2 ->j s3
                for s2 in E[i].get(s1, ()):
                    if s2.phases[i] != Phase.R:
                        continue
                    for s3 in E[j].get(s2, ()):
                        ok = any(
                            s3b.phases[i] == Phase.R and _same_except(s3b, s3, {j})
                            for s4 in E[j].get(s1, ())
                            for s3b in E[i].get(s4, ())
                        )
                        if not ok:
                            fail(4, _fmt(s1, s2, s3))
                # item 5: s1 ->j s2 in L_i, s2 ->i s3
                for s2 in E[j].get(s1, ()):
                    if s2.phases[i] != Phase.L:
                        continue
                    for s3 in E[i].get(s2, ()):
                        ok = any(
                            _same_except(s3b, s3, {i, j})
                            for s4 in E[i].get(s1, ())
                            for s3b in E[j].get(s4, ())
                        )
                        if not ok:
                            fail(5, _fmt(s1, s2, s3))

    for i in range(P):
        good = {s for s in ts.nodes if s.phases[i] == Phase.N}
        preds: dict[PhasedState, list[PhasedState]] = {}
        for s in ts.nodes:
            for t in E[i].get(s, ()):
                preds.setdefault(t, []).append(s)
        work = list(good)
        while work:
            t = work.pop()
            for s in preds.get(t, ()):
                if s not in good:
                    good.add(s)
                    work.append(s)
        for s in ts.nodes:
            if s.phases[i] == Phase.L and s not in good:
                fail(6, _fmt(s))
                break

    # item 7: states equal up to process i's phase agree on every other phase
    by_base: dict[State, list[PhasedState]] = {}
    for s in ts.nodes:
        by_base.setdefault(s.base, []).append(s)
    for group in by_base.values():
        for a in group:
            for b in group:
                for i in range(P):
                    if _same_except(a, b, {i}) and any(
                        a.phases[j] != b.phases[j] for j in range(P) if j != i
                    ):
                        fail(7, _fmt(a, b))

    return PremiseReport(res, _actuation(ts))


def _actuation(ts: TransactionSystem) -> str | None:
    """Post-phase states of the reduced shape (every other process external) lie on a
    local path from an external state."""

    def others_external(s: PhasedState, i: int) -> bool:
        return all(p == Phase.N for j, p in enumerate(s.phases) if j != i)

    for i in range(ts.nprocs):
        reached = {s for s in ts.nodes if s.phases[i] == Phase.N and others_external(s, i)}
        work = list(reached)
        while work:
            s = work.pop()
            for t in ts.edges[i].get(s, ()):
                if t not in reached:
                    reached.add(t)
                    work.append(t)
        for s in ts.nodes:
            if s.phases[i] == Phase.L and others_external(s, i) and s not in reached:
                return _fmt(s)
    return None


def inject_post_to_pre(ts: TransactionSystem, pid: int = 0) -> TransactionSystem:
    """Copy of ``ts`` with a fresh post-phase state stepping into a fresh pre-phase state."""
    target = min(
        (s for s in ts.nodes if s.phases[pid] == Phase.N and ts.holds[s] and s != ts.initial),
        key=lambda s: (s.base, s.phases),
    )
    pcs = tuple(f"injected_{k}" for k in range(len(target.base.pcs)))
    post = PhasedState(State(target.base.values, pcs), with_phase(target.phases, pid, Phase.L))
    pre = PhasedState(
        State(target.base.values, pcs[:-1] + ("injected_pre",)),
        with_phase(target.phases, pid, Phase.R),
    )
    edges = [{s: list(v) for s, v in e.items()} for e in ts.edges]
    for i in range(ts.nprocs):
        edges[i].setdefault(post, [])
        edges[i].setdefault(pre, [])
    edges[pid][post].append(pre)
    edges[pid][pre].append(target)
    holds = dict(ts.holds)
    holds[post] = holds[pre] = True
    return TransactionSystem(
        ts.nprocs, ts.initial, ts.nodes | {post, pre}, edges, holds, ts.forced
    )


# reference reduced system -------------------------------------------------


def reference_rts(ts: TransactionSystem) -> frozenset[State]:
    """External states reachable by whole transactions in the unreduced system."""
    external = lambda s: all(p == Phase.N for p in s.phases)  # noqa: E731
    seen = {ts.initial}
    queue = deque([ts.initial])
    while queue:
        root = queue.popleft()
        for i in range(ts.nprocs):
            inner = {root}
            work = [root]
            while work:
                s = work.pop()
                for t in ts.edges[i].get(s, ()):
                    if t.phases[i] == Phase.N:
                        if external(t) and t not in seen:
                            seen.add(t)
                            queue.append(t)
                    elif t not in inner:
                        inner.add(t)
                        work.append(t)
    return frozenset(s.base for s in seen)
