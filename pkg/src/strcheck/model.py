"""Concurrent transition systems: variables, processes, actions, states."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .expr import (
    TRUE,
    Binary,
    Const,
    Expr,
    ExprTypeError,
    Var,
    compile_expr,
    conj,
    evaluate as eval_expr,
    free_vars,
    render,
    type_of,
)


class ModelError(Exception):
    """A model is ill-formed."""


class UndeclaredVariable(ModelError):
    pass


class DomainOverflow(ModelError):
    pass


class ActionDisabled(Exception):
    pass


@dataclass(frozen=True)
class VarDecl:
    name: str
    lo: int
    hi: int
    init: int

    def contains(self, value: int) -> bool:
        return self.lo <= value <= self.hi


class HintKind(enum.Enum):
    PLAIN = "plain"
    ACQUIRE = "acquire"
    RELEASE = "release"


@dataclass(frozen=True)
class Hint:
    kind: HintKind = HintKind.PLAIN
    var: str | None = None

    def __str__(self) -> str:
        return self.kind.value if self.var is None else f"{self.kind.value}({self.var})"


PLAIN = Hint()


@dataclass(frozen=True)
class Assign:
    var: str
    expr: Expr


@dataclass(frozen=True)
class Acquire:
    var: str


@dataclass(frozen=True)
class Release:
    var: str


Stmt = Union[Assign, Acquire, Release]


@dataclass(frozen=True)
class Edge:
    """One CFG edge as written in the source: ``src: guard -> stmts goto dst;``."""

    source: str
    guard: Expr
    stmts: tuple[Stmt, ...]
    target: str


@dataclass(frozen=True)
class Action:
    """A desugared guarded command belonging to one process."""

    action_id: int
    pid: int
    source_loc: str
    target_loc: str
    guard: Expr  # includes the lock conditions introduced by desugaring
    updates: tuple[tuple[str, Expr], ...]
    hint: Hint
    edge: Edge
    reads: frozenset[str]
    writes: frozenset[str]

    @property
    def label(self) -> str:
        parts = []
        for s in self.edge.stmts:
            if isinstance(s, Assign):
                parts.append(f"{s.var}:={render(s.expr)}")
            else:
                parts.append(f"{type(s).__name__.lower()}({s.var})")
        body = ";".join(parts) or "skip"
        return f"{body}@{self.pid}"

    def __str__(self) -> str:
        return f"#{self.action_id} {self.label}"


@dataclass(frozen=True)
class Process:
    pid: int
    name: str
    initial: str
    locations: tuple[str, ...]
    actions: tuple[Action, ...]

    @property
    def action_ids(self) -> frozenset[int]:
        return frozenset(a.action_id for a in self.actions)


@dataclass(frozen=True, order=True)
class State:
    """Variable values then program counters, both in declaration order."""

    values: tuple[int, ...]
    pcs: tuple[str, ...]


class Phase(enum.IntEnum):
    """Transaction phase of one process; the int order is R < L < N."""

    R = 0
    L = 1
    N = 2

    def __str__(self) -> str:
        return self.name


def dominated(h: Sequence[Phase], g: Sequence[Phase]) -> bool:
    """Pointwise ``h ⊑ g``."""
    return all(a <= b for a, b in zip(h, g))


@dataclass(frozen=True, order=True)
class PhasedState:
    base: State
    phases: tuple[Phase, ...]


@dataclass(frozen=True)
class ProcessSource:
    name: str
    edges: tuple[Edge, ...]


def _desugar(edge: Edge, pid: int) -> tuple[Expr, tuple[tuple[str, Expr], ...], Hint]:
    guards: list[Expr] = [edge.guard]
    updates: list[tuple[str, Expr]] = []
    for s in edge.stmts:
        if isinstance(s, Assign):
            updates.append((s.var, s.expr))
        elif isinstance(s, Acquire):
            guards.append(Binary("=", Var(s.var), Const(0)))
            updates.append((s.var, Const(pid + 1)))
        else:
            guards.append(Binary("=", Var(s.var), Const(pid + 1)))
            updates.append((s.var, Const(0)))
    hint = PLAIN
    if edge.guard == TRUE and len(edge.stmts) == 1 and not isinstance(edge.stmts[0], Assign):
        s = edge.stmts[0]
        hint = Hint(HintKind.ACQUIRE if isinstance(s, Acquire) else HintKind.RELEASE, s.var)
    return conj(*guards), tuple(updates), hint


@dataclass(frozen=True, eq=False)
class Model:
    name: str
    vars: tuple[VarDecl, ...]
    processes: tuple[Process, ...]
    property_y: Expr
    sources: tuple[ProcessSource, ...] = field(repr=False)

    def __post_init__(self) -> None:
        index = {v.name: i for i, v in enumerate(self.vars)}
        object.__setattr__(self, "_index", index)
        self._validate()
        actions = tuple(a for p in self.processes for a in p.actions)
        object.__setattr__(self, "actions", actions)
        by_loc: list[dict[str, list[Action]]] = []
        for p in self.processes:
            table: dict[str, list[Action]] = {}
            for a in p.actions:
                table.setdefault(a.source_loc, []).append(a)
            by_loc.append(table)
        object.__setattr__(self, "_by_loc", by_loc)
        object.__setattr__(self, "_guard_fns", [compile_expr(a.guard, index) for a in actions])
        object.__setattr__(
            self,
            "_update_fns",
            [tuple((index[v], compile_expr(e, index)) for v, e in a.updates) for a in actions],
        )
        object.__setattr__(self, "_y_fn", compile_expr(self.property_y, index))
        object.__setattr__(self, "y_reads", free_vars(self.property_y))

    def _key(self) -> tuple:
        return (self.name, self.vars, self.property_y, self.sources)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Model) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    # construction -----------------------------------------------------

    @classmethod
    def build(
        cls,
        name: str,
        vars: Iterable[VarDecl],
        property_y: Expr,
        processes: Iterable[ProcessSource],
    ) -> "Model":
        """Elaborate source-level processes into numbered actions."""
        vars = tuple(vars)
        sources = tuple(processes)
        procs = []
        next_id = 0
        for pid, src in enumerate(sources):
            if not src.edges:
                raise ModelError(f"process {src.name} has no edges")
            locs: list[str] = []
            acts = []
            for e in src.edges:
                for loc in (e.source, e.target):
                    if loc not in locs:
                        locs.append(loc)
                guard, updates, hint = _desugar(e, pid)
                reads = free_vars(guard).union(*(free_vars(x) for _, x in updates))
                writes = frozenset(v for v, _ in updates)
                acts.append(
                    Action(next_id, pid, e.source, e.target, guard, updates, hint, e, reads, writes)
                )
                next_id += 1
            procs.append(Process(pid, src.name, src.edges[0].source, tuple(locs), tuple(acts)))
        return cls(name, vars, tuple(procs), property_y, sources)

    def with_property(self, property_y: Expr) -> "Model":
        return Model.build(self.name, self.vars, property_y, self.sources)

    def without_actions(self, drop: Iterable[int]) -> "Model":
        """Copy with some actions removed (used for counterexample shrinking)."""
        drop = set(drop)
        sources = []
        for p in self.processes:
            edges = tuple(a.edge for a in p.actions if a.action_id not in drop)
            if edges:
                sources.append(ProcessSource(p.name, edges))
        return Model.build(self.name, self.vars, self.property_y, sources)

    def _validate(self) -> None:
        names = [v.name for v in self.vars]
        if len(set(names)) != len(names):
            raise ModelError("duplicate variable name")
        pnames = [p.name for p in self.processes]
        if len(set(pnames)) != len(pnames):
            raise ModelError("duplicate process name")
        for v in self.vars:
            if v.lo > v.hi or not v.contains(v.init):
                raise DomainOverflow(f"initial value of {v.name} outside [{v.lo},{v.hi}]")
        declared = set(names)
        self._check_expr(self.property_y, declared, "bool", "property")
        for p in self.processes:
            for a in p.actions:
                if a.pid != p.pid:
                    raise ModelError("action assigned to wrong process")
                self._check_expr(a.edge.guard, declared, "bool", f"guard of {a}")
                seen: set[str] = set()
                for v, e in a.updates:
                    if v not in declared:
                        raise UndeclaredVariable(f"undeclared variable {v!r} in {a}")
                    if v in seen:
                        raise ModelError(f"variable {v!r} assigned twice in {a}")
                    seen.add(v)
                    self._check_expr(e, declared, "int", f"update of {v}")
                for s in a.edge.stmts:
                    if isinstance(s, Assign):
                        continue
                    if s.var not in declared:
                        raise UndeclaredVariable(f"undeclared variable {s.var!r} in {a}")
                    decl = self.vars[names.index(s.var)]
                    if decl.lo > 0 or decl.hi < len(self.processes):
                        raise DomainOverflow(
                            f"lock {s.var} needs domain covering 0..{len(self.processes)}"
                        )

    @staticmethod
    def _check_expr(e: Expr, declared: set[str], want: str, where: str) -> None:
        missing = free_vars(e) - declared
        if missing:
            raise UndeclaredVariable(f"undeclared variable {sorted(missing)[0]!r} in {where}")
        try:
            got = type_of(e)
        except ExprTypeError as err:
            raise ModelError(f"{where}: {err}") from None
        if got != want:
            raise ModelError(f"{where}: expected {want} expression")

    # semantics ----------------------------------------------------------

    @property
    def var_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.vars)

    def var_index(self, name: str) -> int:
        return self._index[name]

    def initial_state(self) -> State:
        return State(tuple(v.init for v in self.vars), tuple(p.initial for p in self.processes))

    def action(self, action_id: int) -> Action:
        return self.actions[action_id]

    def process_actions(self, pid: int) -> frozenset[int]:
        return self.processes[pid].action_ids

    def actions_at(self, pid: int, loc: str) -> list[Action]:
        return self._by_loc[pid].get(loc, [])

    def is_terminal(self, pid: int, loc: str) -> bool:
        return loc not in self._by_loc[pid]

    def is_deadlock(self, state: State) -> bool:
        """Nothing enabled although some process has not reached a terminal location."""
        return not self.enabled(state) and not all(
            self.is_terminal(pid, loc) for pid, loc in enumerate(state.pcs)
        )

    def is_enabled(self, state: State, action_id: int) -> bool:
        a = self.actions[action_id]
        return state.pcs[a.pid] == a.source_loc and bool(self._guard_fns[action_id](state.values))

    def enabled(self, state: State) -> frozenset[int]:
        out = []
        for pid, loc in enumerate(state.pcs):
            for a in self._by_loc[pid].get(loc, ()):
                if self._guard_fns[a.action_id](state.values):
                    out.append(a.action_id)
        return frozenset(out)

    def apply(self, state: State, action_id: int) -> State:
        if not self.is_enabled(state, action_id):
            raise ActionDisabled(f"{self.actions[action_id]} is not enabled")
        return self._fire(state, action_id)

    def _fire(self, state: State, action_id: int) -> State:
        a = self.actions[action_id]
        vals = list(state.values)
        for i, fn in self._update_fns[action_id]:
            v = fn(vals)
            decl = self.vars[i]
            if not decl.lo <= v <= decl.hi:
                raise DomainOverflow(f"{a}: {decl.name} := {v} leaves [{decl.lo},{decl.hi}]")
            vals[i] = v
        pcs = state.pcs
        if a.source_loc != a.target_loc:
            pcs = pcs[: a.pid] + (a.target_loc,) + pcs[a.pid + 1 :]
        return State(tuple(vals), pcs)

    def successors(self, state: State) -> list[tuple[int, State]]:
        return [(a, self._fire(state, a)) for a in sorted(self.enabled(state))]

    def holds(self, state: State) -> bool:
        """Whether the invariant Y holds at ``state``."""
        return bool(self._y_fn(state.values))

    def env(self, state: State) -> dict[str, int]:
        return dict(zip(self.var_names, state.values))

    def describe(self, state: State) -> str:
        vals = ",".join(f"{n}={v}" for n, v in zip(self.var_names, state.values))
        return f"[{vals} | {','.join(state.pcs)}]"


def evaluate(model: Model, expr: Expr, state: State):
    return eval_expr(expr, model.env(state))


def enabled(model: Model, state: State) -> frozenset[int]:
    return model.enabled(state)


def apply(model: Model, state: State, action_id: int) -> State:
    return model.apply(state, action_id)


def successors(model: Model, state: State) -> list[tuple[int, State]]:
    return model.successors(state)
