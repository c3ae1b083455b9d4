"""Stubborn and semi-stubborn sets, and the dynamic mover predicates built on them."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .commutativity import AccordMode, DependencyMatrix, nes_candidates
from .model import Model, State

StubbornHook = Optional[Callable[[State, "StubbornResult"], None]]

EXHAUSTIVE_BRANCH_LIMIT = 1 << 14


@dataclass(frozen=True)
class StubbornResult:
    actions: frozenset[int]
    star: AccordMode
    semi: bool
    nes_witness: dict[int, frozenset[int]] = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class Violation:
    rule: str  # "D0", "D1" or "D2"
    action: int | None
    detail: str

    def __str__(self) -> str:
        return f"{self.rule}: {self.detail}"


def _check_star(star: AccordMode) -> None:
    if star is AccordMode.FULL:
        raise ValueError("stubborn sets use right, left or strong accords")


# closure ------------------------------------------------------------------


def _greedy_closure(
    model: Model, state: State, star: AccordMode, seed: Iterable[int], dep: DependencyMatrix
) -> tuple[set[int], dict[int, frozenset[int]]]:
    en = model.enabled(state)
    members = set(seed)
    witness: dict[int, frozenset[int]] = {}
    work = sorted(members)
    heapq.heapify(work)
    while work:
        a = heapq.heappop(work)
        if a in en:
            new = dep.dependents(star, a) - members
        else:
            cands = nes_candidates(model, state, a)
            best = min(
                cands,
                key=lambda e: (len((e - members) & en), len(e - members), sorted(e)),
            )
            witness[a] = best
            new = best - members
        for b in new:
            members.add(b)
            heapq.heappush(work, b)
    return members, witness


def _exhaustive_closure(
    model: Model, state: State, star: AccordMode, seed: Iterable[int], dep: DependencyMatrix
) -> tuple[set[int], dict[int, frozenset[int]]] | None:
    """Try every NES choice; keep the closure with the fewest enabled actions."""
    en = model.enabled(state)
    best: list = [None]
    budget = [EXHAUSTIVE_BRANCH_LIMIT]

    def score(members):
        return (len(members & en), len(members), sorted(members))

    def search(members: set[int], pending: list[int], witness: dict[int, frozenset[int]]):
        budget[0] -= 1
        if budget[0] < 0:
            return
        if best[0] is not None and len(members & en) > len(best[0][0] & en):
            return
        while pending:
            a = pending.pop()
            if a in en:
                new = dep.dependents(star, a) - members
                members |= new
                pending.extend(new)
                continue
            cands = nes_candidates(model, state, a)
            inside = [e for e in cands if e <= members]
            if inside:
                witness[a] = min(inside, key=sorted)
                continue
            for e in sorted(cands, key=sorted):
                w = dict(witness)
                w[a] = e
                search(members | e, pending + sorted(e - members), w)
            return
        if best[0] is None or score(members) < score(best[0][0]):
            best[0] = (set(members), dict(witness))

    search(set(seed), sorted(set(seed)), {})
    if budget[0] < 0:
        return None
    return best[0]


def closure_stubborn(
    model: Model,
    state: State,
    star: AccordMode,
    seed: Iterable[int],
    dep: DependencyMatrix,
    exhaustive: bool = False,
) -> StubbornResult:
    """Close ``seed`` under D1/D2; an empty seed picks the lowest enabled action."""
    _check_star(star)
    seed = set(seed)
    if not seed:
        en = model.enabled(state)
        if en:
            seed = {min(en)}
    found = _exhaustive_closure(model, state, star, seed, dep) if exhaustive else None
    members, witness = found if found is not None else _greedy_closure(
        model, state, star, seed, dep
    )
    return StubbornResult(frozenset(members), star, False, witness)


# validation ---------------------------------------------------------------


def validate_stubborn(
    model: Model,
    state: State,
    candidate: StubbornResult,
    dep: DependencyMatrix | None = None,
) -> list[Violation]:
    """Re-check D0 (unless semi), D1 and D2 from scratch; empty list means valid."""
    dep = dep or DependencyMatrix(model)
    en = model.enabled(state)
    members = candidate.actions
    out: list[Violation] = []
    if not candidate.semi and en and not members & en:
        out.append(Violation("D0", None, "no enabled action although some exist"))
    for a in sorted(members):
        if a in en:
            for b in sorted(range(len(model.actions))):
                if b not in members and not dep.accords(a, b, candidate.star):
                    out.append(
                        Violation("D1", a, f"{model.action(a)} misses dependent {model.action(b)}")
                    )
        else:
            if not any(e <= members for e in nes_candidates(model, state, a)):
                out.append(Violation("D2", a, f"no NES of disabled {model.action(a)} included"))
    return out


def valid_under_witnesses(
    model: Model,
    state: State,
    members: frozenset[int],
    star: AccordMode,
    semi: bool,
    witness: dict[int, frozenset[int]],
    dep: DependencyMatrix,
) -> bool:
    """Validity where each disabled member must keep its recorded NES."""
    en = model.enabled(state)
    if not semi and en and not members & en:
        return False
    for a in members:
        if a in en:
            if not dep.dependents(star, a) <= members:
                return False
        elif a not in witness or not witness[a] <= members:
            return False
    return True


# deletion -----------------------------------------------------------------


class _Pruner:
    """Greatest valid semi-stubborn subset of a given set (valid sets are union-closed)."""

    def __init__(self, model: Model, state: State, star: AccordMode, dep: DependencyMatrix):
        self.en = model.enabled(state)
        self.deps = {a: dep.dependents(star, a) for a in self.en}
        self.nes = {
            a: nes_candidates(model, state, a)
            for a in range(len(model.actions))
            if a not in self.en
        }

    def ok(self, a: int, members: set[int]) -> bool:
        if a in self.en:
            return self.deps[a] <= members
        return any(e <= members for e in self.nes[a])

    def prune(self, members: set[int]) -> set[int]:
        members = set(members)
        changed = True
        while changed:
            changed = False
            for a in sorted(members):
                if not self.ok(a, members):
                    members.discard(a)
                    changed = True
        return members

    def witness(self, members: set[int]) -> dict[int, frozenset[int]]:
        return {
            a: min((e for e in self.nes[a] if e <= members), key=lambda e: (len(e), sorted(e)))
            for a in members
            if a not in self.en
        }


def deletion_minimal(
    model: Model,
    state: State,
    star: AccordMode,
    semi: bool,
    protected: Iterable[int],
    constraint: Callable[[frozenset[int]], bool] = lambda _b: True,
    dep: DependencyMatrix | None = None,
    prefer: Iterable[int] = (),
) -> StubbornResult | None:
    """Shrink the full action set by single deletions, keeping ``protected``.

    ``prefer`` actions are tried first, then the rest, each group in descending
    action_id order. A deletion is kept when the greatest valid subset of the
    remainder still holds every protected action (and an enabled action unless
    ``semi``).  Returns None if that fails from the start or ``constraint``
    rejects the final set.
    """
    _check_star(star)
    dep = dep or DependencyMatrix(model)
    protected = frozenset(protected)
    pruner = _Pruner(model, state, star, dep)
    en = pruner.en

    def acceptable(members: set[int]) -> bool:
        if not protected <= members:
            return False
        return semi or not en or bool(members & en)

    members = pruner.prune(set(range(len(model.actions))))
    if not acceptable(members):
        return None
    prefer = set(prefer) - protected
    order = sorted(prefer, reverse=True) + sorted(
        set(range(len(model.actions))) - prefer - protected, reverse=True
    )
    for g in order:
        if g not in members:
            continue
        trial = pruner.prune(members - {g})
        if acceptable(trial):
            members = trial
    result = frozenset(members)
    if not constraint(result):
        return None
    return StubbornResult(result, star, semi, pruner.witness(members))


# dynamic movers -----------------------------------------------------------


def lmv_witness(
    model: Model,
    state: State,
    pid: int,
    dep: DependencyMatrix | None = None,
    on_stubborn: StubbornHook = None,
) -> StubbornResult | None:
    """Left semi-stubborn B containing every action of ``pid``, with B ∩ en = A_pid ∩ en."""
    en = model.enabled(state)
    own = model.process_actions(pid)
    target = own & en
    res = deletion_minimal(
        model,
        state,
        AccordMode.LEFT,
        True,
        protected=own,
        constraint=lambda b: b & en == target,
        dep=dep,
        prefer=en - own,
    )
    if res is not None and on_stubborn is not None:
        on_stubborn(state, res)
    return res


def lmv(model: Model, state: State, pid: int, dep: DependencyMatrix | None = None,
        on_stubborn: StubbornHook = None) -> bool:
    return lmv_witness(model, state, pid, dep, on_stubborn) is not None


def rmv_witness(
    model: Model,
    q: State,
    alpha: int,
    q_next: State,
    dep: DependencyMatrix | None = None,
    on_stubborn: StubbornHook = None,
) -> StubbornResult | None:
    """Right semi-stubborn B at ``q`` with B ∩ en(q) = {alpha}, B ∩ en(q_next) ⊆ A_i."""
    en, en_next = model.enabled(q), model.enabled(q_next)
    own = model.process_actions(model.action(alpha).pid)
    res = deletion_minimal(
        model,
        q,
        AccordMode.RIGHT,
        True,
        protected={alpha},
        constraint=lambda b: b & en == {alpha} and b & en_next <= own,
        dep=dep,
        prefer=(en - {alpha}) | (en_next - own),
    )
    if res is not None and on_stubborn is not None:
        on_stubborn(q, res)
    return res


def rmv(model: Model, q: State, alpha: int, q_next: State, dep: DependencyMatrix | None = None,
        on_stubborn: StubbornHook = None) -> bool:
    return rmv_witness(model, q, alpha, q_next, dep, on_stubborn) is not None
