"""Seeded generator of small well-formed models for differential testing."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from ..expr import COMPARE
from ..gcl import parse
from ..model import Model
from ..result import StateSpaceTooLarge
from ..statespace import state_graph


@dataclass(frozen=True)
class RandomParams:
    max_procs: int = 3
    max_actions: int = 4
    max_vars: int = 3
    max_domain: int = 3
    locks: bool = True
    max_states: int = 10**4


def _cmp(rng: random.Random, names: list[str], dom: dict[str, int]) -> tuple[str, Callable]:
    """A comparison ``v op c`` as text plus its evaluator over a valuation."""
    v = rng.choice(names)
    op = rng.choice(["=", "!=", "<", ">="])
    c = rng.randrange(dom[v])
    return f"{v} {op} {c}", lambda env: COMPARE[op](env[v], c)


def _assign(rng: random.Random, v: str, names: list[str], dom: dict[str, int]) -> str:
    if rng.random() < 0.5:
        return f"{v} := {rng.randrange(dom[v])};"
    w = rng.choice(names)
    return f"{v} := ({w} + {rng.randrange(1, dom[v] + 1)}) % {dom[v]};"


def _source(rng: random.Random, seed: int, p: RandomParams) -> str:
    nvars = rng.randint(1, p.max_vars)
    names = [f"v{k}" for k in range(nvars)]
    dom = {v: rng.randint(2, p.max_domain) for v in names}
    nprocs = rng.randint(1, p.max_procs)
    use_lock = p.locks and nprocs > 1 and rng.random() < 0.4
    init = {v: rng.randrange(dom[v]) for v in names}
    lines = [f"model random_{seed};"]
    lines += [f"var {v} : int[0,{dom[v] - 1}] = {init[v]};" for v in names]
    if use_lock:
        lines.append(f"var m : int[0,{nprocs}] = 0;")
    prop = "true"
    if rng.random() < 0.7:
        # prefer properties that hold initially so violations need actual steps
        for _ in range(4):
            prop, holds = _cmp(rng, names, dom)
            if rng.random() < 0.3:
                other, holds2 = _cmp(rng, names, dom)
                prop = f"{prop} || {other}"
                holds = (lambda f, g: lambda env: f(env) or g(env))(holds, holds2)
            if holds(init):
                break
    lines.append(f"property {prop};")
    for pid in range(nprocs):
        nedges = rng.randint(1, p.max_actions)
        locking = use_lock and nedges >= 2 and rng.random() < 0.7
        lines.append(f"process P{pid} {{")
        created = 1
        last = 0
        for e in range(nedges):
            if locking and e == 0:
                src, body = 0, "true -> acquire(m);"
            elif locking and e == nedges - 1:
                src, body = last, "true -> release(m);"
            else:
                src = last if rng.random() < 0.75 else rng.randrange(created)
                guard = "true" if rng.random() < 0.5 else _cmp(rng, names, dom)[0]
                targets = rng.sample(names, rng.randint(1, min(2, len(names))))
                body = f"{guard} -> " + " ".join(_assign(rng, v, names, dom) for v in targets)
            if rng.random() < 0.15 and not (locking and e in (0, nedges - 1)):
                dst = rng.randrange(created)
            else:
                dst = created
                created += 1
            lines.append(f"  l{src}: {body} goto l{dst};")
            if dst == created - 1:
                last = dst
        lines.append("}")
    return "\n".join(lines) + "\n"


def random_source(seed: int, params: RandomParams | None = None) -> str:
    """GCL text of the model for ``seed``; deterministic, finite, within the state bound."""
    params = params or RandomParams()
    attempt = 0
    while True:
        rng = random.Random(f"{seed}:{attempt}")
        text = _source(rng, seed, params)
        try:
            state_graph(parse(text), params.max_states)
        except StateSpaceTooLarge:
            attempt += 1
            continue
        return text


def random_model(seed: int, params: RandomParams | None = None) -> Model:
    return parse(random_source(seed, params), f"<random {seed}>")
