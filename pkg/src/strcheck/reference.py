"""Built-in example models."""

from __future__ import annotations

import re

from .gcl import parse

PROG1 = """\
model prog1;
var a : int[0,2] = 0;
var b : int[0,2] = 0;
var x : int[0,2] = 0;
var y : int[0,2] = 0;
property true;
process P0 {
  l0: true -> a := 0; goto l1;
  l1: true -> b := 2; goto l2;
}
process P1 {
  l0: true -> x := 1; goto l1;
  l1: true -> y := 2; goto l2;
}
"""

# prog1 behind a parallel initialization; the other threads wait for it
PROG2 = """\
model prog2;
var a : int[0,2] = 0;
var b : int[0,2] = 0;
var x : int[0,2] = 0;
var y : int[0,2] = 0;
var init_done : int[0,1] = 0;
property true;
process Init {
  l0: true -> a := 0; b := 0; x := 0; y := 0; init_done := 1; goto l1;
}
process P0 {
  l0: init_done = 1 -> a := 0; goto l1;
  l1: true -> b := 2; goto l2;
}
process P1 {
  l0: init_done = 1 -> x := 1; goto l1;
  l1: true -> y := 2; goto l2;
}
"""

LOCKPAIR = """\
model lockpair;
var m : int[0,2] = 0;
var x : int[0,2] = 0;
property true;
process P0 {
  l0: true -> acquire(m); goto l1;
  l1: true -> x := 1; goto l2;
  l2: true -> release(m); goto l3;
}
process P1 {
  l0: true -> acquire(m); goto l1;
  l1: true -> x := 2; goto l2;
  l2: true -> release(m); goto l3;
}
"""

DEADLOCK2 = """\
model deadlock2;
var m1 : int[0,2] = 0;
var m2 : int[0,2] = 0;
var x : int[0,2] = 0;
property true;
process P0 {
  l0: true -> acquire(m1); goto l1;
  l1: true -> acquire(m2); goto l2;
  l2: true -> x := 1; goto l3;
  l3: true -> release(m1); goto l4;
  l4: true -> release(m2); goto l5;
}
process P1 {
  l0: true -> acquire(m2); goto l1;
  l1: true -> acquire(m1); goto l2;
  l2: true -> x := 2; goto l3;
  l3: true -> release(m1); goto l4;
  l4: true -> release(m2); goto l5;
}
"""

_FIXED = {"prog1": PROG1, "prog2": PROG2, "lockpair": LOCKPAIR, "deadlock2": DEADLOCK2}
_INDEP = re.compile(r"indep\(\s*(\d+)\s*,\s*(\d+)\s*\)$")

REFERENCE_NAMES = ("prog1", "prog2", "lockpair", "deadlock2", "indep(3,4)")


def indep_source(p: int, n: int) -> str:
    """``p`` threads, each stepping its private variable through ``n`` values."""
    if p < 1 or n < 1:
        raise ValueError("indep needs p >= 1 and n >= 1")
    lines = [f"model indep_{p}_{n};"]
    lines += [f"var v{i} : int[0,{n - 1}] = 0;" for i in range(p)]
    lines.append("property true;")
    for i in range(p):
        lines.append(f"process P{i} {{")
        for k in range(n - 1):
            lines.append(f"  l{k}: true -> v{i} := {k + 1}; goto l{k + 1};")
        if n == 1:
            lines.append("  l0: false -> goto l0;")
        lines.append("}")
    return "\n".join(lines) + "\n"


def reference_source(name: str) -> str:
    name = name.strip()
    if name in _FIXED:
        return _FIXED[name]
    m = _INDEP.match(name)
    if m:
        return indep_source(int(m.group(1)), int(m.group(2)))
    raise KeyError(f"unknown reference model {name!r}")


def reference_model(name: str):
    """Return one of prog1, prog2, lockpair, deadlock2, indep(p,n)."""
    return parse(reference_source(name), f"<{name.strip()}>")


def is_reference_name(name: str) -> bool:
    try:
        reference_source(name)
    except KeyError:
        return False
    return True
