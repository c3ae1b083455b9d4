"""Integer/boolean expressions used for guards, updates and properties."""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Callable, Mapping, Union

Value = Union[int, bool]


@dataclass(frozen=True)
class Const:
    value: Value


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # "-" or "!"
    arg: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"


Expr = Union[Const, Var, Unary, Binary]

TRUE = Const(True)

ARITH = {"+": operator.add, "-": operator.sub, "*": operator.mul, "%": operator.mod}
COMPARE = {
    "=": operator.eq,
    "!=": operator.ne,
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
}
LOGIC = ("&&", "||")

# binding strength, loosest first; used by the parser and the printer
PRECEDENCE = {"||": 1, "&&": 2, **{op: 3 for op in COMPARE}, "+": 4, "-": 4, "*": 5, "%": 5}


class ExprTypeError(Exception):
    pass


def free_vars(expr: Expr) -> frozenset[str]:
    if isinstance(expr, Var):
        return frozenset((expr.name,))
    if isinstance(expr, Unary):
        return free_vars(expr.arg)
    if isinstance(expr, Binary):
        return free_vars(expr.left) | free_vars(expr.right)
    return frozenset()


def type_of(expr: Expr) -> str:
    """Return ``"int"`` or ``"bool"``; raise ExprTypeError on a mismatch."""
    if isinstance(expr, Const):
        return "bool" if isinstance(expr.value, bool) else "int"
    if isinstance(expr, Var):
        return "int"
    if isinstance(expr, Unary):
        want = "bool" if expr.op == "!" else "int"
        if type_of(expr.arg) != want:
            raise ExprTypeError(f"operator {expr.op!r} expects {want}")
        return want
    lt, rt = type_of(expr.left), type_of(expr.right)
    if expr.op in LOGIC:
        if lt != "bool" or rt != "bool":
            raise ExprTypeError(f"operator {expr.op!r} expects bool operands")
        return "bool"
    if lt != "int" or rt != "int":
        raise ExprTypeError(f"operator {expr.op!r} expects int operands")
    return "bool" if expr.op in COMPARE else "int"


def evaluate(expr: Expr, env: Mapping[str, int]) -> Value:
    """Evaluate ``expr`` against a name -> value mapping."""
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Var):
        return env[expr.name]
    if isinstance(expr, Unary):
        v = evaluate(expr.arg, env)
        return (not v) if expr.op == "!" else -v
    if expr.op == "&&":
        return bool(evaluate(expr.left, env)) and bool(evaluate(expr.right, env))
    if expr.op == "||":
        return bool(evaluate(expr.left, env)) or bool(evaluate(expr.right, env))
    left, right = evaluate(expr.left, env), evaluate(expr.right, env)
    if expr.op in COMPARE:
        return COMPARE[expr.op](left, right)
    return ARITH[expr.op](left, right)


def compile_expr(expr: Expr, index: Mapping[str, int]) -> Callable[[tuple], Value]:
    """Turn ``expr`` into a closure over a valuation tuple (hot path of exploration)."""
    if isinstance(expr, Const):
        value = expr.value
        return lambda vals: value
    if isinstance(expr, Var):
        i = index[expr.name]
        return lambda vals: vals[i]
    if isinstance(expr, Unary):
        f = compile_expr(expr.arg, index)
        if expr.op == "!":
            return lambda vals: not f(vals)
        return lambda vals: -f(vals)
    f, g = compile_expr(expr.left, index), compile_expr(expr.right, index)
    if expr.op == "&&":
        return lambda vals: bool(f(vals)) and bool(g(vals))
    if expr.op == "||":
        return lambda vals: bool(f(vals)) or bool(g(vals))
    op = COMPARE.get(expr.op) or ARITH[expr.op]
    return lambda vals: op(f(vals), g(vals))


def render(expr: Expr, parent: int = 0) -> str:
    if isinstance(expr, Const):
        if isinstance(expr.value, bool):
            return "true" if expr.value else "false"
        return str(expr.value)
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Unary):
        if isinstance(expr.arg, Const) and not isinstance(expr.arg.value, bool):
            return f"{expr.op}({render(expr.arg)})"  # "-1" parses as a literal
        return f"{expr.op}{render(expr.arg, 9)}"
    prec = PRECEDENCE[expr.op]
    # right operand gets prec + 1 so left-associative chains round-trip
    text = f"{render(expr.left, prec)} {expr.op} {render(expr.right, prec + 1)}"
    return f"({text})" if prec < parent or (prec == 3 and parent == 3) else text


def conj(*parts: Expr) -> Expr:
    """Conjunction that drops literal ``true`` operands."""
    kept = [p for p in parts if p != TRUE]
    if not kept:
        return TRUE
    out = kept[0]
    for p in kept[1:]:
        out = Binary("&&", out, p)
    return out
