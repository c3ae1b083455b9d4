import pytest
from hypothesis import given, settings, strategies as st

from strcheck.expr import Binary, Const, Unary, Var, evaluate, render
from strcheck.gcl import (
    GclDomainError,
    GclDuplicate,
    GclSyntaxError,
    GclUndeclared,
    parse,
    parse_expr,
    pretty,
)
from strcheck.model import UndeclaredVariable
from strcheck.oracle.random_models import random_source
from strcheck.reference import reference_source

HEADER = "model t;\nvar x : int[0,3] = 0;\nvar y : int[0,3] = 1;\n"
IDLE = "process I { l0: true -> goto l1; }\n"


def test_prog1_shape(prog1):
    assert len(prog1.processes) == 2
    assert len(prog1.actions) == 4


def test_acquire_desugars_to_guard_and_update():
    m = parse(HEADER + "var m : int[0,2] = 0;\nproperty true;\n"
              "process A { l0: true -> acquire(m); goto l1; }\n"
              "process B { l0: true -> acquire(m); goto l1; }\n")
    a = m.actions[1]
    assert render(a.guard) == "m = 0"
    assert [(v, render(e)) for v, e in a.updates] == [("m", "2")]


def test_release_desugars():
    m = parse(HEADER + "var m : int[0,1] = 0;\nproperty true;\n"
              "process A { l0: true -> release(m); goto l1; }\n")
    assert render(m.actions[0].guard) == "m = 1"
    assert [(v, render(e)) for v, e in m.actions[0].updates] == [("m", "0")]


def test_undeclared_variable_has_span():
    with pytest.raises(GclUndeclared) as err:
        parse(HEADER + "property z = 1;\n", "t.gcl")
    assert isinstance(err.value, UndeclaredVariable)
    assert str(err.value).startswith("t.gcl:4:10:")


def test_syntax_error_position():
    with pytest.raises(GclSyntaxError) as err:
        parse(HEADER + "property x = ;\n", "t.gcl")
    assert (err.value.span.line, err.value.span.col) == (4, 14)


def test_initializer_outside_domain():
    with pytest.raises(GclDomainError):
        parse("model t;\nvar x : int[0,1] = 2;\nproperty true;\n")


def test_lock_domain_must_cover_every_owner():
    src = ("model t;\nvar m : int[0,1] = 0;\nproperty true;\n"
           "process A { l0: true -> acquire(m); goto l1; }\n"
           "process B { l0: true -> acquire(m); goto l1; }\n")
    with pytest.raises(GclDomainError):
        parse(src)


@pytest.mark.parametrize("dup", ["var x : int[0,1] = 0;\n", ""])
def test_duplicates(dup):
    body = HEADER + dup + "property true;\nprocess A { l0: true -> goto l1; }\n"
    if not dup:
        body += "process A { l0: true -> goto l1; }\n"
    with pytest.raises(GclDuplicate):
        parse(body)


def test_type_errors_are_syntax_errors():
    with pytest.raises(GclSyntaxError):
        parse(HEADER + "property x + 1;\n")


def test_comparisons_do_not_chain():
    with pytest.raises(GclSyntaxError):
        parse(HEADER + "property x < y < 2;\n")


def test_comments_and_precedence():
    m = parse(HEADER + "// note\nproperty x + 1 * 2 = 3 || !(y = 1) && true; // tail\n" + IDLE)
    assert render(m.property_y) == "x + 1 * 2 = 3 || !(y = 1) && true"
    assert m.holds(m.initial_state()) is False


@pytest.mark.parametrize("name", ["prog1", "prog2", "lockpair", "deadlock2", "indep(3,4)"])
def test_reference_round_trip(name):
    m = parse(reference_source(name))
    again = parse(pretty(m))
    assert again == m
    assert pretty(again) == pretty(m)


@pytest.mark.parametrize("seed", range(20))
def test_random_round_trip(seed):
    m = parse(random_source(seed))
    assert parse(pretty(m)) == m


def test_parse_expr_uses_model_variables(lockpair):
    e = parse_expr("x <= 2", lockpair)
    assert evaluate(e, {"x": 2, "m": 0}) is True
    with pytest.raises(GclUndeclared):
        parse_expr("z = 0", lockpair)


# random expression trees survive render -> parse

names = st.sampled_from(["x", "y"])
ints = st.integers(-3, 5).map(Const)
int_expr = st.recursive(
    ints | names.map(Var),
    lambda sub: st.tuples(st.sampled_from("+-*"), sub, sub).map(lambda t: Binary(*t))
    | sub.map(lambda e: Unary("-", e)),
    max_leaves=6,
)
bool_expr = st.recursive(
    st.tuples(st.sampled_from(["=", "!=", "<", "<=", ">", ">="]), int_expr, int_expr).map(
        lambda t: Binary(*t)
    ),
    lambda sub: st.tuples(st.sampled_from(["&&", "||"]), sub, sub).map(lambda t: Binary(*t))
    | sub.map(lambda e: Unary("!", e)),
    max_leaves=4,
)


@settings(max_examples=200, deadline=None)
@given(bool_expr, st.integers(0, 3), st.integers(0, 3))
def test_rendered_expressions_reparse_to_same_value(e, x, y):
    m = parse(HEADER + "property true;\n" + IDLE)
    back = parse_expr(render(e), m)
    env = {"x": x, "y": y}
    assert evaluate(back, env) == evaluate(e, env)
    assert render(back) == render(e)
