import sys

import pytest

from strcheck.reference import REFERENCE_NAMES, reference_model


def act(model, label: str) -> int:
    """Action id from its label, e.g. ``acquire(m)@1``."""
    (found,) = [a.action_id for a in model.actions if a.label == label]
    return found


def state_after(model, *labels: str):
    q = model.initial_state()
    for label in labels:
        q = model.apply(q, act(model, label))
    return q


@pytest.fixture(params=REFERENCE_NAMES)
def ref_model(request):
    return reference_model(request.param)


@pytest.fixture
def prog1():
    return reference_model("prog1")


@pytest.fixture
def prog2():
    return reference_model("prog2")


@pytest.fixture
def lockpair():
    return reference_model("lockpair")


@pytest.fixture
def deadlock2():
    return reference_model("deadlock2")


@pytest.fixture
def indep():
    return reference_model("indep(3,4)")


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.RESULTS[number].line())
