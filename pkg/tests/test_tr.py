import pytest

from strcheck.commutativity import DependencyMatrix, visibility
from strcheck.gcl import parse
from strcheck.model import Phase, PhasedState, State
from strcheck.oracle.full import explore_full
from strcheck.oracle.random_models import random_model
from strcheck.oracle.transaction import reference_rts, transaction_system
from strcheck.result import Limits, ResourceBoundExceeded
from strcheck.tr import (
    MoverOracle,
    classify_movers_static,
    explore_tr,
    phase_step,
    scc_root,
)

from conftest import act

N, R, L = Phase.N, Phase.R, Phase.L

# P0 commits its first write (it enables P1) and then cycles in its post-phase
LOOPING = """model looping;
var x : int[0,1] = 0;
var z : int[0,1] = 0;
property true;
process P0 {
  l0: true -> x := 1; goto l1;
  l1: true -> x := 1; goto l2;
  l2: true -> x := 1; goto l1;
}
process P1 { l0: x = 1 -> z := 1; goto l1; }
"""


def dynamic(model, exact=False):
    return MoverOracle.dynamic(model, DependencyMatrix(model, exact=exact))


def test_static_classification(lockpair, prog2):
    table = classify_movers_static(lockpair, DependencyMatrix(lockpair)).classification
    assert table[act(lockpair, "acquire(m)@0")] == "right"
    assert table[act(lockpair, "release(m)@0")] == "left"
    table = classify_movers_static(prog2).classification
    assert table[act(prog2, "a:=0@1")] == "non"


def test_phase_step_examples(lockpair, prog2):
    q = lockpair.initial_state()
    a = act(lockpair, "acquire(m)@0")
    assert phase_step(lockpair, q, (N, N), a, lockpair.apply(q, a), dynamic(lockpair),
                      visibility(lockpair)) == R
    q = prog2.initial_state()
    assert phase_step(prog2, q, (N, N, N), 0, prog2.apply(q, 0), dynamic(prog2),
                      visibility(prog2)) == L


def test_post_phase_without_left_mover_commits(lockpair):
    # from L, acquire is not a left mover at the target -> N
    q = lockpair.initial_state()
    a = act(lockpair, "acquire(m)@0")
    oracle = classify_movers_static(lockpair)
    assert phase_step(lockpair, q, (L, N), a, lockpair.apply(q, a), oracle,
                      visibility(lockpair)) == N


def test_final_action_commits(lockpair):
    q = lockpair.initial_state()
    for label in ("acquire(m)@0", "x:=1@0"):
        q = lockpair.apply(q, act(lockpair, label))
    a = act(lockpair, "release(m)@0")
    p = phase_step(lockpair, q, (R, N), a, lockpair.apply(q, a), dynamic(lockpair),
                   visibility(lockpair))
    assert p != R


def test_scc_root_cases():
    s = PhasedState(State((0,), ("a", "b")), (L, N))
    t = PhasedState(State((1,), ("a", "b")), (L, N))
    assert scc_root([s], 0, bottom=True) == s
    assert scc_root([s], 0, bottom=False) is None
    assert scc_root([t, s], 0, bottom=True) == s
    assert scc_root([s, PhasedState(s.base, (R, N))], 0, bottom=True) is None


def test_post_phase_cycle_is_forced_external():
    m = parse(LOOPING)
    oracle = dynamic(m, exact=True)
    res = explore_tr(m, oracle)
    assert any(n.startswith("forced roots") for n in res.notes)
    ts = transaction_system(m, oracle)
    assert res.details["external"] == reference_rts(ts)
    full = explore_full(m)
    assert res.reached == full.reached


@pytest.mark.parametrize(
    "name, expected", [("prog1", 4), ("indep(3,4)", 8), ("lockpair", 5), ("deadlock2", 5)]
)
def test_dynamic_external_counts(name, expected):
    from strcheck.reference import reference_model

    m = reference_model(name)
    res = explore_tr(m, dynamic(m))
    assert res.external_states == expected and not res.violated


def test_static_tr_does_not_reduce_prog2(prog2):
    res = explore_tr(prog2, classify_movers_static(prog2))
    assert res.external_states == explore_full(prog2).states_visited
    assert explore_tr(prog2, dynamic(prog2)).external_states < res.external_states


def test_violation_trace_is_a_real_run(lockpair):
    from strcheck.gcl import parse_expr
    from strcheck.oracle.soundness import trace_errors

    m = lockpair.with_property(parse_expr("x != 2", lockpair))
    res = explore_tr(m, dynamic(m))
    assert res.violated and trace_errors(m, res) == []


@pytest.mark.parametrize("seed", range(40))
@pytest.mark.parametrize("subsumption", [True, False])
def test_external_states_match_reference(seed, subsumption):
    m = random_model(seed)
    oracle = dynamic(m)
    res = explore_tr(m, oracle, subsumption=subsumption, stop_on_violation=False)
    full = explore_full(m)
    assert res.reached <= full.reached
    assert res.violated == full.violated
    if not full.violated:
        assert res.details["external"] == reference_rts(transaction_system(m, oracle))


def test_state_limit(indep):
    with pytest.raises(ResourceBoundExceeded):
        explore_tr(indep, dynamic(indep), limits=Limits(max_states=5))


def test_post_phase_never_returns_to_pre_phase(lockpair):
    class Backwards(MoverOracle):
        def rmv(self, q, alpha, q_next):
            return True

    oracle = Backwards(lockpair, "static", {a.action_id: "both" for a in lockpair.actions})
    q = lockpair.initial_state()
    a = act(lockpair, "acquire(m)@0")
    # a post-phase process must never be sent back to the pre-phase
    assert phase_step(lockpair, q, (L, N), a, lockpair.apply(q, a), oracle,
                      visibility(lockpair)) != R
