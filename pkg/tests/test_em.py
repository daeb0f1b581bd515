"""The two one-sided eligibility procedures and their step-level behavior."""

from __future__ import annotations

from hypothesis import given, settings

from instances import load_problem, problems
from major_transition.em import (
    ceiling_violated,
    floor_violated,
    run_alt_em,
    run_em,
    transfer_in_expandable,
    transfer_out_expandable,
)
from major_transition.model import Outcome, is_em, is_permissible

ALL3 = frozenset({"i1", "i2", "i3", "i4", "i5", "i6", "i7"})

# One row per step of the admission-first procedure on the seven-student
# instance: (phase, expandable majors, bound-violating majors, grants,
# revocations).  Grants add in-eligibility; revocations strip out-eligibility.
EXPECTED_EM_ROWS = [
    ("transfer-in", {"m5"}, set(), (("i5", "m5", "in"),), ()),
    ("transfer-in", {"m4"}, {"m4"}, (("i4", "m4", "in"),), ()),
    ("transfer-in", {"m3"}, {"m3"}, (("i6", "m3", "in"),), ()),
    ("transfer-out", set(), {"m4"}, (), (("i6", "m4", "out"),)),
    ("transfer-out", set(), {"m3"}, (), (("i4", "m3", "out"),)),
    ("transfer-out", set(), {"m4"}, (), (("i5", "m4", "out"),)),
    ("halt", set(), set(), (), ()),
]


def test_run_em_example3_final_outcome():
    problem = load_problem("example3")
    outcome, trace = run_em(problem)
    assert outcome == Outcome(frozenset({"i1", "i2", "i3", "i7"}), frozenset({"i4", "i5", "i6"}))
    assert outcome.transferable == frozenset()
    assert trace.initial == Outcome(ALL3, frozenset())
    assert trace.final == outcome
    assert trace.replayed_final() == outcome


def test_run_em_example3_trace_rows():
    _, trace = run_em(load_problem("example3"))
    assert len(trace.steps) == len(EXPECTED_EM_ROWS)
    for step, (phase, expandable, violated, grants, revocations) in zip(
        trace.steps, EXPECTED_EM_ROWS
    ):
        assert step.process == "em"
        assert step.phase == phase
        assert step.expandable == frozenset(expandable)
        assert step.violated == frozenset(violated)
        assert step.grants == grants
        assert step.revocations == revocations
    assert [step.index for step in trace.steps] == list(range(1, 8))


def test_run_alt_em_example3():
    problem = load_problem("example3")
    outcome, trace = run_alt_em(problem)
    assert trace.initial == Outcome(frozenset(), ALL3)
    assert outcome == Outcome(frozenset({"i1", "i2", "i7"}), frozenset({"i3", "i4", "i5", "i6"}))
    assert all(step.process == "alt-em" for step in trace.steps)
    assert trace.replayed_final() == outcome


def test_two_student_swap_is_blocked_one_side_at_a_time():
    problem = load_problem("two_student_swap")
    em_outcome, _ = run_em(problem)
    assert em_outcome == Outcome(frozenset({"i1", "i2"}), frozenset())
    alt_outcome, _ = run_alt_em(problem)
    assert alt_outcome == Outcome(frozenset(), frozenset({"i1", "i2"}))
    # Both are maximal yet move nobody: the swap needs simultaneous grants.
    assert em_outcome.transferable == alt_outcome.transferable == frozenset()
    assert is_em(problem, em_outcome) and is_em(problem, alt_outcome)


def test_relaxed_swap_moves_both_students():
    problem = load_problem("two_student_swap_relaxed")
    full = Outcome(frozenset({"i1", "i2"}), frozenset({"i1", "i2"}))
    assert run_em(problem)[0] == full
    assert run_alt_em(problem)[0] == full


def test_em_only_grants_in_and_revokes_out():
    _, trace = run_em(load_problem("example3"))
    for step in trace.steps:
        assert all(side == "in" for _, _, side in step.grants)
        assert all(side == "out" for _, _, side in step.revocations)


def test_em_eligibility_moves_one_way():
    _, trace = run_em(load_problem("example3"))
    for _, before, after in trace.replay():
        assert after.out_eligible <= before.out_eligible
        assert after.in_eligible >= before.in_eligible

    _, trace = run_alt_em(load_problem("example3"))
    for _, before, after in trace.replay():
        assert after.out_eligible >= before.out_eligible
        assert after.in_eligible <= before.in_eligible


def test_expandable_and_violation_helpers():
    problem = load_problem("example3")
    assert transfer_in_expandable(problem, Outcome(ALL3, frozenset())) == {"m5"}
    assert transfer_out_expandable(problem, Outcome(frozenset(), ALL3)) == {"m1", "m2", "m5"}
    lone = Outcome(frozenset({"i5"}), frozenset({"i5"}))
    assert floor_violated(problem, lone) == {"m4"}
    assert ceiling_violated(problem, lone) == frozenset()

    swap = load_problem("two_student_swap")
    half = Outcome(frozenset({"i1"}), frozenset({"i1"}))
    assert floor_violated(swap, half) == {"m1"}
    assert ceiling_violated(swap, half) == {"m2"}


@settings(max_examples=60)
@given(problem=problems())
def test_both_procedures_halt_on_feasible_maximal_outcomes(problem):
    for runner in (run_em, run_alt_em):
        outcome, trace = runner(problem)
        assert is_permissible(problem, outcome)
        assert is_em(problem, outcome)
        assert trace.replayed_final() == outcome
