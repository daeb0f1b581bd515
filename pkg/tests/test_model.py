"""Core types, feasibility predicates, and the dominance order."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from instances import INSTANCE_FIXTURES, arbitrary_outcomes, load_problem, prefix_outcomes, problems
from major_transition.model import (
    Major,
    Outcome,
    Problem,
    Student,
    UnknownIdError,
    assigned_students,
    can_permissibly_expand,
    classify_majors,
    corresponding_assignment,
    is_em,
    is_permissible,
    pareto_dominates,
    respects_distributional,
    respects_dual_priority,
    students_of,
    validate_problem,
)

ALL = frozenset({"i1", "i2", "i3", "i4", "i5", "i6", "i7"})
EM3 = Outcome(frozenset({"i1", "i2", "i3", "i7"}), frozenset({"i4", "i5", "i6"}))
TIE3 = Outcome(frozenset({"i1", "i2"}), ALL)


def test_outcome_coerces_and_exposes_transferable():
    out = Outcome(["i1", "i2"], ("i2", "i3"))
    assert isinstance(out.out_eligible, frozenset)
    assert isinstance(out.in_eligible, frozenset)
    assert out.transferable == {"i2"}


@pytest.mark.parametrize("name", INSTANCE_FIXTURES)
def test_bundled_instances_are_valid(name):
    assert validate_problem(load_problem(name)) == []


def test_validate_reports_duplicates_and_bad_references():
    problem = Problem(
        students=(
            Student("s1", "m1", "m2"),
            Student("s1", "m1", "m1"),
            Student("s2", "m9", "m2"),
        ),
        majors=(
            Major("m1", 2, 1, ("s1",), ()),
            Major("m2", 0, 9, (), ("s1", "s2")),
            Major("m2", 0, 0, (), ()),
        ),
    )
    issues = "\n".join(validate_problem(problem))
    assert "duplicate student id 's1'" in issues
    assert "duplicate major id 'm2'" in issues
    assert "applied major equals initial major" in issues
    assert "initial major 'm9' not declared" in issues
    assert "0 <= floor <= ceiling" in issues


def test_validate_reports_enrollment_outside_bounds():
    problem = Problem(
        students=(Student("s1", "m1", "m2"),),
        majors=(Major("m1", 2, 3, ("s1",), ()), Major("m2", 0, 1, (), ("s1",))),
    )
    issues = "\n".join(validate_problem(problem))
    assert "initial enrollment 1 outside [2, 3]" in issues


def test_validate_names_major_and_student_on_priority_mismatch():
    missing = Problem(
        students=(Student("s1", "m1", "m2"),),
        majors=(Major("m1", 0, 1, (), ()), Major("m2", 0, 1, (), ("s1",))),
    )
    issues = "\n".join(validate_problem(missing))
    assert "'m1'" in issues and "out_priority is missing student 's1'" in issues

    extra = Problem(
        students=(Student("s1", "m1", "m2"),),
        majors=(
            Major("m1", 0, 1, ("s1",), ("s1",)),
            Major("m2", 0, 1, (), ("s1",)),
        ),
    )
    issues = "\n".join(validate_problem(extra))
    assert "'m1'" in issues and "ranks student 's1' who does not belong there" in issues


def test_validate_reports_priority_repeats():
    problem = Problem(
        students=(Student("s1", "m1", "m2"),),
        majors=(
            Major("m1", 0, 1, ("s1", "s1"), ()),
            Major("m2", 0, 1, (), ("s1",)),
        ),
    )
    assert any("out_priority has repeats" in line for line in validate_problem(problem))


def test_unknown_major_lookup_raises():
    problem = load_problem("example3")
    with pytest.raises(UnknownIdError):
        problem.major("m99")


def test_corresponding_assignment_moves_exactly_the_intersection():
    problem = load_problem("example3")
    mu = corresponding_assignment(problem, EM3)
    assert mu == {s.id: s.initial for s in problem.students}  # empty intersection

    mu = corresponding_assignment(problem, TIE3)
    assert mu == {
        "i1": "m2",
        "i2": "m1",
        "i3": "m3",
        "i4": "m3",
        "i5": "m4",
        "i6": "m4",
        "i7": "m5",
    }


def test_assigned_students_example3():
    problem = load_problem("example3")
    assert assigned_students(problem, TIE3, "m1") == {"i2"}
    assert assigned_students(problem, TIE3, "m2") == {"i1"}
    assert assigned_students(problem, TIE3, "m3") == {"i3", "i4"}
    assert assigned_students(problem, TIE3, "m4") == {"i5", "i6"}
    assert assigned_students(problem, TIE3, "m5") == {"i7"}


@given(data=st.data())
def test_assignment_depends_only_on_the_intersection(data):
    problem = data.draw(problems())
    outcome = data.draw(arbitrary_outcomes(problem))
    squeezed = Outcome(outcome.transferable, outcome.transferable)
    assert corresponding_assignment(problem, outcome) == corresponding_assignment(
        problem, squeezed
    )


def test_respects_distributional_bounds():
    problem = load_problem("two_student_swap")
    both = Outcome(frozenset({"i1", "i2"}), frozenset({"i1", "i2"}))
    assert respects_distributional(problem, both, "m1")
    assert respects_distributional(problem, both, "m2")
    lone = Outcome(frozenset({"i1"}), frozenset({"i1"}))
    assert not respects_distributional(problem, lone, "m1")  # falls below its floor
    assert not respects_distributional(problem, lone, "m2")  # exceeds its ceiling


def test_respects_dual_priority_requires_prefixes():
    problem = load_problem("example3")
    prefix = Outcome(frozenset({"i1"}), frozenset({"i3"}))
    assert respects_dual_priority(problem, prefix, "m1")
    skipped = Outcome(frozenset(), frozenset({"i2"}))  # i2 ranks below i3 at m1
    assert not respects_dual_priority(problem, skipped, "m1")


def test_is_permissible_known_outcomes():
    problem = load_problem("example3")
    assert is_permissible(problem, EM3)
    assert is_permissible(problem, TIE3)
    assert is_permissible(problem, Outcome(frozenset(), frozenset()))

    swap = load_problem("two_student_swap")
    assert not is_permissible(swap, Outcome(frozenset({"i1"}), frozenset({"i1"})))


def test_pareto_dominance_is_strict_inclusion_of_movers():
    problem = load_problem("example3")
    star = Outcome(frozenset({"i1", "i2"}), frozenset({"i1", "i2", "i3", "i7"}))
    assert pareto_dominates(problem, star, EM3)
    assert not pareto_dominates(problem, EM3, star)
    assert not pareto_dominates(problem, EM3, EM3)
    # Different movers without inclusion are incomparable.
    toe_like = Outcome(frozenset({"i4", "i6"}), frozenset({"i4", "i6"}))
    assert not pareto_dominates(problem, star, toe_like)
    assert not pareto_dominates(problem, toe_like, star)


@given(data=st.data())
def test_pareto_dominance_is_asymmetric(data):
    problem = data.draw(problems())
    first = data.draw(arbitrary_outcomes(problem))
    second = data.draw(arbitrary_outcomes(problem))
    if pareto_dominates(problem, first, second):
        assert not pareto_dominates(problem, second, first)


def test_can_permissibly_expand_at_saturation_returns_none():
    problem = load_problem("example3")
    for m in problem.majors:
        assert can_permissibly_expand(problem, EM3, m.id) is None


def _apply_expansion(problem, outcome, mid, replacement):
    new_out, new_in = replacement
    major = problem.major(mid)
    out = (outcome.out_eligible - frozenset(major.out_priority)) | new_out
    inc = (outcome.in_eligible - frozenset(major.in_priority)) | new_in
    return Outcome(out, inc)


def test_can_permissibly_expand_witness_is_usable():
    problem = load_problem("example3")
    empty = Outcome(frozenset(), frozenset())
    witness = can_permissibly_expand(problem, empty, "m5")
    assert witness is not None
    expanded = _apply_expansion(problem, empty, "m5", witness)
    assert respects_dual_priority(problem, expanded, "m5")
    assert respects_distributional(problem, expanded, "m5")
    assert expanded.out_eligible | expanded.in_eligible  # strictly larger


@given(data=st.data())
def test_expansion_witnesses_respect_the_expanding_major(data):
    problem = data.draw(problems())
    outcome = data.draw(prefix_outcomes(problem))
    for m in problem.majors:
        witness = can_permissibly_expand(problem, outcome, m.id)
        if witness is None:
            continue
        new_out, new_in = witness
        cur_out = frozenset(m.out_priority) & outcome.out_eligible
        cur_in = frozenset(m.in_priority) & outcome.in_eligible
        assert cur_out <= new_out and cur_in <= new_in
        assert (new_out, new_in) != (cur_out, cur_in)
        expanded = _apply_expansion(problem, outcome, m.id, witness)
        assert respects_dual_priority(problem, expanded, m.id)
        assert respects_distributional(problem, expanded, m.id)


def test_is_em_known_outcomes():
    problem = load_problem("example3")
    assert is_em(problem, EM3)
    assert not is_em(problem, Outcome(ALL, frozenset()))  # m5 can still admit i5
    assert not is_em(problem, Outcome(frozenset(), frozenset()))

    swap = load_problem("two_student_swap")
    assert is_em(swap, Outcome(frozenset({"i1", "i2"}), frozenset()))


def test_classify_majors_example3():
    problem = load_problem("example3")
    split = classify_majors(problem, EM3)
    assert split.overdemanded == {"m1", "m2"}
    assert split.underdemanded == {"m3", "m4"}
    assert split.balanced == {"m5"}


def test_classify_majors_rejects_non_em_and_non_permissible():
    problem = load_problem("example3")
    with pytest.raises(ValueError):
        classify_majors(problem, Outcome(frozenset(), frozenset()))  # not maximal
    swap = load_problem("two_student_swap")
    with pytest.raises(ValueError):
        classify_majors(swap, Outcome(frozenset({"i1"}), frozenset({"i1"})))


def test_students_of_groups_by_initial_major():
    problem = load_problem("example3")
    assert students_of(problem, {"m1", "m2"}) == {"i1", "i2"}
    assert students_of(problem, {"m3", "m4"}) == {"i3", "i4", "i5", "i6"}
    assert students_of(problem, {"m5"}) == {"i7"}
    assert students_of(problem, ()) == frozenset()


@given(data=st.data())
def test_prefix_outcomes_respect_dual_priority_everywhere(data):
    problem = data.draw(problems())
    outcome = data.draw(prefix_outcomes(problem))
    for m in problem.majors:
        assert respects_dual_priority(problem, outcome, m.id)
    # Permissibility then reduces to the headcount bounds.
    assert is_permissible(problem, outcome) == all(
        respects_distributional(problem, outcome, m.id) for m in problem.majors
    )
