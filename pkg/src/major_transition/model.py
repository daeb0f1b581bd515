"""Core types and feasibility predicates for major transition problems.

A problem consists of students, each enrolled in an initial major and
applying to exactly one different major, and majors, each carrying a
headcount floor and ceiling plus two priority orders: a transfer-out
priority over its current students who applied elsewhere, and a
transfer-in priority over the students applying to it.

An outcome is a pair of eligibility sets (out_eligible, in_eligible).
A student transfers to her applied major exactly when she holds both
eligibilities; otherwise she stays in her initial major.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

StudentId = str
MajorId = str


class UnknownIdError(KeyError):
    """An outcome or query referenced a student or major the problem does not contain."""


@dataclass(frozen=True)
class Student:
    id: StudentId
    initial: MajorId
    applied: MajorId


@dataclass(frozen=True)
class Major:
    id: MajorId
    floor: int
    ceiling: int
    out_priority: tuple[StudentId, ...]  # current students who applied out, best first
    in_priority: tuple[StudentId, ...]  # applicants to this major, best first

    def __post_init__(self) -> None:
        object.__setattr__(self, "out_priority", tuple(self.out_priority))
        object.__setattr__(self, "in_priority", tuple(self.in_priority))


@dataclass(frozen=True)
class Outcome:
    """A pair (out_eligible, in_eligible) of student id sets."""

    out_eligible: frozenset[StudentId]
    in_eligible: frozenset[StudentId]

    def __post_init__(self) -> None:
        object.__setattr__(self, "out_eligible", frozenset(self.out_eligible))
        object.__setattr__(self, "in_eligible", frozenset(self.in_eligible))

    @property
    def transferable(self) -> frozenset[StudentId]:
        """Students holding both eligibilities; exactly these students move."""
        return self.out_eligible & self.in_eligible


@dataclass(frozen=True)
class MajorClassification:
    """Partition of majors at a feasible exchange-maximal outcome."""

    overdemanded: frozenset[MajorId]  # all out-eligibility granted, at ceiling
    underdemanded: frozenset[MajorId]  # all in-eligibility granted, at floor
    balanced: frozenset[MajorId]  # both sides fully granted


@dataclass(frozen=True)
class Problem:
    students: tuple[Student, ...]
    majors: tuple[Major, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "students", tuple(self.students))
        object.__setattr__(self, "majors", tuple(self.majors))

    @cached_property
    def student_ids(self) -> frozenset[StudentId]:
        return frozenset(s.id for s in self.students)

    @cached_property
    def major_ids(self) -> tuple[MajorId, ...]:
        return tuple(sorted(m.id for m in self.majors))

    @cached_property
    def majors_by_id(self) -> dict[MajorId, Major]:
        return {m.id: m for m in self.majors}

    @cached_property
    def initial_of(self) -> dict[StudentId, MajorId]:
        return {s.id: s.initial for s in self.students}

    @cached_property
    def applied_of(self) -> dict[StudentId, MajorId]:
        return {s.id: s.applied for s in self.students}

    @cached_property
    def out_rank(self) -> dict[MajorId, dict[StudentId, int]]:
        return {m.id: {s: r for r, s in enumerate(m.out_priority)} for m in self.majors}

    @cached_property
    def in_rank(self) -> dict[MajorId, dict[StudentId, int]]:
        return {m.id: {s: r for r, s in enumerate(m.in_priority)} for m in self.majors}

    def major(self, mid: MajorId) -> Major:
        try:
            return self.majors_by_id[mid]
        except KeyError:
            raise UnknownIdError(f"unknown major id {mid!r}") from None

    def current_students(self, mid: MajorId) -> frozenset[StudentId]:
        """Students initially enrolled in `mid` (all of them applied elsewhere)."""
        return frozenset(self.major(mid).out_priority)

    def applicants(self, mid: MajorId) -> frozenset[StudentId]:
        """Students applying to `mid`."""
        return frozenset(self.major(mid).in_priority)


def _permutation_issues(
    mid: MajorId, side: str, ranked: set[StudentId], expected: set[StudentId]
) -> list[str]:
    issues = []
    for sid in sorted(expected - ranked):
        issues.append(f"major {mid!r}: {side} is missing student {sid!r}")
    for sid in sorted(ranked - expected):
        issues.append(f"major {mid!r}: {side} ranks student {sid!r} who does not belong there")
    return issues


def validate_problem(problem: Problem) -> list[str]:
    """Return a list of structural violations; empty means the problem is valid."""
    issues: list[str] = []
    seen_students: set[StudentId] = set()
    for s in problem.students:
        if s.id in seen_students:
            issues.append(f"duplicate student id {s.id!r}")
        seen_students.add(s.id)
    seen_majors: set[MajorId] = set()
    for m in problem.majors:
        if m.id in seen_majors:
            issues.append(f"duplicate major id {m.id!r}")
        seen_majors.add(m.id)

    for s in problem.students:
        if s.initial not in seen_majors:
            issues.append(f"student {s.id!r}: initial major {s.initial!r} not declared")
        if s.applied not in seen_majors:
            issues.append(f"student {s.id!r}: applied major {s.applied!r} not declared")
        if s.initial == s.applied:
            issues.append(f"student {s.id!r}: applied major equals initial major")

    current: dict[MajorId, set[StudentId]] = {m.id: set() for m in problem.majors}
    applying: dict[MajorId, set[StudentId]] = {m.id: set() for m in problem.majors}
    for s in problem.students:
        if s.initial in current:
            current[s.initial].add(s.id)
        if s.applied in applying:
            applying[s.applied].add(s.id)

    for m in problem.majors:
        if not 0 <= m.floor <= m.ceiling:
            issues.append(f"major {m.id!r}: requires 0 <= floor <= ceiling, got ({m.floor}, {m.ceiling})")
        n_current = len(current.get(m.id, ()))
        if not m.floor <= n_current <= m.ceiling:
            issues.append(
                f"major {m.id!r}: initial enrollment {n_current} outside [{m.floor}, {m.ceiling}]"
            )
        if len(set(m.out_priority)) != len(m.out_priority):
            issues.append(f"major {m.id!r}: out_priority has repeats")
        if len(set(m.in_priority)) != len(m.in_priority):
            issues.append(f"major {m.id!r}: in_priority has repeats")
        issues.extend(
            _permutation_issues(m.id, "out_priority", set(m.out_priority), current.get(m.id, set()))
        )
        issues.extend(
            _permutation_issues(m.id, "in_priority", set(m.in_priority), applying.get(m.id, set()))
        )
    return issues


def corresponding_assignment(problem: Problem, outcome: Outcome) -> dict[StudentId, MajorId]:
    """Map each student to her assigned major under the outcome.

    A student moves to her applied major iff she holds both eligibilities.
    Raises UnknownIdError if the outcome names students outside the problem.
    """
    unknown = (outcome.out_eligible | outcome.in_eligible) - problem.student_ids
    if unknown:
        raise UnknownIdError(f"outcome references unknown student ids: {sorted(unknown)}")
    moving = outcome.transferable
    return {s.id: (s.applied if s.id in moving else s.initial) for s in problem.students}


def assigned_students(problem: Problem, outcome: Outcome, mid: MajorId) -> frozenset[StudentId]:
    """Students assigned to major `mid` under the outcome.

    Stayers are current students not transferring out; entrants are
    in-eligible applicants who also hold out-eligibility.
    """
    major = problem.major(mid)
    current = frozenset(major.out_priority)
    applicants = frozenset(major.in_priority)
    out_m = current & outcome.out_eligible
    in_m = applicants & outcome.in_eligible
    leavers = out_m & outcome.in_eligible
    entrants = in_m & outcome.out_eligible
    return (current - leavers) | entrants


def respects_distributional(problem: Problem, outcome: Outcome, mid: MajorId) -> bool:
    """Does `mid`'s assigned headcount stay within its floor and ceiling?"""
    major = problem.major(mid)
    n = len(assigned_students(problem, outcome, mid))
    return major.floor <= n <= major.ceiling


def _is_prefix(ordered: tuple[StudentId, ...], members: frozenset[StudentId]) -> bool:
    seen_gap = False
    for sid in ordered:
        if sid in members:
            if seen_gap:
                return False
        else:
            seen_gap = True
    return True


def respects_dual_priority(problem: Problem, outcome: Outcome, mid: MajorId) -> bool:
    """Are `mid`'s eligibility grants top-down in both priority orders, with no skips?"""
    major = problem.major(mid)
    return _is_prefix(major.out_priority, outcome.out_eligible) and _is_prefix(
        major.in_priority, outcome.in_eligible
    )


def is_permissible(problem: Problem, outcome: Outcome) -> bool:
    """Feasible outcome: every major respects both its constraints and its priorities."""
    return all(
        respects_dual_priority(problem, outcome, m.id)
        and respects_distributional(problem, outcome, m.id)
        for m in problem.majors
    )


def pareto_dominates(problem: Problem, candidate: Outcome, base: Outcome) -> bool:
    """True when candidate moves a strict superset of the students base moves.

    The comparison is purely on transferable sets: every student moving
    under base still moves under candidate, and someone new moves too.
    """
    return base.transferable < candidate.transferable


def can_permissibly_expand(
    problem: Problem, outcome: Outcome, mid: MajorId
) -> Optional[tuple[frozenset[StudentId], frozenset[StudentId]]]:
    """Search for a unilateral eligibility expansion at `mid`.

    Returns replacement sets (out_m, in_m), each a superset of the major's
    current grants and at least one strict, such that the expanded outcome
    still respects this major's own priorities and headcount bounds. Other
    majors' grants are held fixed and their constraints are not consulted.
    Returns None when no such expansion exists.

    The witness is deterministic: smallest out-extension first, then
    smallest in-extension.
    """
    major = problem.major(mid)
    out_order = major.out_priority
    in_order = major.in_priority
    cur_out = frozenset(out_order) & outcome.out_eligible
    cur_in = frozenset(in_order) & outcome.in_eligible

    # A replacement set must be a priority prefix covering the current grants.
    min_out = 1 + max((problem.out_rank[mid][s] for s in cur_out), default=-1)
    min_in = 1 + max((problem.in_rank[mid][s] for s in cur_in), default=-1)

    # Cumulative counts: among the top k out-priority students, how many hold
    # in-eligibility elsewhere (so granting them out-eligibility moves them),
    # and dually for the in side.
    out_also_in = [0]
    for sid in out_order:
        out_also_in.append(out_also_in[-1] + (sid in outcome.in_eligible))
    in_also_out = [0]
    for sid in in_order:
        in_also_out.append(in_also_out[-1] + (sid in outcome.out_eligible))

    n_current = len(out_order)
    for out_len in range(min_out, n_current + 1):
        for in_len in range(min_in, len(in_order) + 1):
            if out_len == min_out and in_len == min_in and min_out == len(cur_out) and min_in == len(cur_in):
                continue  # identity, not an expansion
            count = n_current - out_also_in[out_len] + in_also_out[in_len]
            if major.floor <= count <= major.ceiling:
                return frozenset(out_order[:out_len]), frozenset(in_order[:in_len])
    return None


def is_em(problem: Problem, outcome: Outcome) -> bool:
    """Exchange-maximal: no major can unilaterally expand its eligibility grants."""
    return all(can_permissibly_expand(problem, outcome, m.id) is None for m in problem.majors)


def classify_majors(problem: Problem, outcome: Outcome) -> MajorClassification:
    """Partition majors at a permissible exchange-maximal outcome.

    Overdemanded majors granted out-eligibility to all current students but
    withheld some in-eligibility; underdemanded majors did the reverse;
    balanced majors granted both sides fully. Raises ValueError when the
    outcome is not permissible exchange-maximal or the partition fails.
    """
    if not is_permissible(problem, outcome):
        raise ValueError("classification requires a permissible outcome")
    if not is_em(problem, outcome):
        raise ValueError("classification requires an exchange-maximal outcome")
    over: set[MajorId] = set()
    under: set[MajorId] = set()
    full: set[MajorId] = set()
    for m in problem.majors:
        out_full = frozenset(m.out_priority) <= outcome.out_eligible
        in_full = frozenset(m.in_priority) <= outcome.in_eligible
        if out_full and in_full:
            full.add(m.id)
        elif out_full:
            over.add(m.id)
        elif in_full:
            under.add(m.id)
        else:
            raise ValueError(f"major {m.id!r} withheld eligibility on both sides")
    return MajorClassification(frozenset(over), frozenset(under), frozenset(full))


def students_of(problem: Problem, major_ids: Iterable[MajorId]) -> frozenset[StudentId]:
    """Students whose initial major lies in `major_ids`."""
    wanted = set(major_ids)
    return frozenset(s.id for s in problem.students if s.initial in wanted)
