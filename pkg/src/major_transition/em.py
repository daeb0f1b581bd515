"""Iterative mechanisms that reach a permissible exchange-maximal outcome.

The primal mechanism starts from full out-eligibility and no in-eligibility.
While some major can admit one more applicant it lets every such major grant
in-eligibility to its best unserved applicant; once none can, every major
whose headcount fell below its floor revokes its worst out-eligibility; the
two phases alternate (admission prioritized) until neither applies.

The dual mechanism mirrors this from the opposite corner: it starts from
full in-eligibility and no out-eligibility, grants out-eligibility while
possible, and repairs ceiling violations by revoking in-eligibility.
"""

from __future__ import annotations

from .eligibility import PrefixState
from .model import MajorId, Outcome, Problem, assigned_students
from .trace import MechanismTrace, TraceStep

# Generous safety bound on steps; each step grants or revokes at least one
# eligibility and each eligibility changes at most once per direction.
def _step_limit(problem: Problem) -> int:
    return 2 * len(problem.students) + 2


def transfer_in_expandable(problem: Problem, outcome: Outcome) -> frozenset[MajorId]:
    """Majors that could admit their best unserved applicant.

    A major qualifies when some applicant still lacks in-eligibility and
    either the best such applicant holds no out-eligibility (admitting her
    is headcount-neutral for now) or the major sits below its ceiling.
    """
    result = set()
    for m in problem.majors:
        top = next((sid for sid in m.in_priority if sid not in outcome.in_eligible), None)
        if top is None:
            continue
        if top not in outcome.out_eligible:
            result.add(m.id)
        elif len(assigned_students(problem, outcome, m.id)) < m.ceiling:
            result.add(m.id)
    return frozenset(result)


def floor_violated(problem: Problem, outcome: Outcome) -> frozenset[MajorId]:
    """Majors whose assigned headcount fell below their floor."""
    return frozenset(
        m.id
        for m in problem.majors
        if len(assigned_students(problem, outcome, m.id)) < m.floor
    )


def transfer_out_expandable(problem: Problem, outcome: Outcome) -> frozenset[MajorId]:
    """Majors that could release their best unserved current student (dual side)."""
    result = set()
    for m in problem.majors:
        top = next((sid for sid in m.out_priority if sid not in outcome.out_eligible), None)
        if top is None:
            continue
        if top not in outcome.in_eligible:
            result.add(m.id)
        elif len(assigned_students(problem, outcome, m.id)) > m.floor:
            result.add(m.id)
    return frozenset(result)


def ceiling_violated(problem: Problem, outcome: Outcome) -> frozenset[MajorId]:
    """Majors whose assigned headcount exceeded their ceiling."""
    return frozenset(
        m.id
        for m in problem.majors
        if len(assigned_students(problem, outcome, m.id)) > m.ceiling
    )


def run_em(problem: Problem) -> tuple[Outcome, MechanismTrace]:
    """Admission-first mechanism from (everyone out-eligible, nobody in-eligible)."""
    st = PrefixState.initial_out(problem)
    initial = st.outcome()
    steps: list[TraceStep] = []
    limit = _step_limit(problem)
    majors = {m.id: m for m in problem.majors}

    for index in range(1, limit + 1):
        expandable = set()
        violated = set()
        for mid, m in majors.items():
            pos = st.in_len[mid]
            if pos < len(m.in_priority):
                top = m.in_priority[pos]
                if not st.holds_out(top) or st.count(mid) < m.ceiling:
                    expandable.add(mid)
            if st.count(mid) < m.floor:
                violated.add(mid)

        if expandable:
            grants = []
            for mid in sorted(expandable):
                for sid in st.extend_in(mid, st.in_len[mid] + 1):
                    grants.append((sid, mid, "in"))
            steps.append(
                TraceStep(
                    index=index,
                    process="em",
                    phase="transfer-in",
                    expandable=frozenset(expandable),
                    violated=frozenset(violated),
                    grants=tuple(grants),
                )
            )
        elif violated:
            revocations = []
            for mid in sorted(violated):
                assert st.out_len[mid] > 0, "a floor violation requires an out-eligible leaver"
                for sid in st.shrink_out(mid, st.out_len[mid] - 1):
                    revocations.append((sid, mid, "out"))
            steps.append(
                TraceStep(
                    index=index,
                    process="em",
                    phase="transfer-out",
                    expandable=frozenset(),
                    violated=frozenset(violated),
                    revocations=tuple(revocations),
                )
            )
        else:
            steps.append(TraceStep(index=index, process="em", phase="halt"))
            break
    else:
        raise RuntimeError("mechanism failed to halt within its step bound")

    final = st.outcome()
    return final, MechanismTrace(initial=initial, steps=tuple(steps), final=final)


def run_alt_em(problem: Problem) -> tuple[Outcome, MechanismTrace]:
    """Release-first mechanism from (nobody out-eligible, everyone in-eligible)."""
    st = PrefixState.initial_in(problem)
    initial = st.outcome()
    steps: list[TraceStep] = []
    limit = _step_limit(problem)
    majors = {m.id: m for m in problem.majors}

    for index in range(1, limit + 1):
        expandable = set()
        violated = set()
        for mid, m in majors.items():
            pos = st.out_len[mid]
            if pos < len(m.out_priority):
                top = m.out_priority[pos]
                if not st.holds_in(top) or st.count(mid) > m.floor:
                    expandable.add(mid)
            if st.count(mid) > m.ceiling:
                violated.add(mid)

        if expandable:
            grants = []
            for mid in sorted(expandable):
                for sid in st.extend_out(mid, st.out_len[mid] + 1):
                    grants.append((sid, mid, "out"))
            steps.append(
                TraceStep(
                    index=index,
                    process="alt-em",
                    phase="transfer-out",
                    expandable=frozenset(expandable),
                    violated=frozenset(violated),
                    grants=tuple(grants),
                )
            )
        elif violated:
            revocations = []
            for mid in sorted(violated):
                assert st.in_len[mid] > 0, "a ceiling violation requires an in-eligible entrant"
                for sid in st.shrink_in(mid, st.in_len[mid] - 1):
                    revocations.append((sid, mid, "in"))
            steps.append(
                TraceStep(
                    index=index,
                    process="alt-em",
                    phase="transfer-in",
                    expandable=frozenset(),
                    violated=frozenset(violated),
                    revocations=tuple(revocations),
                )
            )
        else:
            steps.append(TraceStep(index=index, process="alt-em", phase="halt"))
            break
    else:
        raise RuntimeError("mechanism failed to halt within its step bound")

    final = st.outcome()
    return final, MechanismTrace(initial=initial, steps=tuple(steps), final=final)
