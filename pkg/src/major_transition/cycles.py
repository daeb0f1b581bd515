"""Pointing processes that trade eligibility around exchange cycles.

Both processes start from a permissible outcome and keep a live set of
majors. Each round, every live major points at its best candidate: in the
admission process, the best applicant lacking in-eligibility but holding
out-eligibility; in the release process, the best current student lacking
out-eligibility but holding in-eligibility. A pointed student leads to her
other major. Majors with no candidate, or whose candidate leads outside the
live set, leave the live set after revoking every eligibility they granted
below their worst actually-trading student (all of it when no student of
theirs trades). When every live major's candidate leads to a live major the
pointing graph contains cycles; every major on a cycle grants eligibility
down to its pointed student, and the round repeats.

Composing the two processes, in either order, on a permissible
exchange-maximal outcome yields a Pareto efficient outcome.
"""

from __future__ import annotations

from dataclasses import dataclass

from .eligibility import PrefixState
from .model import (
    MajorId,
    Outcome,
    Problem,
    StudentId,
    UnknownIdError,
    is_em,
    is_permissible,
)
from .trace import MechanismTrace, TraceStep


@dataclass(frozen=True)
class ExchangeCycle:
    """A cycle alternating majors and students, starting with a major.

    For kind "transfer-in", each student in the cycle applied to the major
    before her and is enrolled in the major after her; for "transfer-out",
    each student is enrolled in the major before her and applied to the
    major after her (indices wrap around).
    """

    kind: str  # "transfer-in" or "transfer-out"
    members: tuple[str, ...]

    @property
    def major_ids(self) -> tuple[MajorId, ...]:
        return self.members[0::2]

    @property
    def student_ids(self) -> tuple[StudentId, ...]:
        return self.members[1::2]

    def check(self, problem: Problem) -> None:
        """Assert the alternating adjacency; raises ValueError when broken."""
        majors = self.major_ids
        students = self.student_ids
        if len(majors) != len(students) or not majors:
            raise ValueError("cycle must alternate majors and students")
        for pos, sid in enumerate(students):
            before = majors[pos]
            after = majors[(pos + 1) % len(majors)]
            if self.kind == "transfer-in":
                ok = problem.applied_of[sid] == before and problem.initial_of[sid] == after
            else:
                ok = problem.initial_of[sid] == before and problem.applied_of[sid] == after
            if not ok:
                raise ValueError(f"student {sid!r} breaks the {self.kind} cycle adjacency")


def tie_pointing(
    problem: Problem, outcome: Outcome, live: frozenset[MajorId]
) -> tuple[dict[MajorId, StudentId], frozenset[MajorId]]:
    """One pointing round of the admission process, computed from scratch.

    Returns (edges, dropped): each live major's pointed student, and the
    live majors that point nowhere or at a student enrolled outside `live`.
    """
    edges: dict[MajorId, StudentId] = {}
    dropped = set()
    for mid in live:
        m = problem.major(mid)
        pointee = next(
            (
                sid
                for sid in m.in_priority
                if sid not in outcome.in_eligible and sid in outcome.out_eligible
            ),
            None,
        )
        if pointee is None:
            dropped.add(mid)
        else:
            edges[mid] = pointee
            if problem.initial_of[pointee] not in live:
                dropped.add(mid)
    return edges, frozenset(dropped)


def toe_pointing(
    problem: Problem, outcome: Outcome, live: frozenset[MajorId]
) -> tuple[dict[MajorId, StudentId], frozenset[MajorId]]:
    """One pointing round of the release process (dual of `tie_pointing`)."""
    edges: dict[MajorId, StudentId] = {}
    dropped = set()
    for mid in live:
        m = problem.major(mid)
        pointee = next(
            (
                sid
                for sid in m.out_priority
                if sid not in outcome.out_eligible and sid in outcome.in_eligible
            ),
            None,
        )
        if pointee is None:
            dropped.add(mid)
        else:
            edges[mid] = pointee
            if problem.applied_of[pointee] not in live:
                dropped.add(mid)
    return edges, frozenset(dropped)


def _functional_cycles(graph: dict[MajorId, MajorId]) -> list[list[MajorId]]:
    """All cycles of a functional graph (every node has out-degree one)."""
    done: set[MajorId] = set()
    cycles: list[list[MajorId]] = []
    for root in sorted(graph):
        if root in done:
            continue
        path: list[MajorId] = []
        pos: dict[MajorId, int] = {}
        node = root
        while node not in done and node not in pos:
            pos[node] = len(path)
            path.append(node)
            node = graph[node]
        if node in pos:  # fresh cycle discovered on this walk
            cycles.append(path[pos[node] :])
        done.update(path)
    return cycles


def _rotate_to_min(cycle: list[MajorId]) -> list[MajorId]:
    start = cycle.index(min(cycle))
    return cycle[start:] + cycle[:start]


def _check_start(problem: Problem, start: Outcome) -> None:
    unknown = (start.out_eligible | start.in_eligible) - problem.student_ids
    if unknown:
        raise UnknownIdError(f"start outcome references unknown student ids: {sorted(unknown)}")
    if not is_permissible(problem, start):
        raise ValueError("pointing processes require a permissible start outcome")


def tie_process(problem: Problem, start: Outcome) -> tuple[Outcome, MechanismTrace]:
    """Run the admission pointing process from a permissible outcome.

    Grants in-eligibility around transfer-in cycles; a major leaving the
    live set revokes out-eligibility below its worst out-eligible student
    who actually trades (all of it when none trades).
    """
    _check_start(problem, start)
    st = PrefixState.from_outcome(problem, start)
    live = set(problem.majors_by_id)
    steps: list[TraceStep] = []
    pointer = {m.id: 0 for m in problem.majors}
    index = 0
    limit = len(problem.majors) + len(problem.students) + 2

    while live:
        index += 1
        if index > limit:
            raise RuntimeError("pointing process failed to halt within its step bound")

        edges: dict[MajorId, StudentId] = {}
        dropped = set()
        for mid in sorted(live):
            order = problem.major(mid).in_priority
            pos = max(pointer[mid], st.in_len[mid])
            while pos < len(order) and not st.holds_out(order[pos]):
                pos += 1
            pointer[mid] = pos
            if pos == len(order):
                dropped.add(mid)
            else:
                pointee = order[pos]
                edges[mid] = pointee
                if problem.initial_of[pointee] not in live:
                    dropped.add(mid)

        edge_list = tuple(sorted(edges.items()))
        if dropped:
            revocations = []
            for mid in sorted(dropped):
                order = problem.major(mid).out_priority
                keep = 0
                for pos in range(st.out_len[mid] - 1, -1, -1):
                    if st.holds_in(order[pos]):
                        keep = pos + 1
                        break
                for sid in st.shrink_out(mid, keep):
                    revocations.append((sid, mid, "out"))
            live -= dropped
            steps.append(
                TraceStep(
                    index=index,
                    process="tie",
                    phase="pointing",
                    edges=edge_list,
                    removed=frozenset(dropped),
                    revocations=tuple(revocations),
                )
            )
        else:
            graph = {mid: problem.initial_of[edges[mid]] for mid in live}
            cycles = []
            grants = []
            for cyc in _functional_cycles(graph):
                majors_on_cycle = _rotate_to_min(cyc)
                members: list[str] = []
                for mid in majors_on_cycle:
                    members.append(mid)
                    members.append(edges[mid])
                cycles.append(ExchangeCycle(kind="transfer-in", members=tuple(members)))
                for mid in majors_on_cycle:
                    upto = problem.in_rank[mid][edges[mid]] + 1
                    for sid in st.extend_in(mid, upto):
                        grants.append((sid, mid, "in"))
            steps.append(
                TraceStep(
                    index=index,
                    process="tie",
                    phase="cycles",
                    edges=edge_list,
                    cycles=tuple(cycles),
                    grants=tuple(grants),
                )
            )

    final = st.outcome()
    return final, MechanismTrace(initial=start, steps=tuple(steps), final=final)


def toe_process(problem: Problem, start: Outcome) -> tuple[Outcome, MechanismTrace]:
    """Run the release pointing process from a permissible outcome (dual)."""
    _check_start(problem, start)
    st = PrefixState.from_outcome(problem, start)
    live = set(problem.majors_by_id)
    steps: list[TraceStep] = []
    pointer = {m.id: 0 for m in problem.majors}
    index = 0
    limit = len(problem.majors) + len(problem.students) + 2

    while live:
        index += 1
        if index > limit:
            raise RuntimeError("pointing process failed to halt within its step bound")

        edges: dict[MajorId, StudentId] = {}
        dropped = set()
        for mid in sorted(live):
            order = problem.major(mid).out_priority
            pos = max(pointer[mid], st.out_len[mid])
            while pos < len(order) and not st.holds_in(order[pos]):
                pos += 1
            pointer[mid] = pos
            if pos == len(order):
                dropped.add(mid)
            else:
                pointee = order[pos]
                edges[mid] = pointee
                if problem.applied_of[pointee] not in live:
                    dropped.add(mid)

        edge_list = tuple(sorted(edges.items()))
        if dropped:
            revocations = []
            for mid in sorted(dropped):
                order = problem.major(mid).in_priority
                keep = 0
                for pos in range(st.in_len[mid] - 1, -1, -1):
                    if st.holds_out(order[pos]):
                        keep = pos + 1
                        break
                for sid in st.shrink_in(mid, keep):
                    revocations.append((sid, mid, "in"))
            live -= dropped
            steps.append(
                TraceStep(
                    index=index,
                    process="toe",
                    phase="pointing",
                    edges=edge_list,
                    removed=frozenset(dropped),
                    revocations=tuple(revocations),
                )
            )
        else:
            graph = {mid: problem.applied_of[edges[mid]] for mid in live}
            cycles = []
            grants = []
            for cyc in _functional_cycles(graph):
                majors_on_cycle = _rotate_to_min(cyc)
                members: list[str] = []
                for mid in majors_on_cycle:
                    members.append(mid)
                    members.append(edges[mid])
                cycles.append(ExchangeCycle(kind="transfer-out", members=tuple(members)))
                for mid in majors_on_cycle:
                    upto = problem.out_rank[mid][edges[mid]] + 1
                    for sid in st.extend_out(mid, upto):
                        grants.append((sid, mid, "out"))
            steps.append(
                TraceStep(
                    index=index,
                    process="toe",
                    phase="cycles",
                    edges=edge_list,
                    cycles=tuple(cycles),
                    grants=tuple(grants),
                )
            )

    final = st.outcome()
    return final, MechanismTrace(initial=start, steps=tuple(steps), final=final)


def _check_em_seed(problem: Problem, seed: Outcome) -> None:
    _check_start(problem, seed)
    if not is_em(problem, seed):
        raise ValueError("the two-stage procedures require an exchange-maximal seed outcome")


def _merge_traces(seed: Outcome, first: MechanismTrace, second: MechanismTrace) -> MechanismTrace:
    steps = []
    index = 0
    for step in first.steps + second.steps:
        index += 1
        steps.append(
            TraceStep(
                index=index,
                process=step.process,
                phase=step.phase,
                expandable=step.expandable,
                violated=step.violated,
                edges=step.edges,
                removed=step.removed,
                cycles=step.cycles,
                grants=step.grants,
                revocations=step.revocations,
            )
        )
    return MechanismTrace(initial=seed, steps=tuple(steps), final=second.final)


def eaem_tie(problem: Problem, seed: Outcome) -> tuple[Outcome, MechanismTrace]:
    """Admission process then release process, from a permissible exchange-maximal seed."""
    _check_em_seed(problem, seed)
    mid_outcome, first = tie_process(problem, seed)
    final, second = toe_process(problem, mid_outcome)
    return final, _merge_traces(seed, first, second)


def eaem_toe(problem: Problem, seed: Outcome) -> tuple[Outcome, MechanismTrace]:
    """Release process then admission process, from a permissible exchange-maximal seed."""
    _check_em_seed(problem, seed)
    mid_outcome, first = toe_process(problem, seed)
    final, second = tie_process(problem, mid_outcome)
    return final, _merge_traces(seed, first, second)
