"""The incumbent two-stage transfer procedure driven by per-major quota caps.

Each major announces a transfer-out cap and a transfer-in cap. Stage one
grants out-eligibility to each major's top current students up to the out
cap. Stage two grants in-eligibility, per major, to the top applicants who
already secured out-eligibility, up to the in cap; applicants without
out-eligibility are skipped rather than blocking those below them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .model import MajorId, Outcome, Problem, UnknownIdError
from .trace import MechanismTrace, TraceStep


@dataclass(frozen=True)
class CapProfile:
    """Per-major transfer-out and transfer-in caps."""

    out_cap: dict[MajorId, int]
    in_cap: dict[MajorId, int]

    def for_major(self, mid: MajorId) -> tuple[int, int]:
        try:
            return self.out_cap[mid], self.in_cap[mid]
        except KeyError:
            raise UnknownIdError(f"no caps declared for major {mid!r}") from None


def derive_constraints(
    current_counts: Mapping[MajorId, int], caps: CapProfile
) -> dict[MajorId, tuple[int, int]]:
    """Headcount bounds implied by the caps.

    A major currently holding n students can lose at most its out cap and
    gain at most its in cap, so its floor is max(0, n - out_cap) and its
    ceiling is n + in_cap.
    """
    bounds: dict[MajorId, tuple[int, int]] = {}
    for mid, n in current_counts.items():
        p_out, p_in = caps.for_major(mid)
        if p_out < 0 or p_in < 0:
            raise ValueError(f"caps for major {mid!r} must be non-negative")
        bounds[mid] = (max(0, n - p_out), n + p_in)
    return bounds


def run_cmt_ec(problem: Problem, caps: CapProfile) -> tuple[Outcome, MechanismTrace]:
    """Run the two-stage cap procedure.

    The problem's declared floors and ceilings must equal the bounds the
    caps imply; otherwise the caps describe a different problem and a
    ValueError is raised.
    """
    counts = {m.id: len(m.out_priority) for m in problem.majors}
    derived = derive_constraints(counts, caps)
    for m in problem.majors:
        if (m.floor, m.ceiling) != derived[m.id]:
            raise ValueError(
                f"major {m.id!r}: declared bounds ({m.floor}, {m.ceiling}) "
                f"do not match the cap-implied bounds {derived[m.id]}"
            )

    out_eligible: list[str] = []
    out_grants = []
    for m in problem.majors:
        p_out, _ = caps.for_major(m.id)
        take = min(p_out, len(m.out_priority))
        for sid in m.out_priority[:take]:
            out_eligible.append(sid)
            out_grants.append((sid, m.id, "out"))
    out_set = frozenset(out_eligible)

    in_eligible: list[str] = []
    in_grants = []
    for m in problem.majors:
        _, p_in = caps.for_major(m.id)
        secured = [sid for sid in m.in_priority if sid in out_set]
        for sid in secured[:p_in]:
            in_eligible.append(sid)
            in_grants.append((sid, m.id, "in"))

    final = Outcome(out_set, frozenset(in_eligible))
    steps = (
        TraceStep(index=1, process="cmt-ec", phase="transfer-out", grants=tuple(out_grants)),
        TraceStep(index=2, process="cmt-ec", phase="transfer-in", grants=tuple(in_grants)),
    )
    trace = MechanismTrace(initial=Outcome(frozenset(), frozenset()), steps=steps, final=final)
    return final, trace
