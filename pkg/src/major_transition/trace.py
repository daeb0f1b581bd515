"""Step-by-step execution records for the exchange mechanisms.

Each step stores the diagnostic sets computed from the pre-step state and
the eligibility grants and revocations it applied. Snapshots are not stored;
`MechanismTrace.replay` reconstructs the outcome before and after every step
from the initial outcome, which keeps traces cheap at simulation scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .model import MajorId, Outcome, StudentId

# An eligibility change: (student, major, side) with side "out" or "in".
Change = tuple[StudentId, MajorId, str]


@dataclass(frozen=True)
class TraceStep:
    index: int
    process: str  # "cmt-ec", "em", "alt-em", "tie" or "toe"
    phase: str  # "transfer-out", "transfer-in", "pointing", "cycles" or "halt"
    expandable: frozenset[MajorId] = frozenset()  # majors able to grant one more
    violated: frozenset[MajorId] = frozenset()  # majors outside a headcount bound
    edges: tuple[tuple[MajorId, StudentId], ...] = ()  # pointing: major -> student
    removed: frozenset[MajorId] = frozenset()  # majors dropped from the live set
    cycles: tuple = ()  # executed ExchangeCycle objects
    grants: tuple[Change, ...] = ()
    revocations: tuple[Change, ...] = ()


@dataclass(frozen=True)
class MechanismTrace:
    initial: Outcome
    steps: tuple[TraceStep, ...]
    final: Outcome

    def replay(self) -> Iterator[tuple[TraceStep, Outcome, Outcome]]:
        """Yield (step, outcome_before, outcome_after) for every step."""
        out_set = set(self.initial.out_eligible)
        in_set = set(self.initial.in_eligible)
        for step in self.steps:
            before = Outcome(frozenset(out_set), frozenset(in_set))
            for sid, _mid, side in step.grants:
                (out_set if side == "out" else in_set).add(sid)
            for sid, _mid, side in step.revocations:
                (out_set if side == "out" else in_set).discard(sid)
            after = Outcome(frozenset(out_set), frozenset(in_set))
            yield step, before, after

    def replayed_final(self) -> Outcome:
        """Final outcome reconstructed from the deltas; must equal `final`."""
        outcome = self.initial
        for _step, _before, after in self.replay():
            outcome = after
        return outcome
