"""Incremental bookkeeping for prefix-shaped eligibility sets.

Every mechanism here only ever holds eligibility sets that are prefixes of
the majors' priority orders, so the full state reduces to one prefix length
per major per side. Headcounts are maintained incrementally, which keeps a
mechanism step O(changes) instead of O(instance).
"""

from __future__ import annotations

from .model import MajorId, Outcome, Problem, StudentId


class PrefixState:
    """Mutable eligibility state where each major's grants form a priority prefix."""

    __slots__ = ("problem", "out_len", "in_len", "_moved_out", "_moved_in")

    def __init__(self, problem: Problem, out_len: dict[MajorId, int], in_len: dict[MajorId, int]):
        self.problem = problem
        self.out_len = out_len
        self.in_len = in_len
        # _moved_out[m]: out-eligible current students of m who also hold
        # in-eligibility (they leave m). _moved_in[m]: in-eligible applicants
        # to m who also hold out-eligibility (they enter m).
        self._moved_out = {}
        self._moved_in = {}
        for m in problem.majors:
            self._moved_out[m.id] = sum(
                1 for sid in m.out_priority[: out_len[m.id]] if self.holds_in(sid)
            )
        for m in problem.majors:
            self._moved_in[m.id] = sum(
                1 for sid in m.in_priority[: in_len[m.id]] if self.holds_out(sid)
            )

    @classmethod
    def from_outcome(cls, problem: Problem, outcome: Outcome) -> "PrefixState":
        """Build from an outcome whose per-major grants are priority prefixes."""
        out_len: dict[MajorId, int] = {}
        in_len: dict[MajorId, int] = {}
        for m in problem.majors:
            k = sum(1 for sid in m.out_priority if sid in outcome.out_eligible)
            if frozenset(m.out_priority[:k]) != frozenset(m.out_priority) & outcome.out_eligible:
                raise ValueError(f"out-eligibility at major {m.id!r} is not a priority prefix")
            out_len[m.id] = k
            k = sum(1 for sid in m.in_priority if sid in outcome.in_eligible)
            if frozenset(m.in_priority[:k]) != frozenset(m.in_priority) & outcome.in_eligible:
                raise ValueError(f"in-eligibility at major {m.id!r} is not a priority prefix")
            in_len[m.id] = k
        return cls(problem, out_len, in_len)

    @classmethod
    def initial_out(cls, problem: Problem) -> "PrefixState":
        """Everyone out-eligible, nobody in-eligible."""
        return cls(
            problem,
            {m.id: len(m.out_priority) for m in problem.majors},
            {m.id: 0 for m in problem.majors},
        )

    @classmethod
    def initial_in(cls, problem: Problem) -> "PrefixState":
        """Nobody out-eligible, everyone in-eligible."""
        return cls(
            problem,
            {m.id: 0 for m in problem.majors},
            {m.id: len(m.in_priority) for m in problem.majors},
        )

    def holds_out(self, sid: StudentId) -> bool:
        home = self.problem.initial_of[sid]
        return self.problem.out_rank[home][sid] < self.out_len[home]

    def holds_in(self, sid: StudentId) -> bool:
        target = self.problem.applied_of[sid]
        return self.problem.in_rank[target][sid] < self.in_len[target]

    def count(self, mid: MajorId) -> int:
        """Current assigned headcount of the major."""
        n_current = len(self.problem.major(mid).out_priority)
        return n_current - self._moved_out[mid] + self._moved_in[mid]

    def extend_in(self, mid: MajorId, new_len: int) -> tuple[StudentId, ...]:
        """Grant in-eligibility down to prefix length `new_len`; returns grantees."""
        order = self.problem.major(mid).in_priority
        old = self.in_len[mid]
        assert old <= new_len <= len(order)
        granted = order[old:new_len]
        for sid in granted:
            if self.holds_out(sid):
                self._moved_in[mid] += 1
                self._moved_out[self.problem.initial_of[sid]] += 1
        self.in_len[mid] = new_len
        return granted

    def shrink_in(self, mid: MajorId, new_len: int) -> tuple[StudentId, ...]:
        """Revoke in-eligibility back to prefix length `new_len`; lowest first."""
        order = self.problem.major(mid).in_priority
        old = self.in_len[mid]
        assert 0 <= new_len <= old
        revoked = tuple(reversed(order[new_len:old]))
        for sid in revoked:
            if self.holds_out(sid):
                self._moved_in[mid] -= 1
                self._moved_out[self.problem.initial_of[sid]] -= 1
        self.in_len[mid] = new_len
        return revoked

    def extend_out(self, mid: MajorId, new_len: int) -> tuple[StudentId, ...]:
        order = self.problem.major(mid).out_priority
        old = self.out_len[mid]
        assert old <= new_len <= len(order)
        granted = order[old:new_len]
        for sid in granted:
            if self.holds_in(sid):
                self._moved_out[mid] += 1
                self._moved_in[self.problem.applied_of[sid]] += 1
        self.out_len[mid] = new_len
        return granted

    def shrink_out(self, mid: MajorId, new_len: int) -> tuple[StudentId, ...]:
        order = self.problem.major(mid).out_priority
        old = self.out_len[mid]
        assert 0 <= new_len <= old
        revoked = tuple(reversed(order[new_len:old]))
        for sid in revoked:
            if self.holds_in(sid):
                self._moved_out[mid] -= 1
                self._moved_in[self.problem.applied_of[sid]] -= 1
        self.out_len[mid] = new_len
        return revoked

    def outcome(self) -> Outcome:
        out_set: list[StudentId] = []
        in_set: list[StudentId] = []
        for m in self.problem.majors:
            out_set.extend(m.out_priority[: self.out_len[m.id]])
            in_set.extend(m.in_priority[: self.in_len[m.id]])
        return Outcome(frozenset(out_set), frozenset(in_set))
