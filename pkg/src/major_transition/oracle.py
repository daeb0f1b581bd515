"""Exhaustive ground truth for small instances.

Permissible outcomes grant eligibility top-down in every priority order, so
each major contributes a prefix of each of its two orders. Enumerating all
prefix-length combinations and filtering by the headcount bounds yields the
complete permissible set, from which exchange-maximal outcomes, the Pareto
frontier and certification reports follow.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional

from .model import (
    Outcome,
    Problem,
    StudentId,
    UnknownIdError,
    is_em,
    is_permissible,
)

DEFAULT_LIMIT = 10_000_000


class OracleGuardError(RuntimeError):
    """The instance's prefix search space exceeds the enumeration guard."""


@dataclass(frozen=True)
class CertifyReport:
    permissible: bool
    em: bool
    efficient: bool
    witness: Optional[Outcome]  # a permissible outcome moving strictly more students


def search_space_size(problem: Problem) -> int:
    size = 1
    for m in problem.majors:
        size *= (len(m.out_priority) + 1) * (len(m.in_priority) + 1)
    return size


def _sort_key(outcome: Outcome) -> tuple:
    return (tuple(sorted(outcome.out_eligible)), tuple(sorted(outcome.in_eligible)))


class _MaskSpace:
    """Bit-mask encoding of prefix choices for fast exhaustive checks."""

    def __init__(self, problem: Problem):
        self.problem = problem
        self.bit = {s.id: 1 << pos for pos, s in enumerate(problem.students)}
        self.ids = [s.id for s in problem.students]
        self.per_major: list[tuple[int, int, int, list[int], list[int]]] = []
        for m in problem.majors:
            out_prefixes = [0]
            for sid in m.out_priority:
                out_prefixes.append(out_prefixes[-1] | self.bit[sid])
            in_prefixes = [0]
            for sid in m.in_priority:
                in_prefixes.append(in_prefixes[-1] | self.bit[sid])
            self.per_major.append(
                (len(m.out_priority), m.floor, m.ceiling, out_prefixes, in_prefixes)
            )

    def to_outcome(self, out_mask: int, in_mask: int) -> Outcome:
        out_set = frozenset(sid for sid in self.ids if self.bit[sid] & out_mask)
        in_set = frozenset(sid for sid in self.ids if self.bit[sid] & in_mask)
        return Outcome(out_set, in_set)

    def permissible_masks(self) -> list[tuple[int, int]]:
        choice_lists = [
            [(om, im) for om in outs for im in ins]
            for (_n, _f, _c, outs, ins) in self.per_major
        ]
        specs = [(n, f, c) for (n, f, c, _o, _i) in self.per_major]
        found: list[tuple[int, int]] = []
        for combo in product(*choice_lists):
            out_mask = 0
            in_mask = 0
            for om, im in combo:
                out_mask |= om
                in_mask |= im
            ok = True
            for (n, floor, ceiling), (om, im) in zip(specs, combo):
                count = n - (om & in_mask).bit_count() + (im & out_mask).bit_count()
                if not floor <= count <= ceiling:
                    ok = False
                    break
            if ok:
                found.append((out_mask, in_mask))
        return found


def _guard(problem: Problem, limit: int) -> None:
    size = search_space_size(problem)
    if size > limit:
        raise OracleGuardError(
            f"prefix search space of size {size} exceeds the guard ({limit}); "
            "the oracle is intended for small instances"
        )


def enumerate_permissible(problem: Problem, limit: int = DEFAULT_LIMIT) -> list[Outcome]:
    """All permissible outcomes, deterministically ordered."""
    _guard(problem, limit)
    space = _MaskSpace(problem)
    outcomes = [space.to_outcome(om, im) for om, im in space.permissible_masks()]
    outcomes.sort(key=_sort_key)
    return outcomes


def enumerate_permissible_em(problem: Problem, limit: int = DEFAULT_LIMIT) -> list[Outcome]:
    """All permissible exchange-maximal outcomes."""
    return [o for o in enumerate_permissible(problem, limit) if is_em(problem, o)]


def frontier_transferable_sets(
    problem: Problem, limit: int = DEFAULT_LIMIT
) -> set[frozenset[StudentId]]:
    """Maximal transferable sets over all permissible outcomes."""
    _guard(problem, limit)
    space = _MaskSpace(problem)
    masks = {om & im for om, im in space.permissible_masks()}
    maximal = [
        t for t in masks if not any(t != u and t & u == t for u in masks)
    ]
    return {
        frozenset(sid for sid in space.ids if space.bit[sid] & t) for t in maximal
    }


def pareto_frontier(problem: Problem, limit: int = DEFAULT_LIMIT) -> list[Outcome]:
    """One representative permissible outcome per maximal transferable set.

    Representatives are the lexicographically smallest outcomes realizing
    each maximal transferable set.
    """
    _guard(problem, limit)
    outcomes = enumerate_permissible(problem, limit)
    by_set: dict[frozenset[StudentId], Outcome] = {}
    for o in outcomes:  # already sorted, so first seen is lexicographically least
        by_set.setdefault(o.transferable, o)
    maximal = [
        t for t in by_set if not any(t < u for u in by_set)
    ]
    return sorted((by_set[t] for t in maximal), key=_sort_key)


def certify(problem: Problem, outcome: Outcome, limit: int = DEFAULT_LIMIT) -> CertifyReport:
    """Classify an outcome: permissible? exchange-maximal? Pareto efficient?

    For a permissible but inefficient outcome, the report carries a frontier
    outcome moving a strict superset of its transferable students.
    """
    unknown = (outcome.out_eligible | outcome.in_eligible) - problem.student_ids
    if unknown:
        raise UnknownIdError(f"outcome references unknown student ids: {sorted(unknown)}")
    permissible = is_permissible(problem, outcome)
    em = is_em(problem, outcome)
    if not permissible:
        return CertifyReport(permissible=False, em=em, efficient=False, witness=None)
    moving = outcome.transferable
    for rep in pareto_frontier(problem, limit):
        if moving < rep.transferable:
            return CertifyReport(permissible=True, em=em, efficient=False, witness=rep)
    return CertifyReport(permissible=True, em=em, efficient=True, witness=None)
