"""Monte Carlo harness comparing mechanisms on randomly generated markets.

Each trial populates a fixed number of majors with a fixed number of
students, draws random cardinal utilities, and lets every student apply to
her argmax major (students whose own major attains the maximum do not
apply).  The induced applicant sub-market, with headcount bounds adjusted
for the non-applicants who certainly stay, is then solved by each mechanism
and summarized by the successful transition rate: transferring students
divided by applicants.

Utility of student i for major m is

    beta1 * X(i, m) + beta2 * Y(m) + (1 - beta1 - beta2) * C

with X and Y i.i.d. uniform on [0, 1) (an idiosyncratic taste draw and a
common quality draw) and C a constant valuation of the student's initial
major.  Because the C term does not depend on the candidate major m, the
argmax comparison reduces to beta1 * X + beta2 * Y; the initial-major
weight matters through the normalization beta1 + beta2 <= 1 and through
the stay rule: a student applies only if some other major strictly beats
her own (so when beta1 = beta2 = 0 all utilities tie and nobody applies).
Argmax ties among other majors go to the smallest major id.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .cmt_ec import CapProfile, run_cmt_ec
from .cycles import eaem_tie, eaem_toe
from .em import run_em
from .model import Major, Outcome, Problem, Student

MECHANISMS = ("cmt-ec", "em", "eaem-tie", "eaem-toe")

REGIMES = ("balanced", "band")


@dataclass(frozen=True)
class ScenarioConfig:
    beta1: float
    beta2: float
    constraint_regime: str = "balanced"
    n_majors: int = 10
    capacity_per_major: int = 100
    floor_frac: float = 0.9  # band regime: floor = round(floor_frac * capacity)
    ceiling_frac: float = 1.1
    trials: int = 1000
    master_seed: int = 17
    label: str = ""

    def __post_init__(self) -> None:
        if self.constraint_regime not in REGIMES:
            raise ValueError(
                f"constraint_regime must be one of {REGIMES}, got {self.constraint_regime!r}"
            )
        if not (0.0 <= self.beta1 and 0.0 <= self.beta2 and self.beta1 + self.beta2 <= 1.0):
            raise ValueError("require beta1, beta2 >= 0 and beta1 + beta2 <= 1")
        if self.n_majors < 2 or self.capacity_per_major < 1 or self.trials < 1:
            raise ValueError("require n_majors >= 2, capacity_per_major >= 1, trials >= 1")

    @property
    def stay_weight(self) -> float:
        return 1.0 - self.beta1 - self.beta2

    def headcount_bounds(self) -> tuple[int, int]:
        """Raw floor and ceiling per major, before removing non-applicants."""
        if self.constraint_regime == "balanced":
            return self.capacity_per_major, self.capacity_per_major
        return (
            round(self.floor_frac * self.capacity_per_major),
            round(self.ceiling_frac * self.capacity_per_major),
        )


@dataclass(frozen=True)
class TrialInstance:
    problem: Problem  # applicants only
    non_applicants: dict[str, int]  # per major, students who did not apply out
    caps: CapProfile  # cap profile for the incumbent procedure


@dataclass(frozen=True)
class MechanismStats:
    mean_str: float
    std_str: float
    trials: int


@dataclass(frozen=True)
class SimResult:
    config: ScenarioConfig
    stats: dict[str, MechanismStats]
    mean_applicants: float
    mismatch_trials: tuple[int, ...]  # trials where the two-stage variants disagreed


def _major_id(j: int) -> str:
    return f"m{j:02d}"


def _student_id(i: int) -> str:
    return f"s{i:04d}"


def generate_instance(config: ScenarioConfig, trial_index: int) -> TrialInstance:
    """Deterministically generate one trial's applicant market.

    Draw order is fixed: common quality per major, then taste per student
    and major, then per-major score vectors (out side then in side, majors
    in id order) that induce the priority orders.  A student applies to the
    best other major when it strictly beats her own; argmax ties among
    other majors go to the smallest major id.
    """
    rng = np.random.default_rng(np.random.SeedSequence((config.master_seed, trial_index)))
    n_m = config.n_majors
    n_s = n_m * config.capacity_per_major
    initial_idx = np.repeat(np.arange(n_m), config.capacity_per_major)

    quality = rng.random(n_m)
    taste = rng.random((n_s, n_m))
    # The constant initial-major term cancels in comparisons, so the argmax
    # runs over the two stochastic terms only.
    score = config.beta1 * taste + config.beta2 * quality[None, :]
    applied_idx = np.argmax(score, axis=1)
    own_score = score[np.arange(n_s), initial_idx]
    is_applicant = score[np.arange(n_s), applied_idx] > own_score

    raw_floor, raw_ceiling = config.headcount_bounds()
    students: list[Student] = []
    for i in np.flatnonzero(is_applicant):
        students.append(
            Student(
                id=_student_id(int(i)),
                initial=_major_id(int(initial_idx[i])),
                applied=_major_id(int(applied_idx[i])),
            )
        )

    out_lists: dict[str, list[str]] = {_major_id(j): [] for j in range(n_m)}
    in_lists: dict[str, list[str]] = {_major_id(j): [] for j in range(n_m)}
    for s in students:
        out_lists[s.initial].append(s.id)
        in_lists[s.applied].append(s.id)

    def ranked(ids: list[str]) -> tuple[str, ...]:
        scores = rng.random(len(ids))
        order = np.argsort(-scores, kind="stable")
        return tuple(ids[k] for k in order)

    out_priority: dict[str, tuple[str, ...]] = {}
    in_priority: dict[str, tuple[str, ...]] = {}
    for j in range(n_m):
        mid = _major_id(j)
        out_priority[mid] = ranked(out_lists[mid])
        in_priority[mid] = ranked(in_lists[mid])

    # Applicant sub-market bounds: non-applicants never move, so they are a
    # fixed headcount offset. With p_out = capacity - raw_floor and
    # p_in = raw_ceiling - capacity these bounds coincide with the ones the
    # cap profile implies, so the incumbent procedure runs on the same
    # problem object.
    majors = []
    non_applicants: dict[str, int] = {}
    p_out = config.capacity_per_major - raw_floor
    p_in = raw_ceiling - config.capacity_per_major
    for j in range(n_m):
        mid = _major_id(j)
        stayers = config.capacity_per_major - len(out_lists[mid])
        non_applicants[mid] = stayers
        majors.append(
            Major(
                id=mid,
                floor=max(0, raw_floor - stayers),
                ceiling=raw_ceiling - stayers,
                out_priority=out_priority[mid],
                in_priority=in_priority[mid],
            )
        )

    caps = CapProfile(
        out_cap={_major_id(j): p_out for j in range(n_m)},
        in_cap={_major_id(j): p_in for j in range(n_m)},
    )
    return TrialInstance(
        problem=Problem(tuple(students), tuple(majors)),
        non_applicants=non_applicants,
        caps=caps,
    )


def compute_str(problem: Problem, outcome: Outcome) -> float:
    """Successful transition rate: transferring students over applicants."""
    n = len(problem.students)
    return len(outcome.transferable) / n if n else 0.0


def run_scenario(config: ScenarioConfig, dump_dir: Optional[Path] = None) -> SimResult:
    """Run every trial of a scenario and aggregate per-mechanism transfer rates.

    Trials where the two two-stage procedures move different numbers of
    students are reported in `mismatch_trials` (and dumped as instance
    files when `dump_dir` is given) instead of failing silently.
    """
    rates: dict[str, list[float]] = {name: [] for name in MECHANISMS}
    applicants: list[int] = []
    mismatches: list[int] = []

    for t in range(config.trials):
        inst = generate_instance(config, t)
        problem = inst.problem
        applicants.append(len(problem.students))

        cap_outcome, _ = run_cmt_ec(problem, inst.caps)
        em_outcome, _ = run_em(problem)
        tie_outcome, _ = eaem_tie(problem, em_outcome)
        toe_outcome, _ = eaem_toe(problem, em_outcome)

        rates["cmt-ec"].append(compute_str(problem, cap_outcome))
        rates["em"].append(compute_str(problem, em_outcome))
        rates["eaem-tie"].append(compute_str(problem, tie_outcome))
        rates["eaem-toe"].append(compute_str(problem, toe_outcome))

        if len(tie_outcome.transferable) != len(toe_outcome.transferable):
            mismatches.append(t)
            if dump_dir is not None:
                _dump_mismatch(dump_dir, config, t, inst, tie_outcome, toe_outcome)

    stats = {}
    for name, values in rates.items():
        arr = np.asarray(values)
        std = float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
        stats[name] = MechanismStats(mean_str=float(arr.mean()), std_str=std, trials=len(arr))
    return SimResult(
        config=config,
        stats=stats,
        mean_applicants=float(np.mean(applicants)) if applicants else 0.0,
        mismatch_trials=tuple(mismatches),
    )


def _dump_mismatch(
    dump_dir: Path,
    config: ScenarioConfig,
    trial: int,
    inst: TrialInstance,
    tie_outcome: Outcome,
    toe_outcome: Outcome,
) -> None:
    from .serialize import instance_to_dict, outcome_to_dict

    dump_dir.mkdir(parents=True, exist_ok=True)
    payload = {
        "label": config.label,
        "constraint_regime": config.constraint_regime,
        "beta1": config.beta1,
        "beta2": config.beta2,
        "master_seed": config.master_seed,
        "trial": trial,
        "instance": instance_to_dict(inst.problem),
        "eaem_tie": outcome_to_dict(tie_outcome),
        "eaem_toe": outcome_to_dict(toe_outcome),
    }
    name = f"mismatch_{config.constraint_regime}_b1_{config.beta1}_trial{trial}.json"
    (dump_dir / name).write_text(json.dumps(payload, indent=2, sort_keys=True))


def run_scenario_suite(
    configs: Iterable[ScenarioConfig], dump_dir: Optional[Path] = None
) -> list[SimResult]:
    return [run_scenario(c, dump_dir=dump_dir) for c in configs]


def default_grid(
    trials: int = 1000, master_seed: int = 17, regimes: Iterable[str] = REGIMES
) -> list[ScenarioConfig]:
    """The scenario grid: three stay-weight groups, four taste weights each."""
    groups = {
        0.4: (0.3, 0.4, 0.5, 0.6),
        0.3: (0.4, 0.5, 0.6, 0.7),
        0.2: (0.4, 0.5, 0.6, 0.7),
    }
    configs = []
    for regime in regimes:
        for stay, beta1s in groups.items():
            for beta1 in beta1s:
                beta2 = round(1.0 - stay - beta1, 10)
                configs.append(
                    ScenarioConfig(
                        beta1=beta1,
                        beta2=beta2,
                        constraint_regime=regime,
                        trials=trials,
                        master_seed=master_seed,
                        label=f"{regime}-w{stay}-b1_{beta1}",
                    )
                )
    return configs


def write_results_csv(results: Iterable[SimResult], path_or_file) -> None:
    """Write one CSV row per (scenario, mechanism) to a path or open file."""
    import csv

    if hasattr(path_or_file, "write"):
        _write_rows(csv.writer(path_or_file), results)
    else:
        with open(path_or_file, "w", newline="") as fh:
            _write_rows(csv.writer(fh), results)


def _write_rows(writer, results: Iterable[SimResult]) -> None:
    writer.writerow(
        [
            "regime",
            "beta1",
            "beta2",
            "mechanism",
            "mean_str",
            "std_str",
            "trials",
            "mean_applicants",
        ]
    )
    for res in results:
        for name in MECHANISMS:
            s = res.stats[name]
            writer.writerow(
                [
                    res.config.constraint_regime,
                    res.config.beta1,
                    res.config.beta2,
                    name,
                    f"{s.mean_str:.6f}",
                    f"{s.std_str:.6f}",
                    s.trials,
                    f"{res.mean_applicants:.2f}",
                ]
            )
