"""Exchange mechanisms for student major transitions under headcount bounds.

The package models markets where each student holds a seat in one major and
applies to another, majors rank their leavers and their applicants, and a
transfer happens exactly when the student is granted both transfer-out and
transfer-in eligibility. It ships the incumbent two-stage capped procedure,
exchange-maximal eligibility mechanisms, the pointing processes that repair
them to constrained efficiency, a brute-force oracle for small instances,
and a Monte Carlo harness comparing transfer rates.
"""

from __future__ import annotations

from .cmt_ec import CapProfile, derive_constraints, run_cmt_ec
from .cycles import (
    ExchangeCycle,
    eaem_tie,
    eaem_toe,
    tie_pointing,
    tie_process,
    toe_pointing,
    toe_process,
)
from .em import (
    ceiling_violated,
    floor_violated,
    run_alt_em,
    run_em,
    transfer_in_expandable,
    transfer_out_expandable,
)
from .model import (
    Major,
    MajorClassification,
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
    validate_problem,
)
from .oracle import (
    CertifyReport,
    OracleGuardError,
    certify,
    enumerate_permissible,
    enumerate_permissible_em,
    frontier_transferable_sets,
    pareto_frontier,
    search_space_size,
)
from .serialize import (
    InstanceFormatError,
    parse_instance,
    parse_outcome,
    render_instance,
    render_outcome,
    trace_to_dict,
)
from .sim import (
    ScenarioConfig,
    SimResult,
    compute_str,
    default_grid,
    generate_instance,
    run_scenario,
    run_scenario_suite,
    write_results_csv,
)
from .trace import MechanismTrace, TraceStep

__version__ = "0.1.0"

__all__ = [
    "CapProfile",
    "CertifyReport",
    "ExchangeCycle",
    "InstanceFormatError",
    "Major",
    "MajorClassification",
    "MechanismTrace",
    "Outcome",
    "OracleGuardError",
    "Problem",
    "ScenarioConfig",
    "SimResult",
    "Student",
    "TraceStep",
    "UnknownIdError",
    "assigned_students",
    "can_permissibly_expand",
    "ceiling_violated",
    "certify",
    "classify_majors",
    "compute_str",
    "corresponding_assignment",
    "default_grid",
    "derive_constraints",
    "eaem_tie",
    "eaem_toe",
    "enumerate_permissible",
    "enumerate_permissible_em",
    "floor_violated",
    "frontier_transferable_sets",
    "generate_instance",
    "is_em",
    "is_permissible",
    "pareto_dominates",
    "pareto_frontier",
    "parse_instance",
    "parse_outcome",
    "render_instance",
    "render_outcome",
    "respects_distributional",
    "respects_dual_priority",
    "run_alt_em",
    "run_cmt_ec",
    "run_em",
    "run_scenario",
    "run_scenario_suite",
    "search_space_size",
    "tie_pointing",
    "tie_process",
    "toe_pointing",
    "toe_process",
    "trace_to_dict",
    "transfer_in_expandable",
    "transfer_out_expandable",
    "validate_problem",
    "write_results_csv",
]
