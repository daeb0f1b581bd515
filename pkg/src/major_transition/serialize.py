"""JSON formats for problems, outcomes, scenario configs and traces.

All documents are versioned with a `schema_version` field. Rendering is
canonical: object keys sorted, set-valued id arrays sorted, object arrays
sorted by id. Priority lists are ordered data and are kept verbatim.
Parse errors carry a JSON path so a bad document names its own defect.
"""

from __future__ import annotations

import json
from typing import Any, NoReturn, Optional

from .cmt_ec import CapProfile
from .model import (
    Major,
    Outcome,
    Problem,
    Student,
    corresponding_assignment,
    validate_problem,
)
from .sim import ScenarioConfig
from .trace import MechanismTrace

SCHEMA_VERSION = 1


class InstanceFormatError(ValueError):
    """A document does not match the expected schema."""


def _fail(path: str, message: str) -> NoReturn:
    raise InstanceFormatError(f"{path}: {message}")


def _load(text: str | bytes, path: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        _fail(path, f"not valid JSON ({exc})")


def _as_dict(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        _fail(path, f"expected an object, got {type(value).__name__}")
    return value


def _as_list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        _fail(path, f"expected an array, got {type(value).__name__}")
    return value


def _as_str(value: Any, path: str) -> str:
    if not isinstance(value, str) or not value:
        _fail(path, "expected a non-empty string")
    return value


def _as_int(value: Any, path: str, minimum: Optional[int] = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(path, f"expected an integer, got {type(value).__name__}")
    if minimum is not None and value < minimum:
        _fail(path, f"expected an integer >= {minimum}, got {value}")
    return value


def _as_float(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(path, f"expected a number, got {type(value).__name__}")
    return float(value)


def _as_id_list(value: Any, path: str) -> list[str]:
    items = _as_list(value, path)
    return [_as_str(v, f"{path}[{k}]") for k, v in enumerate(items)]


def _check_version(obj: dict, path: str) -> None:
    version = obj.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        _fail(f"{path}.schema_version", f"expected {SCHEMA_VERSION}, got {version!r}")


def parse_instance(text: str | bytes) -> tuple[Problem, Optional[CapProfile]]:
    """Parse an instance document; returns the problem and its caps, if any."""
    root = _as_dict(_load(text, "$"), "$")
    _check_version(root, "$")

    students = []
    for k, raw in enumerate(_as_list(root.get("students", []), "$.students")):
        path = f"$.students[{k}]"
        obj = _as_dict(raw, path)
        students.append(
            Student(
                id=_as_str(obj.get("id"), f"{path}.id"),
                initial=_as_str(obj.get("initial"), f"{path}.initial"),
                applied=_as_str(obj.get("applied"), f"{path}.applied"),
            )
        )

    majors = []
    for k, raw in enumerate(_as_list(root.get("majors"), "$.majors")):
        path = f"$.majors[{k}]"
        obj = _as_dict(raw, path)
        majors.append(
            Major(
                id=_as_str(obj.get("id"), f"{path}.id"),
                floor=_as_int(obj.get("floor"), f"{path}.floor", minimum=0),
                ceiling=_as_int(obj.get("ceiling"), f"{path}.ceiling", minimum=0),
                out_priority=tuple(_as_id_list(obj.get("out_priority"), f"{path}.out_priority")),
                in_priority=tuple(_as_id_list(obj.get("in_priority"), f"{path}.in_priority")),
            )
        )

    problem = Problem(students=tuple(students), majors=tuple(majors))
    issues = validate_problem(problem)
    if issues:
        _fail("$", "; ".join(issues))

    caps = None
    if "caps" in root:
        caps_obj = _as_dict(root["caps"], "$.caps")
        known = {m.id for m in majors}
        out_cap: dict[str, int] = {}
        in_cap: dict[str, int] = {}
        for mid, raw in caps_obj.items():
            path = f"$.caps.{mid}"
            if mid not in known:
                _fail(path, "caps name a major the instance does not declare")
            entry = _as_dict(raw, path)
            out_cap[mid] = _as_int(entry.get("out"), f"{path}.out", minimum=0)
            in_cap[mid] = _as_int(entry.get("in"), f"{path}.in", minimum=0)
        missing = sorted(known - out_cap.keys())
        if missing:
            _fail("$.caps", f"missing cap entries for majors {missing}")
        caps = CapProfile(out_cap=out_cap, in_cap=in_cap)
    return problem, caps


def instance_to_dict(problem: Problem, caps: Optional[CapProfile] = None) -> dict:
    doc: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "majors": [
            {
                "id": m.id,
                "floor": m.floor,
                "ceiling": m.ceiling,
                "out_priority": list(m.out_priority),
                "in_priority": list(m.in_priority),
            }
            for m in sorted(problem.majors, key=lambda m: m.id)
        ],
        "students": [
            {"id": s.id, "initial": s.initial, "applied": s.applied}
            for s in sorted(problem.students, key=lambda s: s.id)
        ],
    }
    if caps is not None:
        doc["caps"] = {
            mid: {"out": caps.out_cap[mid], "in": caps.in_cap[mid]} for mid in sorted(caps.out_cap)
        }
    return doc


def render_instance(problem: Problem, caps: Optional[CapProfile] = None) -> str:
    return canonical_json(instance_to_dict(problem, caps))


def parse_outcome(text: str | bytes) -> Outcome:
    root = _as_dict(_load(text, "$"), "$")
    _check_version(root, "$")
    if "E" not in root or "A" not in root:
        _fail("$", 'an outcome document needs both "E" and "A" arrays')
    return Outcome(
        out_eligible=frozenset(_as_id_list(root["E"], "$.E")),
        in_eligible=frozenset(_as_id_list(root["A"], "$.A")),
    )


def outcome_to_dict(outcome: Outcome) -> dict:
    return {"E": sorted(outcome.out_eligible), "A": sorted(outcome.in_eligible)}


def render_outcome(outcome: Outcome) -> str:
    return canonical_json({"schema_version": SCHEMA_VERSION, **outcome_to_dict(outcome)})


def run_report(problem: Problem, outcome: Outcome) -> dict:
    """The `run` command's result document: eligibility sets plus assignment."""
    return {
        "schema_version": SCHEMA_VERSION,
        **outcome_to_dict(outcome),
        "mu": corresponding_assignment(problem, outcome),
    }


def trace_to_dict(problem: Problem, trace: MechanismTrace) -> dict:
    """Render a trace with replayed per-step snapshots of E, A and the assignment."""
    steps = []
    for step, _before, after in trace.replay():
        steps.append(
            {
                "index": step.index,
                "process": step.process,
                "phase": step.phase,
                "expandable": sorted(step.expandable),
                "violated": sorted(step.violated),
                "edges": {mid: sid for mid, sid in step.edges},
                "removed": sorted(step.removed),
                "cycles": [
                    {"kind": cyc.kind, "members": list(cyc.members)} for cyc in step.cycles
                ],
                "grants": [list(change) for change in step.grants],
                "revocations": [list(change) for change in step.revocations],
                "after": {
                    **outcome_to_dict(after),
                    "mu": corresponding_assignment(problem, after),
                },
            }
        )
    return {
        "schema_version": SCHEMA_VERSION,
        "initial": outcome_to_dict(trace.initial),
        "steps": steps,
        "final": outcome_to_dict(trace.final),
    }


_SCENARIO_KEYS = {
    "beta1",
    "beta2",
    "constraint_regime",
    "n_majors",
    "capacity_per_major",
    "floor_frac",
    "ceiling_frac",
    "trials",
    "master_seed",
    "label",
}


def _parse_scenario(obj: dict, path: str) -> ScenarioConfig:
    unknown = sorted(obj.keys() - _SCENARIO_KEYS - {"schema_version", "scenarios"})
    if unknown:
        _fail(path, f"unknown scenario keys {unknown}")
    if "beta1" not in obj or "beta2" not in obj:
        _fail(path, "a scenario needs both beta1 and beta2")
    kwargs: dict[str, Any] = {
        "beta1": _as_float(obj["beta1"], f"{path}.beta1"),
        "beta2": _as_float(obj["beta2"], f"{path}.beta2"),
    }
    if "constraint_regime" in obj:
        kwargs["constraint_regime"] = _as_str(
            obj["constraint_regime"], f"{path}.constraint_regime"
        )
    for key in ("n_majors", "capacity_per_major", "trials"):
        if key in obj:
            kwargs[key] = _as_int(obj[key], f"{path}.{key}", minimum=1)
    if "master_seed" in obj:
        kwargs["master_seed"] = _as_int(obj["master_seed"], f"{path}.master_seed", minimum=0)
    for key in ("floor_frac", "ceiling_frac"):
        if key in obj:
            kwargs[key] = _as_float(obj[key], f"{path}.{key}")
    if "label" in obj:
        kwargs["label"] = _as_str(obj["label"], f"{path}.label")
    try:
        return ScenarioConfig(**kwargs)
    except ValueError as exc:
        _fail(path, str(exc))


def parse_scenarios(text: str | bytes) -> list[ScenarioConfig]:
    """Parse a scenario config: one scenario object or {"scenarios": [...]}."""
    root = _as_dict(_load(text, "$"), "$")
    _check_version(root, "$")
    if "scenarios" in root:
        raw = _as_list(root["scenarios"], "$.scenarios")
        if not raw:
            _fail("$.scenarios", "expected at least one scenario")
        return [
            _parse_scenario(_as_dict(obj, f"$.scenarios[{k}]"), f"$.scenarios[{k}]")
            for k, obj in enumerate(raw)
        ]
    return [_parse_scenario(root, "$")]


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
