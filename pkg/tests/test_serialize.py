"""JSON schemas: instances, outcomes, traces, scenario configs."""

from __future__ import annotations

import json

import pytest

from instances import INSTANCE_FIXTURES, fixture_text, load_fixture, load_problem
from major_transition.em import run_em
from major_transition.model import Outcome
from major_transition.serialize import (
    SCHEMA_VERSION,
    InstanceFormatError,
    canonical_json,
    instance_to_dict,
    outcome_to_dict,
    parse_instance,
    parse_outcome,
    parse_scenarios,
    render_instance,
    render_outcome,
    run_report,
    trace_to_dict,
)
from major_transition.sim import ScenarioConfig


@pytest.mark.parametrize("name", INSTANCE_FIXTURES)
def test_instance_round_trip(name):
    problem, caps = load_fixture(name)
    again, caps_again = parse_instance(render_instance(problem, caps))
    assert again == problem
    assert caps_again == caps


def test_instance_dict_shape():
    problem, caps = load_fixture("example1")
    doc = instance_to_dict(problem, caps)
    assert doc["schema_version"] == SCHEMA_VERSION
    assert {m["id"] for m in doc["majors"]} == {"m1", "m2", "m3"}
    assert doc["caps"]["m1"] == {"out": 1, "in": 1}


def test_parse_rejects_wrong_schema_version():
    with pytest.raises(InstanceFormatError, match="schema_version"):
        parse_instance(json.dumps({"schema_version": 99, "majors": [], "students": []}))


def test_parse_errors_carry_json_paths():
    doc = json.loads(fixture_text("example2"))
    doc["majors"][0]["floor"] = "one"
    with pytest.raises(InstanceFormatError, match=r"\$\.majors\[0\]\.floor"):
        parse_instance(json.dumps(doc))

    doc = json.loads(fixture_text("example2"))
    doc["students"][0]["id"] = 7
    with pytest.raises(InstanceFormatError, match=r"\$\.students\[0\]\.id"):
        parse_instance(json.dumps(doc))


def test_parse_rejects_booleans_where_integers_are_expected():
    doc = json.loads(fixture_text("example2"))
    doc["majors"][0]["ceiling"] = True
    with pytest.raises(InstanceFormatError, match="expected an integer, got bool"):
        parse_instance(json.dumps(doc))


def test_parse_validates_the_assembled_problem():
    doc = json.loads(fixture_text("example2"))
    doc["majors"][0]["out_priority"] = []  # drops student i from m1's order
    with pytest.raises(InstanceFormatError, match="missing student 'i'"):
        parse_instance(json.dumps(doc))


def test_parse_checks_cap_coverage():
    doc = json.loads(fixture_text("example1"))
    del doc["caps"]["m2"]
    with pytest.raises(InstanceFormatError, match="missing cap entries.*m2"):
        parse_instance(json.dumps(doc))

    doc = json.loads(fixture_text("example1"))
    doc["caps"]["m9"] = {"out": 0, "in": 0}
    with pytest.raises(InstanceFormatError, match="does not declare"):
        parse_instance(json.dumps(doc))


def test_outcome_round_trip_and_sorting():
    outcome = Outcome(frozenset({"b", "a"}), frozenset({"c"}))
    assert outcome_to_dict(outcome) == {"E": ["a", "b"], "A": ["c"]}
    assert parse_outcome(render_outcome(outcome)) == outcome


def test_parse_outcome_requires_both_sets():
    with pytest.raises(InstanceFormatError, match='"E" and "A"'):
        parse_outcome(json.dumps({"E": []}))


def test_run_report_contains_assignment():
    problem = load_problem("example3")
    outcome = Outcome(frozenset({"i1", "i2"}), frozenset({"i1", "i2"}))
    report = run_report(problem, outcome)
    assert report["E"] == ["i1", "i2"]
    assert report["mu"]["i1"] == "m2"
    assert report["mu"]["i3"] == "m3"


def test_trace_dict_replays_to_the_final_outcome():
    problem = load_problem("example3")
    outcome, trace = run_em(problem)
    doc = trace_to_dict(problem, trace)
    assert doc["final"] == outcome_to_dict(outcome)
    assert len(doc["steps"]) == len(trace.steps)
    assert doc["steps"][-1]["after"] == {
        **outcome_to_dict(outcome),
        "mu": {s.id: s.initial for s in problem.students},
    }
    # Replaying the listed grants and revocations from the initial sets
    # reproduces the final sets.
    out = set(doc["initial"]["E"])
    inc = set(doc["initial"]["A"])
    for step in doc["steps"]:
        for sid, _mid, side in step["grants"]:
            (out if side == "out" else inc).add(sid)
        for sid, _mid, side in step["revocations"]:
            (out if side == "out" else inc).discard(sid)
    assert sorted(out) == doc["final"]["E"]
    assert sorted(inc) == doc["final"]["A"]


def test_parse_scenarios_single_object_and_list():
    single = parse_scenarios(json.dumps({"beta1": 0.5, "beta2": 0.2}))
    assert single == [ScenarioConfig(beta1=0.5, beta2=0.2)]

    many = parse_scenarios(
        json.dumps(
            {
                "scenarios": [
                    {"beta1": 0.3, "beta2": 0.3, "constraint_regime": "band", "trials": 7},
                    {"beta1": 0.6, "beta2": 0.0, "label": "peak"},
                ]
            }
        )
    )
    assert [c.constraint_regime for c in many] == ["band", "balanced"]
    assert many[0].trials == 7
    assert many[1].label == "peak"


def test_parse_scenarios_rejects_unknown_keys_and_bad_values():
    with pytest.raises(InstanceFormatError, match="unknown scenario keys.*beta3"):
        parse_scenarios(json.dumps({"beta1": 0.1, "beta2": 0.1, "beta3": 0.1}))
    with pytest.raises(InstanceFormatError, match="needs both beta1 and beta2"):
        parse_scenarios(json.dumps({"beta1": 0.1}))
    with pytest.raises(InstanceFormatError, match="at least one scenario"):
        parse_scenarios(json.dumps({"scenarios": []}))
    with pytest.raises(InstanceFormatError, match="constraint_regime"):
        parse_scenarios(json.dumps({"beta1": 0.9, "beta2": 0.0, "constraint_regime": "loose"}))
    with pytest.raises(InstanceFormatError, match="master_seed"):
        parse_scenarios(json.dumps({"beta1": 0.1, "beta2": 0.1, "master_seed": True}))


def test_canonical_json_is_sorted_and_stable():
    text = canonical_json({"b": 1, "a": [2, 1]})
    assert text.index('"a"') < text.index('"b"')
    assert canonical_json(json.loads(text)) == text
