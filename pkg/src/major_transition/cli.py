"""Command-line surface: check outcomes, run mechanisms, query the oracle, simulate.

Results are canonical JSON (or CSV for `simulate`) on stdout; failures are a
machine-readable JSON object on stderr with a nonzero exit code.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional

from .cmt_ec import run_cmt_ec
from .cycles import eaem_tie, eaem_toe, tie_process, toe_process
from .em import run_alt_em, run_em
from .model import (
    Outcome,
    Problem,
    UnknownIdError,
    classify_majors,
    is_em,
    is_permissible,
    respects_distributional,
    respects_dual_priority,
)
from .oracle import DEFAULT_LIMIT, CertifyReport, certify, pareto_frontier, search_space_size
from .serialize import (
    SCHEMA_VERSION,
    InstanceFormatError,
    canonical_json,
    outcome_to_dict,
    parse_instance,
    parse_outcome,
    parse_scenarios,
    run_report,
    trace_to_dict,
)
from .sim import run_scenario_suite, write_results_csv

MECHANISM_CHOICES = ("cmt-ec", "em", "alt-em", "tie", "toe", "eaem-tie", "eaem-toe")
_SEEDED = ("tie", "toe", "eaem-tie", "eaem-toe")

_SHORTHAND = re.compile(r"^\(\s*E=\{([^{}]*)\}\s*,\s*A=\{([^{}]*)\}\s*\)$")


class CommandError(Exception):
    """A user-facing failure; message becomes the error JSON."""


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CommandError(f"cannot read {path}: {exc}") from exc


def _parse_id_set(raw: str) -> frozenset[str]:
    return frozenset(part.strip() for part in raw.split(",") if part.strip())


def _read_outcome_arg(arg: str) -> Outcome:
    """An outcome argument: a file path, inline JSON, or (E={...},A={...})."""
    text = arg.strip()
    match = _SHORTHAND.match(text)
    if match:
        return Outcome(
            out_eligible=_parse_id_set(match.group(1)),
            in_eligible=_parse_id_set(match.group(2)),
        )
    if text.startswith("{"):
        return parse_outcome(text)
    return parse_outcome(_read_text(arg))


def _load_instance(path: str):
    return parse_instance(_read_text(path))


def _cmd_check(args: argparse.Namespace) -> int:
    problem, _caps = _load_instance(args.instance)
    outcome = _read_outcome_arg(args.outcome)
    report: dict = {"schema_version": SCHEMA_VERSION, **outcome_to_dict(outcome)}

    unknown = sorted((outcome.out_eligible | outcome.in_eligible) - problem.student_ids)
    if unknown:
        report.update(unknown_students=unknown, permissible=False, em=None)
        print(canonical_json(report))
        return 0

    permissible = is_permissible(problem, outcome)
    report["permissible"] = permissible
    report["distributional_violations"] = sorted(
        mid for mid in problem.major_ids if not respects_distributional(problem, outcome, mid)
    )
    report["dual_priority_violations"] = sorted(
        mid for mid in problem.major_ids if not respects_dual_priority(problem, outcome, mid)
    )
    report["transferable"] = sorted(outcome.transferable)
    report["em"] = is_em(problem, outcome) if permissible else None
    if report["em"]:
        split = classify_majors(problem, outcome)
        report["classification"] = {
            "overdemanded": sorted(split.overdemanded),
            "underdemanded": sorted(split.underdemanded),
            "balanced": sorted(split.balanced),
        }
    print(canonical_json(report))
    return 0


def _resolve_seed(problem: Problem, spec_arg: Optional[str]) -> Outcome:
    if spec_arg is None or spec_arg == "em":
        return run_em(problem)[0]
    if spec_arg == "alt-em":
        return run_alt_em(problem)[0]
    return _read_outcome_arg(spec_arg)


def _cmd_run(args: argparse.Namespace) -> int:
    problem, caps = _load_instance(args.instance)
    mechanism = args.mechanism
    if args.seed_outcome is not None and mechanism not in _SEEDED:
        raise CommandError(f"--seed-outcome applies only to {', '.join(_SEEDED)}")

    if mechanism == "cmt-ec":
        if caps is None:
            raise CommandError("the cmt-ec mechanism needs a caps block in the instance file")
        outcome, trace = run_cmt_ec(problem, caps)
    elif mechanism == "em":
        outcome, trace = run_em(problem)
    elif mechanism == "alt-em":
        outcome, trace = run_alt_em(problem)
    else:
        seed = _resolve_seed(problem, args.seed_outcome)
        process = {
            "tie": tie_process,
            "toe": toe_process,
            "eaem-tie": eaem_tie,
            "eaem-toe": eaem_toe,
        }[mechanism]
        outcome, trace = process(problem, seed)

    report = run_report(problem, outcome)
    if args.trace:
        report["trace"] = trace_to_dict(problem, trace)
    print(canonical_json(report))
    return 0


def _certify_to_dict(report: CertifyReport) -> dict:
    witness = outcome_to_dict(report.witness) if report.witness is not None else None
    return {
        "permissible": report.permissible,
        "em": report.em,
        "efficient": report.efficient,
        "witness": witness,
    }


def _cmd_oracle(args: argparse.Namespace) -> int:
    problem, _caps = _load_instance(args.instance)
    limit = args.max_size
    report: dict = {
        "schema_version": SCHEMA_VERSION,
        "search_space": search_space_size(problem),
    }
    if args.certify is not None:
        outcome = _read_outcome_arg(args.certify)
        report["certify"] = _certify_to_dict(certify(problem, outcome, limit=limit))
    else:
        frontier = pareto_frontier(problem, limit=limit)
        report["frontier_size"] = len(frontier)
        report["frontier_transferable_sets"] = sorted(
            sorted(out.transferable) for out in frontier
        )
        if args.frontier:
            report["frontier"] = [outcome_to_dict(out) for out in frontier]
    print(canonical_json(report))
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    configs = parse_scenarios(_read_text(args.config))
    if args.trials is not None:
        configs = [replace(c, trials=args.trials) for c in configs]
    if args.seed is not None:
        configs = [replace(c, master_seed=args.seed) for c in configs]
    dump_dir = Path(args.dump_dir) if args.dump_dir else None
    results = run_scenario_suite(configs, dump_dir=dump_dir)
    for res in results:
        if res.mismatch_trials:
            print(
                canonical_json(
                    {
                        "warning": "transfer-rate mismatch between the two composites",
                        "label": res.config.label,
                        "trials": list(res.mismatch_trials),
                    }
                ),
                file=sys.stderr,
            )
    if args.out:
        write_results_csv(results, args.out)
    else:
        write_results_csv(results, sys.stdout)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="major-transition",
        description="Eligibility-exchange mechanisms for student major transitions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="report permissibility and exchange-maximality")
    p_check.add_argument("instance", help="instance JSON file")
    p_check.add_argument("outcome", help="outcome: file, inline JSON, or (E={..},A={..})")
    p_check.set_defaults(func=_cmd_check)

    p_run = sub.add_parser("run", help="run a mechanism on an instance")
    p_run.add_argument("mechanism", choices=MECHANISM_CHOICES)
    p_run.add_argument("instance", help="instance JSON file")
    p_run.add_argument(
        "--seed-outcome",
        help="start for pointing processes: outcome file/JSON/shorthand, "
        "or a mechanism name (em, alt-em); default em",
    )
    p_run.add_argument("--trace", action="store_true", help="include the step-by-step trace")
    p_run.set_defaults(func=_cmd_run)

    p_oracle = sub.add_parser("oracle", help="brute-force enumeration reports")
    p_oracle.add_argument("instance", help="instance JSON file")
    group = p_oracle.add_mutually_exclusive_group()
    group.add_argument("--frontier", action="store_true", help="list one outcome per maximal trade set")
    group.add_argument("--certify", metavar="OUTCOME", help="certify one outcome (file/JSON/shorthand)")
    p_oracle.add_argument(
        "--max-size",
        type=int,
        default=DEFAULT_LIMIT,
        help="refuse instances whose search space exceeds this many outcomes",
    )
    p_oracle.set_defaults(func=_cmd_oracle)

    p_sim = sub.add_parser("simulate", help="run Monte Carlo scenarios to CSV")
    p_sim.add_argument("config", help="scenario config JSON file")
    p_sim.add_argument("--out", help="CSV output path (default: stdout)")
    p_sim.add_argument("--trials", type=int, help="override trial count for every scenario")
    p_sim.add_argument("--seed", type=int, help="override master seed for every scenario")
    p_sim.add_argument("--dump-dir", help="directory for mismatch-trial instance dumps")
    p_sim.set_defaults(func=_cmd_simulate)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CommandError, InstanceFormatError, UnknownIdError, ValueError, RuntimeError) as exc:
        message = exc.args[0] if exc.args else str(exc)
        print(
            canonical_json({"error": type(exc).__name__, "message": str(message)}),
            file=sys.stderr,
        )
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
