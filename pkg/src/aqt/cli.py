"""Command-line entry point: `aqt run | families | version`.

Exit codes for `run`: 0 all verdicts match the scenario's expect block (or
no expect block), 1 verdict mismatch, 2 configuration error, 3 numerical
failure.  Diagnostics go to stderr with the offending (s, T) when known.
"""

import argparse
import json
import os
import sys
import time
from importlib import resources

from . import __version__
from .errors import (AqtError, DegenerateSpectrum, HypothesisAViolated,
                     InvalidParameter, NoConvergence, NonUnitaryOracle,
                     NormDrift, Overflow, SolverDivergence, SpecError,
                     StepSizeTooLarge)
from .hamiltonians import list_builtin_kinds
from .pipelines import Scenario, build_report, run_scenario
from .reporting import write_outputs

_NUMERICAL = (NormDrift, SolverDivergence, DegenerateSpectrum, StepSizeTooLarge,
              NoConvergence, NonUnitaryOracle, Overflow, HypothesisAViolated)


def builtin_scenario_names():
    root = resources.files("aqt").joinpath("scenarios")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def builtin_scenario_path(name):
    return str(resources.files("aqt").joinpath("scenarios", f"{name}.json"))


def _resolve_outdir(args_output, scenario):
    if args_output:
        return args_output
    if scenario.output_dir:
        return scenario.output_dir
    env = os.environ.get("AQT_OUTPUT_DIR")
    if env:
        return os.path.join(env, scenario.name)
    return os.path.join(os.getcwd(), f"aqt-out-{scenario.name}")


def _cmd_run(args):
    t0 = time.perf_counter()
    try:
        with open(args.scenario) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"aqt: cannot read scenario: {exc}", file=sys.stderr)
        return 2
    try:
        scenario = Scenario.from_dict(raw)
        result = run_scenario(scenario, jobs=max(1, args.jobs))
    except (SpecError, InvalidParameter) as exc:
        print(f"aqt: configuration error: {exc}", file=sys.stderr)
        return 2
    except _NUMERICAL as exc:
        loc = ""
        s, T = getattr(exc, "s", None), getattr(exc, "T", None)
        if s is not None or T is not None:
            loc = f" (s={s}, T={T})"
        print(f"aqt: numerical failure: {exc}{loc}", file=sys.stderr)
        return 3
    outdir = _resolve_outdir(args.output, scenario)
    report = build_report(result, __version__)
    write_outputs(outdir, report, result.series,
                  emit_plots=scenario.emit_plots,
                  wall_time=time.perf_counter() - t0)
    for name in sorted(result.verdicts):
        print(f"{name}: {result.verdicts[name]}")
    print(f"report written to {outdir}")
    if result.mismatches:
        for name, (expected, got) in sorted(result.mismatches.items()):
            print(f"aqt: verdict mismatch: {name} expected {expected!r}, got {got!r}",
                  file=sys.stderr)
        return 1
    return 0


def _cmd_families():
    rows = []
    for kind, schema in list_builtin_kinds():
        rows.append((kind, ""))
        for param, desc in schema.items():
            rows.append((f"  {param}", desc))
    width = max(len(r[0]) for r in rows) + 2
    print("built-in family kinds:")
    for name, desc in rows:
        print(f"  {name:<{width}}{desc}".rstrip())
    print("\nbuilt-in scenarios:")
    for name in builtin_scenario_names():
        print(f"  {name}")
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="aqt", description="adiabatic-theorem numerical laboratory")
    sub = parser.add_subparsers(dest="command")
    p_run = sub.add_parser("run", help="execute a scenario JSON file")
    p_run.add_argument("scenario", help="path to the scenario document")
    p_run.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                       help="parallel workers across the T-grid")
    p_run.add_argument("--output", default=None, help="output directory")
    sub.add_parser("families", help="list built-in families and scenarios")
    sub.add_parser("version", help="print the tool version")
    args = parser.parse_args(argv)
    if args.command == "run":
        try:
            return _cmd_run(args)
        except AqtError as exc:  # anything uncategorized is still a config issue
            print(f"aqt: error: {exc}", file=sys.stderr)
            return 2
    if args.command == "families":
        return _cmd_families()
    if args.command == "version":
        print(f"aqt {__version__}")
        return 0
    parser.print_help()
    return 2


if __name__ == "__main__":
    sys.exit(main())
