"""Command-line front end.

Commands:

* ``schedule``        build and validate a schedule, emit it as JSON
* ``simulate``        schedule, execute, verify; emit a trace as JSON lines
* ``sweep-distance``  slot counts versus task distance, as CSV
* ``sweep-tq``        slot counts versus quantum slot length, as CSV

Exit codes: 0 success, 1 invalid or unattainable schedule, 2 verification
failure, 3 configuration error. A JSON config file can pre-populate any
flag of the chosen command; explicit flags win. Unknown config keys are
rejected.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from .graphstate import Graph
from .scheduling import (
    CSV_FIELDS,
    ScheduleResult,
    brute_force_min_slots,
    measurement_plan,
    parallel_schedule,
    sequential_schedule,
    sweep_point,
)
from .simulator import (
    ASYNC,
    SLOTTED,
    VERIFIED,
    AMBIGUITY,
    SimProfile,
    load_profile,
    run_async,
    run_slotted,
    trace_to_jsonl,
)
from .temporal import (
    SlotModel,
    Task,
    breakpoints,
    parse_ratio,
    schedule_to_json,
    validate,
)

EXIT_OK = 0
EXIT_INVALID_SCHEDULE = 1
EXIT_VERIFICATION = 2
EXIT_CONFIG = 3


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: A003 - argparse API
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="mbqnet", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with defaults for this command")

    sched = sub.add_parser("schedule", parents=[common],
                           help="build a causality-preserving schedule")
    sched.add_argument("--task", help="source,receiver node ids, e.g. 0,4")
    sched.add_argument("--n", type=int, help="number of nodes on the line")
    sched.add_argument("--tq", help="quantum slot length as a rational, e.g. 5 or 3/2")
    sched.add_argument("--mode", choices=["sequential", "parallel", "brute"])
    sched.add_argument("--slot-cap", type=int, default=None,
                       help="slot cap for brute mode (default 10)")
    sched.add_argument("--out", help="write the schedule JSON here instead of stdout")

    sim = sub.add_parser("simulate", parents=[common],
                         help="schedule, simulate and verify a task")
    sim.add_argument("--task")
    sim.add_argument("--n", type=int)
    sim.add_argument("--tq")
    sim.add_argument("--mode", choices=[SLOTTED, ASYNC], default=None)
    sim.add_argument("--sched-mode", choices=["sequential", "parallel", "brute"],
                     default=None, help="scheduler for slotted mode (default parallel)")
    sim.add_argument("--seed", type=int, help="outcome seed (required)")
    sim.add_argument("--profile", help="timing profile JSON path or fixture name")
    sim.add_argument("--trace", help="write the event trace (JSON lines) here")

    swd = sub.add_parser("sweep-distance", parents=[common],
                         help="slot counts versus task distance (CSV)")
    swd.add_argument("--d-min", type=int, default=None)
    swd.add_argument("--d-max", type=int, default=None)
    swd.add_argument("--tq-list", help="comma-separated rationals, 'inf' allowed")
    swd.add_argument("--modes", choices=["sequential", "parallel", "both"], default=None)
    swd.add_argument("--out", help="write CSV here instead of stdout")
    swd.add_argument("--workers", type=int, default=None)
    swd.add_argument("--gnuplot", help="also write a gnuplot script here")

    swt = sub.add_parser("sweep-tq", parents=[common],
                         help="slot counts versus quantum slot length (CSV)")
    swt.add_argument("--d-list", help="comma-separated task distances")
    swt.add_argument("--tq-extra", help="extra t_q values beyond the breakpoint grid")
    swt.add_argument("--modes", choices=["sequential", "parallel", "both"], default=None)
    swt.add_argument("--out", help="write CSV here instead of stdout")
    swt.add_argument("--workers", type=int, default=None)
    swt.add_argument("--gnuplot", help="also write a gnuplot script here")

    return parser


def _apply_config(args: argparse.Namespace) -> None:
    if not getattr(args, "config", None):
        return
    try:
        doc = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    valid = {k for k in vars(args) if k not in ("command", "config")}
    for key, value in doc.items():
        dest = key.replace("-", "_")
        if dest not in valid:
            raise ConfigError(f"unknown config key {key!r} for {args.command}")
        if getattr(args, dest) is None:
            setattr(args, dest, value)


def _require(args: argparse.Namespace, *names: str) -> None:
    for name in names:
        if getattr(args, name) is None:
            raise ConfigError(f"--{name.replace('_', '-')} is required")


def _parse_task(text: str) -> Task:
    parts = str(text).split(",")
    if len(parts) != 2:
        raise ConfigError(f"task must be 's,r', got {text!r}")
    try:
        return Task(int(parts[0]), int(parts[1]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _parse_tq(text, minimum_one: bool = True) -> Fraction:
    try:
        value = parse_ratio(str(text))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if value <= 0:
        raise ConfigError("t_q must be positive")
    if minimum_one and value < 1:
        raise ConfigError("scheduling commands require t_q >= 1")
    return value


def _run_scheduler(mode: str, task: Task, g0: Graph, model: SlotModel, slot_cap: int | None):
    if mode == "sequential":
        return sequential_schedule(task, g0, model)
    if mode == "parallel":
        return parallel_schedule(task, g0, model)
    t_star, sched = brute_force_min_slots(task, g0, model, slot_cap if slot_cap else 10)
    inner = [s for _, s, b in sched.measuring() if b == "Y"]
    outer = [s for _, s, b in sched.measuring() if b == "Z"]
    return ScheduleResult(sched, t_star, max(inner) if inner else 0,
                          max(outer) if outer else None)


def cmd_schedule(args: argparse.Namespace) -> int:
    _require(args, "task", "n", "tq", "mode")
    task = _parse_task(args.task)
    model = SlotModel(_parse_tq(args.tq))
    g0 = Graph.path(int(args.n))
    try:
        result = _run_scheduler(args.mode, task, g0, model, args.slot_cap)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_SCHEDULE
    if not measurement_plan(task, g0.n):
        print("warning: no measuring nodes for this task", file=sys.stderr)
    problems = validate(result.schedule, task, g0, model)
    doc = json.dumps(schedule_to_json(result.schedule, task, model), indent=2)
    if args.out:
        Path(args.out).write_text(doc + "\n")
    else:
        print(doc)
    outer = "-" if result.outer_slots is None else result.outer_slots
    print(f"T* = {result.t_star} (inner {result.inner_slots}, outer {outer}, "
          f"mode {args.mode})", file=sys.stderr)
    return EXIT_OK if not problems else EXIT_INVALID_SCHEDULE


def cmd_simulate(args: argparse.Namespace) -> int:
    _require(args, "task", "n", "seed")
    mode = args.mode or SLOTTED
    task = _parse_task(args.task)
    g0 = Graph.path(int(args.n))
    profile = load_profile(args.profile) if args.profile else None

    if mode == ASYNC:
        if profile is None:
            raise ConfigError("async mode needs --profile with measurement durations")
        trace = run_async(task, g0, profile, seed=int(args.seed))
    else:
        _require(args, "tq")
        model = SlotModel(_parse_tq(args.tq))
        sched_mode = args.sched_mode or "parallel"
        try:
            result = _run_scheduler(sched_mode, task, g0, model, None)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INVALID_SCHEDULE
        trace = run_slotted(result.schedule, task, g0, model,
                            profile=profile, seed=int(args.seed))

    if args.trace:
        Path(args.trace).write_text(trace_to_jsonl(trace))
    verdict = trace.verdict
    print(f"verdict: {verdict.kind}" + (f" ({verdict.detail})" if verdict.detail else ""))
    for flag in verdict.report:
        print(f"  ambiguous pair {flag.nodes[0]},{flag.nodes[1]} "
              f"overlap [{flag.window[0]}, {flag.window[1]})")
    if verdict.kind == VERIFIED:
        return EXIT_OK
    if verdict.kind == AMBIGUITY and mode == ASYNC:
        return EXIT_OK
    return EXIT_VERIFICATION


def _eval_point(spec: tuple[int, str, str]) -> dict:
    d, tq_token, mode = spec
    if tq_token == "inf":
        return sweep_point(d, Fraction(max(1, d)), mode, t_q_label="inf")
    return sweep_point(d, Fraction(tq_token), mode)


def _evaluate(points: list[tuple[int, str, str]], workers: int | None) -> list[dict]:
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_eval_point, points))
    return [_eval_point(p) for p in points]


def _emit_csv(rows: list[dict], out: str | None) -> None:
    lines = [",".join(CSV_FIELDS)]
    for row in rows:
        lines.append(",".join("" if row[k] is None else str(row[k]) for k in CSV_FIELDS))
    text = "\n".join(lines) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_gnuplot(rows: list[dict], csv_path: str | None, script_path: str,
                  x_field: str, series_fields: tuple[str, ...]) -> None:
    if not csv_path:
        raise ConfigError("--gnuplot needs --out so the script can reference the CSV")
    series = sorted({tuple(str(r[f]) for f in series_fields) for r in rows})
    x_col = CSV_FIELDS.index(x_field) + 1
    y_col = CSV_FIELDS.index("t_star_total") + 1
    cond_cols = [CSV_FIELDS.index(f) + 1 for f in series_fields]
    plots = []
    for key in series:
        cond = " && ".join(
            f'strcol({col}) eq "{val}"' for col, val in zip(cond_cols, key)
        )
        title = ", ".join(f"{f}={v}" for f, v in zip(series_fields, key))
        plots.append(f'  "{csv_path}" using {x_col}:(({cond}) ? ${y_col} : NaN) '
                     f'with linespoints title "{title}"')
    script = "\n".join([
        "set datafile separator ','",
        "set key outside",
        f"set xlabel '{x_field}'",
        "set ylabel 'total slots'",
        "plot \\",
        ", \\\n".join(plots),
        "",
    ])
    Path(script_path).write_text(script)


def cmd_sweep_distance(args: argparse.Namespace) -> int:
    _require(args, "tq_list")
    d_min = 2 if args.d_min is None else int(args.d_min)
    d_max = 12 if args.d_max is None else int(args.d_max)
    if d_min < 2 or d_max < d_min:
        raise ConfigError("need 2 <= d-min <= d-max")
    tokens = [t.strip() for t in str(args.tq_list).split(",") if t.strip()]
    if not tokens:
        raise ConfigError("empty --tq-list")
    for t in tokens:
        if t != "inf":
            _parse_tq(t)
    modes = _modes(args.modes)
    points = [(d, tok, mode)
              for mode in modes for tok in tokens for d in range(d_min, d_max + 1)]
    rows = _evaluate(points, args.workers)
    _emit_csv(rows, args.out)
    if args.gnuplot:
        _emit_gnuplot(rows, args.out, args.gnuplot, "D", ("mode", "t_q"))
    return EXIT_OK


def cmd_sweep_tq(args: argparse.Namespace) -> int:
    _require(args, "d_list")
    try:
        distances = [int(x) for x in str(args.d_list).split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --d-list: {exc}") from exc
    if not distances or any(d < 2 for d in distances):
        raise ConfigError("--d-list needs distances of at least 2")
    extra = []
    if args.tq_extra:
        extra = [_parse_tq(t) for t in str(args.tq_extra).split(",") if t.strip()]
    modes = _modes(args.modes)
    points = []
    for mode in modes:
        for d in distances:
            task = Task(1, d + 1)
            plan = measurement_plan(task, d + 3)
            grid = [b for b in breakpoints(task, plan.keys()) if b != float("inf")]
            grid = sorted(set(grid) | set(extra))
            points.extend((d, str(tq), mode) for tq in grid)
    rows = _evaluate(points, args.workers)
    _emit_csv(rows, args.out)
    if args.gnuplot:
        _emit_gnuplot(rows, args.out, args.gnuplot, "t_q", ("mode", "D"))
    return EXIT_OK


def _modes(value: str | None) -> list[str]:
    if value in (None, "both"):
        return ["sequential", "parallel"]
    return [value]


_COMMANDS = {
    "schedule": cmd_schedule,
    "simulate": cmd_simulate,
    "sweep-distance": cmd_sweep_distance,
    "sweep-tq": cmd_sweep_tq,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_config(args)
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
