"""Command-line front end.

Subcommands: solve (one optimization run, writes schedule/metrics/trace
artifacts), bench (seeded multi-run experiments, writes results and trace
CSV/JSON), validate (check an instance file or a schedule artifact),
gantt (render a schedule artifact as SVG or text) and gen (write a random
instance file).

Exit codes: 0 success, 1 input parse or feasibility error, 2 invalid
parameters.  Every run echoes a replay line with the fully resolved
configuration; all randomness flows from --seed.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import bench as bench_mod
from . import gantt as gantt_mod
from .bench import (
    ALGORITHMS,
    GeneratorSpec,
    RhfsParseError,
    export_results,
    export_traces,
    generate_instance,
    load_instance,
    medium_suite,
    run_algorithm,
    run_experiment,
    serialize_instance,
)
from .ldwpa import SCOUT_MODES, LdwpaParams
from .levy import LevyParams
from .metrics import MetricReport
from .model import Schedule, ScheduledOp, validate_schedule
from .wpa import WpaParams

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_PARAMS = 2

_WPA_FIELDS = {f.name for f in dataclasses.fields(WpaParams)} - {"seed"}
_LDWPA_FIELDS = {"rt", "kr", "start_gen", "stagnation_limit", "scout_mode", "renewal"}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def build_params(algorithm: str, overrides: dict, seed: int) -> WpaParams | LdwpaParams:
    """Assemble algorithm parameters from a flat override mapping."""
    wpa_kw = {}
    ld_kw = {}
    beta = None
    for key, value in overrides.items():
        if key == "seed":
            continue  # the CLI seed wins
        if key in _WPA_FIELDS:
            wpa_kw[key] = value
        elif key in _LDWPA_FIELDS:
            ld_kw[key] = value
        elif key == "beta":
            beta = value
        else:
            raise CliError(f"unknown parameter {key!r}", EXIT_PARAMS)
    try:
        base = WpaParams(seed=seed, **wpa_kw)
        if algorithm == "wpa":
            if ld_kw or beta is not None:
                extra = sorted(ld_kw) + (["beta"] if beta is not None else [])
                raise CliError(
                    f"parameters {extra} only apply to ldwpa", EXIT_PARAMS
                )
            return base
        levy = LevyParams(beta=beta) if beta is not None else LevyParams()
        return LdwpaParams(base=base, levy=levy, **ld_kw)
    except (TypeError, ValueError) as exc:
        raise CliError(f"invalid parameters: {exc}", EXIT_PARAMS) from exc


def _load_overrides(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise CliError(f"params file not found: {path}", EXIT_PARAMS) from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"params file {path}: {exc}", EXIT_PARAMS) from exc
    if not isinstance(data, dict):
        raise CliError("params file must hold a JSON object", EXIT_PARAMS)
    return data


def _read_instance(path: str):
    try:
        return load_instance(path)
    except FileNotFoundError as exc:
        raise CliError(f"instance file not found: {path}", EXIT_PARSE) from exc
    except RhfsParseError as exc:
        raise CliError(f"{path}: {exc}", EXIT_PARSE) from exc


def _read_artifact(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise CliError(f"schedule file not found: {path}", EXIT_PARSE) from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"schedule file {path}: {exc}", EXIT_PARSE) from exc
    for key in ("instance", "cmax", "stations_per_stage", "ops"):
        if key not in data:
            raise CliError(f"schedule file {path}: missing key {key!r}", EXIT_PARSE)
    return data


def _artifact_schedule(artifact: dict) -> Schedule:
    """Internal 0-based Schedule from a 1-based artifact."""
    try:
        ops = tuple(
            ScheduledOp(
                job=op["job"] - 1,
                step=op["step"] - 1,
                stage=op["stage"] - 1,
                station=op["station"] - 1,
                start=op["start"],
                end=op["end"],
            )
            for op in artifact["ops"]
        )
    except (KeyError, TypeError) as exc:
        raise CliError(f"malformed schedule ops: {exc}", EXIT_PARSE) from exc
    return Schedule(ops)


def _replay_line(command: str, args: argparse.Namespace) -> str:
    parts = [f"rhfs {command}"]
    for key, value in vars(args).items():
        if key in ("command", "func") or value is None:
            continue
        flag = "--" + key.replace("_", "-")
        if isinstance(value, bool):
            if value:
                parts.append(flag)
        elif isinstance(value, list):
            parts.extend(f"{flag} {v}" for v in value)
        else:
            parts.append(f"{flag} {value}")
    return "# replay: " + " ".join(parts)


def _metrics_row(report) -> dict:
    m: MetricReport = report.metrics
    return {
        "instance": report.instance,
        "algorithm": report.algorithm,
        "seed": report.seed,
        "cmax": m.cmax,
        "tlb": round(m.tlb, 6),
        "fur": round(m.fur, 6),
        "twt": m.twt,
        "deviation_pct": None if m.deviation_pct is None else round(m.deviation_pct, 6),
        "evaluations": report.evaluations,
    }


def cmd_solve(args: argparse.Namespace) -> int:
    print(_replay_line("solve", args))
    instance = _read_instance(args.instance)
    params = build_params(args.algo, _load_overrides(args.params), args.seed)
    report = run_algorithm(args.algo, instance, params)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = f"{instance.name}_{args.algo}_s{args.seed}"
    artifact = gantt_mod.schedule_artifact(
        instance, report.schedule, algorithm=args.algo, seed=args.seed
    )
    (out_dir / f"{stem}.schedule.json").write_text(
        json.dumps(artifact, indent=2) + "\n"
    )
    (out_dir / f"{stem}.metrics.json").write_text(
        json.dumps(_metrics_row(report), indent=2) + "\n"
    )
    trace_lines = ["iteration,best"] + [
        f"{i},{b}" for i, b in enumerate(report.trace)
    ]
    (out_dir / f"{stem}.trace.csv").write_text("\n".join(trace_lines) + "\n")

    m = report.metrics
    summary = (
        f"instance={instance.name} algo={args.algo} seed={args.seed} "
        f"cmax={m.cmax} tlb={m.tlb:.2f} fur={m.fur:.4f} twt={m.twt}"
    )
    if m.deviation_pct is not None:
        summary += f" deviation_pct={m.deviation_pct:.2f}"
    summary += f" evaluations={report.evaluations} runtime_ms={report.runtime_ms:.0f}"
    print(summary)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    print(_replay_line("bench", args))
    if not args.instance and not args.suite:
        raise CliError("bench needs --instance and/or --suite", EXIT_PARAMS)
    algos = args.algo or ["ldwpa"]
    for algo in algos:
        if algo not in ALGORITHMS:
            raise CliError(f"unknown algorithm {algo!r}", EXIT_PARAMS)

    instances = []
    failures = []
    for path in args.instance or []:
        try:
            instances.append(_read_instance(path))
        except CliError as exc:
            failures.append(str(exc))
            print(f"error: {exc}", file=sys.stderr)
    if args.suite:
        if args.suite != "medium":
            raise CliError(f"unknown suite {args.suite!r}", EXIT_PARAMS)
        instances.extend(medium_suite())

    reports = []
    for instance in instances:
        for algo in algos:
            params = build_params(algo, _load_overrides(args.params), args.seed)
            runs, summary = run_experiment(instance, algo, params, args.seeds)
            reports.extend(runs)
            print(
                f"{instance.name} {algo}: best={summary.best} "
                f"average={summary.average:.2f}"
                + (
                    f" deviation_pct={summary.deviation_best_pct:.2f}"
                    if summary.deviation_best_pct is not None
                    else ""
                )
            )

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    ext = "json" if args.format == "json" else "csv"
    (out_dir / f"results.{ext}").write_text(
        export_results(reports, args.format, timing=args.timing)
    )
    (out_dir / "traces.csv").write_text(export_traces(reports))
    print(f"wrote {out_dir / f'results.{ext}'} and {out_dir / 'traces.csv'}")
    return EXIT_PARSE if failures else EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    print(_replay_line("validate", args))
    instance = _read_instance(args.instance)
    print(f"instance {instance.name}: ok (jobs={instance.n}, stages={instance.m}, "
          f"operations={instance.n_genes})")
    if args.schedule:
        artifact = _read_artifact(args.schedule)
        schedule = _artifact_schedule(artifact)
        violations = validate_schedule(instance, schedule)
        if violations:
            for v in violations:
                print(f"violation [{v.rule}] {v.message}")
            return EXIT_PARSE
        print(f"schedule {args.schedule}: feasible ({len(schedule.ops)} ops)")
    return EXIT_OK


def cmd_gantt(args: argparse.Namespace) -> int:
    artifact = _read_artifact(args.schedule)
    if args.format == "svg":
        rendered = gantt_mod.render_svg(artifact)
        suffix = ".svg"
    else:
        rendered = gantt_mod.render_text(artifact)
        suffix = ".txt"
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        target = out_dir / (Path(args.schedule).stem + suffix)
        target.write_text(rendered)
        print(f"wrote {target}")
    else:
        print(rendered, end="")
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    try:
        stations = tuple(int(s) for s in args.stations.split(","))
        spec = GeneratorSpec(
            n=args.jobs,
            nrm=args.nonreentrant,
            rm=args.reentrant,
            stations=stations,
            rts_range=(args.rts_min, args.rts_max),
            duration_range=(args.dur_min, args.dur_max),
            name=args.name,
        )
        instance = generate_instance(spec, args.seed)
    except ValueError as exc:
        raise CliError(f"invalid generator spec: {exc}", EXIT_PARAMS) from exc
    text = serialize_instance(instance)
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        target = out_dir / f"{instance.name}.rhfs"
        target.write_text(text)
        print(f"wrote {target}")
    else:
        print(text, end="")
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rhfs",
        description="Re-entrant hybrid flow shop scheduling toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run one optimization and write artifacts")
    solve.add_argument("--instance", required=True)
    solve.add_argument("--algo", choices=ALGORITHMS, default="ldwpa")
    solve.add_argument("--seed", type=int, required=True)
    solve.add_argument("--params", help="JSON file of parameter overrides")
    solve.add_argument("--out", default="out")
    solve.set_defaults(func=cmd_solve)

    benchp = sub.add_parser("bench", help="seeded experiments over instances")
    benchp.add_argument("--instance", action="append", help="repeatable")
    benchp.add_argument("--suite", help="generated suite name (medium)")
    benchp.add_argument("--algo", action="append", choices=ALGORITHMS, help="repeatable")
    benchp.add_argument("--seed", type=int, required=True, help="base seed")
    benchp.add_argument("--seeds", type=int, default=1, help="number of seeds")
    benchp.add_argument("--params", help="JSON file of parameter overrides")
    benchp.add_argument("--out", default="out")
    benchp.add_argument("--format", choices=("csv", "json"), default="csv")
    benchp.add_argument(
        "--timing",
        action="store_true",
        help="include wall-clock runtime_ms (breaks byte-identical reruns)",
    )
    benchp.set_defaults(func=cmd_bench)

    val = sub.add_parser("validate", help="check an instance file and optionally a schedule")
    val.add_argument("--instance", required=True)
    val.add_argument("--schedule", help="schedule artifact JSON to check")
    val.set_defaults(func=cmd_validate)

    gantt = sub.add_parser("gantt", help="render a schedule artifact")
    gantt.add_argument("--schedule", required=True)
    gantt.add_argument("--format", choices=("svg", "txt"), default="svg")
    gantt.add_argument("--out", help="output directory (default: stdout)")
    gantt.set_defaults(func=cmd_gantt)

    gen = sub.add_parser("gen", help="generate a random instance file")
    gen.add_argument("--jobs", type=int, required=True)
    gen.add_argument("--nonreentrant", type=int, required=True)
    gen.add_argument("--reentrant", type=int, required=True)
    gen.add_argument("--stations", required=True, help="comma list, one per stage")
    gen.add_argument("--rts-min", type=int, default=1)
    gen.add_argument("--rts-max", type=int, default=3)
    gen.add_argument("--dur-min", type=int, default=5)
    gen.add_argument("--dur-max", type=int, default=30)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--name", default="generated")
    gen.add_argument("--out", help="output directory (default: stdout)")
    gen.set_defaults(func=cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
