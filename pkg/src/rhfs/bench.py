"""Instance files, seeded experiments and result export.

The text format is line-oriented: header keys, then one ``job`` block per
job with one duration row per flow step (the stage of each row follows
from the job's flow).  ``#`` starts a comment.  See docs/format.md for the
grammar.  Experiments run an algorithm across consecutive seeds and
aggregate best and average final makespans; results export to CSV or JSON
with a fixed column order, convergence traces to a separate long-format
CSV.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .ldwpa import LdwpaParams, run_ldwpa
from .metrics import deviation
from .model import Instance
from .wpa import RunReport, WpaParams, run_wpa

DATA_DIR = Path(__file__).parent / "data"
PAINTING_PATH = DATA_DIR / "painting.rhfs"
PAINTING_WIDE_PATH = DATA_DIR / "painting_wide.rhfs"

RESULT_COLUMNS = (
    "instance",
    "algorithm",
    "seed",
    "best",
    "average",
    "deviation_pct",
    "cmax",
    "tlb",
    "fur",
    "twt",
    "runtime_ms",
)

ALGORITHMS = ("wpa", "ldwpa")

_HEADER_KEYS = ("name", "jobs", "nonreentrant", "reentrant", "stations", "passes", "lb")


class RhfsParseError(ValueError):
    """Malformed instance file; the message carries the line number."""


def _fail(lineno: int, message: str) -> None:
    raise RhfsParseError(f"line {lineno}: {message}")


def _ints(tokens: list[str], lineno: int, what: str) -> list[int]:
    values = []
    for tok in tokens:
        try:
            values.append(int(tok))
        except ValueError:
            _fail(lineno, f"{what}: {tok!r} is not an integer")
    return values


def parse_instance(text: str) -> Instance:
    """Parse and validate an instance file."""
    header: dict[str, object] = {}
    rows: list[list[list[int]]] = []
    current: list[list[int]] | None = None
    job_numbers: list[int] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        key = tokens[0]
        if key == "job":
            if len(tokens) != 2:
                _fail(lineno, "expected 'job <index>'")
            (idx,) = _ints(tokens[1:], lineno, "job index")
            if idx != len(rows) + 1:
                _fail(lineno, f"job blocks must be consecutive; expected job {len(rows) + 1}, got {idx}")
            current = []
            rows.append(current)
            job_numbers.append(lineno)
        elif key in _HEADER_KEYS:
            if current is not None:
                _fail(lineno, f"header key {key!r} after the first job block")
            if key in header:
                _fail(lineno, f"duplicate header key {key!r}")
            if key == "name":
                if len(tokens) != 2:
                    _fail(lineno, "expected 'name <identifier>'")
                header["name"] = tokens[1]
            elif key in ("jobs", "nonreentrant", "reentrant", "lb"):
                if len(tokens) != 2:
                    _fail(lineno, f"expected '{key} <integer>'")
                header[key] = _ints(tokens[1:], lineno, key)[0]
            else:  # stations, passes
                header[key] = _ints(tokens[1:], lineno, key)
        else:
            if current is None:
                _fail(lineno, f"unknown header key {key!r}")
            current.append(_ints(tokens, lineno, "duration row"))

    for key in ("name", "jobs", "nonreentrant", "reentrant", "stations", "passes"):
        if key not in header:
            raise RhfsParseError(f"missing header key {key!r}")
    n = header["jobs"]
    if len(header["passes"]) != n:
        raise RhfsParseError(
            f"passes lists {len(header['passes'])} jobs, header says {n}"
        )
    if len(rows) != n:
        raise RhfsParseError(f"found {len(rows)} job blocks, header says {n}")

    try:
        return Instance(
            name=header["name"],
            nrm=header["nonreentrant"],
            rm=header["reentrant"],
            stations_per_stage=tuple(header["stations"]),
            rts=tuple(header["passes"]),
            times=tuple(tuple(tuple(r) for r in job) for job in rows),
            lb=header.get("lb"),
        )
    except ValueError as exc:
        raise RhfsParseError(f"invalid instance: {exc}") from exc


def serialize_instance(instance: Instance) -> str:
    """Canonical text form; parse(serialize(x)) == x."""
    lines = [
        f"name {instance.name}",
        f"jobs {instance.n}",
        f"nonreentrant {instance.nrm}",
        f"reentrant {instance.rm}",
        "stations " + " ".join(str(s) for s in instance.stations_per_stage),
        "passes " + " ".join(str(r) for r in instance.rts),
    ]
    if instance.lb is not None:
        lines.append(f"lb {instance.lb}")
    for i in range(instance.n):
        lines.append(f"job {i + 1}")
        for row in instance.times[i]:
            lines.append(" ".join(str(t) for t in row))
    return "\n".join(lines) + "\n"


def load_instance(path: str | Path) -> Instance:
    return parse_instance(Path(path).read_text())


def painting_instance(wide: bool = False) -> Instance:
    """The bundled paint-shop case: 15 car bodies through masking, spraying
    and baking stages with 1-3 passes each.  ``wide`` selects the variant
    with four baking stations instead of two."""
    return load_instance(PAINTING_WIDE_PATH if wide else PAINTING_PATH)


@dataclass(frozen=True)
class GeneratorSpec:
    """Shape of a random instance: sizes, station counts and value ranges."""

    n: int
    nrm: int
    rm: int
    stations: tuple[int, ...]
    rts_range: tuple[int, int] = (1, 3)
    duration_range: tuple[int, int] = (5, 30)
    name: str = "generated"

    def __post_init__(self) -> None:
        object.__setattr__(self, "stations", tuple(self.stations))
        if self.rts_range[0] > self.rts_range[1] or self.rts_range[0] < 1:
            raise ValueError(f"empty pass-count range {self.rts_range}")
        if self.duration_range[0] > self.duration_range[1] or self.duration_range[0] < 1:
            raise ValueError(f"empty duration range {self.duration_range}")


def generate_instance(spec: GeneratorSpec, seed: int) -> Instance:
    """Seeded uniform instance; identical spec and seed give identical
    instances."""
    rng = np.random.default_rng(seed)
    if spec.rm > 0:
        rts = rng.integers(spec.rts_range[0], spec.rts_range[1] + 1, spec.n)
    else:
        rts = np.ones(spec.n, dtype=int)
    lo, hi = spec.duration_range
    times = []
    for i in range(spec.n):
        stages = list(range(spec.nrm)) + list(
            range(spec.nrm, spec.nrm + spec.rm)
        ) * int(rts[i])
        times.append(
            tuple(
                tuple(int(t) for t in rng.integers(lo, hi + 1, spec.stations[j]))
                for j in stages
            )
        )
    return Instance(
        name=spec.name,
        nrm=spec.nrm,
        rm=spec.rm,
        stations_per_stage=spec.stations,
        rts=tuple(int(r) for r in rts),
        times=tuple(times),
    )


def medium_suite(n_instances: int = 5, base_seed: int = 500) -> list[Instance]:
    """Generated head-to-head suite: 15 jobs, 3 stages, stations (2, 3, 4)."""
    instances = []
    for i in range(n_instances):
        spec = GeneratorSpec(
            n=15, nrm=2, rm=1, stations=(2, 3, 4), rts_range=(1, 3), name=f"medium-{i + 1}"
        )
        instances.append(generate_instance(spec, seed=base_seed + i))
    return instances


@dataclass(frozen=True)
class ExperimentSummary:
    instance: str
    algorithm: str
    n_seeds: int
    best: int
    average: float
    deviation_best_pct: float | None = None
    deviation_avg_pct: float | None = None


def _with_seed(params: WpaParams | LdwpaParams, seed: int):
    if isinstance(params, LdwpaParams):
        return replace(params, base=replace(params.base, seed=seed))
    return replace(params, seed=seed)


def run_algorithm(
    algorithm: str, instance: Instance, params: WpaParams | LdwpaParams
) -> RunReport:
    """Dispatch by algorithm name ("wpa" or "ldwpa")."""
    if algorithm == "wpa":
        base = params.base if isinstance(params, LdwpaParams) else params
        return run_wpa(instance, base)
    if algorithm == "ldwpa":
        lp = params if isinstance(params, LdwpaParams) else LdwpaParams(base=params)
        return run_ldwpa(instance, lp)
    raise ValueError(f"unknown algorithm {algorithm!r}; choose from {ALGORITHMS}")


def run_experiment(
    instance: Instance,
    algorithm: str,
    params: WpaParams | LdwpaParams,
    n_seeds: int,
) -> tuple[list[RunReport], ExperimentSummary]:
    """Run seeds base..base+n_seeds-1 (base taken from the params) and
    aggregate.  ``average`` is the mean of the final best fitnesses; the
    deviation columns compare best and average against the instance's
    lower bound when one is known."""
    if n_seeds < 1:
        raise ValueError("n_seeds must be at least 1")
    base_seed = params.base.seed if isinstance(params, LdwpaParams) else params.seed
    reports = []
    for k in range(n_seeds):
        reports.append(
            run_algorithm(algorithm, instance, _with_seed(params, base_seed + k))
        )
    best = min(r.best_fitness for r in reports)
    average = sum(r.best_fitness for r in reports) / len(reports)
    dev_best = dev_avg = None
    if instance.lb is not None:
        dev_best = deviation(best, instance.lb)
        dev_avg = deviation(average, instance.lb)
        for r in reports:
            r.deviation_pct = deviation(r.best_fitness, instance.lb)
    for r in reports:
        r.average = average
    summary = ExperimentSummary(
        instance=instance.name,
        algorithm=algorithm,
        n_seeds=n_seeds,
        best=best,
        average=average,
        deviation_best_pct=dev_best,
        deviation_avg_pct=dev_avg,
    )
    return reports, summary


def _result_rows(reports: list[RunReport], timing: bool) -> list[dict]:
    rows = []
    for r in reports:
        m = r.metrics
        rows.append(
            {
                "instance": r.instance,
                "algorithm": r.algorithm,
                "seed": r.seed,
                "best": r.best_fitness,
                "average": round(r.average if r.average is not None else float(r.best_fitness), 6),
                "deviation_pct": None if r.deviation_pct is None else round(r.deviation_pct, 6),
                "cmax": m.cmax,
                "tlb": round(m.tlb, 6),
                "fur": round(m.fur, 6),
                "twt": m.twt,
                "runtime_ms": round(r.runtime_ms, 3) if timing else None,
            }
        )
    return rows


def export_results(
    reports: list[RunReport], fmt: str = "csv", *, timing: bool = False
) -> str:
    """Render reports in the fixed column order.  Wall-clock timing is
    omitted by default so identical runs export identical bytes."""
    rows = _result_rows(reports, timing)
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(RESULT_COLUMNS)
        for row in rows:
            writer.writerow(["" if row[c] is None else row[c] for c in RESULT_COLUMNS])
        return out.getvalue()
    raise ValueError(f"unknown format {fmt!r}; choose csv or json")


def export_traces(reports: list[RunReport]) -> str:
    """Long-format CSV of the per-iteration best fitness of every run, for
    external convergence plots."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["instance", "algorithm", "seed", "iteration", "best"])
    for r in reports:
        for it, best in enumerate(r.trace):
            writer.writerow([r.instance, r.algorithm, r.seed, it, best])
    return out.getvalue()
