"""Domain model for the re-entrant hybrid flow shop (RHFS).

A problem instance has ``m = nrm + rm`` stages.  Each job first visits the
``nrm`` non-re-entrant stages once, then loops through the block of ``rm``
re-entrant stages ``rts_i`` times, so job ``i`` performs
``om_i = nrm + rm * rts_i`` operations.  Every stage ``j`` is served by
``stations_per_stage[j]`` identical parallel stations, and processing times
may differ per station and per pass.

All durations are integer minutes and all indices in this API are 0-based;
file formats and rendered reports use 1-based indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property


@dataclass(frozen=True)
class FlowStep:
    """One position in a job's process flow."""

    job: int
    step: int        # 0-based position in the flow
    stage: int       # 0-based stage index
    pass_num: int    # 0 for non-re-entrant steps, else 1..rts_i


@dataclass(frozen=True)
class ScheduledOp:
    """A flow step placed on a concrete station with start/completion times."""

    job: int
    step: int
    stage: int
    station: int
    start: int
    end: int

    @property
    def duration(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class Schedule:
    """A complete assignment of every flow step of every job to a station."""

    ops: tuple[ScheduledOp, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "ops", tuple(self.ops))

    def by_station(self) -> dict[tuple[int, int], list[ScheduledOp]]:
        """Ops grouped per (stage, station), sorted by start time."""
        groups: dict[tuple[int, int], list[ScheduledOp]] = {}
        for op in self.ops:
            groups.setdefault((op.stage, op.station), []).append(op)
        for ops in groups.values():
            ops.sort(key=lambda op: (op.start, op.end))
        return groups

    def by_job(self) -> dict[int, list[ScheduledOp]]:
        """Ops grouped per job, sorted by flow step."""
        groups: dict[int, list[ScheduledOp]] = {}
        for op in self.ops:
            groups.setdefault(op.job, []).append(op)
        for ops in groups.values():
            ops.sort(key=lambda op: op.step)
        return groups

    def assignment(self, job: int, step: int) -> tuple[int, int]:
        """(stage, station) processing the given flow step."""
        for op in self.ops:
            if op.job == job and op.step == step:
                return (op.stage, op.station)
        raise KeyError(f"no op for job {job} step {step}")


@dataclass(frozen=True)
class Violation:
    """A broken feasibility rule, reported as data rather than an exception."""

    rule: str
    job: int | None
    message: str
    ops: tuple[ScheduledOp, ...] = ()


@dataclass(frozen=True)
class Instance:
    """An RHFS problem: stage structure, station counts and processing times.

    ``times[i][l][k]`` is the duration of job ``i``'s flow step ``l`` on
    station ``k`` of the step's stage (the stage is implied by the flow).
    ``lb`` is an optional known lower bound on the makespan.
    """

    name: str
    nrm: int
    rm: int
    stations_per_stage: tuple[int, ...]
    rts: tuple[int, ...]
    times: tuple[tuple[tuple[int, ...], ...], ...]
    lb: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "stations_per_stage", tuple(self.stations_per_stage))
        object.__setattr__(self, "rts", tuple(self.rts))
        object.__setattr__(
            self, "times", tuple(tuple(tuple(row) for row in job) for job in self.times)
        )
        if self.nrm < 0 or self.rm < 0 or self.nrm + self.rm == 0:
            raise ValueError("need at least one stage")
        if len(self.stations_per_stage) != self.m:
            raise ValueError(
                f"stations_per_stage has {len(self.stations_per_stage)} entries, expected {self.m}"
            )
        if any(s < 1 for s in self.stations_per_stage):
            raise ValueError("every stage needs at least one station")
        if not self.rts:
            raise ValueError("need at least one job")
        if any(r < 1 for r in self.rts):
            raise ValueError("every job needs a pass count of at least 1")
        if len(self.times) != self.n:
            raise ValueError(f"times given for {len(self.times)} jobs, expected {self.n}")
        for i in range(self.n):
            flow = self.flow(i)
            if len(self.times[i]) != self.om(i):
                raise ValueError(
                    f"job {i}: {len(self.times[i])} time rows, expected om={self.om(i)}"
                )
            for fs in flow:
                row = self.times[i][fs.step]
                want = self.stations_per_stage[fs.stage]
                if len(row) != want:
                    raise ValueError(
                        f"job {i} step {fs.step}: {len(row)} durations, "
                        f"stage {fs.stage} has {want} stations"
                    )
                for k, wt in enumerate(row):
                    if not isinstance(wt, int) or wt <= 0:
                        raise ValueError(
                            f"job {i} step {fs.step} station {k}: duration {wt!r} must be a positive integer"
                        )
        if self.lb is not None and self.lb <= 0:
            raise ValueError("lower bound must be positive")

    @property
    def n(self) -> int:
        """Number of jobs."""
        return len(self.rts)

    @property
    def m(self) -> int:
        """Total number of stages."""
        return self.nrm + self.rm

    def om(self, job: int) -> int:
        """Number of operations job performs: nrm + rm * rts."""
        return self.nrm + self.rm * self.rts[job]

    def flow(self, job: int) -> tuple[FlowStep, ...]:
        return self._flows[job]

    @cached_property
    def _flows(self) -> tuple[tuple[FlowStep, ...], ...]:
        return tuple(tuple(build_flow(self, i)) for i in range(self.n))

    @property
    def n_genes(self) -> int:
        """Total operation count; the decoder uses one gene per operation."""
        return self._gene_offsets[-1]

    def gene_offset(self, job: int) -> int:
        """Index of the job's first gene in a position vector."""
        return self._gene_offsets[job]

    @cached_property
    def _gene_offsets(self) -> tuple[int, ...]:
        offsets = [0]
        for i in range(self.n):
            offsets.append(offsets[-1] + self.om(i))
        return tuple(offsets)

    def proc_time(self, job: int, step: int, stage: int, station: int) -> int:
        """Duration of (job, flow step) on the given stage/station."""
        fs = self.flow(job)[step]
        if fs.stage != stage:
            raise KeyError(f"job {job} step {step} runs on stage {fs.stage}, not {stage}")
        return self.times[job][step][station]

    def min_step_time(self, job: int, step: int) -> int:
        """Fastest station choice for one flow step."""
        return min(self.times[job][step])


def build_flow(instance: Instance, job: int) -> list[FlowStep]:
    """Expand a job's process flow: non-re-entrant stages once, then the
    re-entrant block repeated rts times, in ascending stage order."""
    if not 0 <= job < instance.n:
        raise IndexError(f"job {job} out of range (n={instance.n})")
    steps = []
    l = 0
    for j in range(instance.nrm):
        steps.append(FlowStep(job=job, step=l, stage=j, pass_num=0))
        l += 1
    for p in range(1, instance.rts[job] + 1):
        for j in range(instance.nrm, instance.nrm + instance.rm):
            steps.append(FlowStep(job=job, step=l, stage=j, pass_num=p))
            l += 1
    return steps


def station_job_count(schedule: Schedule, stage: int, station: int) -> int:
    """Number of operations processed on one station; re-entrant visits
    count once per visit."""
    if stage < 0 or station < 0:
        raise IndexError("stage and station must be non-negative")
    return sum(1 for op in schedule.ops if op.stage == stage and op.station == station)


def validate_schedule(instance: Instance, schedule: Schedule) -> list[Violation]:
    """Check a schedule against every feasibility rule of the model.

    Returns an empty list iff the schedule is feasible.  Violations carry
    the broken rule, the job involved and the offending ops.
    """
    violations: list[Violation] = []

    for op in schedule.ops:
        if not 0 <= op.job < instance.n:
            violations.append(
                Violation("unknown-job", op.job, f"job {op.job} not in instance", (op,))
            )
            continue
        if not 0 <= op.step < instance.om(op.job):
            violations.append(
                Violation("unknown-step", op.job, f"job {op.job} has no step {op.step}", (op,))
            )
            continue
        fs = instance.flow(op.job)[op.step]
        if op.stage != fs.stage:
            violations.append(
                Violation(
                    "stage-mismatch",
                    op.job,
                    f"job {op.job} step {op.step} belongs to stage {fs.stage}, scheduled on {op.stage}",
                    (op,),
                )
            )
            continue
        if not 0 <= op.station < instance.stations_per_stage[op.stage]:
            violations.append(
                Violation(
                    "unknown-station",
                    op.job,
                    f"stage {op.stage} has no station {op.station}",
                    (op,),
                )
            )
            continue
        if op.start < 0 or op.end < op.start:
            violations.append(
                Violation(
                    "negative-time",
                    op.job,
                    f"job {op.job} step {op.step} has start {op.start}, end {op.end}",
                    (op,),
                )
            )
        wt = instance.times[op.job][op.step][op.station]
        if op.end - op.start != wt:
            violations.append(
                Violation(
                    "duration-mismatch",
                    op.job,
                    f"job {op.job} step {op.step} on station {op.station} "
                    f"lasts {op.end - op.start}, processing time is {wt}",
                    (op,),
                )
            )

    by_job = schedule.by_job()
    for i in range(instance.n):
        ops = by_job.get(i, [])
        steps = [op.step for op in ops]
        if steps != list(range(instance.om(i))):
            violations.append(
                Violation(
                    "coverage",
                    i,
                    f"job {i} covers steps {steps}, expected every step 0..{instance.om(i) - 1} once",
                    tuple(ops),
                )
            )
            continue
        for prev, cur in zip(ops, ops[1:]):
            if cur.start < prev.end:
                violations.append(
                    Violation(
                        "precedence",
                        i,
                        f"job {i} step {cur.step} starts at {cur.start} before "
                        f"step {prev.step} completes at {prev.end}",
                        (prev, cur),
                    )
                )

    for (stage, station), ops in sorted(schedule.by_station().items()):
        for prev, cur in zip(ops, ops[1:]):
            if cur.start < prev.end:
                violations.append(
                    Violation(
                        "station-overlap",
                        cur.job,
                        f"stage {stage} station {station}: job {prev.job} runs "
                        f"[{prev.start},{prev.end}) overlapping job {cur.job} "
                        f"[{cur.start},{cur.end})",
                        (prev, cur),
                    )
                )

    return violations
