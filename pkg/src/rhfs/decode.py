"""Map real-valued position vectors to feasible schedules.

A position holds one gene in [0, 1] per operation.  The genes of the jobs'
first steps fix the order in which jobs are released into the first stage
(random-key sequencing); from then on an event-driven simulation assigns
work: whenever a station is free and jobs are queued at its stage, the job
with the least remaining processing time is served first.  Remaining time
for a job at step l is the sum over steps >= l of the fastest station
choice per step ("min" rule; a "mean" variant is available).

Ties on remaining time break by the smaller gene at the competing step,
then by the lower job index, which makes decoding a pure function of
(instance, position).
"""

from __future__ import annotations

import heapq

import numpy as np

from .model import Instance, Schedule, ScheduledOp

X_MIN = 0.0
X_MAX = 1.0

_REMAINING_RULES = ("min", "mean")


class _Tables:
    """Per-instance flat lookup tables used by the simulation."""

    def __init__(self, instance: Instance, rule: str):
        n = instance.n
        self.om = [instance.om(i) for i in range(n)]
        self.offset = [instance.gene_offset(i) for i in range(n)]
        self.stage = [[fs.stage for fs in instance.flow(i)] for i in range(n)]
        self.durs = [list(instance.times[i]) for i in range(n)]
        self.tails = []
        for i in range(n):
            per_step = [
                min(row) if rule == "min" else sum(row) / len(row)
                for row in instance.times[i]
            ]
            tail = [0] * (self.om[i] + 1)
            for l in range(self.om[i] - 1, -1, -1):
                tail[l] = per_step[l] + tail[l + 1]
            self.tails.append(tail)


def _tables(instance: Instance, rule: str) -> _Tables:
    # cached in the instance's __dict__: avoids re-hashing large instances
    cache = instance.__dict__.setdefault("_decode_tables", {})
    tb = cache.get(rule)
    if tb is None:
        tb = _Tables(instance, rule)
        cache[rule] = tb
    return tb


def remaining_time(
    instance: Instance, job: int, from_step: int, *, rule: str = "min"
) -> int | float:
    """Optimistic work left for a job from the given flow step (inclusive)."""
    if rule not in _REMAINING_RULES:
        raise ValueError(f"unknown remaining-time rule {rule!r}")
    om = instance.om(job)
    if not 0 <= from_step <= om:
        raise IndexError(f"step {from_step} out of range for job {job} (om={om})")
    return _tables(instance, rule).tails[job][from_step]


def clamp_position(position: np.ndarray) -> np.ndarray:
    """Clip genes into the decoding bounds [0, 1]."""
    return np.clip(np.asarray(position, dtype=float), X_MIN, X_MAX)


def release_order(instance: Instance, position: np.ndarray) -> list[int]:
    """Jobs sorted by their first-step gene (ties: lower job index first)."""
    genes = clamp_position(position)
    first = [genes[instance.gene_offset(i)] for i in range(instance.n)]
    return sorted(range(instance.n), key=lambda i: (first[i], i))


def position_from_release_order(instance: Instance, order: list[int]) -> np.ndarray:
    """A canonical position whose decode releases jobs in the given order.

    Every gene of a job carries the job's rank, so remaining-time ties also
    resolve in release order.  Useful for enumerating the decoder's search
    space over job sequences.
    """
    if sorted(order) != list(range(instance.n)):
        raise ValueError("order must be a permutation of all jobs")
    genes = np.empty(instance.n_genes)
    for rank, job in enumerate(order):
        lo = instance.gene_offset(job)
        genes[lo : lo + instance.om(job)] = (rank + 0.5) / instance.n
    return genes


def _simulate(instance: Instance, position: np.ndarray, rule: str = "min"):
    """Run the dispatch simulation.

    Returns (ops, cmax, stations) where ops is a list of
    (job, step, stage, station, start, end) tuples in assignment order and
    stations[i][l] is the station chosen for each flow step.
    """
    tb = _tables(instance, rule)
    genes = clamp_position(position)
    if genes.shape != (instance.n_genes,):
        raise ValueError(
            f"position has {genes.size} genes, instance needs {instance.n_genes}"
        )
    genes = genes.tolist()

    n = instance.n
    m = instance.m
    order = sorted(range(n), key=lambda i: (genes[tb.offset[i]], i))

    free = [[0] * instance.stations_per_stage[j] for j in range(m)]
    # per stage: list of [ready_time, remaining, gene, job, step]
    pending: list[list[tuple]] = [[] for _ in range(m)]
    next_release = 0

    def release(at: int) -> None:
        nonlocal next_release
        job = order[next_release]
        next_release += 1
        pending[tb.stage[job][0]].append(
            (at, tb.tails[job][0], genes[tb.offset[job]], job, 0)
        )

    release(0)
    ops = []
    stations = [[-1] * tb.om[i] for i in range(n)]
    total = sum(tb.om)
    events: list[int] = []
    cmax = 0
    t = 0

    while len(ops) < total:
        for j in range(m):
            queue = pending[j]
            while queue:
                stage_free = free[j]
                best_k = -1
                best_free = 0
                for k, ft in enumerate(stage_free):
                    if ft <= t and (best_k < 0 or ft < best_free):
                        best_k = k
                        best_free = ft
                if best_k < 0:
                    break
                best_i = -1
                best_key = None
                for idx, entry in enumerate(queue):
                    if entry[0] <= t:
                        key = entry[1:]  # (remaining, gene, job, step)
                        if best_i < 0 or key < best_key:
                            best_i = idx
                            best_key = key
                if best_i < 0:
                    break
                ready, _, _, job, step = queue.pop(best_i)
                start = best_free if best_free > ready else ready
                end = start + tb.durs[job][step][best_k]
                free[j][best_k] = end
                stations[job][step] = best_k
                ops.append((job, step, j, best_k, start, end))
                if end > cmax:
                    cmax = end
                if step == 0 and next_release < n:
                    release(start)
                nxt = step + 1
                if nxt < tb.om[job]:
                    pending[tb.stage[job][nxt]].append(
                        (end, tb.tails[job][nxt], genes[tb.offset[job] + nxt], job, nxt)
                    )
                    heapq.heappush(events, end)
                else:
                    heapq.heappush(events, end)
        if len(ops) >= total:
            break
        if not events:
            raise RuntimeError("simulation stalled before scheduling every op")
        t = heapq.heappop(events)
        while events and events[0] == t:
            heapq.heappop(events)

    return ops, cmax, stations


def decode(instance: Instance, position: np.ndarray, *, rule: str = "min") -> Schedule:
    """Decode a position into a feasible schedule."""
    if rule not in _REMAINING_RULES:
        raise ValueError(f"unknown remaining-time rule {rule!r}")
    raw, _, _ = _simulate(instance, position, rule)
    raw.sort(key=lambda op: (op[0], op[1]))
    return Schedule(tuple(ScheduledOp(*op) for op in raw))


def evaluate(instance: Instance, position: np.ndarray, *, rule: str = "min") -> int:
    """Makespan of the decoded schedule, skipping Schedule construction."""
    _, cmax, _ = _simulate(instance, position, rule)
    return cmax


def assignment_matrix(schedule: Schedule) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Per job, the (stage, station) chosen for each flow step in order."""
    groups = schedule.by_job()
    return tuple(
        tuple((op.stage, op.station) for op in groups[i]) for i in sorted(groups)
    )


def assignment_key(
    instance: Instance, position: np.ndarray, *, rule: str = "min"
) -> tuple[int, ...]:
    """Flat station-per-operation tuple for fast similarity comparison."""
    _, _, stations = _simulate(instance, position, rule)
    return tuple(k for row in stations for k in row)
