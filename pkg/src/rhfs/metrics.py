"""Evaluation indices computed from a feasible schedule.

* makespan: completion time of the last operation (the optimization target)
* tlb: total load balance cost, per stage the root-sum-square deviation of
  station busy times from the stage mean, summed over stages
* fur: total equipment utilization ratio, all-station busy time divided by
  all-station active span
* twt: total workstation free time, idle minutes within the active span of
  each used station
* deviation: percentage gap of a makespan against a known lower bound
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import Instance, Schedule


@dataclass(frozen=True)
class MetricReport:
    cmax: int
    tlb: float
    fur: float
    twt: int
    deviation_pct: float | None = None

    def as_dict(self) -> dict:
        return {
            "cmax": self.cmax,
            "tlb": self.tlb,
            "fur": self.fur,
            "twt": self.twt,
            "deviation_pct": self.deviation_pct,
        }


def makespan(schedule: Schedule) -> int:
    if not schedule.ops:
        raise ValueError("empty schedule has no makespan")
    return max(op.end for op in schedule.ops)


def _station_spans(instance: Instance, schedule: Schedule):
    """(busy, span) minutes per station; stations with no ops yield (0, 0)."""
    groups = schedule.by_station()
    spans = {}
    for j in range(instance.m):
        for k in range(instance.stations_per_stage[j]):
            ops = groups.get((j, k))
            if not ops:
                spans[(j, k)] = (0, 0)
            else:
                busy = sum(op.duration for op in ops)
                span = max(op.end for op in ops) - min(op.start for op in ops)
                spans[(j, k)] = (busy, span)
    return spans


def tlb(instance: Instance, schedule: Schedule) -> float:
    spans = _station_spans(instance, schedule)
    total = 0.0
    for j in range(instance.m):
        busies = [spans[(j, k)][0] for k in range(instance.stations_per_stage[j])]
        mean = sum(busies) / len(busies)
        total += math.sqrt(sum((b - mean) ** 2 for b in busies))
    return total


def fur(instance: Instance, schedule: Schedule) -> float:
    spans = _station_spans(instance, schedule)
    busy = sum(b for b, _ in spans.values())
    span = sum(s for _, s in spans.values())
    if span == 0:
        raise ValueError("utilization undefined: no station has an active span")
    return busy / span


def twt(instance: Instance, schedule: Schedule) -> int:
    spans = _station_spans(instance, schedule)
    return sum(s - b for b, s in spans.values())


def deviation(cmax: float, lb: float) -> float:
    """Percentage gap (cmax - lb) / lb * 100."""
    if lb <= 0:
        raise ValueError("lower bound must be positive")
    return (cmax - lb) / lb * 100.0


def metric_report(instance: Instance, schedule: Schedule) -> MetricReport:
    """All indices for one schedule; deviation only when the instance has a
    known lower bound."""
    cm = makespan(schedule)
    dev = deviation(cm, instance.lb) if instance.lb is not None else None
    return MetricReport(
        cmax=cm,
        tlb=tlb(instance, schedule),
        fur=fur(instance, schedule),
        twt=twt(instance, schedule),
        deviation_pct=dev,
    )
