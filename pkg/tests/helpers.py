"""Shared builders and independent oracles for the test suite."""

from __future__ import annotations

import itertools

from rhfs.bench import GeneratorSpec, generate_instance
from rhfs.decode import evaluate, position_from_release_order
from rhfs.model import Instance


def unit_instance(wt: int = 5) -> Instance:
    """1 job, 1 stage, 1 station."""
    return Instance(name="unit", nrm=1, rm=0, stations_per_stage=(1,), rts=(1,), times=(((wt,),),))


def parallel_instance(wt: int = 5) -> Instance:
    """2 identical jobs, 1 stage, 2 stations."""
    return Instance(
        name="parallel",
        nrm=1,
        rm=0,
        stations_per_stage=(2,),
        rts=(1, 1),
        times=(((wt, wt),), ((wt, wt),)),
    )


def single_machine_instance(durations: tuple[int, ...]) -> Instance:
    """n jobs, one stage, one station: job order fully controls the schedule."""
    return Instance(
        name="1m",
        nrm=1,
        rm=0,
        stations_per_stage=(1,),
        rts=tuple(1 for _ in durations),
        times=tuple(((d,),) for d in durations),
    )


# frozen toy used for the 4-of-6 similarity example
def similarity_toy() -> Instance:
    return Instance(
        name="simtoy",
        nrm=1,
        rm=1,
        stations_per_stage=(2, 2),
        rts=(2, 2),
        times=(
            ((17, 18), (24, 29), (5, 8)),
            ((26, 29), (11, 13), (27, 16)),
        ),
    )


SIMILARITY_POS_A = [0.612595, 0.0157, 0.18769, 0.85789, 0.076199, 0.20109]
SIMILARITY_POS_B = [0.630101, 0.098562, 0.152204, 0.180245, 0.131928, 0.984117]


def flowshop_makespan(durations: list[tuple[int, int]], perm: tuple[int, ...]) -> int:
    """Independent 2-stage, single-station flow shop oracle: the classic
    forward recurrence C[j][s] = max(C[j-1][s], C[j][s-1]) + p."""
    end1 = end2 = 0
    for job in perm:
        p1, p2 = durations[job]
        end1 = end1 + p1
        end2 = max(end2, end1) + p2
    return end2


def brute_force_optimum(instance: Instance) -> int:
    """Exhaustive minimum makespan over every job release order, using the
    decoder itself on canonical rank positions (the decoder-consistent
    search space)."""
    best = None
    for perm in itertools.permutations(range(instance.n)):
        cmax = evaluate(instance, position_from_release_order(instance, list(perm)))
        if best is None or cmax < best:
            best = cmax
    return best


def random_instances(count: int, base_seed: int = 4000) -> list[Instance]:
    """Mixed-size generated instances: n in 3..15, rm in 1..3."""
    out = []
    for i in range(count):
        n = 3 + (i * 5) % 13          # cycles through 3..15
        rm = 1 + i % 3
        nrm = i % 2
        stations = tuple(1 + (i + j) % 3 for j in range(nrm + rm))
        spec = GeneratorSpec(
            n=n,
            nrm=nrm,
            rm=rm,
            stations=stations,
            rts_range=(1, 3),
            duration_range=(5, 30),
            name=f"rand-{i}",
        )
        out.append(generate_instance(spec, seed=base_seed + i))
    return out


def tiny_instances(count: int = 25, base_seed: int = 9000) -> list[Instance]:
    """Oracle-scale instances: n <= 4, m <= 2, stations <= 2, rts <= 2."""
    shapes = [
        (2, 1, 1, (1, 2)),
        (3, 1, 1, (2, 1)),
        (3, 0, 2, (2, 2)),
        (4, 1, 1, (2, 2)),
        (4, 0, 2, (1, 2)),
    ]
    out = []
    for i in range(count):
        n, nrm, rm, stations = shapes[i % len(shapes)]
        spec = GeneratorSpec(
            n=n,
            nrm=nrm,
            rm=rm,
            stations=stations,
            rts_range=(1, 2),
            duration_range=(5, 30),
            name=f"tiny-{i}",
        )
        out.append(generate_instance(spec, seed=base_seed + i))
    return out
