"""Base wolf pack algorithm.

A population of positions ("wolves") minimizes decoded makespan through
four phases per iteration: scouting (the q best non-leader wolves probe
around themselves), summoning (the rest drift toward the leader), siege
(random moves within a shrinking radius around the current position) and
renewal (the worst bw wolves are re-initialized).  The leader is always
the best wolf; every move is accepted greedily, so the best-so-far trace
is non-increasing.

The same loop also drives the Lévy/renewal variant: the scouting probe
and an end-of-iteration hook are injectable.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .decode import X_MAX, X_MIN, decode, evaluate
from .metrics import MetricReport, metric_report
from .model import Instance, Schedule


@dataclass
class WpaParams:
    pop_size: int = 40
    gen_max: int = 100
    q: int = 5                  # scouting wolves per iteration
    h: int = 4                  # probe directions per scouting round
    sc_max: int = 15            # scouting rounds per wolf
    step_a: float | None = None  # probe step; default 0.6 * (x_max - x_min)
    step_b: float = 0.3         # summoning step factor
    bw: int | None = None       # wolves renewed per iteration; default pop/10
    mu: float = 0.2             # siege participation threshold
    ra_max: float = 400.0
    ra_min: float = 0.5
    x_min: float = X_MIN
    x_max: float = X_MAX
    seed: int = 0
    siege_radius_starts_at_max: bool = False
    target_fitness: int | None = None

    def __post_init__(self) -> None:
        if self.step_a is None:
            self.step_a = 0.6 * abs(self.x_max - self.x_min)
        if self.bw is None:
            self.bw = max(1, self.pop_size // 10)
        if self.pop_size < 1:
            raise ValueError("pop_size must be at least 1")
        if self.gen_max < 0:
            raise ValueError("gen_max must be non-negative")
        if not 0 <= self.q < self.pop_size:
            raise ValueError("q must satisfy 0 <= q < pop_size")
        if self.h < 1:
            raise ValueError("h must be at least 1")
        if not 1 <= self.sc_max <= 15:
            raise ValueError("sc_max must be in 1..15")
        if not 0.0 < self.mu <= 1.0:
            raise ValueError("mu must be in (0, 1]")
        if self.bw < 1:
            raise ValueError("bw must be at least 1")
        if self.ra_max <= 0 or self.ra_min <= 0:
            raise ValueError("siege radii must be positive")
        if self.x_max <= self.x_min:
            raise ValueError("x_max must exceed x_min")
        if self.step_a < 0 or self.step_b < 0:
            raise ValueError("steps must be non-negative")


@dataclass
class WolfPack:
    wolves: np.ndarray          # (pop_size, n_genes)
    fitness: np.ndarray         # per-wolf makespan
    leader: int                 # index of the best wolf
    gen: int = 0
    stop_gen: int = 0           # iterations without a new best
    evaluations: int = 0

    @property
    def best_fitness(self) -> int:
        return int(self.fitness[self.leader])

    def reelect(self) -> None:
        self.leader = int(np.argmin(self.fitness))


@dataclass
class RunReport:
    instance: str
    algorithm: str
    seed: int
    best_fitness: int
    best_position: np.ndarray
    trace: tuple[int, ...]
    evaluations: int
    runtime_ms: float
    schedule: Schedule
    metrics: MetricReport
    average: float | None = None       # mean final fitness across an experiment
    deviation_pct: float | None = None


def init_pack(
    instance: Instance, params: WpaParams, rng: np.random.Generator | None = None
) -> WolfPack:
    """Uniform-random positions, fitness evaluated, leader elected."""
    if rng is None:
        rng = np.random.default_rng(params.seed)
    wolves = rng.uniform(params.x_min, params.x_max, (params.pop_size, instance.n_genes))
    fitness = np.array([evaluate(instance, w) for w in wolves], dtype=np.int64)
    pack = WolfPack(wolves=wolves, fitness=fitness, leader=0, evaluations=params.pop_size)
    pack.reelect()
    return pack


def scout_indices(pack: WolfPack, params: WpaParams) -> list[int]:
    """The q best non-leader wolves by current fitness."""
    order = np.argsort(pack.fitness, kind="stable")
    return [int(w) for w in order if int(w) != pack.leader][: params.q]


def direction_probe_round(
    x: np.ndarray, step_a: float, h: int, rng: np.random.Generator
) -> list[np.ndarray]:
    """h probes from x along evenly-spread random directions (antipodal
    pairs of random unit vectors)."""
    probes = []
    u = np.zeros_like(x)
    for p in range(h):
        if p % 2 == 0:
            u = rng.normal(size=x.size)
            norm = float(np.linalg.norm(u))
            if norm > 0:
                u = u / norm
            probes.append(np.clip(x + step_a * u, X_MIN, X_MAX))
        else:
            probes.append(np.clip(x - step_a * u, X_MIN, X_MAX))
    return probes


def scout(
    instance: Instance,
    pack: WolfPack,
    params: WpaParams,
    rng: np.random.Generator,
    scouts: list[int] | None = None,
    probe_round=None,
) -> WolfPack:
    """Scouting phase: each scout probes h candidates per round for up to
    sc_max rounds, keeps improving probes, and halts once it beats the
    leader's fitness at phase start.  The leader is re-elected afterwards."""
    if scouts is None:
        scouts = scout_indices(pack, params)
    if probe_round is None:
        probe_round = lambda x, r: direction_probe_round(x, params.step_a, params.h, r)
    incumbent = pack.best_fitness
    for w in scouts:
        beaten = False
        for _ in range(params.sc_max):
            for cand in probe_round(pack.wolves[w], rng):
                cf = evaluate(instance, cand)
                pack.evaluations += 1
                if cf < pack.fitness[w]:
                    pack.wolves[w] = cand
                    pack.fitness[w] = cf
                    if cf < incumbent:
                        beaten = True
                        break
            if beaten:
                break
    pack.reelect()
    return pack


def summon_follow(
    instance: Instance,
    pack: WolfPack,
    params: WpaParams,
    rng: np.random.Generator,
    scouts: list[int] | None = None,
) -> WolfPack:
    """Non-scout, non-leader wolves move each gene toward the leader by
    rand * step_b * (leader - own); moves are kept only when they improve."""
    if scouts is None:
        scouts = scout_indices(pack, params)
    skip = set(scouts)
    skip.add(pack.leader)
    leader_x = pack.wolves[pack.leader].copy()
    for w in range(len(pack.wolves)):
        if w in skip:
            continue
        r = rng.random(pack.wolves.shape[1])
        cand = np.clip(
            pack.wolves[w] + r * params.step_b * (leader_x - pack.wolves[w]),
            params.x_min,
            params.x_max,
        )
        cf = evaluate(instance, cand)
        pack.evaluations += 1
        if cf < pack.fitness[w]:
            pack.wolves[w] = cand
            pack.fitness[w] = cf
    pack.reelect()
    return pack


def siege_radius(params: WpaParams, t: int, max_t: int) -> float:
    """Move radius at iteration t, decaying geometrically over max_t."""
    lead = params.ra_max if params.siege_radius_starts_at_max else params.ra_min
    span = params.x_max - params.x_min
    return lead * span * math.exp(math.log(params.ra_min / params.ra_max) * t / max(1, max_t))


def siege(
    instance: Instance, pack: WolfPack, params: WpaParams, rng: np.random.Generator
) -> WolfPack:
    """Each non-leader wolf moves with probability 1 - mu by a uniform
    per-gene offset within the current siege radius; greedy acceptance."""
    radius = siege_radius(params, max(0, pack.gen - 1), params.gen_max)
    for w in range(len(pack.wolves)):
        if w == pack.leader:
            continue
        if rng.random() <= params.mu:
            continue
        offset = rng.uniform(-1.0, 1.0, pack.wolves.shape[1]) * radius
        cand = np.clip(pack.wolves[w] + offset, params.x_min, params.x_max)
        cf = evaluate(instance, cand)
        pack.evaluations += 1
        if cf < pack.fitness[w]:
            pack.wolves[w] = cand
            pack.fitness[w] = cf
    pack.reelect()
    return pack


def renew(
    instance: Instance, pack: WolfPack, params: WpaParams, rng: np.random.Generator
) -> WolfPack:
    """Replace the bw worst wolves with fresh uniform-random positions."""
    if params.bw >= len(pack.wolves):
        raise ValueError("bw must be smaller than the pack size")
    order = np.argsort(pack.fitness, kind="stable")
    worst = sorted(int(w) for w in order[len(pack.wolves) - params.bw :])
    for w in worst:
        pack.wolves[w] = rng.uniform(params.x_min, params.x_max, pack.wolves.shape[1])
        pack.fitness[w] = evaluate(instance, pack.wolves[w])
        pack.evaluations += 1
    pack.reelect()
    return pack


def _run_loop(
    instance: Instance,
    params: WpaParams,
    algorithm: str,
    probe_round=None,
    after_iteration=None,
) -> RunReport:
    start = time.perf_counter()
    rng = np.random.default_rng(params.seed)
    pack = init_pack(instance, params, rng)
    best_f = pack.best_fitness
    best_x = pack.wolves[pack.leader].copy()
    trace = [best_f]

    for gen in range(1, params.gen_max + 1):
        pack.gen = gen
        scouts = scout_indices(pack, params)
        scout(instance, pack, params, rng, scouts=scouts, probe_round=probe_round)
        summon_follow(instance, pack, params, rng, scouts=scouts)
        siege(instance, pack, params, rng)
        renew(instance, pack, params, rng)
        if pack.best_fitness < best_f:
            best_f = pack.best_fitness
            best_x = pack.wolves[pack.leader].copy()
            pack.stop_gen = 0
        else:
            pack.stop_gen += 1
        if after_iteration is not None:
            after_iteration(pack, rng)
            if pack.best_fitness < best_f:
                best_f = pack.best_fitness
                best_x = pack.wolves[pack.leader].copy()
        trace.append(best_f)
        if params.target_fitness is not None and best_f <= params.target_fitness:
            break

    schedule = decode(instance, best_x)
    runtime_ms = (time.perf_counter() - start) * 1000.0
    return RunReport(
        instance=instance.name,
        algorithm=algorithm,
        seed=params.seed,
        best_fitness=best_f,
        best_position=best_x,
        trace=tuple(trace),
        evaluations=pack.evaluations,
        runtime_ms=runtime_ms,
        schedule=schedule,
        metrics=metric_report(instance, schedule),
    )


def run_wpa(instance: Instance, params: WpaParams | None = None) -> RunReport:
    """Run the base algorithm until gen_max (or target fitness, if set)."""
    if params is None:
        params = WpaParams()
    return _run_loop(instance, params, algorithm="wpa")
