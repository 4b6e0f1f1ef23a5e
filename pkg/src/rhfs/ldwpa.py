"""Wolf pack variant with Lévy-flight scouting and similarity-driven
population renewal.

Scouting probes jump along random unit directions with heavy-tailed step
lengths: mostly local refinement, occasionally a leap across the whole
box.  (A per-gene heavy-tailed variant and a hybrid that mixes plain
direction probes are selectable via ``scout_mode``; head-to-head runs
showed the scalar-length flight dominating both.)  When the best fitness
stagnates past a limit (and a warm-up iteration count has passed), wolves
are partitioned into groups of mutually similar individuals; each group
keeps only its best members and the rest of the pack is refilled with
fresh wolves that are dissimilar to everything retained.

Similarity compares decoded station assignments: the fraction of
operations two positions send to the same station.  It is computed on the
discrete assignment, not the raw reals, so permuting genes without
changing the decoded schedule does not count as a difference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .decode import X_MAX, X_MIN, _simulate, assignment_key
from .levy import LevyParams, levy_scout_step, sample_levy
from .model import Instance
from .wpa import RunReport, WolfPack, WpaParams, _run_loop, direction_probe_round

REJECTION_CAP_FACTOR = 50

SCOUT_MODES = ("levy", "levy-per-gene", "hybrid", "directions")


@dataclass
class LdwpaParams:
    base: WpaParams = field(default_factory=WpaParams)
    levy: LevyParams = field(default_factory=LevyParams)
    rt: float = 0.6              # similarity threshold
    kr: float = 0.3              # retained fraction per similarity group
    start_gen: int | None = None  # renewal warm-up; default ceil(0.3 * gen_max)
    stagnation_limit: int = 10
    scout_mode: str = "levy"
    renewal: bool = True

    def __post_init__(self) -> None:
        if self.start_gen is None:
            self.start_gen = math.ceil(0.3 * self.base.gen_max)
        if not 0.0 < self.rt < 1.0:
            raise ValueError("rt must be in (0, 1)")
        if not 0.0 < self.kr < 1.0:
            raise ValueError("kr must be in (0, 1)")
        if self.start_gen < 0:
            raise ValueError("start_gen must be non-negative")
        if self.stagnation_limit < 1:
            raise ValueError("stagnation_limit must be at least 1")
        if self.scout_mode not in SCOUT_MODES:
            raise ValueError(f"scout_mode must be one of {SCOUT_MODES}")


def levy_flight_probe(
    x: np.ndarray, step_a: float, rng: np.random.Generator, params: LevyParams
) -> np.ndarray:
    """One scouting jump: a heavy-tailed step length along a random unit
    direction, clamped to the decoding bounds."""
    length = sample_levy(rng, params)
    u = rng.normal(size=x.size)
    norm = float(np.linalg.norm(u))
    if norm > 0:
        u = u / norm
    return np.clip(x + step_a * length * u, X_MIN, X_MAX)


def _make_probe_round(params: LdwpaParams):
    base = params.base
    levy = params.levy
    mode = params.scout_mode
    if mode == "directions":
        return None  # base algorithm's probe
    if mode == "levy":
        return lambda x, rng: [
            levy_flight_probe(x, base.step_a, rng, levy) for _ in range(base.h)
        ]
    if mode == "levy-per-gene":
        return lambda x, rng: [
            levy_scout_step(x, base.step_a, rng, levy) for _ in range(base.h)
        ]
    # hybrid: half plain direction probes, half flights
    def probe_round(x: np.ndarray, rng: np.random.Generator) -> list[np.ndarray]:
        probes = direction_probe_round(x, base.step_a, base.h // 2, rng)
        probes += [
            levy_flight_probe(x, base.step_a, rng, levy)
            for _ in range(base.h - base.h // 2)
        ]
        return probes

    return probe_round


@dataclass
class SubpopPartition:
    """Fitness-ranked groups of mutually similar wolves.  Wolves similar to
    no anchor stay in leftovers; every wolf lands in exactly one place."""

    groups: list[list[int]]
    leftovers: list[int]
    keys: list[tuple[int, ...]] | None = None  # cached assignment keys


def _key_similarity(a: tuple[int, ...], b: tuple[int, ...]) -> float:
    if len(a) != len(b):
        raise ValueError("assignment keys have different lengths")
    return sum(x == y for x, y in zip(a, b)) / len(a)


def similarity(instance: Instance, pos_a: np.ndarray, pos_b: np.ndarray) -> float:
    """Fraction of operations both decoded schedules place on the same
    station; 1.0 for identical assignments, 0.0 for fully disjoint ones."""
    return _key_similarity(
        assignment_key(instance, pos_a), assignment_key(instance, pos_b)
    )


def partition_by_similarity(
    instance: Instance, pack: WolfPack, rt: float
) -> SubpopPartition:
    """Group wolves around fitness-ranked anchors: the best unassigned wolf
    collects every unassigned wolf more similar than rt; anchors with no
    matches become leftovers."""
    keys = [assignment_key(instance, w) for w in pack.wolves]
    ranked = [int(w) for w in np.argsort(pack.fitness, kind="stable")]
    groups: list[list[int]] = []
    leftovers: list[int] = []
    while ranked:
        anchor = ranked[0]
        members = [anchor] + [
            w for w in ranked[1:] if _key_similarity(keys[anchor], keys[w]) > rt
        ]
        if len(members) == 1:
            leftovers.append(anchor)
        else:
            groups.append(members)
        taken = set(members)
        ranked = [w for w in ranked if w not in taken]
    return SubpopPartition(groups=groups, leftovers=leftovers, keys=keys)


def regenerate(
    instance: Instance,
    pack: WolfPack,
    partition: SubpopPartition,
    params: LdwpaParams,
    rng: np.random.Generator,
) -> WolfPack:
    """Keep the best ceil(kr * size) wolves of each group plus all
    leftovers, then refill the pack with random wolves accepted only while
    dissimilar (<= rt) to everything already kept.  A global budget of
    50 * pop_size rejected candidates guards against livelock; once spent,
    each remaining slot takes its least-similar candidate so far."""
    if not partition.groups:
        return pack
    keys = partition.keys
    if keys is None:
        keys = [assignment_key(instance, w) for w in pack.wolves]

    survivors: list[int] = []
    for group in partition.groups:
        survivors.extend(group[: math.ceil(params.kr * len(group))])
    survivors.extend(partition.leftovers)

    positions = [pack.wolves[w].copy() for w in survivors]
    fitness = [int(pack.fitness[w]) for w in survivors]
    kept_keys = [keys[w] for w in survivors]

    pop = len(pack.wolves)
    base = params.base
    budget = REJECTION_CAP_FACTOR * pop
    failures = 0
    while len(positions) < pop:
        best_cand = None  # (max_sim, position, fitness, key)
        while True:
            cand = rng.uniform(base.x_min, base.x_max, pack.wolves.shape[1])
            _, cmax, stations = _simulate(instance, cand)
            pack.evaluations += 1
            key = tuple(k for row in stations for k in row)
            max_sim = max(_key_similarity(key, kk) for kk in kept_keys)
            if max_sim <= params.rt:
                best_cand = (max_sim, cand, cmax, key)
                break
            failures += 1
            if best_cand is None or max_sim < best_cand[0]:
                best_cand = (max_sim, cand, cmax, key)
            if failures >= budget:
                break
        _, cand, cmax, key = best_cand
        positions.append(cand)
        fitness.append(cmax)
        kept_keys.append(key)

    pack.wolves = np.stack(positions)
    pack.fitness = np.array(fitness, dtype=np.int64)
    pack.reelect()
    return pack


def run_ldwpa(instance: Instance, params: LdwpaParams | None = None) -> RunReport:
    """Run the variant; with scout_mode="directions" and renewal disabled
    this reduces exactly to the base algorithm."""
    if params is None:
        params = LdwpaParams()
    base = params.base
    probe_round = _make_probe_round(params)

    after_iteration = None
    if params.renewal:

        def after_iteration(pack: WolfPack, rng: np.random.Generator) -> None:
            if pack.gen >= params.start_gen and pack.stop_gen >= params.stagnation_limit:
                part = partition_by_similarity(instance, pack, params.rt)
                regenerate(instance, pack, part, params, rng)
                pack.stop_gen = 0

    return _run_loop(
        instance,
        base,
        algorithm="ldwpa",
        probe_round=probe_round,
        after_iteration=after_iteration,
    )
