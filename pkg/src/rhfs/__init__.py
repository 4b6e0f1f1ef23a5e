"""Re-entrant hybrid flow shop scheduling toolkit.

Model and validate RHFS instances, decode random-key positions into
feasible schedules with a minimum-remaining-time dispatch rule, optimize
makespan with a wolf pack algorithm or its Lévy-flight/population-renewal
variant, and run seeded benchmark experiments.
"""

from .bench import (
    GeneratorSpec,
    RhfsParseError,
    export_results,
    export_traces,
    generate_instance,
    load_instance,
    medium_suite,
    painting_instance,
    parse_instance,
    run_algorithm,
    run_experiment,
    serialize_instance,
)
from .decode import (
    assignment_matrix,
    decode,
    evaluate,
    position_from_release_order,
    release_order,
    remaining_time,
)
from .ldwpa import LdwpaParams, partition_by_similarity, regenerate, run_ldwpa, similarity
from .levy import LevyParams, levy_scout_step, sample_levy, sigma_u
from .metrics import MetricReport, deviation, fur, makespan, metric_report, tlb, twt
from .model import (
    FlowStep,
    Instance,
    Schedule,
    ScheduledOp,
    Violation,
    build_flow,
    station_job_count,
    validate_schedule,
)
from .wpa import RunReport, WolfPack, WpaParams, init_pack, run_wpa

__version__ = "0.1.0"

__all__ = [
    "FlowStep",
    "GeneratorSpec",
    "Instance",
    "LdwpaParams",
    "LevyParams",
    "MetricReport",
    "RhfsParseError",
    "RunReport",
    "Schedule",
    "ScheduledOp",
    "Violation",
    "WolfPack",
    "WpaParams",
    "assignment_matrix",
    "build_flow",
    "decode",
    "deviation",
    "evaluate",
    "export_results",
    "export_traces",
    "fur",
    "generate_instance",
    "init_pack",
    "load_instance",
    "makespan",
    "medium_suite",
    "metric_report",
    "painting_instance",
    "parse_instance",
    "partition_by_similarity",
    "position_from_release_order",
    "regenerate",
    "release_order",
    "remaining_time",
    "run_algorithm",
    "run_experiment",
    "run_ldwpa",
    "run_wpa",
    "sample_levy",
    "serialize_instance",
    "sigma_u",
    "similarity",
    "station_job_count",
    "tlb",
    "twt",
    "validate_schedule",
]
