import numpy as np
import pytest
from helpers import random_instances, unit_instance

from rhfs.bench import painting_instance
from rhfs.decode import decode
from rhfs.model import (
    Instance,
    Schedule,
    ScheduledOp,
    build_flow,
    station_job_count,
    validate_schedule,
)


def make_instance(nrm, rm, stations, rts, wt=5):
    times = []
    for i, r in enumerate(rts):
        stages = list(range(nrm)) + list(range(nrm, nrm + rm)) * r
        times.append(tuple(tuple([wt] * stations[j]) for j in stages))
    return Instance(
        name="t", nrm=nrm, rm=rm, stations_per_stage=stations, rts=tuple(rts), times=tuple(times)
    )


class TestBuildFlow:
    def test_nonreentrant_then_repeated_block(self):
        inst = make_instance(nrm=2, rm=1, stations=(1, 1, 1), rts=(3,))
        flow = build_flow(inst, 0)
        assert [fs.stage + 1 for fs in flow] == [1, 2, 3, 3, 3]
        assert len(flow) == inst.om(0) == 5

    def test_painting_multi_pass_jobs(self):
        inst = painting_instance()
        flow = build_flow(inst, 0)  # J1 loops the 3-stage block 3 times
        assert [fs.stage + 1 for fs in flow] == [1, 2, 3, 1, 2, 3, 1, 2, 3]
        assert inst.om(0) == 9

    def test_painting_single_pass_jobs(self):
        inst = painting_instance()
        flow = build_flow(inst, 8)  # J9 appears only in the first block
        assert [fs.stage + 1 for fs in flow] == [1, 2, 3]
        assert inst.om(8) == 3

    def test_pass_numbers(self):
        inst = make_instance(nrm=1, rm=2, stations=(1, 1, 1), rts=(2,))
        flow = build_flow(inst, 0)
        assert [fs.pass_num for fs in flow] == [0, 1, 1, 2, 2]

    def test_unknown_job(self):
        inst = unit_instance()
        with pytest.raises(IndexError):
            build_flow(inst, 3)

    def test_length_matches_om_everywhere(self):
        for inst in random_instances(8):
            for i in range(inst.n):
                assert len(build_flow(inst, i)) == inst.om(i)


class TestInstanceValidation:
    def test_rejects_zero_stations(self):
        with pytest.raises(ValueError):
            make_instance(nrm=1, rm=0, stations=(0,), rts=(1,))

    def test_rejects_zero_passes(self):
        with pytest.raises(ValueError):
            make_instance(nrm=0, rm=1, stations=(1,), rts=(0,))

    def test_rejects_nonpositive_duration(self):
        with pytest.raises(ValueError):
            Instance(
                name="bad", nrm=1, rm=0, stations_per_stage=(1,), rts=(1,), times=(((0,),),)
            )

    def test_rejects_wrong_row_width(self):
        with pytest.raises(ValueError):
            Instance(
                name="bad", nrm=1, rm=0, stations_per_stage=(2,), rts=(1,), times=(((5,),),)
            )

    def test_rejects_missing_steps(self):
        with pytest.raises(ValueError):
            Instance(
                name="bad", nrm=1, rm=1, stations_per_stage=(1, 1), rts=(2,), times=(((5,), (5,)),)
            )


class TestValidateSchedule:
    def test_decoded_schedules_are_clean(self):
        rng = np.random.default_rng(0)
        for inst in random_instances(5):
            for _ in range(10):
                sched = decode(inst, rng.random(inst.n_genes))
                assert validate_schedule(inst, sched) == []

    def test_station_overlap_detected(self):
        inst = make_instance(nrm=1, rm=0, stations=(1,), rts=(1, 1))
        sched = Schedule(
            (
                ScheduledOp(job=0, step=0, stage=0, station=0, start=0, end=5),
                ScheduledOp(job=1, step=0, stage=0, station=0, start=3, end=8),
            )
        )
        rules = [v.rule for v in validate_schedule(inst, sched)]
        assert rules == ["station-overlap"]

    def test_precedence_violation_detected(self):
        inst = make_instance(nrm=2, rm=0, stations=(1, 1), rts=(1,))
        sched = Schedule(
            (
                ScheduledOp(job=0, step=0, stage=0, station=0, start=0, end=5),
                ScheduledOp(job=0, step=1, stage=1, station=0, start=3, end=8),
            )
        )
        rules = [v.rule for v in validate_schedule(inst, sched)]
        assert rules == ["precedence"]

    def test_duration_mismatch_detected(self):
        inst = unit_instance(wt=5)
        sched = Schedule((ScheduledOp(job=0, step=0, stage=0, station=0, start=0, end=9),))
        rules = [v.rule for v in validate_schedule(inst, sched)]
        assert rules == ["duration-mismatch"]

    def test_missing_step_detected(self):
        inst = make_instance(nrm=2, rm=0, stations=(1, 1), rts=(1,))
        sched = Schedule((ScheduledOp(job=0, step=0, stage=0, station=0, start=0, end=5),))
        rules = [v.rule for v in validate_schedule(inst, sched)]
        assert rules == ["coverage"]

    def test_unknown_station_detected(self):
        inst = unit_instance(wt=5)
        sched = Schedule((ScheduledOp(job=0, step=0, stage=0, station=4, start=0, end=5),))
        rules = [v.rule for v in validate_schedule(inst, sched)]
        assert rules == ["unknown-station"]


class TestStationJobCount:
    def test_empty_schedule(self):
        assert station_job_count(Schedule(()), 0, 0) == 0

    def test_reentrant_visits_count_per_pass(self):
        inst = make_instance(nrm=0, rm=1, stations=(1,), rts=(2,))
        sched = decode(inst, np.array([0.5, 0.5]))
        assert station_job_count(sched, 0, 0) == 2

    def test_total_counts_equal_total_operations(self):
        inst = painting_instance()
        rng = np.random.default_rng(7)
        sched = decode(inst, rng.random(inst.n_genes))
        total = sum(
            station_job_count(sched, j, k)
            for j in range(inst.m)
            for k in range(inst.stations_per_stage[j])
        )
        assert total == sum(inst.om(i) for i in range(inst.n)) == 78

    def test_rejects_negative_indices(self):
        with pytest.raises(IndexError):
            station_job_count(Schedule(()), -1, 0)
