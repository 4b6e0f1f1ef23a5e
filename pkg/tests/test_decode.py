import itertools

import numpy as np
import pytest
from helpers import (
    brute_force_optimum,
    flowshop_makespan,
    parallel_instance,
    random_instances,
    single_machine_instance,
    unit_instance,
)

from rhfs.bench import painting_instance
from rhfs.decode import (
    assignment_matrix,
    decode,
    evaluate,
    position_from_release_order,
    release_order,
    remaining_time,
)
from rhfs.model import Instance, validate_schedule


class TestDecodeBasics:
    def test_single_op(self):
        inst = unit_instance(wt=5)
        sched = decode(inst, np.array([0.5]))
        op = sched.ops[0]
        assert (op.start, op.end) == (0, 5)
        assert evaluate(inst, np.array([0.5])) == 5

    def test_parallel_stations_start_together(self):
        inst = parallel_instance(wt=5)
        sched = decode(inst, np.array([0.2, 0.8]))
        assert [op.start for op in sched.ops] == [0, 0]
        assert evaluate(inst, np.array([0.2, 0.8])) == 5

    def test_length_mismatch(self):
        inst = unit_instance()
        with pytest.raises(ValueError):
            decode(inst, np.array([0.5, 0.5]))

    def test_deterministic(self):
        inst = random_instances(1)[0]
        pos = np.random.default_rng(3).random(inst.n_genes)
        assert decode(inst, pos) == decode(inst, pos.copy())

    def test_out_of_bound_genes_clamped(self):
        inst = parallel_instance()
        wild = np.array([-3.0, 7.5])
        assert decode(inst, wild) == decode(inst, np.array([0.0, 1.0]))


class TestRemainingTime:
    def test_nothing_remains_past_the_flow(self):
        inst = unit_instance()
        assert remaining_time(inst, 0, inst.om(0)) == 0

    def test_painting_third_pass(self):
        # J1 entering its last pass: fastest choices are 10, 10, 18
        inst = painting_instance()
        assert remaining_time(inst, 0, 6) == 38

    def test_single_station_equals_plain_sum(self):
        inst = single_machine_instance((4, 9))
        assert remaining_time(inst, 1, 0) == 9

    def test_out_of_range(self):
        inst = unit_instance()
        with pytest.raises(IndexError):
            remaining_time(inst, 0, 5)

    def test_mean_rule(self):
        inst = parallel_instance(wt=5)
        assert remaining_time(inst, 0, 0, rule="mean") == 5.0
        with pytest.raises(ValueError):
            remaining_time(inst, 0, 0, rule="median")


class TestDispatchRule:
    def test_least_remaining_job_seizes_the_free_station(self):
        # two jobs finish stage 1 at the same moment; the second stage has
        # one station and the job with less remaining work goes first
        inst = Instance(
            name="contend",
            nrm=2,
            rm=0,
            stations_per_stage=(2, 1),
            rts=(1, 1),
            times=(((5, 5), (20,)), ((5, 5), (7,))),
        )
        sched = decode(inst, np.array([0.1, 0.5, 0.9, 0.5]))
        stage2 = sorted(
            (op for op in sched.ops if op.stage == 1), key=lambda op: op.start
        )
        assert [op.job for op in stage2] == [1, 0]  # job 1 remaining 7 < 20

    def test_remaining_tie_breaks_by_gene(self):
        inst = Instance(
            name="tie",
            nrm=2,
            rm=0,
            stations_per_stage=(2, 1),
            rts=(1, 1),
            times=(((5, 5), (9,)), ((5, 5), (9,))),
        )
        first = decode(inst, np.array([0.1, 0.9, 0.2, 0.1]))
        stage2 = sorted((op for op in first.ops if op.stage == 1), key=lambda o: o.start)
        assert [op.job for op in stage2] == [1, 0]  # gene 0.1 < 0.9
        swapped = decode(inst, np.array([0.1, 0.1, 0.2, 0.9]))
        stage2 = sorted((op for op in swapped.ops if op.stage == 1), key=lambda o: o.start)
        assert [op.job for op in stage2] == [0, 1]

    def test_release_follows_first_gene_order(self):
        inst = single_machine_instance((10, 2, 6))
        assert release_order(inst, np.array([0.9, 0.1, 0.5])) == [1, 2, 0]

    def test_permutation_completeness_single_machine(self):
        # durations differ, yet genes realize every processing order
        inst = single_machine_instance((10, 2, 6))
        seen = set()
        for perm in itertools.permutations(range(3)):
            sched = decode(inst, position_from_release_order(inst, list(perm)))
            order = tuple(op.job for op in sorted(sched.ops, key=lambda o: o.start))
            assert order == perm
            seen.add(order)
        assert len(seen) == 6


class TestDecodeProperties:
    def test_feasible_on_random_positions(self):
        rng = np.random.default_rng(42)
        for inst in random_instances(6):
            for _ in range(8):
                sched = decode(inst, rng.random(inst.n_genes))
                assert validate_schedule(inst, sched) == []

    def test_cmax_bounded_by_critical_path(self):
        rng = np.random.default_rng(5)
        for inst in random_instances(6):
            bound = max(
                sum(inst.min_step_time(i, l) for l in range(inst.om(i)))
                for i in range(inst.n)
            )
            for _ in range(5):
                assert evaluate(inst, rng.random(inst.n_genes)) >= bound

    def test_matches_independent_flowshop_oracle(self):
        # 2 stages, 1 station each: the decoder must reproduce the classic
        # flow shop recurrence for every job order, and its brute-force
        # optimum must equal the recurrence optimum
        durations = [(4, 9), (7, 3), (2, 5)]
        inst = Instance(
            name="toy3",
            nrm=2,
            rm=0,
            stations_per_stage=(1, 1),
            rts=(1, 1, 1),
            times=tuple(((p1,), (p2,)) for p1, p2 in durations),
        )
        oracle_vals = {}
        for perm in itertools.permutations(range(3)):
            expected = flowshop_makespan(durations, perm)
            got = evaluate(inst, position_from_release_order(inst, list(perm)))
            assert got == expected
            oracle_vals[perm] = expected
        assert brute_force_optimum(inst) == min(oracle_vals.values()) == 19


class TestAssignmentMatrix:
    def test_two_step_flow(self):
        inst = Instance(
            name="two",
            nrm=2,
            rm=0,
            stations_per_stage=(1, 1),
            rts=(1,),
            times=(((5,), (5,)),),
        )
        mat = assignment_matrix(decode(inst, np.array([0.5, 0.5])))
        assert mat == (((0, 0), (1, 0)),)

    def test_identical_schedules_identical_matrices(self):
        inst = random_instances(1)[0]
        pos = np.random.default_rng(9).random(inst.n_genes)
        assert assignment_matrix(decode(inst, pos)) == assignment_matrix(decode(inst, pos))

    def test_single_station_change_changes_one_entry(self):
        from rhfs.model import Schedule, ScheduledOp

        s1 = Schedule((ScheduledOp(0, 0, 0, 0, 0, 5),))
        s2 = Schedule((ScheduledOp(0, 0, 0, 1, 0, 5),))
        a = [e for row in assignment_matrix(s1) for e in row]
        b = [e for row in assignment_matrix(s2) for e in row]
        assert sum(x != y for x, y in zip(a, b)) == 1

    def test_release_swap_swaps_two_entries(self):
        inst = parallel_instance(wt=5)
        a = assignment_matrix(decode(inst, np.array([0.2, 0.8])))
        b = assignment_matrix(decode(inst, np.array([0.8, 0.2])))
        flat_a = [e for row in a for e in row]
        flat_b = [e for row in b for e in row]
        assert sum(x != y for x, y in zip(flat_a, flat_b)) == 2
