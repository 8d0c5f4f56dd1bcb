import pytest

from seqsnap.checker import check_sc_fast
from seqsnap.histories import OpRecord
from seqsnap.rounds import (DisciplineError, RoundConfig, RoundsNode,
                            check_composition, check_composition_brute,
                            run_rounds)
from seqsnap.sim import CrashSpec


def test_single_round_degenerates_to_plain_run():
    run = run_rounds(RoundConfig(n=3, rounds=1, seed=0))
    assert run.metrics.quiescent
    assert {rec.object_id for rec in run.history} == {0}
    assert check_sc_fast(run.history, 3).accepted
    assert check_composition(run.history, 3).accepted


def test_crash_free_multi_round_composition_accepted():
    run = run_rounds(RoundConfig(n=3, rounds=3, seed=4))
    assert run.metrics.quiescent
    assert {rec.object_id for rec in run.history} == {0, 1, 2}
    verdict = check_composition(run.history, 3)
    assert verdict.accepted
    # the spliced witness follows round order
    objects = [obj for (obj, _p, _s) in verdict.witness]
    assert objects == sorted(objects)


def test_crashed_process_leaves_other_rounds_intact():
    run = run_rounds(RoundConfig(n=3, rounds=2, seed=5,
                                 crashes=[CrashSpec(2, on_send=2)]))
    assert run.metrics.quiescent
    assert run.crashed == frozenset({2})
    survivors = {rec.proc for rec in run.history if rec.object_id == 1}
    assert {0, 1} <= survivors
    assert check_composition(run.history, 3).accepted


def test_small_instance_passes_composed_brute_force():
    run = run_rounds(RoundConfig(n=2, rounds=2, seed=6))
    assert len(run.history) <= 10
    assert check_composition_brute(run.history, 2, bound=10).accepted


def test_corrupted_round_snapshot_rejected_with_object_named():
    run = run_rounds(RoundConfig(n=3, rounds=3, seed=7))
    history = [rec for rec in run.history]
    victim = next(rec for rec in history
                  if rec.object_id == 2 and rec.kind == "snapshot" and rec.completed)
    victim.result = tuple(v + 777 for v in victim.result[:-1]) + (999,)
    verdict = check_composition(history, 3)
    assert not verdict.accepted
    assert verdict.reason.startswith("object 2")
    assert all(obj == 2 for (obj, _p, _s) in verdict.certificate)


def test_empty_history_accepted():
    assert check_composition([], 3).accepted


def test_round_discipline_violation_is_an_error_not_a_verdict():
    history = [
        OpRecord(0, 0, "write", 0.0, 0.0, value=1, object_id=1),
        OpRecord(0, 1, "write", 1.0, 1.0, value=2, object_id=0),
    ]
    with pytest.raises(DisciplineError):
        check_composition(history, 1)


def test_processes_keep_relaying_for_rounds_they_left():
    # p0 finishes round 0 long before p1 even starts; p1's round-0 update
    # still validates everywhere because p0 keeps handling object-0 traffic
    run = run_rounds(RoundConfig(n=2, rounds=2, seed=8))
    node = run.nodes[0]
    assert isinstance(node, RoundsNode)
    assert node.states[0].view_stamps[1] >= 1


def test_per_round_acceptance_plus_discipline_implies_composed_acceptance():
    for seed in range(6):
        run = run_rounds(RoundConfig(n=3, rounds=2, seed=seed))
        per_round_ok = all(
            check_sc_fast([r for r in run.history if r.object_id == obj], 3).accepted
            for obj in (0, 1))
        assert per_round_ok
        assert check_composition(run.history, 3).accepted
