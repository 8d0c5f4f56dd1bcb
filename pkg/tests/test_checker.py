import pytest
from hypothesis import given, settings, strategies as st

from seqsnap.checker import (CheckRefusal, check_lin_brute, check_sc_brute,
                             check_sc_fast, derive_versions, replay_legal,
                             contains_process_order)
from seqsnap.histories import OpRecord, op_id


def W(proc, seq, value, t_inv=None, t_ret=None):
    t_inv = proc * 100 + seq if t_inv is None else t_inv
    return OpRecord(proc, seq, "write", t_inv,
                    t_inv if t_ret is None else t_ret, value=value)


def S(proc, seq, result, t_inv=None, t_ret=None):
    t_inv = proc * 100 + seq if t_inv is None else t_inv
    return OpRecord(proc, seq, "snapshot", t_inv,
                    t_inv + 1 if t_ret is None else t_ret,
                    result=tuple(result))


class TestDeriveVersions:
    def test_initial_values_resolve_to_version_zero(self):
        versions, rejection = derive_versions([S(0, 0, [0, 0])], 2)
        assert rejection is None
        assert versions[(0, 0, 0)] == (0, 0)

    def test_value_maps_to_write_index(self):
        h = [W(0, 0, 1), W(0, 1, 2), S(1, 0, [2, 0])]
        versions, rejection = derive_versions(h, 2)
        assert rejection is None
        assert versions[(0, 1, 0)] == (2, 0)

    def test_unknown_value_rejects(self):
        h = [W(0, 0, 1), S(1, 0, [9, 0])]
        versions, rejection = derive_versions(h, 2)
        assert versions is None and not rejection.accepted
        assert rejection.certificate == [(0, 1, 0)]

    def test_duplicate_written_values_refused(self):
        with pytest.raises(CheckRefusal):
            derive_versions([W(0, 0, 5), W(0, 1, 5)], 2)


class TestFastChecker:
    def test_shared_snapshot_accepted(self):
        h = [W(0, 0, 1), S(0, 1, [1, 0]), S(1, 0, [1, 0])]
        verdict = check_sc_fast(h, 2)
        assert verdict.accepted
        ordered = {op_id(r): r for r in h}
        witness = [ordered[i] for i in verdict.witness]
        assert contains_process_order(witness, h)
        assert replay_legal(witness, 2)

    def test_incomparable_snapshots_rejected(self):
        h = [W(0, 0, 1), S(0, 1, [1, 0]), W(1, 0, 1), S(1, 1, [0, 1])]
        verdict = check_sc_fast(h, 2)
        assert not verdict.accepted
        assert len(verdict.certificate) == 2

    def test_empty_history_accepted_with_empty_witness(self):
        verdict = check_sc_fast([], 2)
        assert verdict.accepted and verdict.witness == []

    def test_own_write_must_be_visible(self):
        h = [W(0, 0, 1), S(0, 1, [0, 0])]
        assert not check_sc_fast(h, 2).accepted

    def test_snapshot_must_not_see_own_future_write(self):
        h = [S(0, 0, [1, 0]), W(0, 1, 1)]
        assert not check_sc_fast(h, 2).accepted

    def test_per_process_snapshots_must_not_go_backwards(self):
        h = [W(0, 0, 1), S(1, 0, [1, 0], t_inv=0, t_ret=1),
             S(1, 1, [0, 0], t_inv=2, t_ret=3)]
        assert not check_sc_fast(h, 2).accepted

    def test_incomplete_snapshot_is_ignored(self):
        h = [W(0, 0, 1), OpRecord(1, 0, "snapshot", 0.0, None)]
        assert check_sc_fast(h, 2).accepted

    def test_dropped_write_sits_just_before_its_overwriter(self):
        # p0's second write was never seen by anyone; the witness still
        # contains it, immediately before the visible third write
        h = [W(0, 0, 1), W(0, 1, 2), W(0, 2, 3), S(1, 0, [3, 0])]
        verdict = check_sc_fast(h, 2)
        assert verdict.accepted
        witness = verdict.witness
        assert witness.index((0, 0, 1)) == witness.index((0, 0, 2)) - 1
        assert witness.index((0, 0, 2)) < witness.index((0, 1, 0))

    def test_reads_are_refused(self):
        h = [OpRecord(0, 0, "read", 0.0, 1.0, target=0, result=0)]
        with pytest.raises(CheckRefusal):
            check_sc_fast(h, 1)


class TestBruteChecker:
    def test_single_process_history_accepts_its_own_order(self):
        h = [W(0, 0, 1), S(0, 1, [1, 0]), W(0, 2, 2), S(0, 3, [2, 0])]
        assert check_sc_brute(h, 2).accepted

    def test_stale_then_fresh_snapshot_accepted(self):
        h = [W(0, 0, 1), S(1, 0, [0, 0]), S(1, 1, [1, 0])]
        assert check_sc_brute(h, 2).accepted

    def test_incomparable_rejected(self):
        h = [W(0, 0, 1), S(0, 1, [1, 0]), W(1, 0, 1), S(1, 1, [0, 1])]
        assert not check_sc_brute(h, 2).accepted

    def test_size_bound_refusal(self):
        h = [W(0, i, i + 1) for i in range(11)]
        with pytest.raises(CheckRefusal):
            check_sc_brute(h, 1)

    def test_incomplete_write_tried_both_ways(self):
        # only legal if the cut-off write is treated as never happening
        h = [OpRecord(0, 0, "write", 0.0, None, value=1),
             S(1, 0, [0, 0], t_inv=5, t_ret=6)]
        assert check_sc_brute(h, 2).accepted
        # and only legal if it is treated as complete
        h2 = [OpRecord(0, 0, "write", 0.0, None, value=1),
              S(1, 0, [1, 0], t_inv=5, t_ret=6)]
        assert check_sc_brute(h2, 2).accepted


class TestLinChecker:
    def test_sequential_legal_history_accepted(self):
        h = [W(0, 0, 1, t_inv=0, t_ret=0), S(1, 0, [1, 0], t_inv=1, t_ret=2)]
        assert check_lin_brute(h, 2).accepted

    def test_sc_but_not_linearizable(self):
        h = [W(0, 0, 1, t_inv=0, t_ret=0), S(1, 0, [0, 0], t_inv=5, t_ret=6)]
        assert check_sc_brute(h, 2).accepted
        assert not check_lin_brute(h, 2).accepted

    def test_empty_accepted(self):
        assert check_lin_brute([], 2).accepted

    def test_concurrent_ops_may_reorder(self):
        h = [W(0, 0, 1, t_inv=0, t_ret=10), S(1, 0, [0, 0], t_inv=1, t_ret=2)]
        assert check_lin_brute(h, 2).accepted


# --- randomized cross-validation -------------------------------------------

@st.composite
def tiny_history(draw):
    n = draw(st.integers(1, 3))
    records = []
    written = {p: [] for p in range(n)}
    time = 0.0
    for _ in range(draw(st.integers(0, 6))):
        proc = draw(st.integers(0, n - 1))
        seq = sum(1 for r in records if r.proc == proc)
        time += draw(st.floats(0.0, 2.0, allow_nan=False))
        if draw(st.booleans()):
            value = len(written[proc]) * 10 + proc + 1
            written[proc].append(value)
            records.append(OpRecord(proc, seq, "write", time, time, value=value))
        else:
            # plausible-to-garbled snapshot: per cell pick initial, any
            # written value, or garbage
            result = []
            for q in range(n):
                choice = draw(st.integers(0, len(written[q]) + 1))
                if choice == 0:
                    result.append(0)
                elif choice <= len(written[q]):
                    result.append(written[q][choice - 1])
                else:
                    result.append(draw(st.sampled_from([0, 999])))
            records.append(OpRecord(proc, seq, "snapshot", time, time + 1,
                                    result=tuple(result)))
    return n, records


@given(tiny_history())
@settings(max_examples=400, deadline=None)
def test_fast_checker_agrees_with_oracle(case):
    n, history = case
    fast = check_sc_fast(history, n)
    brute = check_sc_brute(history, n)
    assert fast.accepted == brute.accepted


@given(tiny_history())
@settings(max_examples=200, deadline=None)
def test_lin_accept_implies_sc_accept(case):
    n, history = case
    if check_lin_brute(history, n).accepted:
        assert check_sc_brute(history, n).accepted


@given(tiny_history())
@settings(max_examples=200, deadline=None)
def test_accepted_witnesses_replay_legally(case):
    n, history = case
    verdict = check_sc_fast(history, n)
    if verdict.accepted:
        by_id = {op_id(r): r for r in history}
        witness = [by_id[i] for i in verdict.witness]
        assert replay_legal(witness, n)
        included = [r for r in history
                    if r.kind == "write" or (r.kind == "snapshot" and r.completed)]
        assert contains_process_order(witness, included)
