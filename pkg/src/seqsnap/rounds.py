"""Round-structured executions: one fresh snapshot-memory object per round.

Processes advance through asynchronous rounds at their own pace; each round
uses its own protocol instance and a process never returns to an earlier
round's object. All instances share one network: a process keeps handling
(and relaying) messages for every object, including rounds it has left, so
other processes' validation is unaffected.

The composed history is accepted when a single total order containing every
process order projects to a legal word on each object; with per-round
acceptance and the round discipline, splicing the per-object witnesses in
round order is such an order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import random

from . import protocol
from .checker import (CheckRefusal, Verdict, check_sc_brute, check_sc_fast,
                      contains_process_order, replay_legal)
from .histories import OpRecord, op_id
from .sim import (AsyncDelay, CrashSpec, RunResult, SimConfig, WorkItem,
                  run_simulation)


class DisciplineError(Exception):
    """The history is not round-structured; no consistency verdict applies."""


@dataclass
class RoundConfig:
    n: int
    rounds: int
    seed: int = 0
    writes_per_round: int = 1
    snapshots_per_round: int = 1
    crashes: list = field(default_factory=list)
    delay: object = AsyncDelay()
    event_cap: int = 1_000_000


class RoundsNode:
    """One protocol instance per round, dispatched by object id."""

    def __init__(self, n, me, num_objects):
        self.states = [protocol.init(n, me, object_id=obj)
                       for obj in range(num_objects)]

    def invoke(self, item):
        state = self.states[item.object_id]
        if item.action == "write":
            return protocol.invoke_write(state, item.value)[1]
        if item.action == "snapshot":
            return protocol.invoke_snapshot(state)[1]
        raise ValueError(f"unsupported action {item.action!r}")

    def receive(self, payload):
        return protocol.handle_message(self.states[payload.object_id], payload)[1]

    def stamp_vector(self):
        return None

    def view_stamps(self, object_id):
        return self.states[object_id].view_stamps

    def pending_empty(self):
        return all(not st.pending and st.deferred is None for st in self.states)


def round_workload(config: RoundConfig) -> list[WorkItem]:
    """Per process: writes_per_round writes then snapshots_per_round
    snapshots on each round's object, with seeded think times."""
    rng = random.Random(f"rounds:{config.seed}")
    items = []
    for proc in range(config.n):
        at = rng.uniform(0.0, 2.0)
        write_index = 0
        for obj in range(config.rounds):
            for _ in range(config.writes_per_round):
                value = (write_index + 1) * 1000 + proc
                write_index += 1
                items.append(WorkItem(proc, at, "write", value=value,
                                      object_id=obj))
                at += rng.uniform(0.0, 2.0)
            for _ in range(config.snapshots_per_round):
                items.append(WorkItem(proc, at, "snapshot", object_id=obj))
                at += rng.uniform(0.0, 2.0)
    return items


def run_rounds(config: RoundConfig) -> RunResult:
    workload = round_workload(config)
    cutoff = {c.proc: c.at_time for c in config.crashes if c.at_time is not None}
    workload = [item for item in workload
                if item.proc not in cutoff or item.at < cutoff[item.proc]]
    sim_config = SimConfig(n=config.n, seed=config.seed, protocol="snapshot",
                           delay=config.delay, workload=workload,
                           crashes=list(config.crashes),
                           event_cap=config.event_cap)
    factory = lambda n, me: RoundsNode(n, me, config.rounds)
    return run_simulation(sim_config, node_factory=factory)


def check_discipline(history: list[OpRecord]) -> None:
    last = {}
    for rec in sorted(history, key=lambda r: (r.proc, r.seq)):
        if rec.object_id < last.get(rec.proc, 0):
            raise DisciplineError(
                f"process {rec.proc} operates on object {rec.object_id} "
                f"after object {last[rec.proc]}")
        last[rec.proc] = rec.object_id


def check_composition(history: list[OpRecord], n: int,
                      brute_bound: int = 10) -> Verdict:
    """Accept iff some total order containing the process orders projects to
    a legal word on every object; built by splicing per-object witnesses in
    round order and verifying the splice by replay."""
    check_discipline(history)
    objects = sorted({rec.object_id for rec in history})
    id_to_record = {op_id(rec): rec for rec in history}
    spliced = []
    for obj in objects:
        sub = [rec for rec in history if rec.object_id == obj]
        verdict = check_sc_fast(sub, n)
        if not verdict.accepted:
            verdict.reason = f"object {obj}: {verdict.reason}"
            return verdict
        spliced.extend(id_to_record[i] for i in verdict.witness)
    included = [rec for rec in history
                if rec.kind == "write" or rec.completed]
    if contains_process_order(spliced, included) and replay_legal(spliced, n):
        return Verdict(True, witness=[op_id(rec) for rec in spliced])
    try:
        return check_composition_brute(history, n, bound=brute_bound)
    except CheckRefusal:
        raise


def check_composition_brute(history: list[OpRecord], n: int,
                            bound: int = 10) -> Verdict:
    """Exhaustive composed check: the interleaving search already folds one
    register array per object id."""
    check_discipline(history)
    return check_sc_brute(history, n, bound=bound)
