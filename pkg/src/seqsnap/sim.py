"""Seeded deterministic discrete-event network simulator.

Models n asynchronous processes over reliable FIFO channels with FIFO
broadcast: per ordered pair, delivery order equals send order; a process
receives its own broadcast copy instantly, before any other pending event of
its own; a process that crashes mid-broadcast reaches only a seeded subset of
recipients and takes no further transitions.

Identical configs (including seed) produce bit-identical histories, metrics
and stamp traces. Causal depth is accounted per message: a message sent from
an operation invocation starts a chain of length 1, a message sent while
handling message m extends m's chain by one, and an operation that completes
while handling m is charged m's chain length (0 if it completed at
invocation).
"""

from __future__ import annotations

import itertools
import json
import random
from collections import deque
from dataclasses import dataclass, field
from heapq import heappush, heappop
from pathlib import Path

from . import abd, protocol
from .histories import OpRecord, history_lines

PRIO_SELF = 0   # own broadcast copies come before anything else at the same time
PRIO_MAIN = 1

SNAPSHOT_ACTIONS = ("write", "snapshot")
ABD_ACTIONS = ("write", "read")


class ConfigError(Exception):
    """The run is rejected before it starts."""


@dataclass(frozen=True)
class AsyncDelay:
    """I.i.d. transit times drawn uniformly from [low, high]."""

    low: float = 0.5
    high: float = 8.0


@dataclass(frozen=True)
class SyncDelay:
    """Transit times drawn from [latency - uncertainty, latency]."""

    latency: float = 5.0
    uncertainty: float = 2.0


@dataclass(frozen=True)
class ScriptedDelays:
    """Absolute delivery times keyed by (sender, nth broadcast of sender).

    Self copies stay instantaneous and need no entry. Every remote recipient
    of a scripted broadcast must be listed.
    """

    table: dict


@dataclass(frozen=True)
class WorkItem:
    proc: int
    at: float
    action: str                 # "write" | "snapshot" | "read"
    value: int | None = None
    target: int | None = None
    object_id: int = 0


@dataclass(frozen=True)
class CrashSpec:
    """Kill a process at a time instant or during its k-th broadcast (1-based).

    recipients forces the surviving recipient subset of the truncated
    broadcast; when None the subset is drawn from the run's generator.
    """

    proc: int
    at_time: float | None = None
    on_send: int | None = None
    recipients: tuple[int, ...] | None = None


@dataclass
class SimConfig:
    n: int
    seed: int = 0
    protocol: str = "snapshot"          # "snapshot" | "abd"
    delay: object = AsyncDelay()
    workload: list = field(default_factory=list)
    crashes: list = field(default_factory=list)
    max_crashes: int | None = None
    event_cap: int = 1_000_000


@dataclass
class Metrics:
    messages_total: int = 0
    messages_per_update: dict = field(default_factory=dict)  # (obj, writer, stamp) -> sends
    messages_per_op: dict = field(default_factory=dict)      # (proc, seq) -> sends
    op_causal_depth: dict = field(default_factory=dict)      # (proc, seq) -> chain length
    quiescent: bool = True


@dataclass(frozen=True)
class Envelope:
    payload: object
    sender: int
    to: int
    chain: int


@dataclass(frozen=True)
class MessageRecord:
    time: float
    sender: int
    payload: object
    chain: int
    recipients: tuple[int, ...]


@dataclass
class RunResult:
    config: SimConfig
    history: list
    metrics: Metrics
    vc_trace: list               # (proc, time, stamp vector) after every transition
    nodes: list
    message_log: list            # one record per send, in send order
    delivery_log: list           # (time, sender, to, payload), in processing order
    validation_log: list         # (proc, time, (writer, stamp) or (obj, writer, stamp))
    crashed: frozenset


class SnapshotNode:
    def __init__(self, n, me):
        self.state = protocol.init(n, me)

    def invoke(self, item):
        if item.action == "write":
            return protocol.invoke_write(self.state, item.value)[1]
        if item.action == "snapshot":
            return protocol.invoke_snapshot(self.state)[1]
        raise ConfigError(f"snapshot protocol cannot run action {item.action!r}")

    def receive(self, payload):
        return protocol.handle_message(self.state, payload)[1]

    def stamp_vector(self):
        return tuple(self.state.view_stamps)

    def view_stamps(self, object_id=0):
        assert object_id == 0
        return self.state.view_stamps

    def pending_empty(self):
        return not self.state.pending and self.state.deferred is None


class AbdNode:
    def __init__(self, n, me):
        self.state = abd.init(n, me)

    def invoke(self, item):
        if item.action == "write":
            return abd.invoke_write(self.state, item.value)[1]
        if item.action == "read":
            return abd.invoke_read(self.state, item.target)[1]
        raise ConfigError(f"abd protocol cannot run action {item.action!r}")

    def receive(self, payload):
        return abd.handle_message(self.state, payload)[1]

    def stamp_vector(self):
        return None

    def pending_empty(self):
        return self.state.phase is None


_NODE_FACTORIES = {"snapshot": SnapshotNode, "abd": AbdNode}


def validate_config(config: SimConfig, actions=None) -> None:
    if config.n < 1:
        raise ConfigError("need at least one process")
    budget = (config.n - 1) // 2
    allowed = budget if config.max_crashes is None else config.max_crashes
    if allowed > budget:
        raise ConfigError(
            f"{allowed} crashes not tolerated with n={config.n}: "
            f"fewer than half the processes may crash")
    if len(config.crashes) > allowed:
        raise ConfigError(
            f"{len(config.crashes)} crashes exceed the budget of {allowed} "
            f"for n={config.n}")
    seen_procs = set()
    crash_time = {}
    for crash in config.crashes:
        if not 0 <= crash.proc < config.n:
            raise ConfigError(f"crash of out-of-range process {crash.proc}")
        if crash.proc in seen_procs:
            raise ConfigError(f"process {crash.proc} crashes twice")
        seen_procs.add(crash.proc)
        if (crash.at_time is None) == (crash.on_send is None):
            raise ConfigError("crash needs exactly one of at_time / on_send")
        if crash.at_time is not None:
            crash_time[crash.proc] = crash.at_time
    if actions is None:
        actions = SNAPSHOT_ACTIONS if config.protocol == "snapshot" else ABD_ACTIONS
    last_at = {}
    last_obj = {}
    for item in config.workload:
        if not 0 <= item.proc < config.n:
            raise ConfigError(f"workload references out-of-range process {item.proc}")
        if item.action not in actions:
            raise ConfigError(f"action {item.action!r} not supported here")
        if item.proc in crash_time and item.at >= crash_time[item.proc]:
            raise ConfigError(
                f"workload schedules process {item.proc} at {item.at} "
                f"after its crash at {crash_time[item.proc]}")
        if item.at < last_at.get(item.proc, 0.0):
            raise ConfigError(f"workload times for process {item.proc} go backwards")
        last_at[item.proc] = item.at
        if item.object_id < last_obj.get(item.proc, 0):
            raise ConfigError(
                f"process {item.proc} returns to object {item.object_id} "
                f"after a later one")
        last_obj[item.proc] = item.object_id


class _Sim:
    def __init__(self, config: SimConfig, node_factory=None):
        validate_config(config)
        self.config = config
        n = config.n
        if node_factory is None:
            node_factory = _NODE_FACTORIES[config.protocol]
        self.rng = random.Random(f"net:{config.seed}")
        self.nodes = [node_factory(n, me) for me in range(n)]
        self.heap = []
        self.seq = itertools.count()
        self.alive = [True] * n
        self.busy = [False] * n
        self.current_op = [None] * n
        self.op_count = [0] * n
        self.send_count = [0] * n
        self.queues = [deque() for _ in range(n)]
        for item in config.workload:
            self.queues[item.proc].append(item)
        self.crash_on_send = {c.proc: c for c in config.crashes
                              if c.on_send is not None}
        self.last_arrival = {}
        self.history = []
        self.metrics = Metrics()
        self.vc_trace = []
        self.message_log = []
        self.delivery_log = []
        self.validation_log = []
        self.processed = 0

    def _push(self, time, prio, kind, data):
        heappush(self.heap, (time, prio, next(self.seq), kind, data))

    def run(self) -> RunResult:
        config = self.config
        for proc, queue in enumerate(self.queues):
            if queue:
                self._push(queue[0].at, PRIO_MAIN, "invoke", proc)
        for crash in config.crashes:
            if crash.at_time is not None:
                self._push(crash.at_time, PRIO_MAIN, "crash", crash.proc)
        while self.heap:
            if self.processed >= config.event_cap:
                self.metrics.quiescent = False
                break
            time, _prio, _seq, kind, data = heappop(self.heap)
            if kind == "crash":
                self.alive[data] = False
                continue
            if kind == "deliver":
                env = data
                if not self.alive[env.to]:
                    continue
                self.processed += 1
                self.delivery_log.append((time, env.sender, env.to, env.payload))
                eff = self.nodes[env.to].receive(env.payload)
                self._after_transition(env.to, eff, env.chain, time)
            elif kind == "invoke":
                proc = data
                if not self.alive[proc]:
                    continue
                assert not self.busy[proc], "invocation while an op is mid-flight"
                item = self.queues[proc].popleft()
                self.processed += 1
                rec = OpRecord(proc=proc, seq=self.op_count[proc],
                               kind=item.action, t_inv=time, value=item.value,
                               target=item.target, object_id=item.object_id,
                               run_seed=config.seed)
                self.op_count[proc] += 1
                self.history.append(rec)
                self.current_op[proc] = rec
                self.busy[proc] = True
                eff = self.nodes[proc].invoke(item)
                self._after_transition(proc, eff, 0, time)
        crashed = frozenset(p for p in range(config.n) if not self.alive[p])
        return RunResult(config=config, history=self.history,
                         metrics=self.metrics, vc_trace=self.vc_trace,
                         nodes=self.nodes, message_log=self.message_log,
                         delivery_log=self.delivery_log,
                         validation_log=self.validation_log, crashed=crashed)

    def _after_transition(self, proc, eff, cause_chain, now):
        chain = cause_chain + 1
        for payload in eff.broadcasts:
            if not self.alive[proc]:
                break
            self._do_broadcast(proc, payload, chain, now)
        for payload, dest in eff.sends:
            if not self.alive[proc]:
                break
            self._do_send(proc, payload, dest, chain, now)
        if not self.alive[proc]:
            return
        for kind, value in eff.completions:
            self._complete(proc, kind, value, now, cause_chain)
        for key in eff.validated:
            self.validation_log.append((proc, now, key))
        vec = self.nodes[proc].stamp_vector()
        if vec is not None:
            self.vc_trace.append((proc, now, vec))

    def _arrival(self, sender, recipient, now):
        delay = self.config.delay
        if isinstance(delay, ScriptedDelays):
            try:
                at = delay.table[(sender, self.send_count[sender])][recipient]
            except KeyError:
                raise ConfigError(
                    f"scripted delays missing broadcast {self.send_count[sender]} "
                    f"of process {sender} to {recipient}") from None
            if at < now:
                raise ConfigError(
                    f"scripted delivery at {at} precedes its send at {now}")
        elif isinstance(delay, AsyncDelay):
            at = now + self.rng.uniform(delay.low, delay.high)
        elif isinstance(delay, SyncDelay):
            at = now + self.rng.uniform(delay.latency - delay.uncertainty,
                                        delay.latency)
        else:
            raise ConfigError(f"unknown delay model {delay!r}")
        # reliable FIFO channel: never overtake an earlier message on this pair
        at = max(at, self.last_arrival.get((sender, recipient), 0.0))
        self.last_arrival[(sender, recipient)] = at
        return at

    def _do_broadcast(self, proc, payload, chain, now):
        self.send_count[proc] += 1
        recipients = list(range(self.config.n))
        crash = self.crash_on_send.get(proc)
        if crash is not None and self.send_count[proc] == crash.on_send:
            if crash.recipients is not None:
                recipients = sorted(set(crash.recipients))
            else:
                keep = self.rng.randint(0, self.config.n - 1)
                recipients = sorted(self.rng.sample(range(self.config.n), keep))
            self.alive[proc] = False
        for recipient in recipients:
            env = Envelope(payload, proc, recipient, chain)
            if recipient == proc:
                self._push(now, PRIO_SELF, "deliver", env)
            else:
                self._push(self._arrival(proc, recipient, now), PRIO_MAIN,
                           "deliver", env)
        self._count_sends(payload, len(recipients))
        self.message_log.append(MessageRecord(now, proc, payload, chain,
                                              tuple(recipients)))

    def _do_send(self, proc, payload, dest, chain, now):
        env = Envelope(payload, proc, dest, chain)
        if dest == proc:
            self._push(now, PRIO_SELF, "deliver", env)
        else:
            self._push(self._arrival(proc, dest, now), PRIO_MAIN, "deliver", env)
        self._count_sends(payload, 1)
        self.message_log.append(MessageRecord(now, proc, payload, chain, (dest,)))

    def _count_sends(self, payload, count):
        self.metrics.messages_total += count
        if isinstance(payload, protocol.UpdateMsg):
            key = (payload.object_id, payload.writer, payload.stamp)
            self.metrics.messages_per_update[key] = (
                self.metrics.messages_per_update.get(key, 0) + count)
        op_ref = getattr(payload, "op_ref", None)
        if op_ref is not None:
            self.metrics.messages_per_op[op_ref] = (
                self.metrics.messages_per_op.get(op_ref, 0) + count)

    def _complete(self, proc, kind, value, now, cause_chain):
        rec = self.current_op[proc]
        assert rec is not None and rec.kind == kind, "completion without invocation"
        rec.t_ret = now
        if kind in ("snapshot", "read"):
            rec.result = value
        self.metrics.op_causal_depth[(proc, rec.seq)] = cause_chain
        self.busy[proc] = False
        self.current_op[proc] = None
        if self.queues[proc]:
            self._push(max(self.queues[proc][0].at, now), PRIO_MAIN,
                       "invoke", proc)


def run_simulation(config: SimConfig, node_factory=None) -> RunResult:
    """Execute the workload to quiescence (or the event cap)."""
    return _Sim(config, node_factory).run()


# ---------------------------------------------------------------------------
# run-level invariant checks


def vc_total_order_violations(vc_trace) -> list:
    """Pairs of stamp vectors (across all processes and times) that are
    incomparable under componentwise <=. Empty on every healthy run."""
    vectors = sorted({vec for (_proc, _time, vec) in vc_trace})
    bad = []
    for before, after in zip(vectors, vectors[1:]):
        if not all(a <= b for a, b in zip(before, after)):
            bad.append((before, after))
    return bad


def correct_original_updates(run: RunResult) -> list:
    """(object_id, writer, stamp) of every update whose initial broadcast was
    made by a process that never crashed in this run."""
    out = []
    for msg in run.message_log:
        payload = msg.payload
        if (isinstance(payload, protocol.UpdateMsg)
                and msg.sender == payload.writer
                and payload.sender == payload.writer
                and payload.relay_stamp == payload.stamp
                and payload.writer not in run.crashed):
            out.append((payload.object_id, payload.writer, payload.stamp))
    return out


def liveness_violations(run: RunResult) -> list:
    """(update, process) pairs where a correct process has not, at
    quiescence, caught up with an update broadcast by a correct process."""
    bad = []
    for obj, writer, stamp in correct_original_updates(run):
        for proc in range(run.config.n):
            if proc in run.crashed:
                continue
            stamps = run.nodes[proc].view_stamps(obj)
            if stamps[writer] < stamp:
                bad.append(((obj, writer, stamp), proc))
    return bad


def all_pending_empty(run: RunResult) -> bool:
    return all(node.pending_empty() for node in run.nodes)


# ---------------------------------------------------------------------------
# stable serializations (the CLI writes these files; determinism is tested
# byte-for-byte on them)


def metrics_document(metrics: Metrics, run_seed: int) -> str:
    doc = {
        "run_seed": run_seed,
        "messages_total": metrics.messages_total,
        "messages_per_update": {
            f"{obj}:{writer}:{stamp}": count
            for (obj, writer, stamp), count in metrics.messages_per_update.items()
        },
        "messages_per_op": {
            f"{proc}:{seq}": count
            for (proc, seq), count in metrics.messages_per_op.items()
        },
        "op_causal_depth": {
            f"{proc}:{seq}": depth
            for (proc, seq), depth in metrics.op_causal_depth.items()
        },
        "quiescent": metrics.quiescent,
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def vc_trace_document(vc_trace, run_seed: int) -> str:
    doc = {
        "run_seed": run_seed,
        "samples": [[proc, time, list(vec)] for (proc, time, vec) in vc_trace],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def serialize_run(run: RunResult) -> dict:
    seed = run.config.seed
    return {
        "history": "".join(line + "\n" for line in history_lines(run.history)),
        "metrics": metrics_document(run.metrics, seed),
        "vctrace": vc_trace_document(run.vc_trace, seed),
    }


def write_run_files(run: RunResult, out_dir) -> list:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    docs = serialize_run(run)
    paths = []
    for name, doc in (("history.jsonl", docs["history"]),
                      ("metrics.json", docs["metrics"]),
                      ("vctrace.json", docs["vctrace"])):
        path = out / name
        path.write_text(doc)
        paths.append(path)
    return paths
