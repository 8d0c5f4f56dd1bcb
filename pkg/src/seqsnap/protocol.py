"""Per-process state machine of the sequentially consistent snapshot memory.

Writes are zero-latency: they either FIFO-broadcast a freshly stamped update,
or, while an earlier update of ours is still unconfirmed, overwrite a one-slot
buffer that is flushed as soon as that earlier update validates. Snapshots
return the local validated view once none of our own updates is outstanding.

Every process relays the first message it sees for an update, attaching a
fresh stamp of its own. An update validates once a strict majority of
processes have stamped it and no update that must be ordered before it is
still blocked; validating folds the value into the local view.

Each state is single-owner: transitions mutate the passed state in place and
are meant to be applied sequentially per process (the simulator enforces
this). Distinct states may be driven concurrently; the module itself keeps no
shared mutable data.
"""

from __future__ import annotations

from dataclasses import dataclass, field

INF = float("inf")

WRITE = "write"
SNAPSHOT = "snapshot"


@dataclass(frozen=True)
class UpdateMsg:
    """Relay of one update. (writer, stamp) identifies the update globally.

    relay_stamp is the stamp attached by the process that sent this copy; for
    the writer's own initial broadcast it equals the update stamp.
    """

    value: int
    writer: int
    stamp: int
    relay_stamp: int
    sender: int
    object_id: int = 0


@dataclass
class PendingUpdate:
    """A not-yet-validated update with the relay stamps learned so far.

    seen[j] is the stamp p_j attached when relaying this update, INF until a
    message from p_j arrives. The order in which one process stamped two
    updates is what the dependency relation below is computed from.
    """

    value: int
    writer: int
    stamp: int
    seen: list[float]


@dataclass
class Effect:
    """What one transition asks of the outside world.

    broadcasts go to all n processes (self included), sends are directed
    (used only by the register baseline). completions carry (op kind,
    return value) for the at most one operation finishing in this
    transition. validated lists the (writer, stamp) pairs folded into the
    view, for observability.
    """

    broadcasts: list = field(default_factory=list)
    sends: list = field(default_factory=list)
    completions: list = field(default_factory=list)
    validated: list = field(default_factory=list)


@dataclass
class ProcState:
    me: int
    n: int
    view: list[int]          # last validated value per writer
    view_stamps: list[int]   # stamp the writer attached to view[j], 0 if none
    clock: int = 0           # bumped on every broadcast; stamps are unique per process
    pending: dict = field(default_factory=dict)  # (writer, stamp) -> PendingUpdate
    deferred: int | None = None                  # newest write waiting for an older one
    snapshot_pending: bool = False
    object_id: int = 0


def init(n: int, me: int, object_id: int = 0) -> ProcState:
    if not 0 <= me < n:
        raise ValueError(f"process id {me} out of range for n={n}")
    return ProcState(me=me, n=n, view=[0] * n, view_stamps=[0] * n,
                     object_id=object_id)


def has_own_pending(state: ProcState) -> bool:
    return any(writer == state.me for (writer, _stamp) in state.pending)


def _broadcast_own(state: ProcState, eff: Effect, value: int) -> None:
    state.clock += 1
    eff.broadcasts.append(UpdateMsg(value, state.me, state.clock, state.clock,
                                    state.me, state.object_id))


def invoke_write(state: ProcState, value: int) -> tuple[ProcState, Effect]:
    """Write to our own cell; completes immediately in both branches."""
    eff = Effect()
    if has_own_pending(state):
        # Only the newest postponed write survives; an overwritten one still
        # counts as an operation and lands just before its overwriter in any
        # witness order.
        state.deferred = value
    else:
        _broadcast_own(state, eff, value)
    eff.completions.append((WRITE, None))
    return state, eff


def invoke_snapshot(state: ProcState) -> tuple[ProcState, Effect]:
    """Snapshot the array; immediate unless one of our updates is in flight."""
    eff = Effect()
    if state.deferred is None and not has_own_pending(state):
        eff.completions.append((SNAPSHOT, tuple(state.view)))
    else:
        state.snapshot_pending = True
    return state, eff


def depends(first: PendingUpdate, second: PendingUpdate, n: int) -> bool:
    """True when `second` must not be validated before `first`.

    The constraint is dropped only once a strict majority of processes is
    known to have stamped `second` before `first`. Unknown stamps (INF)
    never count as earlier.
    """
    ahead = sum(1 for j in range(n) if second.seen[j] < first.seen[j])
    return ahead * 2 <= n


def compute_validable(pending: dict, n: int) -> list:
    """Keys of updates that may validate now.

    Starts from the majority-stamped updates and repeatedly drops any that
    depends on an update left outside, so the returned set is closed under
    the dependency relation within `pending`.
    """
    ready = {key for key, g in pending.items()
             if sum(1 for s in g.seen if s < INF) * 2 > n}
    changed = True
    while changed:
        changed = False
        for key in sorted(ready):
            second = pending[key]
            for other, first in pending.items():
                if other in ready:
                    continue
                if depends(first, second, n):
                    ready.discard(key)
                    changed = True
                    break
    return sorted(ready)


def handle_message(state: ProcState, msg: UpdateMsg) -> tuple[ProcState, Effect]:
    """Process one delivered update message.

    Stale copies (already-validated updates) skip the bookkeeping but the
    validation pass still runs, as it does for every receipt including our
    own broadcast copies.
    """
    eff = Effect()
    if msg.stamp > state.view_stamps[msg.writer]:
        key = (msg.writer, msg.stamp)
        entry = state.pending.get(key)
        if entry is not None:
            entry.seen[msg.sender] = msg.relay_stamp
        else:
            if msg.writer != state.me:
                # first sighting of someone else's update: relay it stamped
                state.clock += 1
                eff.broadcasts.append(UpdateMsg(msg.value, msg.writer, msg.stamp,
                                                state.clock, state.me,
                                                state.object_id))
            entry = PendingUpdate(msg.value, msg.writer, msg.stamp,
                                  [INF] * state.n)
            # Record only the sender's stamp. The writer's own stamp must
            # come from the writer's copy: a relay says nothing about the
            # order the writer saw concurrent updates.
            entry.seen[msg.sender] = msg.relay_stamp
            state.pending[key] = entry
    for key in compute_validable(state.pending, state.n):
        g = state.pending.pop(key)
        if state.view_stamps[g.writer] < g.stamp:
            state.view_stamps[g.writer] = g.stamp
            state.view[g.writer] = g.value
        eff.validated.append(key)
    # The snapshot wait must treat the buffered write below as still
    # outstanding, so resolve the snapshot before flushing the buffer: the
    # flushed update is conceptually in flight the instant it is sent.
    if (state.snapshot_pending and state.deferred is None
            and not has_own_pending(state)):
        state.snapshot_pending = False
        eff.completions.append((SNAPSHOT, tuple(state.view)))
    if state.deferred is not None and not has_own_pending(state):
        _broadcast_own(state, eff, state.deferred)
        state.deferred = None
    return state, eff
