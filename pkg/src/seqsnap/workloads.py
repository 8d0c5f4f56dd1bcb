"""Seeded workload and crash-schedule generators.

Written values encode (writer, write index) so that every value is unique
per writer; the checkers rely on that to resolve snapshot components back to
write versions.
"""

from __future__ import annotations

import random

from .sim import CrashSpec, WorkItem


def encode_value(proc: int, index: int) -> int:
    return (index + 1) * 1000 + proc


def random_workload(n: int, ops: int, seed: int,
                    snapshot_ratio: float = 0.45) -> list[WorkItem]:
    """Interleaved writes and snapshots with seeded think times. A zero gap
    now and then puts a write and its successor in the same instant, which
    exercises the postponement path."""
    rng = random.Random(f"workload:{seed}")
    per_proc = [ops // n + (1 if p < ops % n else 0) for p in range(n)]
    items = []
    for proc in range(n):
        at = rng.uniform(0.0, 2.0)
        writes = 0
        for _ in range(per_proc[proc]):
            if rng.random() < snapshot_ratio:
                items.append(WorkItem(proc, at, "snapshot"))
            else:
                items.append(WorkItem(proc, at, "write",
                                      value=encode_value(proc, writes)))
                writes += 1
            gap = 0.0 if rng.random() < 0.3 else rng.uniform(0.3, 3.0)
            at += gap
    return items


def write_heavy_workload(n: int, ops: int, seed: int) -> list[WorkItem]:
    """Bursts of back-to-back writes closed by a snapshot: most writes land
    while the previous one is unconfirmed, stressing the write buffer."""
    rng = random.Random(f"write-heavy:{seed}")
    per_proc = [ops // n + (1 if p < ops % n else 0) for p in range(n)]
    items = []
    for proc in range(n):
        at = rng.uniform(0.0, 2.0)
        writes = 0
        left = per_proc[proc]
        while left > 0:
            burst = min(left, rng.randint(2, 4))
            for _ in range(burst - 1):
                items.append(WorkItem(proc, at, "write",
                                      value=encode_value(proc, writes)))
                writes += 1
            items.append(WorkItem(proc, at, "snapshot"))
            left -= burst
            at += rng.uniform(0.5, 4.0)
    return items


def abd_workload(n: int, ops: int, seed: int,
                 read_ratio: float = 0.5) -> list[WorkItem]:
    rng = random.Random(f"abd:{seed}")
    per_proc = [ops // n + (1 if p < ops % n else 0) for p in range(n)]
    items = []
    for proc in range(n):
        at = rng.uniform(0.0, 2.0)
        writes = 0
        for _ in range(per_proc[proc]):
            if rng.random() < read_ratio:
                items.append(WorkItem(proc, at, "read",
                                      target=rng.randrange(n)))
            else:
                items.append(WorkItem(proc, at, "write",
                                      value=encode_value(proc, writes)))
                writes += 1
            at += rng.uniform(0.3, 3.0)
    return items


def random_crashes(n: int, count: int, seed: int) -> list[CrashSpec]:
    """Up to `count` distinct processes crash, mostly mid-broadcast (a seeded
    recipient subset gets the truncated message), sometimes between
    transitions at a time instant."""
    budget = (n - 1) // 2
    count = min(count, budget)
    rng = random.Random(f"crashes:{seed}")
    how_many = rng.randint(0, count) if count else 0
    procs = rng.sample(range(n), how_many)
    crashes = []
    for proc in procs:
        if rng.random() < 0.75:
            crashes.append(CrashSpec(proc, on_send=rng.randint(1, 6)))
        else:
            crashes.append(CrashSpec(proc, at_time=rng.uniform(5.0, 40.0)))
    return crashes


def trim_for_crashes(workload: list[WorkItem],
                     crashes: list[CrashSpec]) -> list[WorkItem]:
    """Drop items a time-scheduled crash would make unrunnable; the config
    validator rejects workloads that still reference a dead process."""
    cutoff = {c.proc: c.at_time for c in crashes if c.at_time is not None}
    return [item for item in workload
            if item.proc not in cutoff or item.at < cutoff[item.proc]]


def generate(name: str, n: int, ops: int, seed: int) -> list[WorkItem]:
    if name == "random":
        return random_workload(n, ops, seed)
    if name == "write-heavy":
        return write_heavy_workload(n, ops, seed)
    raise ValueError(f"unknown workload {name!r}")
