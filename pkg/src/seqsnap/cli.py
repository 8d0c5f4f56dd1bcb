"""Command-line front end.

Subcommands: simulate (seeded run, writes history/metrics/stamp-trace files),
replay (named scripted scenario), check (history file against a consistency
mode), bench (per-operation cost table), rounds (round-structured run plus
composition check). Exit codes: 0 success/accepted, 1 rejected, 2 usage
error, refusal or malformed input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench, workloads
from .checker import (CheckRefusal, check_lin_brute, check_sc_brute,
                      check_sc_fast, verdict_document)
from .histories import TraceFormatError, dump_history, infer_process_count, load_history
from .rounds import (DisciplineError, RoundConfig, check_composition,
                     run_rounds)
from .scenarios import SCENARIOS, replay_scripted
from .sim import (AsyncDelay, ConfigError, SimConfig, SyncDelay,
                  run_simulation, write_run_files)

OK, REJECTED, USAGE = 0, 1, 2


def _parse_delay(text: str):
    if text == "async":
        return AsyncDelay()
    if text.startswith("async:"):
        low, high = (float(x) for x in text[len("async:"):].split(","))
        return AsyncDelay(low, high)
    if text.startswith("sync:"):
        latency, uncertainty = (float(x) for x in text[len("sync:"):].split(","))
        return SyncDelay(latency, uncertainty)
    raise argparse.ArgumentTypeError(
        f"delay must be 'async', 'async:<lo>,<hi>' or 'sync:<d>,<u>', got {text!r}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqsnap",
        description="snapshot-memory protocol simulator and history checkers")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a seeded simulation")
    sim.add_argument("--n", type=int, required=True)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--ops", type=int, default=20)
    sim.add_argument("--crashes", type=int, default=0)
    sim.add_argument("--delay", type=_parse_delay, default=AsyncDelay())
    sim.add_argument("--workload", default="random",
                     choices=("random", "write-heavy", "abd"))
    sim.add_argument("--out", default="out")

    rep = sub.add_parser("replay", help="replay a named scripted scenario")
    rep.add_argument("--scenario", required=True, choices=SCENARIOS)
    rep.add_argument("--out", default="out")

    chk = sub.add_parser("check", help="check a history trace file")
    chk.add_argument("history", help="history file (one JSON record per line)")
    chk.add_argument("--mode", default="fast", choices=("fast", "brute", "lin"))
    chk.add_argument("--out", default=None,
                     help="directory for verdict.json (default: stdout only)")

    ben = sub.add_parser("bench", help="per-operation cost table")
    ben.add_argument("--n", default="5",
                     help="process count, or comma list like 3,5,7")
    ben.add_argument("--seed", type=int, default=0)

    rnd = sub.add_parser("rounds", help="round-structured run plus composition check")
    rnd.add_argument("--n", type=int, required=True)
    rnd.add_argument("--rounds", type=int, required=True)
    rnd.add_argument("--seed", type=int, default=0)
    rnd.add_argument("--crashes", type=int, default=0)
    rnd.add_argument("--out", default="out")
    return parser


def _cmd_simulate(args) -> int:
    if args.workload == "abd":
        items = workloads.abd_workload(args.n, args.ops, args.seed)
        protocol = "abd"
    else:
        items = workloads.generate(args.workload, args.n, args.ops, args.seed)
        protocol = "snapshot"
    crashes = workloads.random_crashes(args.n, args.crashes, args.seed)
    items = workloads.trim_for_crashes(items, crashes)
    config = SimConfig(n=args.n, seed=args.seed, protocol=protocol,
                       delay=args.delay, workload=items, crashes=crashes,
                       max_crashes=args.crashes)
    run = run_simulation(config)
    paths = write_run_files(run, args.out)
    for path in paths:
        print(path)
    return OK


def _cmd_replay(args) -> int:
    run = replay_scripted(args.scenario)
    paths = write_run_files(run, args.out)
    for path in paths:
        print(path)
    return OK


def _cmd_check(args) -> int:
    history = load_history(args.history)
    n = infer_process_count(history)
    composed = len({rec.object_id for rec in history}) > 1
    if args.mode == "fast":
        verdict = (check_composition(history, n) if composed
                   else check_sc_fast(history, n))
    elif args.mode == "brute":
        verdict = check_sc_brute(history, n)
    else:
        verdict = check_lin_brute(history, n)
    doc = verdict_document(verdict)
    sys.stdout.write(doc)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "verdict.json").write_text(doc)
    return OK if verdict.accepted else REJECTED


def _cmd_bench(args) -> int:
    for n_text in str(args.n).split(","):
        n = int(n_text)
        rows = bench.bench_rows(n, args.seed)
        sys.stdout.write(bench.format_table(n, rows))
        sys.stdout.write("\n")
    return OK


def _cmd_rounds(args) -> int:
    crashes = workloads.random_crashes(args.n, args.crashes, args.seed)
    config = RoundConfig(n=args.n, rounds=args.rounds, seed=args.seed,
                         crashes=crashes)
    run = run_rounds(config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    dump_history(run.history, out / "history.jsonl")
    verdict = check_composition(run.history, args.n)
    doc = verdict_document(verdict)
    sys.stdout.write(doc)
    (out / "verdict.json").write_text(doc)
    return OK if verdict.accepted else REJECTED


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code not in (0, None) else 0
    handlers = {
        "simulate": _cmd_simulate,
        "replay": _cmd_replay,
        "check": _cmd_check,
        "bench": _cmd_bench,
        "rounds": _cmd_rounds,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, DisciplineError, CheckRefusal, TraceFormatError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
