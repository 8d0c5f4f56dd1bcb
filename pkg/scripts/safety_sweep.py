#!/usr/bin/env python3
"""Seeded safety sweep: crash-prone runs across process counts, every history
checked for sequential consistency and both run-level invariants (stamp-vector
comparability, eventual validation of correct updates).

Usage: python scripts/safety_sweep.py [--ns 2,3,5,7] [--seeds 500] [--ops 40]
Exits nonzero on the first violated run.
"""

import argparse
import sys
import time

from seqsnap.checker import check_sc_fast
from seqsnap.sim import (SimConfig, all_pending_empty, liveness_violations,
                         run_simulation, vc_total_order_violations)
from seqsnap.workloads import (random_crashes, random_workload,
                               trim_for_crashes, write_heavy_workload)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--ns", default="2,3,5,7")
    parser.add_argument("--seeds", type=int, default=500)
    parser.add_argument("--ops", type=int, default=40)
    args = parser.parse_args(argv)

    started = time.time()
    runs = 0
    for n in (int(x) for x in args.ns.split(",")):
        for seed in range(args.seeds):
            if seed % 2 == 0:
                workload = random_workload(n, args.ops, seed)
            else:
                workload = write_heavy_workload(n, args.ops, seed)
            crashes = random_crashes(n, (n - 1) // 2, seed)
            workload = trim_for_crashes(workload, crashes)
            run = run_simulation(SimConfig(n=n, seed=seed, workload=workload,
                                           crashes=crashes))
            problems = []
            if not run.metrics.quiescent:
                problems.append("did not quiesce")
            if not check_sc_fast(run.history, n).accepted:
                problems.append("history rejected")
            if vc_total_order_violations(run.vc_trace):
                problems.append("incomparable stamp vectors")
            if liveness_violations(run):
                problems.append("update never validated")
            if not run.crashed and not all_pending_empty(run):
                problems.append("crash-free residue")
            if problems:
                print(f"FAIL n={n} seed={seed}: {', '.join(problems)}")
                return 1
            runs += 1
        print(f"n={n}: {args.seeds} runs clean")
    print(f"{runs} runs, all invariants held, {time.time() - started:.1f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
