#!/usr/bin/env python3
"""Print the per-operation cost comparison for one or more process counts.

Usage: python scripts/bench_table.py [--ns 3,5,7] [--seed 0]
"""

import argparse
import sys

from seqsnap.bench import bench_rows, format_table


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--ns", default="3,5,7")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    for n in (int(x) for x in args.ns.split(",")):
        sys.stdout.write(format_table(n, bench_rows(n, args.seed)))
        sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
