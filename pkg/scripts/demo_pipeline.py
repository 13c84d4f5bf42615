#!/usr/bin/env python3
"""End-to-end demo: generate a small corpus, train briefly, analyze, report.

Writes a throwaway workspace (default ./demo_ws) and prints the resulting
inconsistency table for the first match. Keep the epoch count low; this is a
wiring check, not a real training run.
"""

import argparse
import sys

from stratincon.cli import main as cli


def run(argv):
    if cli(argv) != 0:
        raise SystemExit(f"step failed: {' '.join(argv)}")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--workspace", default="demo_ws")
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--frames", type=int, default=400)
    parser.add_argument("--epochs", type=int, default=30)
    args = parser.parse_args()

    ws = args.workspace
    run(["gen", "--seed", str(args.seed), "--frames", str(args.frames),
         "--matches", "3", "--out", f"{ws}/raw", "--prefix", "demo-"])
    import glob
    run(["ingest", "--workspace", ws] + sorted(glob.glob(f"{ws}/raw/*.log")))
    run(["train", "--workspace", ws, "--seed", "0",
         "--epochs", str(args.epochs), "--hidden", "32"])
    run(["eval", "--workspace", ws])
    run(["analyze", "--workspace", ws])
    first = f"demo-{args.seed:08d}"
    run(["export", "--workspace", ws, "--match", first])
    print(f"\nworkspace ready: {ws} (try: stratincon serve --workspace {ws})")


if __name__ == "__main__":
    sys.exit(main())
