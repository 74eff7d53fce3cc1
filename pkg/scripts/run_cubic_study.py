#!/usr/bin/env python3
"""Cubic-truth domain-adaptation study with shipped defaults.

Extra arguments are forwarded to the CLI, e.g.:
    python scripts/run_cubic_study.py --out runs/cubic --set n_trials=50
"""
import sys

from pce_transfer.cli import main

if __name__ == "__main__":
    sys.exit(main(["repro-cubic", *sys.argv[1:]]))
