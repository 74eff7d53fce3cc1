#!/usr/bin/env python3
"""Synthetic subsurface domain-adaptation sweeps (z2 depth and R3 resistivity).

Extra arguments are forwarded to the CLI, e.g.:
    python scripts/run_subsurface_study.py --out runs/subsurface --set sweep_param=z2
"""
import sys

from pce_transfer.cli import main

if __name__ == "__main__":
    sys.exit(main(["repro-subsurface-synthetic", *sys.argv[1:]]))
