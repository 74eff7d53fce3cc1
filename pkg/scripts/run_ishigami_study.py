#!/usr/bin/env python3
"""Task-adaptation study on the shifted Ishigami response.

Extra arguments are forwarded to the CLI, e.g.:
    python scripts/run_ishigami_study.py --out runs/ishigami --set n_trials=500
"""
import sys

from pce_transfer.cli import main

if __name__ == "__main__":
    sys.exit(main(["repro-ishigami", *sys.argv[1:]]))
