#!/usr/bin/env python3
"""Seeded randomized sweep over the whole identity registry.

Usage:
    python scripts/identity_sweep.py --trials 1000 --seed 0
    python scripts/identity_sweep.py --literal       # include the literal variants
"""

import argparse
import sys

from mufield import run_identity_sweep
from mufield.registry import DEFAULT_SWEEP_IDS, LITERAL_VARIANTS


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--literal", action="store_true")
    args = parser.parse_args()

    ids = list(DEFAULT_SWEEP_IDS)
    if args.literal:
        ids += sorted(LITERAL_VARIANTS.values())
    outcomes = run_identity_sweep(ids, trials=args.trials, seed=args.seed)
    width = max(len(o.ident) for o in outcomes)
    print(f"{'id':<{width}}  {'pass':>6} {'fail':>6} {'unmet':>6}  max residual")
    failures = 0
    for o in outcomes:
        failures += o.failed
        print(f"{o.ident:<{width}}  {o.passed:>6} {o.failed:>6} {o.unmet:>6}  {o.max_residual:.3e}")
    print(f"total failures: {failures}")
    return 1 if failures and not args.literal else 0


if __name__ == "__main__":
    sys.exit(main())
