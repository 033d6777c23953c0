#!/usr/bin/env python3
"""Run every cataloged counterexample demo and summarize the claims.

Usage:
    python scripts/run_demos.py            # human-readable summary
    python scripts/run_demos.py --json     # machine-readable dump
"""

import argparse
import dataclasses
import json
import sys
import time

from mufield import DEMO_NAMES, run_demo


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--json", action="store_true")
    parser.add_argument("names", nargs="*", default=None, help="subset of demos to run")
    args = parser.parse_args()
    names = args.names or list(DEMO_NAMES)

    results = []
    all_ok = True
    for name in names:
        t0 = time.perf_counter()
        demo = run_demo(name)
        elapsed = time.perf_counter() - t0
        all_ok &= demo.ok
        results.append((demo, elapsed))

    if args.json:
        payload = [
            {
                "name": d.name,
                "headline": d.headline,
                "ok": d.ok,
                "seconds": round(dt, 3),
                "claims": [{"claim": c, "holds": ok} for c, ok in d.claims],
                "verdicts": [dataclasses.asdict(v) for v in d.report.verdicts],
            }
            for d, dt in results
        ]
        print(json.dumps(payload, indent=2))
    else:
        for demo, elapsed in results:
            print(f"{demo.name} ({elapsed:.2f}s): {demo.headline}")
            for claim, ok in demo.claims:
                print(f"  [{'ok' if ok else 'FAIL'}] {claim}")
            for v in demo.report.verdicts:
                table = ", ".join(
                    f"N({eps:g})={'-' if n is None else n}" for eps, n in v.eps_table
                )
                print(f"    {v.expr} -> {v.candidate:.6g}: {v.verdict} [{table}]")
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
