"""Run every property trial at acceptance scale and write one JSON report each.

    python scripts/run_all_trials.py --out reports/ --seed 7 --jobs 4
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from kgg.trials import THEOREMS, TrialConfig, run


@dataclass(frozen=True)
class Plan:
    theorem: str
    trials: int


PLANS = (
    Plan("bottleneck10", 500),
    Plan("counterexample8", 1),
    Plan("match0", 1000),
    Plan("match1", 1000),
    Plan("perfect2", 1000),
    Plan("fourdisk", 10_000),
    Plan("tutteberge", 200),
    Plan("blocking", 200),
    Plan("structure", 500),
    Plan("independence", 500),
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("reports"))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--scale", type=float, default=1.0, help="multiply every trial count")
    ap.add_argument("--only", nargs="*", choices=list(THEOREMS))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    failures = 0
    for plan in PLANS:
        if args.only and plan.theorem not in args.only:
            continue
        count = max(1, round(plan.trials * args.scale))
        cfg = TrialConfig(plan.theorem, trials=count, seed=args.seed, jobs=args.jobs)
        start = time.perf_counter()
        rep = run(cfg)
        dt = time.perf_counter() - start
        (args.out / f"{plan.theorem}.json").write_text(rep.to_json())
        failures += rep.failed
        status = "ok  " if rep.ok else "FAIL"
        print(f"{status} {plan.theorem:<16} {rep.passed:>6}/{len(rep.records):<6} {dt:7.2f}s", flush=True)
        if rep.counterexample:
            print(f"     replay: {rep.counterexample['replay']}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
