"""Full seeded oracle run: every inequality suite plus the Laplacian expansion order."""

import argparse
import time

from hcmalab.config import RunConfig
from hcmalab.runs import run_oracle
from hcmalab.store import write_json


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--count", type=int, default=100_000)
    p.add_argument("--seed", type=lambda s: int(s, 0), default=0x5EED)
    p.add_argument("--out", default="out/oracle.json")
    args = p.parse_args()
    start = time.perf_counter()
    report = run_oracle(RunConfig(seed=args.seed, oracle_count=args.count).validate(),
                        raise_on_violation=False)
    elapsed = time.perf_counter() - start
    for name, s in sorted(report["suites"].items()):
        print(f"{name:16s} {'pass' if s['passed'] else 'FAIL'} min slack {s['min_slack']:+.3e}")
    for row in report["laplacian_expansion"]:
        print(f"expansion n={row['n']}: order {row['order']:.3f}")
    write_json(args.out, report)
    print(f"{elapsed:.1f} s, report in {args.out}")


if __name__ == "__main__":
    main()
