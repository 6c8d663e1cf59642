"""Degenerate cosine endpoint against 0 along a coupled eps = delta schedule.

Writes sweep.json, sweep.csv and sup_h.dat, and prints one row per eps.
"""

import argparse
from pathlib import Path

from hcmalab.config import RunConfig
from hcmalab.runs import run_sweep
from hcmalab.store import write_csv, write_dat, write_json

SCHEDULE = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4]


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--nt", type=int, default=33)
    p.add_argument("--fraction", type=float, default=1.0)
    p.add_argument("--out", default="out/degenerate_sweep")
    args = p.parse_args()

    cfg = RunConfig(n=args.n, N=args.grid, Nt=args.nt, phi0=f"degenerate:{args.fraction}",
                    schedule=SCHEDULE, smoothing=SCHEDULE, out=args.out).validate()
    report, sw, rows = run_sweep(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_json(out / "sweep.json", report)
    write_csv(out / "sweep.csv", ["eps", "sup_h", "sup_phi_t", "sup_grad", "iterations"], rows)
    write_dat(out / "sup_h.dat", [r["eps"] for r in rows], [r["sup_h"] for r in rows], "eps sup_h")
    print(f"{'eps':>8} {'sup_h':>10} {'sup_phi_t':>10} {'sup_grad':>10} {'newton':>6}")
    for r in rows:
        print(f"{r['eps']:8.0e} {r['sup_h']:10.5f} {r['sup_phi_t']:10.5f} {r['sup_grad']:10.5f} "
              f"{r['iterations']:6d}")
    if sw.truncated:
        print("truncated:", sw.failure)


if __name__ == "__main__":
    main()
