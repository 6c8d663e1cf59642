"""Triangle defect d02 - d01 - d12 for sampled triples of endpoints.

Degenerate triples are reported, never judged: whether the limit space is a
metric space is an open question, so the sign is data.
"""

import argparse
import json

from hcmalab.config import RunConfig
from hcmalab.runs import run_triangle
from hcmalab.store import jsonable

TRIPLES = [
    ("zero", "const:0.3", "const:0.7"),
    ("zero", "degenerate:1.0", "const:0.2"),
    ("degenerate:1.0:1,0", "zero", "degenerate:1.0:0,1"),
    ("degenerate:0.5", "degenerate:1.0:1,1", "cos:0.01"),
]


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--grid", type=int, default=32)
    p.add_argument("--nt", type=int, default=17)
    p.add_argument("--schedule", default="0.1,0.01,0.001")
    args = p.parse_args()
    schedule = [float(x) for x in args.schedule.split(",")]
    for triple in TRIPLES:
        cfg = RunConfig(N=args.grid, Nt=args.nt, phi0=triple[0], phi1=triple[1], phi2=triple[2],
                        schedule=schedule).validate()
        rep = run_triangle(cfg)
        d = [rep[k]["distance_estimate"] for k in ("d01", "d12", "d02")]
        defect = rep["defect"]
        print(" | ".join(triple), "->",
              json.dumps(jsonable({"d01": d[0], "d12": d[1], "d02": d[2], "defect": defect})))


if __name__ == "__main__":
    main()
