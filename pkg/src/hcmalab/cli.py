"""Command line: ``hcma {solve,sweep,distance,oracle,verify,triangle}``.

Exit status 0 on success, 2 for bad configuration or input files, 3 when the
solver fails, 4 when an oracle inequality is violated.  Errors are written to
stderr as one line: ``error code=<CODE> message="..."``.
"""

import argparse
import json
import os
import sys
from pathlib import Path

from threadpoolctl import threadpool_limits

from . import runs
from .config import build_config
from .errors import ConfigError, HcmaError
from .store import checkpoint_write, write_csv, write_dat, write_json

COMMANDS = ("solve", "sweep", "distance", "oracle", "verify", "triangle")

# CLI flag -> config key
_FLAG_KEYS = {
    "n": "n",
    "grid": "N",
    "nt": "Nt",
    "epsilon": "eps",
    "delta": "delta",
    "schedule": "schedule",
    "smoothing": "smoothing",
    "phi0": "phi0",
    "phi1": "phi1",
    "phi2": "phi2",
    "f": "f",
    "tol": "tol",
    "max_newton": "max_newton",
    "out": "out",
    "seed": "seed",
    "count": "oracle_count",
    "checkpoint": "checkpoint",
    "fd_step": "fd_step",
}


def build_parser():
    p = argparse.ArgumentParser(prog="hcma", description="Regularized geodesic solver on the flat torus.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--n", type=int, help="complex dimension (1 or 2)")
    p.add_argument("--grid", type=int, help="spatial points per real direction")
    p.add_argument("--nt", type=int, help="time levels including both ends")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--delta", type=float, help="endpoint smoothing for solve/verify")
    p.add_argument("--schedule", help="comma-separated decreasing eps values")
    p.add_argument("--smoothing", help="comma-separated deltas paired with the schedule, 'auto' or 'none'")
    p.add_argument("--phi0")
    p.add_argument("--phi1")
    p.add_argument("--phi2")
    p.add_argument("--f", help="density spec")
    p.add_argument("--tol", type=float)
    p.add_argument("--max-newton", dest="max_newton", type=int)
    p.add_argument("--out", help="output directory")
    p.add_argument("--seed", type=lambda s: int(s, 0))
    p.add_argument("--count", type=int, help="oracle samples per dimension")
    p.add_argument("--checkpoint", help="solve: write the solved path here; verify: check this file")
    p.add_argument("--fd-step", dest="fd_step", type=float)
    p.add_argument("--progress", action="store_true", help="Newton progress on stderr")
    return p


def _config(args):
    text = None
    if args.config:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    overrides = {key: getattr(args, flag) for flag, key in _FLAG_KEYS.items()}
    if args.progress:
        overrides["progress"] = True
    return build_config(text, overrides)


def _emit(out, name, report):
    write_json(out / f"{name}.json", report)
    sys.stdout.write(f"wrote {out / (name + '.json')}\n")


def execute(cmd, cfg):
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    if cmd in ("solve", "verify"):
        if cmd == "solve":
            report, rep, rows = runs.run_solve(cfg)
            cols = ["t", "sup_h", "min_eig", "E", "residual"]
            write_csv(out / "levels.csv", cols, rows)
            write_dat(out / "energy.dat", [r["t"] for r in rows], [r["E"] for r in rows], "t E")
            if cfg.checkpoint:
                meta = {"config": cfg.to_dict(), "delta": report["delta"], "f": cfg.f}
                checkpoint_write(cfg.checkpoint, rep.path, cfg.eps, meta)
        else:
            report = runs.run_verify(cfg)
        _emit(out, cmd, report)
    elif cmd == "sweep":
        report, sw, rows = runs.run_sweep(cfg)
        write_csv(out / "sweep.csv", ["eps", "sup_h", "sup_phi_t", "sup_grad"], rows)
        write_dat(out / "sup_h.dat", [r["eps"] for r in rows], [r["sup_h"] for r in rows],
                  "eps sup_h")
        _emit(out, "sweep", report)
        if sw.truncated:
            f = sw.failure
            raise _Truncated(f["code"], f"sweep stopped at eps={f['eps']}: {f['message']}")
    elif cmd == "distance":
        _emit(out, "distance", runs.run_distance(cfg))
    elif cmd == "triangle":
        _emit(out, "triangle", runs.run_triangle(cfg))
    elif cmd == "oracle":
        try:
            report = runs.run_oracle(cfg)
        except HcmaError as exc:
            if "report" in exc.diagnostics:
                _emit(out, "oracle", exc.diagnostics["report"])
            raise
        _emit(out, "oracle", report)


class _Truncated(HcmaError):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _error_line(exc):
    msg = json.dumps(str(exc))
    return f"error code={exc.code} message={msg}\n"


def _thread_limit():
    raw = os.environ.get("HCMA_THREADS")
    if not raw:
        return None
    if not raw.isdigit() or int(raw) < 1:
        raise ConfigError(f"HCMA_THREADS must be a positive integer, got {raw!r}")
    return int(raw)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        with threadpool_limits(limits=_thread_limit()):
            execute(args.command, cfg)
    except HcmaError as exc:
        sys.stderr.write(_error_line(exc))
        return exc.exit_status
    return 0


if __name__ == "__main__":
    sys.exit(main())
