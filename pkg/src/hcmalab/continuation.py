"""Warm-started eps -> 0 sweeps with coupled endpoint smoothing."""

from dataclasses import dataclass, field

import numpy as np

from . import newton
from .equation import HcmaProblem
from .errors import ConfigError, HcmaError
from .path import GeodesicPath, initial_guess
from .potentials import classify, smooth_approx


def default_schedule(count=7):
    return [10.0 ** (-(1 + k) / 2) for k in range(count)]


def default_smoothing(schedule):
    return [min(e, 0.1) for e in schedule]


@dataclass(frozen=True, eq=False)
class SweepEntry:
    eps: float
    delta: float
    report: object
    sup_h: float
    sup_phi_t: float
    sup_grad: float
    successive_diff: float  # sup |phi^(k) - phi^(k-1)|, nan for the first entry

    def row(self):
        return {
            "eps": self.eps,
            "delta": self.delta,
            "sup_h": self.sup_h,
            "sup_phi_t": self.sup_phi_t,
            "sup_grad": self.sup_grad,
            "successive_diff": self.successive_diff,
            **self.report.summary(),
        }


@dataclass(frozen=True, eq=False)
class SweepReport:
    entries: tuple
    schedule: tuple
    smoothing: tuple
    endpoint_classes: dict
    truncated: bool = False
    failure: dict = field(default=None)

    @property
    def last(self):
        return self.entries[-1]


def path_monitors(path):
    """(sup (n + lap phi), sup |phi_t|, sup |grad phi|) over all space-time nodes."""
    grid = path.grid
    vals = path.values
    sup_h = float((grid.n + grid.lap(vals)).max())
    sup_phi_t = float(np.abs(grid.dt_full(vals)).max())
    sq = sum(grid.dx(vals, j) ** 2 + grid.dy(vals, j) ** 2 for j in range(grid.n))
    return sup_h, sup_phi_t, float(np.sqrt(sq).max())


def restore_feasibility(path, phi0, phi1, eps):
    """Move a warm start onto new endpoints, keeping it strictly feasible.

    The endpoint change is spread linearly in t (this leaves phi_tt alone);
    if that is not enough, blend towards the feasible initial guess for the
    new endpoints.  Feasible paths form a convex set, so the blend succeeds.
    """
    grid = path.grid
    t = grid.t_field()
    shift = (1.0 - t) * (phi0.values - path.values[0]) + t * (phi1.values - path.values[-1])
    moved = GeodesicPath(grid, path.values + shift).with_endpoints(phi0, phi1)
    if moved.feasible:
        return moved
    fallback = initial_guess(phi0, phi1, eps=eps)
    for theta in (0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0):
        blended = GeodesicPath(grid, (1.0 - theta) * moved.values + theta * fallback.values)
        blended = blended.with_endpoints(phi0, phi1)
        if blended.feasible:
            return blended
    return fallback


def sweep(phi0, phi1, schedule, smoothing=None, f=None, opts=None, raise_on_failure=False,
          init=None):
    """Solve along a decreasing eps schedule, warm-starting each solve.

    ``smoothing`` pairs a delta with every eps; both endpoints are replaced
    by ``smooth_approx(endpoint, delta)`` at that stage.
    """
    schedule = [float(e) for e in schedule]
    if not schedule:
        raise ConfigError("empty eps schedule")
    if any(e <= 0 for e in schedule):
        raise ConfigError("eps schedule must be positive")
    if any(b >= a for a, b in zip(schedule, schedule[1:])):
        raise ConfigError("eps schedule must be strictly decreasing")
    classes = {"phi0": classify(phi0).tag, "phi1": classify(phi1).tag}
    if "inadmissible" in classes.values():
        raise ConfigError(f"inadmissible endpoint: {classes}")
    if smoothing is None:
        if "H11" in classes.values():
            raise ConfigError("degenerate (H11) endpoints need a smoothing schedule")
        smoothing = [None] * len(schedule)
    smoothing = list(smoothing)
    if len(smoothing) != len(schedule):
        raise ConfigError("smoothing schedule must pair with the eps schedule")

    entries = []
    prev = init
    failure = None
    for eps, delta in zip(schedule, smoothing):
        a = phi0 if delta is None else smooth_approx(phi0, delta)
        b = phi1 if delta is None else smooth_approx(phi1, delta)
        problem = HcmaProblem(a, b, eps, f)
        try:
            if prev is None:
                start = initial_guess(a, b, eps=eps)
            else:
                start = restore_feasibility(prev, a, b, eps)
            rep = newton.solve(problem, start, opts)
        except HcmaError as exc:
            exc.diagnostics.setdefault("eps", eps)
            if raise_on_failure:
                raise
            failure = {"eps": eps, "code": exc.code, "message": str(exc)}
            break
        sup_h, sup_pt, sup_g = path_monitors(rep.path)
        diff = float("nan") if prev is None or init is prev else float(
            np.abs(rep.path.values - prev.values).max()
        )
        entries.append(SweepEntry(eps, delta, rep, sup_h, sup_pt, sup_g, diff))
        prev = rep.path
    return SweepReport(
        entries=tuple(entries),
        schedule=tuple(schedule),
        smoothing=tuple(smoothing),
        endpoint_classes=classes,
        truncated=failure is not None,
        failure=failure,
    )
