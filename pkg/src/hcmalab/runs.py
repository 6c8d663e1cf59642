"""Experiment drivers behind the command line: each returns plain report dicts."""

import numpy as np

from . import continuation, newton, oracle, potentials
from .config import density_from_spec, endpoint_from_spec
from .equation import HcmaProblem, fd_check_linearization, residual
from .errors import ConfigError, OracleViolation
from .estimates import chain_checks, laplacian_report, mp_certificate, mp_constant
from .geometry import drift_check, geometry_report
from .path import initial_guess
from .potentials import classify, smooth_approx


def solver_options(cfg):
    return newton.SolverOptions(
        tol=cfg.tol,
        max_newton=cfg.max_newton,
        max_krylov=cfg.max_krylov,
        damping=cfg.damping,
        progress=cfg.progress,
    )


def constants(problem):
    fc = problem.f_constants
    return {
        "C": mp_constant(fc["inf_lap_f"]),
        "B": 0.0,
        "R": 0.0,
        "inf_lap_f": fc["inf_lap_f"],
        "sup_f": fc["sup_f"],
        "inf_f": fc["inf_f"],
        "sup_grad_f": fc["sup_grad_f"],
    }


def endpoints(cfg, *specs):
    grid = cfg.grid()
    return [endpoint_from_spec(s, grid) for s in specs]


def _degenerate(*phis):
    tags = [classify(p).tag for p in phis]
    if "inadmissible" in tags:
        raise ConfigError(f"inadmissible endpoint classes {tags}")
    return "H11" in tags, tags


def level_rows(path, problem, geometry):
    """Per time level: t, sup h, min eigenvalue of the metric, E, residual."""
    grid = path.grid
    lap = laplacian_report(path)
    F = np.abs(residual(path, problem))
    axes = tuple(range(1, F.ndim))
    res = F.max(axis=axes)
    rows = []
    for k, t in enumerate(grid.t):
        rows.append({
            "t": float(t),
            "sup_h": float(lap.level_sup[k]),
            "min_eig": float(path.snapshot(k).min_eig.min()),
            "E": float(geometry.energy[k]),
            "residual": float(res[k - 1]) if 0 < k < grid.Nt - 1 else float("nan"),
        })
    return rows


def run_solve(cfg):
    """Single solve at cfg.eps; returns (report, SolveReport, level rows)."""
    grid = cfg.grid()
    phi0, phi1 = endpoints(cfg, cfg.phi0, cfg.phi1)
    degenerate, tags = _degenerate(phi0, phi1)
    delta = cfg.delta
    if delta is None and degenerate:
        delta = min(cfg.eps, 0.1)
    if delta is not None:
        phi0, phi1 = smooth_approx(phi0, delta), smooth_approx(phi1, delta)
    problem = HcmaProblem(phi0, phi1, cfg.eps, density_from_spec(cfg.f, grid))
    rep = newton.solve(problem, initial_guess(phi0, phi1, eps=cfg.eps), solver_options(cfg))
    geo = geometry_report(rep.path, problem)
    report = {
        "command": "solve",
        "config": cfg.to_dict(),
        "constants": constants(problem),
        "endpoint_classes": {"phi0": tags[0], "phi1": tags[1]},
        "delta": delta,
        "solve": rep.summary(),
        "sup_h": laplacian_report(rep.path).sup_h,
        "estimate": mp_certificate(rep.path, problem).to_dict(),
        "chain_checks": chain_checks(rep.path, problem),
        "length": geo.length,
        "max_drift": float(geo.drift.max()),
    }
    return report, rep, level_rows(rep.path, problem, geo)


def _sweep(cfg, phi0, phi1):
    grid = cfg.grid()
    degenerate, _ = _degenerate(phi0, phi1)
    return continuation.sweep(
        phi0,
        phi1,
        cfg.schedule,
        smoothing=cfg.resolved_smoothing(degenerate),
        f=density_from_spec(cfg.f, grid),
        opts=solver_options(cfg),
    )


def sweep_summary(sw, f):
    """Per-entry rows, estimates and the rho comparison across the sweep."""
    rows, estimates = [], []
    for e in sw.entries:
        problem = HcmaProblem(e.report.path.phi0, e.report.path.phi1, e.eps, f)
        rows.append(e.row())
        estimates.append(mp_certificate(e.report.path, problem).to_dict())
    interior = [est for est in estimates if est["location"] == "interior"]
    rhos = [est["rho"] for est in interior]
    return rows, estimates, {
        "interior_maxima": len(interior),
        "rho_ratio": max(rhos) / min(rhos) if rhos else None,
        "sign_checks_pass": all(est["sign_check"] for est in interior),
        "boundary_maxima_match_endpoint": all(
            est["endpoint_h_matches"] for est in estimates if est["location"] == "boundary"
        ),
    }


def run_sweep(cfg):
    """Continuation in eps; returns (report, SweepReport, rows)."""
    grid = cfg.grid()
    phi0, phi1 = endpoints(cfg, cfg.phi0, cfg.phi1)
    sw = _sweep(cfg, phi0, phi1)
    f = density_from_spec(cfg.f, grid)
    rows, estimates, rho = sweep_summary(sw, f)
    report = {
        "command": "sweep",
        "config": cfg.to_dict(),
        "constants": constants(HcmaProblem(phi0, phi1, cfg.schedule[0], f)),
        "endpoint_classes": sw.endpoint_classes,
        "schedule": list(sw.schedule),
        "smoothing": list(sw.smoothing),
        "truncated": sw.truncated,
        "failure": sw.failure,
        "entries": rows,
        "estimates": estimates,
        "rho": rho,
    }
    if sw.entries:
        last = sw.last
        problem = HcmaProblem(last.report.path.phi0, last.report.path.phi1, last.eps, f)
        geo = geometry_report(last.report.path, problem)
        report["final"] = {
            "eps": last.eps,
            "length": geo.length,
            "distance_estimate": geo.distance_estimate,
            "energy": geo.energy,
            "drift": geo.drift,
            "max_drift": float(geo.drift.max()),
            "chain_checks": chain_checks(last.report.path, problem),
        }
    return report, sw, rows


def distance(cfg, phi0, phi1):
    """Length of the solved path at the smallest eps that converged."""
    sw = _sweep(cfg, phi0, phi1)
    if not sw.entries:
        return {"distance_estimate": None, "eps": None, "truncated": True, "failure": sw.failure}
    last = sw.last
    f = density_from_spec(cfg.f, cfg.grid())
    problem = HcmaProblem(last.report.path.phi0, last.report.path.phi1, last.eps, f)
    geo = geometry_report(last.report.path, problem)
    return {
        "distance_estimate": geo.length,
        "eps": last.eps,
        "truncated": sw.truncated,
        "failure": sw.failure,
    }


def run_distance(cfg):
    phi0, phi1 = endpoints(cfg, cfg.phi0, cfg.phi1)
    d = distance(cfg, phi0, phi1)
    return {"command": "distance", "config": cfg.to_dict(), "label": "distance estimate", **d}


def run_triangle(cfg):
    """Pairwise distance estimates between phi0, phi1, phi2 and the defect d02 - d01 - d12."""
    p0, p1, p2 = endpoints(cfg, cfg.phi0, cfg.phi1, cfg.phi2)
    d01 = distance(cfg, p0, p1)
    d12 = distance(cfg, p1, p2)
    d02 = distance(cfg, p0, p2)
    vals = [d["distance_estimate"] for d in (d01, d12, d02)]
    defect = None if None in vals else vals[2] - vals[0] - vals[1]
    return {
        "command": "triangle",
        "config": cfg.to_dict(),
        "label": "distance estimate",
        "d01": d01,
        "d12": d12,
        "d02": d02,
        "defect": defect,
    }


def run_oracle(cfg, raise_on_violation=True):
    suites = oracle.run_suites(seed=cfg.seed, count=cfg.oracle_count)
    rng = np.random.default_rng(cfg.seed)
    orders = []
    for n in (1, 2):
        pot = oracle.TrigPotential.random(rng, n, amplitude=0.003)
        node = [int(i) for i in rng.integers(0, 32, size=2 * n)]
        order, e1, e2 = oracle.expansion_order(pot, node)
        orders.append({"n": n, "order": order, "error_coarse": e1, "error_fine": e2})
    report = {
        "command": "oracle",
        "config": cfg.to_dict(),
        "suites": suites,
        "laplacian_expansion": orders,
        "passed": all(suites[k]["passed"] for k in oracle.INEQUALITY_SUITES),
    }
    if raise_on_violation and not report["passed"]:
        failed = [k for k in oracle.INEQUALITY_SUITES if not suites[k]["passed"]]
        raise OracleViolation(f"inequality suites violated: {','.join(failed)}", report=report)
    return report


def smooth_direction(grid, rng, modes=3):
    """Random low-frequency interior field vanishing at t = 0, 1."""
    x = grid.coords()
    t = grid.t_field(interior=True)
    h = np.zeros(grid.interior_shape)
    for _ in range(modes):
        k = rng.integers(-2, 3, size=len(x))
        phase = 2.0 * np.pi * sum(int(ki) * xi for ki, xi in zip(k, x)) + rng.uniform(0, 2 * np.pi)
        h += rng.standard_normal() * np.cos(phase)[None]
    return h * np.sin(np.pi * t)


def random_feasible_path(grid, rng, eps_range=(0.1, 0.5), margin=0.75):
    """A perturbed initial guess between random admissible endpoints.

    The perturbation keeps min c above ``margin`` times its unperturbed value,
    so the path stays well inside the feasible set.  Returns (path, problem).
    """
    a = potentials.make_degenerate_endpoint(grid, rng.uniform(0.1, 0.6))
    b = potentials.cosine(grid, rng.uniform(-0.01, 0.01))
    eps = float(rng.uniform(*eps_range))
    path = initial_guess(a, b, eps=eps)
    c0 = float(path.state.c.min())
    d = smooth_direction(grid, rng)
    d /= np.abs(d).max()
    amp = 0.01
    while True:
        trial = path.with_interior(path.interior + amp * d)
        if trial.feasible and trial.state.c.min() >= margin * c0:
            return trial, HcmaProblem(a, b, eps)
        amp /= 2.0


def run_verify(cfg):
    """Linearization, drift and max-principle checks.

    With ``cfg.checkpoint`` set the stored path is checked; otherwise a fresh
    solve at cfg.eps is made first.
    """
    grid = cfg.grid()
    f = density_from_spec(cfg.f, grid)
    if cfg.checkpoint:
        from .store import checkpoint_read

        try:
            path, eps, _ = checkpoint_read(cfg.checkpoint)
        except OSError as exc:
            raise ConfigError(f"cannot read checkpoint {cfg.checkpoint}: {exc}") from exc
        if path.grid != grid:
            raise ConfigError(f"checkpoint grid {path.grid} differs from run grid {grid}")
        source, solve_summary = "checkpoint", None
    else:
        _, rep, _ = run_solve(cfg)
        path, eps = rep.path, cfg.eps
        source, solve_summary = "solve", rep.summary()
    problem = HcmaProblem(path.phi0, path.phi1, eps, f)
    path.state.require_feasible()
    h = smooth_direction(grid, np.random.default_rng(cfg.seed))
    h /= np.abs(h).max()
    s = cfg.fd_step
    e1 = fd_check_linearization(path, problem, h, s)
    e2 = fd_check_linearization(path, problem, h, s / 2)
    return {
        "command": "verify",
        "config": cfg.to_dict(),
        "source": source,
        "eps": eps,
        "constants": constants(problem),
        "solve": solve_summary,
        "residual_norm": float(np.abs(residual(path, problem)).max()),
        "linearization": {"step": s, "error": e1, "error_half_step": e2,
                          "ratio": e1 / e2 if e2 > 0 else None},
        "max_drift": drift_check(path, problem),
        "chain_checks": chain_checks(path, problem),
        "estimate": mp_certificate(path, problem).to_dict(),
    }
