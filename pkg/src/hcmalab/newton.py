"""Damped inexact Newton iteration for the log-form residual."""

import sys
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.linalg import LinearOperator, gmres

from .equation import apply_D, residual
from .errors import DegenerateStateError, LinearSolveFailure, NonConvergenceError


@dataclass(frozen=True)
class SolverOptions:
    tol: float = 1e-9
    max_newton: int = 50
    max_krylov: int = 400
    restart: int = 80
    damping: float = 0.1  # fraction-to-boundary factor
    max_backtracks: int = 40
    progress: bool = False


@dataclass(frozen=True, eq=False)
class SolveReport:
    path: object
    iterations: int
    residual_history: tuple
    min_c: float
    min_eig: float
    krylov_iterations: tuple
    wall_time: float = field(compare=False)

    @property
    def residual_norm(self):
        return self.residual_history[-1]

    def summary(self):
        """JSON-friendly fields; wall time is left out so reports are reproducible."""
        return {
            "iterations": self.iterations,
            "residual_norm": self.residual_norm,
            "residual_history": list(self.residual_history),
            "min_c": self.min_c,
            "min_eig": self.min_eig,
            "krylov_iterations": list(self.krylov_iterations),
        }


class FastDiagonalization:
    """Inverse of lap + (1/cbar) d_tt with Dirichlet ends in t.

    FFT in the periodic directions, then a Thomas sweep along t for every
    Fourier mode at once.
    """

    def __init__(self, grid, cbar):
        self.grid = grid
        self.m = grid.Nt - 2
        self.off = 1.0 / (cbar * grid.tau**2)
        diag = grid.lap_symbol() - 2.0 * self.off
        # forward elimination coefficients depend only on the mode
        cp = np.empty((self.m,) + grid.spatial_shape)
        denom = np.empty_like(cp)
        denom[0] = diag
        cp[0] = self.off / diag
        for k in range(1, self.m):
            denom[k] = diag - self.off * cp[k - 1]
            cp[k] = self.off / denom[k]
        self.cp = cp
        self.denom = denom

    def solve(self, r):
        axes = tuple(range(1, r.ndim))
        rh = np.fft.fftn(r, axes=axes)
        d = np.empty_like(rh)
        d[0] = rh[0] / self.denom[0]
        for k in range(1, self.m):
            d[k] = (rh[k] - self.off * d[k - 1]) / self.denom[k]
        x = np.empty_like(d)
        x[-1] = d[-1]
        for k in range(self.m - 2, -1, -1):
            x[k] = d[k] - self.cp[k] * x[k + 1]
        return np.fft.ifftn(x, axes=axes).real


def _emit(it, res, min_c):
    sys.stderr.write(f"{it}\t{res:.6e}\t{min_c:.6e}\n")


def _step_admissible(state_old, state_new, damping):
    if not state_new.feasible:
        return False
    return bool(
        np.all(state_new.c >= damping * state_old.c)
        and np.all(state_new.min_eig >= damping * state_old.min_eig)
    )


def linear_solve(path, rhs, rtol, opts):
    """Solve apply_D(x) = rhs on the interior; returns (x, krylov iterations)."""
    grid = path.grid
    shape = grid.interior_shape
    size = int(np.prod(shape))
    state = path.state
    cbar = float(np.median(state.c))
    pre = FastDiagonalization(grid, cbar)

    A = LinearOperator(
        (size, size),
        matvec=lambda x: apply_D(path, x.reshape(shape), state).ravel(),
        dtype=float,
    )
    M = LinearOperator((size, size), matvec=lambda x: pre.solve(x.reshape(shape)).ravel(), dtype=float)
    count = [0]

    def cb(_):
        count[0] += 1

    restart = min(opts.restart, opts.max_krylov)
    cycles = max(1, -(-opts.max_krylov // restart))
    b = rhs.ravel()
    x, info = gmres(
        A, b, rtol=rtol, atol=0.0, restart=restart, maxiter=cycles, M=M,
        callback=cb, callback_type="pr_norm",
    )
    if not np.all(np.isfinite(x)):
        raise LinearSolveFailure("Krylov iterate is not finite", krylov_iterations=count[0])
    true_rel = float(np.linalg.norm(b - A.matvec(x)) / max(np.linalg.norm(b), 1e-300))
    if info != 0 and true_rel > 0.5:
        raise LinearSolveFailure(
            "Krylov solve stagnated",
            krylov_iterations=count[0],
            relative_residual=true_rel,
        )
    return x.reshape(shape), count[0]


def solve(problem, init, opts=None):
    """Damped Newton from the feasible path ``init``; returns a SolveReport."""
    opts = opts or SolverOptions()
    start = time.perf_counter()
    grid = problem.grid
    path = init
    if not (np.array_equal(path.values[0], problem.phi0.values)
            and np.array_equal(path.values[-1], problem.phi1.values)):
        path = path.with_endpoints(problem.phi0, problem.phi1)
    path.state.require_feasible()
    if grid != path.grid:
        raise ValueError("initial path and problem use different grids")

    F = residual(path, problem)
    res = float(np.abs(F).max())
    history = [res]
    krylov = []
    if opts.progress:
        _emit(0, res, float(path.state.c.min()))
    it = 0
    while res > opts.tol:
        if it >= opts.max_newton:
            raise NonConvergenceError(
                f"no convergence after {it} Newton iterations",
                residual=res,
                eps=problem.eps,
                history=history,
            )
        it += 1
        delta, kits = linear_solve(path, -F, min(0.1, res), opts)
        krylov.append(kits)

        old = path.state
        alpha = 1.0
        accepted = None
        any_admissible = False
        for _ in range(opts.max_backtracks):
            trial = path.with_interior(path.interior + alpha * delta)
            if _step_admissible(old, trial.state, opts.damping):
                any_admissible = True
                F_trial = residual(trial, problem)
                res_trial = float(np.abs(F_trial).max())
                if res_trial < res:
                    accepted = (trial, F_trial, res_trial)
                    break
            alpha *= 0.5
        if accepted is None:
            if any_admissible:
                raise NonConvergenceError(
                    "residual stagnated; no backtracked step decreases it",
                    iteration=it,
                    residual=res,
                    eps=problem.eps,
                    history=history,
                )
            raise DegenerateStateError(
                "every backtracked step leaves the feasible set",
                iteration=it,
                residual=res,
                eps=problem.eps,
            )
        path, F, res = accepted
        history.append(res)
        if opts.progress:
            _emit(it, res, float(path.state.c.min()))

    s = path.state
    return SolveReport(
        path=path,
        iterations=it,
        residual_history=tuple(history),
        min_c=float(s.c.min()),
        min_eig=float(s.min_eig.min()),
        krylov_iterations=tuple(krylov),
        wall_time=time.perf_counter() - start,
    )
