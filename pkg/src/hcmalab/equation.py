"""Log-form residual of the regularized geodesic equation and its linearization.

    F(phi) = log c + log det(g + phi_{i jbar}) - log eps - f

with c = phi_tt - |grad phi_t|^2_phi, evaluated on interior time levels.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import hermitian
from .errors import GridMismatchError


@dataclass(frozen=True, eq=False)
class HcmaProblem:
    phi0: object
    phi1: object
    eps: float
    f: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        grid = self.phi0.grid
        if self.phi1.grid != grid:
            raise GridMismatchError("endpoints live on different grids")
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        f = np.zeros(grid.spatial_shape) if self.f is None else np.asarray(self.f, float)
        if f.shape not in (grid.spatial_shape, grid.interior_shape):
            raise GridMismatchError(f"f has shape {f.shape}")
        if not np.all(np.isfinite(f)):
            raise ValueError("f must be finite")
        object.__setattr__(self, "f", f)

    @property
    def grid(self):
        return self.phi0.grid

    @property
    def n(self):
        return self.grid.n

    @property
    def time_dependent_f(self):
        return self.f.shape == self.grid.interior_shape

    @cached_property
    def f_constants(self):
        g = self.grid
        lap_f = g.lap(self.f)
        grad = sum(g.dx(self.f, j) ** 2 + g.dy(self.f, j) ** 2 for j in range(g.n))
        return {
            "sup_f": float(self.f.max()),
            "inf_f": float(self.f.min()),
            "sup_grad_f": float(np.sqrt(grad).max()),
            "inf_lap_f": float(lap_f.min()),
        }

    def with_eps(self, eps):
        return HcmaProblem(self.phi0, self.phi1, eps, self.f)

    def with_endpoints(self, phi0, phi1):
        return HcmaProblem(phi0, phi1, self.eps, self.f)


def residual(path, problem):
    """Nodewise F on the interior levels. Raises DegenerateStateError if infeasible."""
    s = path.state
    s.require_feasible()
    return np.log(s.c) + np.log(s.det) - np.log(problem.eps) - problem.f


def residual_norms(F):
    return float(np.abs(F).max()), float(np.sqrt(np.sum(F * F)))


def apply_D(path, h, state=None):
    """Linearized operator on a space-time direction ``h``.

    ``h`` may be a full space-time field (its boundary levels enter the
    stencils) or an interior field (zero Dirichlet data assumed).  Returns the
    interior field

        D h = tr(G^{-1} H) + (h_tt - 2 Re(w^H G^{-1} v) + v^H G^{-1} H G^{-1} v) / c

    with H = h_{i jbar}, w = h_{t z}, which is the exact derivative of
    ``residual`` along ``h``.
    """
    grid = path.grid
    s = path.state if state is None else state
    h = np.asarray(h, dtype=float)
    if h.shape == grid.interior_shape:
        full = np.zeros(grid.shape)
        full[1:-1] = h
        h = full
    elif h.shape != grid.shape:
        raise GridMismatchError(f"direction has shape {h.shape}")
    H = grid.complex_hessian(h[1:-1])
    grad = grid.gradient_z(h)
    w = (grad[:, 2:] - grad[:, :-2]) / (2.0 * grid.tau)
    h_tt = grid.dtt(h)
    u = hermitian.matvec(s.Ginv, s.v)  # G^{-1} v
    lap_phi = np.einsum("ij...,ji...->...", s.Ginv, H).real
    dq = 2.0 * np.einsum("i...,i...->...", np.conj(w), u).real - hermitian.quad(H, u)
    return lap_phi + (h_tt - dq) / s.c


def fd_check_linearization(path, problem, h, s):
    """sup |(F(phi+sh) - F(phi-sh))/(2s) - D h| / max(1, sup |D h|)."""
    grid = path.grid
    h = np.asarray(h, dtype=float)
    if h.shape == grid.shape:
        h = h[1:-1]
    plus = path.with_interior(path.interior + s * h)
    minus = path.with_interior(path.interior - s * h)
    fd = (residual(plus, problem) - residual(minus, problem)) / (2.0 * s)
    Dh = apply_D(path, h)
    return float(np.abs(fd - Dh).max() / max(1.0, np.abs(Dh).max()))
