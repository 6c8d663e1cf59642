"""Space-time paths of potentials and the nodal quantities the equation needs."""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import hermitian
from .errors import DegenerateStateError, GridMismatchError
from .potentials import KahlerPotential

# c or a metric eigenvalue at or below this is treated as degenerate; it sits
# well above the roundoff left by stencils on paths that are exactly degenerate
POSITIVITY_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class GeodesicPath:
    """Snapshots phi(t_k, .) for k = 0..Nt-1; the first and last are the endpoints."""

    grid: object
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.array(self.grid.check_spacetime(self.values), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise ValueError("path values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_interior(cls, grid, phi0, phi1, interior):
        vals = np.empty(grid.shape)
        vals[0] = phi0.values if isinstance(phi0, KahlerPotential) else phi0
        vals[-1] = phi1.values if isinstance(phi1, KahlerPotential) else phi1
        vals[1:-1] = interior
        return cls(grid, vals)

    @property
    def interior(self):
        return self.values[1:-1]

    @property
    def phi0(self):
        return KahlerPotential(self.grid, self.values[0])

    @property
    def phi1(self):
        return KahlerPotential(self.grid, self.values[-1])

    def snapshot(self, k):
        return KahlerPotential(self.grid, self.values[k])

    def with_interior(self, interior):
        vals = np.array(self.values)
        vals[1:-1] = interior
        return GeodesicPath(self.grid, vals)

    def with_endpoints(self, phi0, phi1):
        vals = np.array(self.values)
        vals[0] = phi0.values
        vals[-1] = phi1.values
        return GeodesicPath(self.grid, vals)

    def reversed(self):
        return GeodesicPath(self.grid, self.values[::-1])

    @cached_property
    def state(self):
        return PathState.compute(self)

    @property
    def feasible(self):
        return self.state.feasible


@dataclass(frozen=True, eq=False)
class PathState:
    """Nodal quantities on the interior time levels (arrays of interior shape).

    ``v[i] = phi_{t z_i}``; ``G[i, j] = g_{i jbar} + phi_{i jbar}``;
    ``c = phi_tt - v^H G^{-1} v``; ``trace = n + lap(phi)``.
    """

    phi_tt: np.ndarray
    v: np.ndarray
    G: np.ndarray
    Ginv: np.ndarray
    det: np.ndarray
    c: np.ndarray
    trace: np.ndarray
    min_eig: np.ndarray

    @classmethod
    def compute(cls, path):
        grid = path.grid
        phi = path.values
        G = grid.complex_hessian(phi[1:-1])
        for i in range(grid.n):
            G[i, i] += 1.0
        # spatial stencil first, then the centered t-difference
        grad = grid.gradient_z(phi)
        v = (grad[:, 2:] - grad[:, :-2]) / (2.0 * grid.tau)
        phi_tt = grid.dtt(phi)
        min_eig = hermitian.min_eigenvalue(G)
        with np.errstate(divide="ignore", invalid="ignore"):
            Ginv = hermitian.inverse(G)
            c = phi_tt - hermitian.quad(Ginv, v)
        return cls(
            phi_tt=phi_tt,
            v=v,
            G=G,
            Ginv=Ginv,
            det=hermitian.det(G),
            c=c,
            trace=hermitian.trace(G),
            min_eig=min_eig,
        )

    @property
    def feasible(self):
        return bool(np.all(self.min_eig > POSITIVITY_FLOOR) and np.all(self.c > POSITIVITY_FLOOR))

    def require_feasible(self):
        if not np.all(self.min_eig > POSITIVITY_FLOOR):
            idx = np.unravel_index(np.argmin(self.min_eig), self.min_eig.shape)
            raise DegenerateStateError(
                "metric g + phi_{i jbar} lost positivity",
                node=_node_from_interior(idx),
                min_eig=float(self.min_eig[idx]),
            )
        if not np.all(self.c > POSITIVITY_FLOOR):
            idx = np.unravel_index(np.nanargmin(self.c), self.c.shape)
            raise DegenerateStateError(
                "c = phi_tt - |grad phi_t|^2_phi lost positivity",
                node=_node_from_interior(idx),
                min_c=float(self.c[idx]),
            )


def _node_from_interior(idx):
    return (int(idx[0]) + 1,) + tuple(int(i) for i in idx[1:])


@dataclass(frozen=True)
class PointwiseState:
    phi_tt: float
    phi_ti: np.ndarray
    metric: np.ndarray
    metric_inv: np.ndarray
    c: float
    h: float
    feasible: bool


def pointwise_state(path, node):
    """State at one space-time node ``(k, i_1, ..., i_2n)`` with 0 < k < Nt-1."""
    grid = path.grid
    node = tuple(int(i) for i in node)
    if len(node) != grid.ndim_real + 1:
        raise GridMismatchError(f"node {node} needs {grid.ndim_real + 1} indices")
    k = node[0]
    if not 0 < k < grid.Nt - 1:
        raise GridMismatchError(f"time index {k} is not an interior level")
    s = path.state
    idx = (k - 1,) + node[1:]
    sel = (slice(None), slice(None)) + idx
    G = s.G[sel]
    lam = float(s.min_eig[idx])
    if lam <= POSITIVITY_FLOOR:
        raise DegenerateStateError("singular metric at node", node=node, min_eig=lam)
    v = s.v[(slice(None),) + idx]
    Ginv = np.linalg.inv(G)
    c = float(s.phi_tt[idx] - np.real(np.conj(v) @ Ginv @ v))
    return PointwiseState(
        phi_tt=float(s.phi_tt[idx]),
        phi_ti=v,
        metric=G,
        metric_inv=Ginv,
        c=c,
        h=float(s.trace[idx]),
        feasible=bool(c > POSITIVITY_FLOOR),
    )


def gradient_quadratic(grid, w, G_levels):
    """max over levels and nodes of w^H G^{-1} w for a spatial field ``w``."""
    grad = grid.gradient_z(w)
    worst = 0.0
    for G in G_levels:
        lam = hermitian.min_eigenvalue(G)
        if np.all(lam > 1e-12):
            q = hermitian.quad(hermitian.inverse(G), grad)
        else:
            # near-degenerate metric: bound through the background norm
            q = np.sum(np.abs(grad) ** 2, axis=0) / np.maximum(lam, 1e-12)
        worst = max(worst, float(q.max()))
    return worst


def initial_guess(phi0, phi1, mu="auto", eps=None):
    """(1-t) phi0 + t phi1 + mu (t^2 - t).

    With ``mu="auto"``, mu = max(eps/2, sup |grad(phi1 - phi0)|^2_phi) taken over
    the interior levels, which makes c = 2 mu - |grad(phi1-phi0)|^2_phi > 0.
    """
    grid = phi0.grid
    if phi1.grid != grid:
        raise GridMismatchError("endpoints live on different grids")
    t = grid.t_field()
    base = (1.0 - t) * phi0.values + t * phi1.values
    if mu == "auto":
        if eps is None or eps <= 0:
            raise ValueError("automatic mu needs a positive eps")
        G0, G1 = phi0.metric, phi1.metric
        levels = ((1.0 - tk) * G0 + tk * G1 for tk in grid.t[1:-1])
        q = gradient_quadratic(grid, phi1.values - phi0.values, levels)
        mu = max(0.5 * eps, q)
    path = GeodesicPath(grid, base + mu * (t**2 - t))
    if not path.feasible:
        path.state.require_feasible()
    return path
