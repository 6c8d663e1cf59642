"""Single-time Kahler potentials on the flat torus and their classification."""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import hermitian
from .errors import ConfigError, GridMismatchError
from .grid import TorusGrid

TOL_STRICT = 1e-8
TOL_POS = 1e-10


@dataclass(frozen=True, eq=False)
class KahlerPotential:
    grid: TorusGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.grid.check_spatial(self.values), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise ValueError("potential values must be finite")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @cached_property
    def metric(self):
        """g + phi_{i jbar}, shape ``(n, n) + spatial_shape``."""
        G = self.grid.complex_hessian(self.values)
        for i in range(self.grid.n):
            G[i, i] += 1.0
        return G

    @cached_property
    def det(self):
        return hermitian.det(self.metric)

    @cached_property
    def min_eig(self):
        return hermitian.min_eigenvalue(self.metric)

    @cached_property
    def trace(self):
        """n + lap(phi)."""
        return self.grid.n + self.grid.lap(self.values)

    def gradient_norm(self):
        """sup over nodes of the Euclidean real gradient length."""
        g = self.grid
        sq = sum(g.dx(self.values, j) ** 2 + g.dy(self.values, j) ** 2 for j in range(g.n))
        return float(np.sqrt(sq).max())

    def __add__(self, other):
        other_vals = other.values if isinstance(other, KahlerPotential) else other
        return KahlerPotential(self.grid, self.values + other_vals)

    def scaled(self, s):
        return KahlerPotential(self.grid, s * self.values)


@dataclass(frozen=True)
class SpaceMembership:
    tag: str  # "H", "H11", "Hinf" or "inadmissible"
    min_eig: float
    sup_trace: float
    sup_abs: float
    sup_grad: float


def classify(phi, tol_strict=TOL_STRICT, tol_pos=TOL_POS):
    """Discrete membership in H, H_{1,1} or neither.

    Grid functions always have a bounded discrete Laplacian, so every
    admissible grid potential that is not strictly positive lands in H11;
    ``Hinf`` is kept as a tag for imported data only and never returned here.
    """
    m = float(phi.min_eig.min())
    if m > tol_strict:
        tag = "H"
    elif m >= -tol_pos:
        tag = "H11"
    else:
        tag = "inadmissible"
    return SpaceMembership(
        tag=tag,
        min_eig=m,
        sup_trace=float(phi.trace.max()),
        sup_abs=float(np.abs(phi.values).max()),
        sup_grad=phi.gradient_norm(),
    )


def smooth_approx(phi, delta):
    """(1 - delta) * phi, whose metric is delta*g + (1-delta)*g_phi >= delta*g."""
    if not 0.0 < delta <= 1.0:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    return phi.scaled(1.0 - delta)


def mode_symbol(grid, mode):
    """Discrete eigenvalue of ``lap`` and the complex-Hessian factor for cos(2 pi m.x).

    Returns ``(lap_eig, hess)`` where ``hess[j, k]`` multiplies cos(2 pi m.x)
    in the (j, kbar) entry of the discrete complex Hessian.
    """
    mode = tuple(int(m) for m in mode)
    if len(mode) != grid.ndim_real:
        raise GridMismatchError(f"mode {mode} needs {grid.ndim_real} components")
    if not any(mode):
        raise ValueError("mode must be nonzero")
    h = grid.h
    theta = [2.0 * np.pi * m * h for m in mode]
    second = [-(2.0 - 2.0 * np.cos(th)) / h**2 for th in theta]
    first = [np.sin(th) / h for th in theta]  # |symbol| of the centered difference
    n = grid.n
    hess = np.zeros((n, n), dtype=complex)
    for j in range(n):
        hess[j, j] = 0.25 * (second[2 * j] + second[2 * j + 1])
        for k in range(n):
            if k == j:
                continue
            # d_a d_b cos = -s_a s_b cos for centered first differences
            fx_j, fy_j, fx_k, fy_k = first[2 * j], first[2 * j + 1], first[2 * k], first[2 * k + 1]
            hess[j, k] = -0.25 * ((fx_j * fx_k + fy_j * fy_k) + 1j * (fy_k * fx_j - fx_k * fy_j))
    return float(np.trace(hess).real), hess


def make_degenerate_endpoint(grid, amplitude_fraction=1.0, mode=None):
    """a * cos(2 pi m.x) scaled so the minimum metric eigenvalue is ``1 - fraction``.

    The amplitude uses the discrete symbol of the grid stencils, so
    ``fraction = 1`` is degenerate exactly on the grid, not only in the limit.
    """
    if not 0.0 < amplitude_fraction <= 1.0:
        raise ConfigError(f"amplitude_fraction must lie in (0, 1], got {amplitude_fraction}")
    if mode is None:
        mode = (1,) + (0,) * (grid.ndim_real - 1)
    _, hess = mode_symbol(grid, mode)
    # metric = I + a*cos*hess; the hessian symbol is negative semidefinite,
    # so the worst node is cos = 1 and min eig = 1 + a*lambda_min(hess).
    lam = np.linalg.eigvalsh(hess)
    most_negative = lam.min()
    if most_negative >= 0:
        raise ValueError(f"mode {mode} is invisible to the grid stencils")
    a = amplitude_fraction / (-most_negative)
    coords = grid.coords()
    arg = sum(2.0 * np.pi * m * c for m, c in zip(mode, coords))
    return KahlerPotential(grid, a * np.cos(arg))


def constant(grid, value):
    return KahlerPotential(grid, np.full(grid.spatial_shape, float(value)))


def zero(grid):
    return constant(grid, 0.0)


def cosine(grid, amplitude, mode=None):
    if mode is None:
        mode = (1,) + (0,) * (grid.ndim_real - 1)
    coords = grid.coords()
    arg = sum(2.0 * np.pi * m * c for m, c in zip(mode, coords))
    return KahlerPotential(grid, amplitude * np.cos(arg))
