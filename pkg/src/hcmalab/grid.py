"""Flat torus discretization and the finite-difference operators on it.

Real axes are ordered ``(x_1, y_1, x_2, y_2)`` with ``z_j = x_j + i y_j``.
A spatial field has shape ``grid.spatial_shape``; a space-time field carries
a leading time axis of length ``Nt``.  Conventions::

    d/dz_j    = (d/dx_j - i d/dy_j) / 2
    d/dzbar_j = (d/dx_j + i d/dy_j) / 2
    lap       = sum_j d^2/dz_j dzbar_j = sum_j (d_xx + d_yy) / 4
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import GridMismatchError

DERIVATIVE_KINDS = ("dx", "dy", "dz", "dzbar", "lap", "dt", "dtt")


@dataclass(frozen=True)
class TorusGrid:
    n: int
    N: int
    Nt: int

    def __post_init__(self):
        if self.n not in (1, 2):
            raise GridMismatchError(f"complex dimension must be 1 or 2, got {self.n}")
        if self.N < 8:
            raise GridMismatchError(f"N must be >= 8, got {self.N}")
        if self.Nt < 5:
            raise GridMismatchError(f"Nt must be >= 5, got {self.Nt}")

    @property
    def h(self):
        return 1.0 / self.N

    @property
    def tau(self):
        return 1.0 / (self.Nt - 1)

    @property
    def ndim_real(self):
        return 2 * self.n

    @property
    def spatial_shape(self):
        return (self.N,) * self.ndim_real

    @property
    def shape(self):
        return (self.Nt,) + self.spatial_shape

    @property
    def interior_shape(self):
        return (self.Nt - 2,) + self.spatial_shape

    @property
    def cell_volume(self):
        return self.h ** self.ndim_real

    @cached_property
    def t(self):
        return np.linspace(0.0, 1.0, self.Nt)

    def coords(self):
        """Real coordinate arrays ``[x_1, y_1, ...]`` broadcast to the spatial shape."""
        x = np.arange(self.N) * self.h
        return np.meshgrid(*([x] * self.ndim_real), indexing="ij")

    def x(self, j):
        return self.coords()[2 * j]

    def y(self, j):
        return self.coords()[2 * j + 1]

    def t_field(self, interior=False):
        """Time coordinate broadcast against space-time fields."""
        t = self.t[1:-1] if interior else self.t
        return t.reshape((-1,) + (1,) * self.ndim_real)

    # -- shape checks -----------------------------------------------------

    def _spatial_offset(self, field):
        """Number of leading non-spatial axes (0 spatial, 1 space-time)."""
        field = np.asarray(field)
        if field.shape[-self.ndim_real:] != self.spatial_shape or field.ndim not in (
            self.ndim_real,
            self.ndim_real + 1,
        ):
            raise GridMismatchError(
                f"field shape {field.shape} does not match grid {self.shape}"
            )
        return field.ndim - self.ndim_real

    def check_spatial(self, field):
        field = np.asarray(field)
        if field.shape != self.spatial_shape:
            raise GridMismatchError(
                f"expected spatial field {self.spatial_shape}, got {field.shape}"
            )
        return field

    def check_spacetime(self, field):
        field = np.asarray(field)
        if field.shape != self.shape:
            raise GridMismatchError(f"expected space-time field {self.shape}, got {field.shape}")
        return field

    # -- one-dimensional stencils ----------------------------------------

    def _d1(self, u, axis):
        return (np.roll(u, -1, axis) - np.roll(u, 1, axis)) / (2.0 * self.h)

    def _d2(self, u, axis):
        return (np.roll(u, -1, axis) - 2.0 * u + np.roll(u, 1, axis)) / self.h**2

    def _axis(self, field, real_axis):
        return self._spatial_offset(field) + real_axis

    # -- public operators -------------------------------------------------

    def dx(self, u, j):
        return self._d1(u, self._axis(u, 2 * j))

    def dy(self, u, j):
        return self._d1(u, self._axis(u, 2 * j + 1))

    def dz(self, u, j):
        return 0.5 * (self.dx(u, j) - 1j * self.dy(u, j))

    def dzbar(self, u, j):
        return 0.5 * (self.dx(u, j) + 1j * self.dy(u, j))

    def dzdzbar(self, u, j, k):
        """Mixed derivative u_{j kbar}.

        The diagonal uses compact three-point second differences; off-diagonal
        entries compose centered first differences, so the resulting matrix is
        exactly Hermitian.
        """
        if j == k:
            return 0.25 * (
                self._d2(u, self._axis(u, 2 * j)) + self._d2(u, self._axis(u, 2 * j + 1))
            )
        dxj, dyj = self.dx(u, j), self.dy(u, j)
        real = self.dx(dxj, k) + self.dy(dyj, k)
        imag = self.dy(dxj, k) - self.dx(dyj, k)
        return 0.25 * (real + 1j * imag)

    def complex_hessian(self, u):
        """All u_{j kbar}, shape ``(n, n) + u.shape`` (complex)."""
        out = np.empty((self.n, self.n) + np.shape(u), dtype=complex)
        for j in range(self.n):
            out[j, j] = self.dzdzbar(u, j, j)
            for k in range(j + 1, self.n):
                out[j, k] = self.dzdzbar(u, j, k)
                out[k, j] = np.conj(out[j, k])
        return out

    def gradient_z(self, u):
        """(u_{z_1}, ..., u_{z_n}), shape ``(n,) + u.shape``."""
        return np.stack([self.dz(u, j) for j in range(self.n)])

    def lap(self, u):
        out = np.zeros(np.shape(u))
        for j in range(self.n):
            out = out + 0.25 * (
                self._d2(u, self._axis(u, 2 * j)) + self._d2(u, self._axis(u, 2 * j + 1))
            )
        return out

    def dt(self, u):
        """Centered first difference at interior time levels."""
        u = self.check_spacetime(u)
        return (u[2:] - u[:-2]) / (2.0 * self.tau)

    def dtt(self, u):
        """Three-point second difference at interior time levels."""
        u = self.check_spacetime(u)
        return (u[2:] - 2.0 * u[1:-1] + u[:-2]) / self.tau**2

    def dt_full(self, u):
        """First time derivative at every level; one-sided second order at the ends."""
        u = self.check_spacetime(u)
        out = np.empty(u.shape, dtype=u.dtype)
        out[1:-1] = self.dt(u)
        out[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * self.tau)
        out[-1] = (3.0 * u[-1] - 4.0 * u[-2] + u[-3]) / (2.0 * self.tau)
        return out

    def apply_derivative(self, field, kind, j=0):
        """Dispatch by name: one of ``dx, dy, dz, dzbar, lap, dt, dtt``."""
        field = np.asarray(field)
        self._spatial_offset(field)
        if kind not in DERIVATIVE_KINDS:
            raise ValueError(f"unknown derivative kind {kind!r}")
        if kind in ("dt", "dtt"):
            return getattr(self, kind)(field)
        if kind == "lap":
            return self.lap(field)
        if not 0 <= j < self.n:
            raise GridMismatchError(f"direction {j} out of range for n={self.n}")
        return getattr(self, kind)(field, j)

    def integrate(self, field, weight=None):
        """Rectangle rule over the torus (all nodes weighted h^{2n}).

        Space-time input is integrated level by level.
        """
        field = np.asarray(field)
        off = self._spatial_offset(field)
        if weight is not None:
            weight = np.asarray(weight)
            if weight.shape != field.shape:
                raise GridMismatchError(
                    f"weight shape {weight.shape} differs from field shape {field.shape}"
                )
            if np.any(weight <= 0):
                raise ValueError("integration weight must be strictly positive")
            field = field * weight
        axes = tuple(range(off, field.ndim))
        return np.sum(field, axis=axes) * self.cell_volume

    def lap_symbol(self):
        """Eigenvalues of ``lap`` on the Fourier modes in FFT ordering."""
        k = np.fft.fftfreq(self.N, d=1.0 / self.N)
        one_d = -4.0 * np.sin(np.pi * k / self.N) ** 2 / self.h**2
        sym = np.zeros(self.spatial_shape)
        for ax in range(self.ndim_real):
            shape = [1] * self.ndim_real
            shape[ax] = self.N
            sym = sym + 0.25 * one_d.reshape(shape)
        return sym
