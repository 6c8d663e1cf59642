"""Mabuchi inner product, path energy/length and the energy-drift identity."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class GeometryReport:
    energy: np.ndarray  # E(t_k) at every level
    length: float
    distance_estimate: float
    eps: float = float("nan")
    drift: np.ndarray = None  # per interior level

    def rows(self, grid):
        out = []
        for k, t in enumerate(grid.t):
            d = float("nan")
            if self.drift is not None and 0 < k < grid.Nt - 1:
                d = float(self.drift[k - 1])
            out.append({"t": float(t), "E": float(self.energy[k]), "drift": d})
        return out


def inner_product(psi1, psi2, phi):
    """<psi1, psi2>_phi = integral of psi1 psi2 det(g + phi_{i jbar}) over the torus."""
    grid = phi.grid
    grid.check_spatial(psi1)
    grid.check_spatial(psi2)
    # weight may vanish on H11 potentials, so multiply rather than pass as a weight
    return float(grid.integrate(np.asarray(psi1) * np.asarray(psi2) * phi.det))


def energy_profile(path):
    """E(t_k) = <phi_t, phi_t>_{phi(t_k)}; one-sided differences at the ends."""
    grid = path.grid
    phi_t = grid.dt_full(path.values)
    det = np.stack([path.snapshot(k).det for k in range(grid.Nt)])
    return grid.integrate(phi_t**2 * det)


def path_energy_length(path, eps=float("nan")):
    """Energy profile and trapezoidal length sum tau * sqrt(E)."""
    E = energy_profile(path)
    root = np.sqrt(np.maximum(E, 0.0))
    length = float(path.grid.tau * (root.sum() - 0.5 * (root[0] + root[-1])))
    return GeometryReport(energy=E, length=length, distance_estimate=length, eps=eps)


def energy_rate(path):
    """dE/dt at interior levels by the product rule with centered stencils.

    Differencing the sampled E instead would pull the one-sided boundary
    values of phi_t into the first and last interior levels and cost an order.
    """
    grid = path.grid
    vals = path.values
    phi_t = grid.dt(vals)
    phi_tt = grid.dtt(vals)
    det = np.stack([path.snapshot(k).det for k in range(grid.Nt)])
    det_t = (det[2:] - det[:-2]) / (2.0 * grid.tau)
    return grid.integrate(2.0 * phi_t * phi_tt * det[1:-1] + phi_t**2 * det_t)


def drift_residuals(path, problem):
    """Per interior level |dE/dt - 2 eps int phi_t e^f|."""
    grid = path.grid
    dE = energy_rate(path)
    phi_t = grid.dt(path.values)
    rhs = 2.0 * problem.eps * grid.integrate(phi_t * np.exp(problem.f))
    return np.abs(dE - rhs)


def drift_check(path, problem):
    return float(drift_residuals(path, problem).max())


def geometry_report(path, problem):
    rep = path_energy_length(path, problem.eps)
    return GeometryReport(
        energy=rep.energy,
        length=rep.length,
        distance_estimate=rep.length,
        eps=problem.eps,
        drift=drift_residuals(path, problem),
    )
