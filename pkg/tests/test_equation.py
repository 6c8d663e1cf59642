import numpy as np
import pytest

from hcmalab import potentials
from hcmalab.equation import HcmaProblem, apply_D, fd_check_linearization, residual
from hcmalab.errors import DegenerateStateError, GridMismatchError
from hcmalab.grid import TorusGrid
from hcmalab.path import GeodesicPath, initial_guess
from hcmalab.runs import random_feasible_path, smooth_direction

G = TorusGrid(1, 32, 17)


def flat(eps, grid=G):
    t = grid.t_field()
    return GeodesicPath(grid, np.broadcast_to(0.5 * eps * (t**2 - t), grid.shape))


def zero_problem(eps, grid=G):
    return HcmaProblem(potentials.zero(grid), potentials.zero(grid), eps)


def test_flat_solution_has_zero_residual():
    assert np.abs(residual(flat(0.1), zero_problem(0.1))).max() < 1e-13


def test_residual_shifts_with_eps():
    F = residual(flat(0.1), zero_problem(0.03))
    assert np.allclose(F, np.log(0.1 / 0.03), atol=1e-13)


def test_residual_cosine_drift():
    eps, a = 0.1, 0.05
    t = G.t_field()
    x = G.x(0)
    w = a * np.cos(2 * np.pi * x)
    path = GeodesicPath(G, 0.5 * eps * (t**2 - t) + t * w)
    F = residual(path, HcmaProblem(potentials.zero(G), potentials.KahlerPotential(G, w), eps))
    for k in (1, 9, 15):
        metric = 1 + G.lap(path.values[k])
        expected = np.log(1 - np.abs(G.dz(w, 0)) ** 2 / (eps * metric)) + np.log(metric)
        assert np.allclose(F[k - 1], expected)


def test_infeasible_residual_raises():
    t = G.t_field()
    path = GeodesicPath(G, np.broadcast_to(0.3 * t, G.shape))
    with pytest.raises(DegenerateStateError):
        residual(path, zero_problem(0.1))


def test_problem_validation():
    with pytest.raises(ValueError):
        zero_problem(0.0)
    with pytest.raises(GridMismatchError):
        HcmaProblem(potentials.zero(G), potentials.zero(G), 0.1, f=np.zeros((4, 4)))


def test_D_constant_is_zero(rng):
    path, _ = random_feasible_path(G, rng)
    h = np.full(G.shape, 2.5)
    h[0] = h[-1] = 2.5
    assert np.abs(apply_D(path, h)).max() < 1e-9


def test_D_t_squared(rng, small_grid):
    path, _ = random_feasible_path(small_grid, rng)
    t = small_grid.t_field()
    h = np.broadcast_to(t**2, small_grid.shape)
    assert np.allclose(apply_D(path, h), 2.0 / path.state.c, rtol=1e-10)


def test_D_phi_diagonal_formula(rng):
    # n = 1: the metric is a scalar, so the formula applies at every node
    path, _ = random_feasible_path(G, rng)
    s = path.state
    lam = s.G[0, 0].real
    v2 = np.abs(s.v[0]) ** 2
    expected = 2.0 - 1.0 / lam - v2 / (s.c * lam**2)
    assert np.allclose(apply_D(path, path.values), expected, rtol=1e-9, atol=1e-9)


def test_linearization_second_order(rng, small_grid):
    path, problem = random_feasible_path(small_grid, rng)
    h = smooth_direction(small_grid, rng)
    h /= np.abs(h).max()
    e1 = fd_check_linearization(path, problem, h, 1e-4)
    e2 = fd_check_linearization(path, problem, h, 5e-5)
    assert 3.5 <= e1 / e2 <= 4.5
    assert fd_check_linearization(path, problem, np.zeros(small_grid.interior_shape), 1e-4) == 0.0


def test_linearization_exact_along_t_squared():
    path = initial_guess(potentials.zero(G), potentials.constant(G, 0.3), eps=0.1)
    problem = HcmaProblem(path.phi0, path.phi1, 0.1)
    h = np.broadcast_to(G.t_field(interior=True) ** 2 - G.t_field(interior=True), G.interior_shape)
    # F is log(c0 + 2 s) here; the central difference error is O(s^2/c^2) only
    assert fd_check_linearization(path, problem, h, 1e-6) < 1e-8
