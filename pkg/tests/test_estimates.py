import numpy as np
import pytest

from hcmalab import potentials
from hcmalab.continuation import sweep
from hcmalab.equation import HcmaProblem
from hcmalab.estimates import (
    chain_checks,
    laplacian_report,
    mp_certificate,
    mp_constant,
    stencil_error_estimate,
)
from hcmalab.grid import TorusGrid
from hcmalab.newton import solve
from hcmalab.path import initial_guess

G = TorusGrid(1, 32, 17)


def test_mp_constant():
    assert mp_constant(0.0) == 1.0
    assert mp_constant(-2.0) == 3.0
    assert mp_constant(5.0) == 1.0
    assert mp_constant(0.0, B=1.0, R=0.5) == 3.5


@pytest.fixture(scope="module")
def degenerate_sweep():
    a = potentials.make_degenerate_endpoint(G, 1.0)
    sched = [1e-1, 3e-2, 1e-2]
    return sweep(a, potentials.zero(G), sched, sched)


def test_boundary_max_matches_endpoint(degenerate_sweep):
    for e in degenerate_sweep.entries:
        p = e.report.path
        rep = mp_certificate(p, HcmaProblem(p.phi0, p.phi1, e.eps))
        assert rep.location in ("interior", "boundary")
        if rep.location == "boundary":
            assert rep.endpoint_h_matches
            assert rep.rho is None


def test_forced_interior_max_sign():
    f = 0.2 * np.cos(2 * np.pi * G.x(0))
    a, z = potentials.cosine(G, 0.01), potentials.zero(G)
    prob = HcmaProblem(a, z, 0.1, f)
    rep = solve(prob, initial_guess(a, z, eps=0.1))
    cert = mp_certificate(rep.path, prob, C_override=1000.0)
    assert cert.location == "interior"
    assert cert.sign_check
    assert cert.D_Q <= cert.tol_mp
    assert cert.rho > 0


def test_chain_checks_on_solution(degenerate_sweep):
    for e in degenerate_sweep.entries:
        p = e.report.path
        out = chain_checks(p, HcmaProblem(p.phi0, p.phi1, e.eps))
        assert out["trace_vs_eig"] >= -1e-12
        assert out["gradient_ratio"] >= -1e-12
        assert out["amgm"] >= -1e-12
        assert out["equation_residual"] < 1e-8


def test_laplacian_report_flat():
    z = potentials.zero(G)
    path = initial_guess(z, z, eps=0.1)
    rep = laplacian_report(path)
    assert rep.sup_h == pytest.approx(1.0) and rep.min_h == pytest.approx(1.0)
    assert len(rep.level_sup) == G.Nt


def test_stencil_error_zero_on_quadratic():
    z = potentials.zero(G)
    path = initial_guess(z, z, eps=0.1)
    Q = np.broadcast_to(G.t_field() ** 2, G.shape)
    assert stencil_error_estimate(path, Q, (5, 3, 3)) == pytest.approx(0.0, abs=1e-9)
