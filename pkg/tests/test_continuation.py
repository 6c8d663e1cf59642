import numpy as np
import pytest

from hcmalab import potentials
from hcmalab.continuation import default_schedule, default_smoothing, restore_feasibility, sweep
from hcmalab.errors import ConfigError
from hcmalab.grid import TorusGrid
from hcmalab.newton import SolverOptions
from hcmalab.path import initial_guess

G = TorusGrid(1, 32, 17)
SCHED = [1e-1, 1e-2, 1e-3, 1e-4]


def test_defaults():
    s = default_schedule()
    assert len(s) == 7
    assert s[0] == pytest.approx(10**-0.5)
    assert s[-1] == pytest.approx(10**-3.5)
    assert default_smoothing([0.3, 0.05]) == [0.1, 0.05]


def test_flat_sweep():
    z = potentials.zero(G)
    sw = sweep(z, z, SCHED)
    assert not sw.truncated
    t = G.t_field()
    for e in sw.entries:
        assert e.sup_h == pytest.approx(1.0)
        assert np.abs(e.report.path.values - 0.5 * e.eps * (t**2 - t)).max() < 1e-9


def test_constant_sweep_successive_differences():
    sw = sweep(potentials.zero(G), potentials.constant(G, 0.3), SCHED, opts=SolverOptions(tol=1e-11))
    diffs = [e.successive_diff for e in sw.entries[1:]]
    for a, b in zip(diffs, diffs[1:]):
        assert a / b == pytest.approx(10.0, rel=0.01)


def test_degenerate_needs_smoothing():
    a = potentials.make_degenerate_endpoint(G, 1.0)
    with pytest.raises(ConfigError):
        sweep(a, potentials.zero(G), SCHED)


def test_schedule_validation():
    z = potentials.zero(G)
    for bad in ([], [0.1, 0.2], [0.1, -0.01]):
        with pytest.raises(ConfigError):
            sweep(z, z, bad)
    with pytest.raises(ConfigError):
        sweep(z, z, SCHED, smoothing=[0.1])


def test_degenerate_sweep_bounded():
    a = potentials.make_degenerate_endpoint(G, 1.0)
    sched = [1e-1, 3e-2, 1e-2, 3e-3]
    sw = sweep(a, potentials.zero(G), sched, sched)
    assert not sw.truncated
    sups = [e.sup_h for e in sw.entries]
    assert max(sups) < 2.5
    assert sw.endpoint_classes == {"phi0": "H11", "phi1": "H"}


def test_failure_truncates():
    z = potentials.zero(G)
    sw = sweep(z, potentials.cosine(G, 0.01), [0.1, 0.01], opts=SolverOptions(max_newton=1))
    assert sw.truncated
    assert sw.failure["code"] == "NON_CONVERGENCE"
    assert len(sw.entries) < 2


def test_restore_feasibility_moves_endpoints():
    a = potentials.cosine(G, 0.01)
    b = potentials.zero(G)
    old = initial_guess(a, b, eps=0.1)
    c = potentials.make_degenerate_endpoint(G, 0.9)
    new = restore_feasibility(old, c, b, 0.01)
    assert new.feasible
    assert np.array_equal(new.values[0], c.values)
