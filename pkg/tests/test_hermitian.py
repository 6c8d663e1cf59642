import numpy as np
import pytest

from hcmalab import hermitian


def random_hpd(rng, n, size=50):
    A = rng.standard_normal((size, n, n)) + 1j * rng.standard_normal((size, n, n))
    M = A @ np.conj(np.swapaxes(A, 1, 2)) + 0.1 * np.eye(n)
    return np.moveaxis(M, 0, -1)


@pytest.mark.parametrize("n", [1, 2])
def test_closed_forms_match_numpy(n):
    rng = np.random.default_rng(n)
    G = random_hpd(rng, n)
    ref = np.moveaxis(G, -1, 0)
    assert np.allclose(hermitian.det(G), np.linalg.det(ref).real)
    assert np.allclose(np.moveaxis(hermitian.inverse(G), -1, 0), np.linalg.inv(ref))
    assert np.allclose(hermitian.min_eigenvalue(G), np.linalg.eigvalsh(ref)[:, 0])
    assert np.allclose(hermitian.trace(G), np.trace(ref, axis1=1, axis2=2).real)
    v = rng.standard_normal((n, 50)) + 1j * rng.standard_normal((n, 50))
    q = np.einsum("si,sij,sj->s", np.conj(v.T), ref, v.T).real
    assert np.allclose(hermitian.quad(G, v), q)
