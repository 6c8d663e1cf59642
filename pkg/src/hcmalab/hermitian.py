"""Closed-form algebra for fields of 1x1 and 2x2 Hermitian matrices.

Matrix fields are stored with the matrix indices leading: ``G[i, j, ...]``
holds g_{i jbar} at every node.
"""

import numpy as np


def det(G):
    n = G.shape[0]
    if n == 1:
        return G[0, 0].real.copy()
    return (G[0, 0].real * G[1, 1].real - np.abs(G[0, 1]) ** 2)


def inverse(G):
    """Inverse matrix field, same layout as ``G``."""
    n = G.shape[0]
    if n == 1:
        return 1.0 / G
    d = det(G)
    out = np.empty_like(G)
    out[0, 0] = G[1, 1] / d
    out[1, 1] = G[0, 0] / d
    out[0, 1] = -G[0, 1] / d
    out[1, 0] = -G[1, 0] / d
    return out


def eigenvalues(G):
    """Ascending eigenvalues, shape ``(n,) + node_shape``."""
    n = G.shape[0]
    if n == 1:
        return G[0, 0].real[None].copy()
    a, d = G[0, 0].real, G[1, 1].real
    mid = 0.5 * (a + d)
    rad = np.sqrt((0.5 * (a - d)) ** 2 + np.abs(G[0, 1]) ** 2)
    return np.stack([mid - rad, mid + rad])


def min_eigenvalue(G):
    return eigenvalues(G)[0]


def trace(G):
    return sum(G[i, i].real for i in range(G.shape[0]))


def matvec(A, v):
    return np.einsum("ij...,j...->i...", A, v)


def quad(A, v, w=None):
    """Real part of ``w^H A v`` nodewise (``w`` defaults to ``v``)."""
    if w is None:
        w = v
    return np.einsum("i...,ij...,j...->...", np.conj(w), A, v).real
