"""Maximum-principle diagnostics on solved paths.

The test quantity is Q = log(n + lap phi) - C phi + t^2.  On the flat torus
(B = R = 0) the constant C only has to satisfy C + inf lap f >= 1 and C >= 1.
"""

from dataclasses import dataclass, field

import numpy as np

from . import hermitian
from .equation import apply_D
from .oracle import amgm_slack


def mp_constant(inf_lap_f, B=0.0, R=0.0):
    """Smallest C with C - 2B - R + inf lap f >= 1 and C - 2B >= 1."""
    return max(1.0 + 2.0 * B, 1.0 + 2.0 * B + R - inf_lap_f)


@dataclass(frozen=True)
class LaplacianReport:
    level_sup: np.ndarray
    level_min: np.ndarray
    sup_h: float
    argmax: tuple
    min_h: float
    argmin: tuple

    def to_dict(self):
        return {
            "sup_h": self.sup_h,
            "argmax": list(self.argmax),
            "min_h": self.min_h,
            "argmin": list(self.argmin),
            "level_sup": self.level_sup.tolist(),
            "level_min": self.level_min.tolist(),
        }


def trace_field(path):
    """h = n + lap phi at every space-time node."""
    return path.grid.n + path.grid.lap(path.values)


def laplacian_report(path):
    h = trace_field(path)
    axes = tuple(range(1, h.ndim))
    imax = np.unravel_index(np.argmax(h), h.shape)
    imin = np.unravel_index(np.argmin(h), h.shape)
    return LaplacianReport(
        level_sup=h.max(axis=axes),
        level_min=h.min(axis=axes),
        sup_h=float(h[imax]),
        argmax=tuple(int(i) for i in imax),
        min_h=float(h[imin]),
        argmin=tuple(int(i) for i in imin),
    )


@dataclass(frozen=True)
class EstimateReport:
    C: float
    B: float
    R: float
    inf_lap_f: float
    sup_h: float
    sup_h_node: tuple
    level_sup_h: tuple
    q_max: float
    q_node: tuple
    location: str  # "interior" | "boundary"
    endpoint: str = None  # "phi0" | "phi1" for boundary maxima
    endpoint_h_matches: bool = None
    rho: float = None
    rho_sup_f: float = None
    D_Q: float = None
    lap_phi_Q: float = None
    tol_mp: float = None
    sign_check: bool = None
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        out = {k: getattr(self, k) for k in self.__dataclass_fields__ if k != "extra"}
        out["sup_h_node"] = list(self.sup_h_node)
        out["q_node"] = list(self.q_node)
        out["level_sup_h"] = list(self.level_sup_h)
        out.update(self.extra)
        return out


def _fourth_difference(u, axis, idx, periodic):
    """|5-point fourth difference| of ``u`` along ``axis`` centred near ``idx``."""
    n = u.shape[axis]
    i = idx[axis]
    if periodic:
        offs = [(i + d) % n for d in (-2, -1, 0, 1, 2)]
    else:
        lo = min(max(i - 2, 0), n - 5)
        offs = list(range(lo, lo + 5))
    vals = []
    for o in offs:
        j = list(idx)
        j[axis] = o
        vals.append(u[tuple(j)])
    w = (1.0, -4.0, 6.0, -4.0, 1.0)
    return abs(sum(a * b for a, b in zip(w, vals)))


def stencil_error_estimate(path, Q, node):
    """Leading truncation term of the second differences of D applied to Q at ``node``."""
    grid = path.grid
    s = path.state
    idx = (node[0] - 1,) + tuple(node[1:])
    Ginv = s.Ginv[(slice(None), slice(None)) + idx]
    tr = float(sum(Ginv[i, i].real for i in range(grid.n)))
    spatial = max(
        _fourth_difference(Q, ax, node, periodic=True) for ax in range(1, Q.ndim)
    ) / grid.h**2
    temporal = _fourth_difference(Q, 0, node, periodic=False) / grid.tau**2
    return (0.25 * tr * spatial + temporal / float(s.c[idx])) / 12.0


def mp_certificate(path, problem, C_override=None, B=0.0, R=0.0):
    grid = path.grid
    n = grid.n
    inf_lap_f = problem.f_constants["inf_lap_f"]
    C = mp_constant(inf_lap_f, B, R) if C_override is None else float(C_override)
    lap = laplacian_report(path)
    h = trace_field(path)
    t = grid.t_field()
    with np.errstate(divide="ignore", invalid="ignore"):
        Q = np.log(h) - C * path.values + t**2
    q_flat = np.where(np.isfinite(Q), Q, -np.inf)
    node = tuple(int(i) for i in np.unravel_index(np.argmax(q_flat), Q.shape))
    common = dict(
        C=C,
        B=B,
        R=R,
        inf_lap_f=inf_lap_f,
        sup_h=lap.sup_h,
        sup_h_node=lap.argmax,
        level_sup_h=tuple(float(x) for x in lap.level_sup),
        q_max=float(Q[node]),
        q_node=node,
    )
    k = node[0]
    if k in (0, grid.Nt - 1):
        which = "phi0" if k == 0 else "phi1"
        endpoint = problem.phi0 if k == 0 else problem.phi1
        matches = bool(np.array_equal(h[k], endpoint.trace))
        return EstimateReport(location="boundary", endpoint=which, endpoint_h_matches=matches,
                              **common)

    spatial = node[1:]
    f_at = float(problem.f[spatial]) if not problem.time_dependent_f else float(
        problem.f[(k - 1,) + spatial]
    )
    rho = float(h[node] * np.exp(-f_at / n) * problem.eps ** (-1.0 / n))
    rho_sup = float(h[node] * np.exp(-problem.f_constants["sup_f"] / n) * problem.eps ** (-1.0 / n))
    DQ = apply_D(path, Q)[(k - 1,) + spatial]
    s = path.state
    idx = (k - 1,) + spatial
    HQ = grid.complex_hessian(Q[k])[(slice(None), slice(None)) + spatial]
    lapQ = float(np.einsum("ij,ji->", s.Ginv[(slice(None), slice(None)) + idx], HQ).real)
    tol = 10.0 * stencil_error_estimate(path, Q, node)
    return EstimateReport(
        location="interior",
        rho=rho,
        rho_sup_f=rho_sup,
        D_Q=float(DQ),
        lap_phi_Q=lapQ,
        tol_mp=tol,
        sign_check=bool(DQ <= tol and lapQ <= tol),
        **common,
    )


def diagonal_frame(state):
    """Eigenvalues lambda_i and v expressed in the eigenframe of G, nodewise.

    Returns arrays ``lam`` of shape ``(n,) + nodes`` and ``v`` likewise.
    """
    G = np.moveaxis(state.G, (0, 1), (-2, -1))
    lam, U = np.linalg.eigh(G)
    v = np.moveaxis(state.v, 0, -1)
    vf = np.einsum("...ji,...j->...i", np.conj(U), v)
    return np.moveaxis(lam, -1, 0), np.moveaxis(vf, -1, 0)


def chain_checks(path, problem):
    """Nodewise slacks of the scalar steps used in the Laplacian estimate.

    * ``trace_vs_eig``: (n + lap phi) - lambda_i >= 0
    * ``gradient_ratio``: sum |v_i|^2/lambda_i^2 - |grad phi_t|^2_phi/(n + lap phi) >= 0
    * ``amgm``: AM-GM over {lambda_i, c} with the product taken from the state
    """
    s = path.state
    lam, v = diagonal_frame(s)
    trace = lam.sum(axis=0)
    grad_sq = np.sum(np.abs(v) ** 2 / lam, axis=0)
    weighted = np.sum(np.abs(v) ** 2 / lam**2, axis=0)
    trace_slack = (trace[None] - lam) / np.maximum(1.0, trace[None])
    ratio_lhs = grad_sq / trace
    ratio_slack = (weighted - ratio_lhs) / np.maximum(1.0, np.maximum(weighted, ratio_lhs))
    values = np.concatenate([lam, s.c[None]], axis=0)
    am = amgm_slack(np.moveaxis(values, 0, -1), path.grid.n)
    # residual of the solved equation: c * det against eps e^f
    product = float(np.abs(np.log(s.c * hermitian.det(s.G)) - np.log(problem.eps) - problem.f).max())
    return {
        "trace_vs_eig": float(trace_slack.min()),
        "gradient_ratio": float(ratio_slack.min()),
        "amgm": float(am.min()),
        "equation_residual": product,
    }
