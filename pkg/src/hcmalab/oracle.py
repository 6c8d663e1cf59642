"""Brute-force checks of the pointwise algebra behind the Laplacian estimate.

Samples live in a frame where the background metric is the identity and
g + phi_{i jbar} = diag(lam).  Index conventions (leading axis = sample)::

    T[r, s, k]  = phi_{r sbar k}      symmetric in (r, k)
    Tb[p, q, l] = phi_{p qbar lbar}   = conj(T[q, p, l])
    v[i]        = phi_{t i}
    a[i, k]     = phi_{t i k}         symmetric
    b[i, k]     = phi_{t i kbar}      Hermitian
    R[p, q, k, l] = R_{p qbar k lbar}

Every ``verify_*`` returns ``(slack, scale)`` arrays; a check passes when
``slack >= -1e-12 * scale`` with ``scale = max(|lhs|, |rhs|, 1)``.
"""

from dataclasses import dataclass
from itertools import product

import numpy as np

DEFAULT_SEED = 0x5EED
SLACK_TOL = 1e-12


@dataclass(frozen=True)
class PointSample:
    lam: np.ndarray  # (S, n)
    T: np.ndarray  # (S, n, n, n)
    v: np.ndarray  # (S, n)
    a: np.ndarray  # (S, n, n)
    b: np.ndarray  # (S, n, n)
    c: np.ndarray  # (S,)
    B: np.ndarray = None  # (S,)
    R: np.ndarray = None  # (S, n, n, n, n)

    @property
    def n(self):
        return self.lam.shape[1]

    def __len__(self):
        return self.lam.shape[0]

    @property
    def Tb(self):
        return np.conj(np.swapaxes(self.T, 1, 2))

    @property
    def trace(self):
        return self.lam.sum(axis=1)

    def select(self, i):
        pick = lambda x: None if x is None else x[i : i + 1]
        return PointSample(*(pick(getattr(self, k)) for k in self.__dataclass_fields__))

    def to_dict(self):
        out = {}
        for k in self.__dataclass_fields__:
            x = getattr(self, k)
            if x is None:
                continue
            x = np.asarray(x)
            out[k] = {"re": x.real.tolist(), "im": x.imag.tolist()} if np.iscomplexobj(x) else x.tolist()
        return out

    @classmethod
    def from_dict(cls, d):
        def load(x):
            if isinstance(x, dict):
                return np.asarray(x["re"]) + 1j * np.asarray(x["im"])
            return np.asarray(x, dtype=float)

        return cls(**{k: load(v) for k, v in d.items()})


def _complex_uniform(rng, shape):
    return rng.uniform(-1.0, 1.0, shape) + 1j * rng.uniform(-1.0, 1.0, shape)


def generate_samples(rng, count, n, B=None):
    """Seeded samples: lam, c ~ U[0.1, 10]; tensor entries with Re, Im ~ U[-1, 1].

    With ``B`` given, also draws a curvature tensor R = S - B (g g + g g)
    where S = sum_m X^m (x) conj(X^m) over symmetric X^m is nonnegative in the
    bisectional sense.
    """
    lam = rng.uniform(0.1, 10.0, (count, n))
    X = _complex_uniform(rng, (count, n, n, n))
    T = 0.5 * (X + np.swapaxes(X, 1, 3))
    v = _complex_uniform(rng, (count, n))
    Y = _complex_uniform(rng, (count, n, n))
    a = 0.5 * (Y + np.swapaxes(Y, 1, 2))
    Z = _complex_uniform(rng, (count, n, n))
    b = 0.5 * (Z + np.conj(np.swapaxes(Z, 1, 2)))
    c = rng.uniform(0.1, 10.0, count)
    Bs = R = None
    if B is not None:
        Bs = np.full(count, float(B))
        W = _complex_uniform(rng, (count, n * n, n, n))
        W = 0.5 * (W + np.swapaxes(W, 2, 3))
        S = np.einsum("smik,smjl->sijkl", W, np.conj(W))
        eye = np.eye(n)
        Bg = np.einsum("ij,kl->ijkl", eye, eye) + np.einsum("il,kj->ijkl", eye, eye)
        R = S - Bs[:, None, None, None, None] * Bg
    return PointSample(lam=lam, T=T, v=v, a=a, b=b, c=c, B=Bs, R=R)


def _scale(*xs):
    return np.maximum.reduce([np.abs(x) for x in xs] + [np.ones_like(np.abs(xs[0]))])


# -- III and its regrouping ---------------------------------------------------


def III_direct(s):
    """Term-by-term sum of III in the diagonal frame."""
    w = 1.0 / s.lam
    T, Tb, v, a, b = s.T, s.Tb, s.v, s.a, s.b
    vb = np.conj(v)
    t1 = np.einsum("si,sr,sp,srik,sprk,si,sp->s", w, w, w, T, Tb, v, vb)
    t1 += np.einsum("si,sr,sp,sprk,srik,si,sp->s", w, w, w, T, Tb, v, vb)
    t2 = -np.einsum("si,sp,spik,sik,sp->s", w, w, Tb, a, vb)
    t2 -= np.einsum("si,sp,spik,si,skp->s", w, w, Tb, v, b)
    t3 = -np.einsum("si,sp,spik,sik,sp->s", w, w, T, b, vb)
    t3 -= np.einsum("si,sp,spik,si,spk->s", w, w, T, v, np.conj(a))
    t4 = np.einsum("si,sik,ski->s", w, b, b) + np.einsum("si,sik,sik->s", w, a, np.conj(a))
    return t1 + t2 + t3 + t4


def A_direct(s):
    """(A1, A2) as the two four-term groups of III."""
    w = 1.0 / s.lam
    T, Tb, v, a, b = s.T, s.Tb, s.v, s.a, s.b
    vb = np.conj(v)
    A1 = (
        np.einsum("si,sr,sp,sprk,srik,si,sp->s", w, w, w, T, Tb, v, vb)
        + np.einsum("si,sik,ski->s", w, b, b)
        - np.einsum("si,sp,spik,si,skp->s", w, w, Tb, v, b)
        - np.einsum("si,sp,spik,sik,sp->s", w, w, T, b, vb)
    )
    A2 = (
        np.einsum("si,sr,sp,srik,sprk,si,sp->s", w, w, w, T, Tb, v, vb)
        + np.einsum("si,sik,sik->s", w, a, np.conj(a))
        - np.einsum("si,sp,spik,sik,sp->s", w, w, Tb, a, vb)
        - np.einsum("si,sp,spik,si,spk->s", w, w, T, v, np.conj(a))
    )
    return A1, A2


def M_matrices(s):
    """M[r, k] = sum_i v_i phi_{r ibar kbar}/lam_i and its A2 counterpart K."""
    w = 1.0 / s.lam
    M = np.einsum("si,si,srik->srk", s.v, w, s.Tb)
    K = np.einsum("si,si,srik->srk", s.v, w, s.T)
    return M, K


def A_mform(s):
    """(A1, A2) written as lam-weighted sums of squared moduli."""
    M, K = M_matrices(s)
    w = 1.0 / s.lam
    A1 = np.einsum("sr,srk->s", w, np.abs(M - s.b) ** 2)
    A2 = np.einsum("sr,srk->s", w, np.abs(K - s.a) ** 2)
    return A1, A2


def lap_derivatives(s):
    """((lap phi)_t, (lap phi)_k) from the jet."""
    lap_t = np.einsum("sii->s", s.b).real
    lap_k = np.einsum("siik->sk", s.T)
    return lap_t, lap_k


def III1_rhs(s):
    lap_t, lap_k = lap_derivatives(s)
    inner = lap_t - np.einsum("si,si,si->s", s.v, np.conj(lap_k), 1.0 / s.lam)
    return np.abs(inner) ** 2


def eval_III_A(s):
    """III two ways, A1/A2 two ways, and the quantity A of the estimate."""
    direct = III_direct(s)
    A1d, A2d = A_direct(s)
    A1m, A2m = A_mform(s)
    h = s.trace
    rhs = III1_rhs(s)
    return {
        "III_direct": direct.real,
        "III_direct_imag": direct.imag,
        "III_mform": A1m + A2m,
        "A1_direct": A1d.real,
        "A2_direct": A2d.real,
        "A1_mform": A1m,
        "A2_mform": A2m,
        "A": rhs / (h**2 * s.c),
    }


def verify_III_identity(s):
    vals = eval_III_A(s)
    d, m = vals["III_direct"], vals["III_mform"]
    diff = np.abs(d - m) + np.abs(vals["III_direct_imag"])
    return -diff, _scale(d, m)


def verify_III1(s):
    """III (n + lap phi) - |(lap phi)_t - g^{i lbar} phi_ti (lap phi)_lbar|^2."""
    III = III_direct(s).real
    lhs = III * s.trace
    rhs = III1_rhs(s)
    return lhs - rhs, _scale(lhs, rhs)


def verify_positivity_A(s):
    """Slacks of A1 >= 0 and A2 >= 0 for the direct groupings."""
    A1, A2 = A_direct(s)
    return (A1.real, _scale(A1.real)), (A2.real, _scale(A2.real))


# -- curvature term II ------------------------------------------------------


def II_value(s):
    """II from its two defining contractions (flat background, diagonal g_phi)."""
    w = 1.0 / s.lam
    u = s.v * w  # g^{i qbar} phi_ti
    R = s.R
    first = np.einsum("spikk,si,sp->s", R, u, np.conj(u))
    phi_diag = s.lam - 1.0
    second = np.einsum("skkpi,sk,si,sp->s", R, phi_diag, u, np.conj(u))
    return (first + second).real


def verify_II_bound(s):
    """Slack of II > -2B (n + lap phi) sum |v_i|^2 / lam_i^2, plus the two observations.

    Returns a dict of ``(slack, scale)`` pairs: ``II``, ``II_sharp`` (against
    the intermediate bound -B h sum|v|^2/lam^2 - B |grad phi_t|^2),
    ``trace_vs_eig`` and ``gradient_ratio``.
    """
    II = II_value(s)
    h = s.trace
    weighted = np.sum(np.abs(s.v) ** 2 / s.lam**2, axis=1)
    grad_sq = np.sum(np.abs(s.v) ** 2 / s.lam, axis=1)
    bound = -2.0 * s.B * h * weighted
    sharp = -s.B * h * weighted - s.B * grad_sq
    tr_slack = (h[:, None] - s.lam).min(axis=1)
    ratio_lhs = grad_sq / h
    return {
        "II": (II - bound, _scale(II, bound)),
        "II_sharp": (II - sharp, _scale(II, sharp)),
        "trace_vs_eig": (tr_slack, _scale(h)),
        "gradient_ratio": (weighted - ratio_lhs, _scale(weighted, ratio_lhs)),
    }


# -- Yau's third-derivative inequality and AM-GM ------------------------------


def verify_yau_third_derivative(s):
    """sum |phi_{i pbar k}|^2/(lam_i lam_p) >= (n+lap phi)^{-1} sum_k |(lap phi)_k|^2 / lam_k."""
    w = 1.0 / s.lam
    lhs = np.einsum("si,sp,sipk,spik->s", w, w, s.T, s.Tb).real
    _, lap_k = lap_derivatives(s)
    rhs = np.einsum("sk,sk->s", np.abs(lap_k) ** 2, w) / s.trace
    return lhs - rhs, _scale(lhs, rhs)


def amgm_parts(values, n):
    values = np.asarray(values, dtype=float)
    if np.any(values <= 0):
        raise ValueError("AM-GM inputs must be positive")
    lhs = np.sum(1.0 / values, axis=-1)
    rhs = np.sum(values, axis=-1) ** (1.0 / n) * np.prod(values, axis=-1) ** (-1.0 / n)
    return lhs, rhs


def verify_amgm(values, n):
    """sum 1/x_i >= (sum x_i)^{1/n} (prod x_i)^{-1/n} over the n + 1 values."""
    lhs, rhs = amgm_parts(values, n)
    return lhs - rhs, _scale(lhs, rhs)


def amgm_slack(values, n):
    slack, scale = verify_amgm(values, n)
    return slack / scale


# -- suites ---------------------------------------------------------------------


def _summarize(name, slack, scale, samples, extra=None):
    norm = slack / scale
    i = int(np.argmin(norm))
    out = {
        "suite": name,
        "count": int(norm.size),
        "min_slack": float(norm[i]),
        "passed": bool(np.all(slack >= -SLACK_TOL * scale)),
        "argmin_sample": samples.select(i).to_dict() if samples is not None else None,
    }
    if extra:
        out.update(extra)
    return out


def run_suites(seed=DEFAULT_SEED, count=100_000, dims=(1, 2), curvature_bounds=(0.0, 1.0)):
    """Every inequality on ``count`` seeded samples per dimension.

    Returns ``{suite_name: summary}``; summaries for different dimensions or
    curvature bounds are merged by taking the worst case.
    """
    rng = np.random.default_rng(seed)
    per = {}

    def merge(key, summary):
        cur = per.get(key)
        if cur is None:
            per[key] = summary
            return
        merged = summary if summary["min_slack"] < cur["min_slack"] else cur
        merged = dict(merged)
        merged["count"] = cur["count"] + summary["count"]
        merged["passed"] = cur["passed"] and summary["passed"]
        per[key] = merged

    for n in dims:
        s = generate_samples(rng, count, n)
        merge("III1", _summarize("III1", *verify_III1(s), s, {"n": n}))
        (a1, sc1), (a2, sc2) = verify_positivity_A(s)
        merge("A1_nonneg", _summarize("A1_nonneg", a1, sc1, s, {"n": n}))
        merge("A2_nonneg", _summarize("A2_nonneg", a2, sc2, s, {"n": n}))
        merge("III_identity", _summarize("III_identity", *verify_III_identity(s), s, {"n": n}))
        merge("yau", _summarize("yau", *verify_yau_third_derivative(s), s, {"n": n}))
        vals = np.concatenate([s.lam, s.c[:, None]], axis=1)
        merge("amgm", _summarize("amgm", *verify_amgm(vals, n), None, {"n": n}))
        for B in curvature_bounds:
            sb = generate_samples(rng, count, n, B=B)
            checks = verify_II_bound(sb)
            merge("II_bound", _summarize("II_bound", *checks["II"], sb, {"n": n, "B": B}))
            merge("II_sharp", _summarize("II_sharp", *checks["II_sharp"], sb, {"n": n, "B": B}))
            merge("trace_vs_eig", _summarize("trace_vs_eig", *checks["trace_vs_eig"], None))
            merge("gradient_ratio", _summarize("gradient_ratio", *checks["gradient_ratio"], None))
    return per


INEQUALITY_SUITES = ("III1", "A1_nonneg", "A2_nonneg", "II_bound", "yau", "amgm")


# -- the Laplacian expansion on analytic fields --------------------------------


class TrigPotential:
    """phi(t, x) = sum_m Re(alpha_m(t) exp(2 pi i m.x)), alpha_m quadratic in t.

    ``modes`` is a list of ``(m, coeffs)`` with ``m`` a 2n-vector of integers
    ordered (x_1, y_1, x_2, y_2) and ``coeffs`` three complex numbers
    (alpha_m = c0 + c1 t + c2 t^2).  All jets are exact.
    """

    def __init__(self, n, modes):
        self.n = n
        self.modes = [(np.asarray(m, dtype=float), np.asarray(cf, dtype=complex)) for m, cf in modes]

    @classmethod
    def random(cls, rng, n, count=3, amplitude=0.01, max_freq=2):
        modes = []
        for _ in range(count):
            m = rng.integers(-max_freq, max_freq + 1, 2 * n)
            while not m.any():
                m = rng.integers(-max_freq, max_freq + 1, 2 * n)
            cf = amplitude * _complex_uniform(rng, 3)
            modes.append((m, cf))
        return cls(n, modes)

    def _factor(self, m, kind, j):
        mx, my = m[2 * j], m[2 * j + 1]
        if kind == "z":
            return np.pi * 1j * (mx - 1j * my)
        return np.pi * 1j * (mx + 1j * my)

    def jet(self, x, ops=(), t_order=0, t=0.0):
        """d^{t_order}/dt^{t_order} of the listed complex derivatives, at points ``x``.

        ``x`` has shape ``(..., 2n)``; ``ops`` is a sequence of ``("z", j)`` or
        ``("zb", j)``.
        """
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape[:-1], dtype=complex)
        powers = np.array([1.0, t, t * t])
        dpoly = [np.array([1.0, t, t * t]), np.array([0.0, 1.0, 2 * t]), np.array([0.0, 0.0, 2.0])]
        tp = dpoly[t_order] if t_order < 3 else np.zeros(3)
        del powers
        for m, cf in self.modes:
            alpha = np.dot(cf, tp)
            phase = 2.0 * np.pi * (x @ m)
            for sign, coef in ((1.0, alpha), (-1.0, np.conj(alpha))):
                fac = 0.5 * coef
                for kind, j in ops:
                    fac = fac * self._factor(sign * m, kind, j)
                out = out + fac * np.exp(1j * sign * phase)
        return out

    def metric(self, x, t):
        n = self.n
        G = np.zeros((n, n) + np.shape(x)[:-1], dtype=complex)
        for i in range(n):
            for j in range(n):
                G[i, j] = self.jet(x, (("z", i), ("zb", j)), 0, t) + (1.0 if i == j else 0.0)
        return G

    def phi_tz(self, x, t):
        return np.stack([self.jet(x, (("z", i),), 1, t) for i in range(self.n)])

    def grad_phi_t_sq(self, x, t):
        """|grad phi_t|^2_phi = v^H G^{-1} v at points ``x``."""
        G = np.moveaxis(self.metric(x, t), (0, 1), (-2, -1))
        v = np.moveaxis(self.phi_tz(x, t), 0, -1)
        sol = np.linalg.solve(G, v[..., None])[..., 0]
        return np.einsum("...i,...i->...", np.conj(v), sol).real


def laplacian_expansion_rhs(pot, x, t):
    """Assemble the expansion of lap(|grad phi_t|^2_phi) from exact jets at one point.

    Flat background, general (non-diagonal) g_phi; H[i, j] = g_phi^{i jbar}.
    """
    n = pot.n
    J = lambda ops, d=0: complex(pot.jet(x, ops, d, t))
    G = np.array([[J((("z", i), ("zb", j))) + (i == j) for j in range(n)] for i in range(n)])
    H = np.linalg.inv(G).T
    v = np.array([J((("z", i),), 1) for i in range(n)])
    vb = np.conj(v)
    rng = range(n)
    T3 = np.array([[[J((("z", p), ("zb", q), ("z", k))) for k in rng] for q in rng] for p in rng])
    T3b = np.array([[[J((("z", p), ("zb", q), ("zb", k))) for k in rng] for q in rng] for p in rng])
    L4 = np.array(
        [[sum(J((("z", k), ("zb", k), ("z", p), ("zb", q))) for k in rng) for q in rng] for p in rng]
    )
    a = np.array([[J((("z", i), ("z", k)), 1) for k in rng] for i in rng])
    ab = np.array([[J((("zb", j), ("zb", l)), 1) for l in rng] for j in rng])
    bm = np.array([[J((("z", i), ("zb", l)), 1) for l in rng] for i in rng])
    Lt = np.array([sum(J((("z", i), ("z", k), ("zb", k)), 1) for k in rng) for i in rng])
    Ltb = np.array([sum(J((("zb", j), ("z", k), ("zb", k)), 1) for k in rng) for j in rng])
    ein = np.einsum
    total = -ein("iq,pj,pq,i,j->", H, H, L4, v, vb)
    total += ein("is,rq,pj,rsk,pqk,i,j->", H, H, H, T3, T3b, v, vb)
    total += ein("is,rq,pj,pqk,rsk,i,j->", H, H, H, T3, T3b, v, vb)
    total -= ein("iq,pj,pqk,ik,j->", H, H, T3b, a, vb)
    total -= ein("iq,pj,pqk,i,kj->", H, H, T3b, v, bm)
    total -= ein("iq,pj,pqk,ik,j->", H, H, T3, bm, vb)
    total -= ein("iq,pj,pqk,i,jk->", H, H, T3, v, ab)
    total += ein("ij,i,j->", H, Lt, vb) + ein("ij,i,j->", H, v, Ltb)
    # phi_{t jbar k} = bm[k, j]
    total += ein("ij,ik,kj->", H, bm, bm) + ein("ij,ik,jk->", H, a, ab)
    return total


def laplacian_expansion_lhs(pot, x, t, spacing):
    """Second-order finite-difference Laplacian of |grad phi_t|^2_phi at ``x``."""
    x = np.asarray(x, dtype=float)
    q0 = pot.grad_phi_t_sq(x[None], t)[0]
    total = 0.0
    for ax in range(2 * pot.n):
        e = np.zeros_like(x)
        e[ax] = spacing
        pts = np.stack([x + e, x - e])
        qp, qm = pot.grad_phi_t_sq(pts, t)
        total += 0.25 * (qp - 2.0 * q0 + qm) / spacing**2
    return total


def verify_laplacian_expansion(pot, node, N, t=0.4):
    """|FD lap(|grad phi_t|^2_phi) - assembled expansion| at grid node ``node`` of an N-grid."""
    x = np.asarray(node, dtype=float) / N
    lhs = laplacian_expansion_lhs(pot, x, t, 1.0 / N)
    rhs = laplacian_expansion_rhs(pot, x, t)
    return abs(lhs - rhs), abs(rhs.imag)


def expansion_order(pot, node_coarse, N=32, t=0.4):
    """Observed order between N and 2N at the same physical point."""
    e1, _ = verify_laplacian_expansion(pot, node_coarse, N, t)
    e2, _ = verify_laplacian_expansion(pot, [2 * i for i in node_coarse], 2 * N, t)
    return float(np.log2(e1 / e2)), e1, e2
