"""Pointwise differential geometry on a single chart.

Metric components are jet-valued functions of the chart point; Christoffel
symbols, the curvature tensor and covariant derivatives are assembled from
the jet channels, then projected into a deterministic orthonormal frame
(Gram-Schmidt on the coordinate basis in ascending index order).

Sign conventions, fixed once and echoed in every CLI report:
    R(X,Y)Z   = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
    R_ijkl    = g(R(e_i,e_j)e_k, e_l)
    rho_ij    = R_ikkj,  tau = R_ijji
so the unit round sphere has R_ijkl = d_jk d_il - d_ik d_jl, tau = m(m-1),
and rho(xi,xi) = m-1 > 0 on the standard Sasakian sphere.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import EvaluationDomain, NonPositiveDefiniteMetric, RankMismatch
from .jets import Jet3

PD_EPS = 1e-12


@dataclass(frozen=True)
class MetricField:
    """Chart dimension plus jet-valued symmetric metric components.

    ``components(x)`` returns an m x m nested list of Jet3; it must raise
    EvaluationDomain outside the open chart domain.  ``volume_density``
    is the constant sqrt(det g) for charts where it is constant, purely
    informational.
    """

    dim: int
    components: Callable[[np.ndarray], list]
    volume_density: Optional[float] = None

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("metric dimension must be >= 2, got %d" % self.dim)


@dataclass(frozen=True)
class FrameData:
    """Orthonormal frame at a point; rows of ``frame`` are the vectors."""

    base_point: np.ndarray
    frame: np.ndarray    # frame[a, i] = e_a^i, so frame @ g @ frame.T = I
    coframe: np.ndarray  # coframe[a, i] = g_ij e_a^j; coframe @ frame.T = I


@dataclass(frozen=True)
class CurvaturePoint:
    """Curvature data at one point.

    ``gamma`` holds the coordinate-frame Christoffel symbols Gamma^k_ij as
    gamma[k, i, j]; all other tensors are orthonormal-frame components in
    the frame carried along in ``frame``.
    """

    gamma: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    tau: float
    norm_ricci_sq: float
    norm_riemann_sq: float
    frame: FrameData = field(repr=False, default=None)

    @property
    def m(self):
        return self.ricci.shape[0]


def evaluate_metric_jets(metric, x):
    """Evaluate the metric components as jets and check positive definiteness."""
    x = np.asarray(x, dtype=float)
    if x.shape != (metric.dim,):
        raise EvaluationDomain(
            "point has shape %s, chart dimension is %d" % (x.shape, metric.dim)
        )
    gj = metric.components(x)
    g0 = np.array([[gj[i][j].value for j in range(metric.dim)] for i in range(metric.dim)])
    lmin = float(np.linalg.eigvalsh(g0).min())
    if lmin <= PD_EPS:
        raise NonPositiveDefiniteMetric(
            "smallest metric eigenvalue %.3e at %s" % (lmin, x.tolist()),
            eigenvalue=lmin,
        )
    return gj


def metric_channel_arrays(gj):
    """Split jet-valued metric into channel arrays.

    Returns (g0, dg, d2g) with dg[a, i, j] = d_a g_ij and
    d2g[a, b, i, j] = d_a d_b g_ij.
    """
    m = len(gj)
    g0 = np.empty((m, m))
    dg = np.empty((m, m, m))
    d2g = np.empty((m, m, m, m))
    for i in range(m):
        for j in range(m):
            jet = gj[i][j]
            g0[i, j] = jet.value
            dg[:, i, j] = jet.grad
            d2g[:, :, i, j] = jet.hess
    return g0, dg, d2g


def _christoffel_from_channels(g0, dg, d2g=None):
    """Gamma[k,i,j] and optionally dGamma[a,k,i,j] from metric channels."""
    ginv = np.linalg.inv(g0)
    # S[l,i,j] = d_i g_lj + d_j g_li - d_l g_ij
    s = dg.transpose(1, 0, 2) + dg.transpose(1, 2, 0) - dg
    gamma = 0.5 * np.einsum("kl,lij->kij", ginv, s)
    if d2g is None:
        return gamma, None
    dginv = -np.einsum("kp,apq,ql->akl", ginv, dg, ginv)
    ds = d2g.transpose(0, 2, 1, 3) + d2g.transpose(0, 2, 3, 1) - d2g
    dgamma = 0.5 * np.einsum("akl,lij->akij", dginv, s)
    dgamma += 0.5 * np.einsum("kl,alij->akij", ginv, ds)
    return gamma, dgamma


def christoffel(metric, x):
    """Levi-Civita connection coefficients Gamma^k_ij at x, coordinate frame."""
    gj = evaluate_metric_jets(metric, x)
    g0, dg, _ = metric_channel_arrays(gj)
    gamma, _ = _christoffel_from_channels(g0, dg)
    return gamma


def orthonormal_frame(metric, x, mix=None):
    """Gram-Schmidt orthonormal frame at x, ascending coordinate order.

    ``mix`` (m x m, invertible) replaces the coordinate basis before
    orthonormalization; it exists so tests can verify that the reported
    scalars do not depend on the frame seed.
    """
    gj = evaluate_metric_jets(metric, x)
    g0, _, _ = metric_channel_arrays(gj)
    return _frame_from_values(np.asarray(x, dtype=float), g0, mix)


def _frame_from_values(x, g0, mix=None):
    m = g0.shape[0]
    basis = np.eye(m) if mix is None else np.asarray(mix, dtype=float)
    rows = []
    for a in range(m):
        v = basis[a].copy()
        for e in rows:
            v -= (e @ g0 @ v) * e
        norm = float(v @ g0 @ v)
        if norm <= PD_EPS:
            raise NonPositiveDefiniteMetric(
                "degenerate Gram-Schmidt step %d" % a, step=a
            )
        rows.append(v / np.sqrt(norm))
    frame = np.array(rows)
    return FrameData(base_point=x, frame=frame, coframe=frame @ g0)


def curvature_at(metric, x, mix=None):
    """Full curvature data at x in the deterministic orthonormal frame."""
    gj = evaluate_metric_jets(metric, x)
    g0, dg, d2g = metric_channel_arrays(gj)
    gamma, dgamma = _christoffel_from_channels(g0, dg, d2g)
    # R^l_ijk = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_im Gamma^m_jk
    #           - Gamma^l_jm Gamma^m_ik
    r_up = np.einsum("iljk->ijkl", dgamma) - np.einsum("jlik->ijkl", dgamma)
    r_up += np.einsum("lim,mjk->ijkl", gamma, gamma)
    r_up -= np.einsum("ljm,mik->ijkl", gamma, gamma)
    r_coord = np.einsum("ijkm,ml->ijkl", r_up, g0)
    fr = _frame_from_values(np.asarray(x, dtype=float), g0, mix)
    f = fr.frame
    riemann = np.einsum("ijkl,ai->jkla", r_coord, f)
    riemann = np.einsum("jkla,bj->klab", riemann, f)
    riemann = np.einsum("klab,ck->labc", riemann, f)
    riemann = np.einsum("labc,dl->abcd", riemann, f)
    ricci = np.einsum("akkb->ab", riemann)
    tau = float(np.einsum("abba->", riemann))
    return CurvaturePoint(
        gamma=gamma,
        riemann=riemann,
        ricci=ricci,
        tau=tau,
        norm_ricci_sq=contract_norm_sq(ricci, 2),
        norm_riemann_sq=contract_norm_sq(riemann, 4),
        frame=fr,
    )


def covariant_derivative_11(metric, x, field_fn):
    """Covariant derivative of a (1,1)-tensor field, orthonormal frame.

    ``field_fn(x)`` returns the jet-valued components phi^i_j as a nested
    list.  The result nabla[i,j,k] is g((nabla_{e_i} phi) e_j, e_k).
    """
    gj = evaluate_metric_jets(metric, x)
    g0, dg, _ = metric_channel_arrays(gj)
    gamma, _ = _christoffel_from_channels(g0, dg)
    pj = field_fn(np.asarray(x, dtype=float))
    m = metric.dim
    phi0 = np.empty((m, m))
    dphi = np.empty((m, m, m))
    for i in range(m):
        for j in range(m):
            phi0[i, j] = pj[i][j].value
            dphi[:, i, j] = pj[i][j].grad
    nabla = dphi + np.einsum("iab,bj->aij", gamma, phi0)
    nabla -= np.einsum("baj,ib->aij", gamma, phi0)
    lowered = np.einsum("adb,dc->abc", nabla, g0)
    f = _frame_from_values(np.asarray(x, dtype=float), g0).frame
    return np.einsum("abc,ia,jb,kc->ijk", lowered, f, f, f)


def contract_norm_sq(tensor, rank):
    """Full contraction sum(component^2) of an orthonormal-frame tensor.

    Summed with math.fsum, so the result is exactly rounded and does not
    depend on any enumeration order of the components.
    """
    t = np.asarray(tensor, dtype=float)
    if t.ndim != rank:
        raise RankMismatch(
            "tensor has %d indices, rank argument is %d" % (t.ndim, rank),
            ndim=t.ndim,
            rank=rank,
        )
    if rank > 0 and len(set(t.shape)) != 1:
        raise RankMismatch("tensor indices have unequal ranges %s" % (t.shape,))
    return math.fsum((t.ravel() ** 2).tolist())
