"""Contact metric structures and their defining identities.

A contact metric structure is the quadruple (eta, xi, phi, g): a 1-form,
its Reeb field, a (1,1)-tensor and a compatible metric.  This module
verifies the algebraic compatibility identities, the differential
d eta(X,Y) = g(X, phi Y) (exterior derivative with the 1/2 factor:
d eta(X,Y) = {X eta(Y) - Y eta(X) - eta([X,Y])}/2), the defining covariant
identity of a Sasakian structure, the eta-Einstein decomposition of the
Ricci tensor, and the chain of curvature/phi contractions that reduces
R_ijkl {phi_ki phi_jl - phi_kj phi_il + 2 phi_ji phi_kl} to
6 tau - 6(m-1)^2.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ConsistencyFailure, DimensionTooSmall
from .tensor_calculus import (
    MetricField,
    _christoffel_from_channels,
    _frame_from_values,
    evaluate_metric_jets,
    metric_channel_arrays,
)

DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class ContactStructure:
    """Jet-valued component functions of (eta, xi, phi) over one chart.

    eta(x) and xi(x) return length-m lists of Jet3 (covector respectively
    vector components); phi(x) returns the nested (1,1) components
    phi^i_j as phi(x)[i][j].
    """

    metric: MetricField
    eta: Callable[[np.ndarray], list]
    xi: Callable[[np.ndarray], list]
    phi: Callable[[np.ndarray], list]

    @property
    def dim(self):
        return self.metric.dim


class StructurePointData:
    """All structure fields evaluated at one point (internal helper)."""

    def __init__(self, cs, x):
        x = np.asarray(x, dtype=float)
        m = cs.dim
        gj = evaluate_metric_jets(cs.metric, x)
        g0, dg, d2g = metric_channel_arrays(gj)
        ej = cs.eta(x)
        xj = cs.xi(x)
        pj = cs.phi(x)
        self.x = x
        self.m = m
        self.g0 = g0
        self.dg = dg
        self.d2g = d2g
        self.eta0 = np.array([j.value for j in ej])
        self.d_eta = np.array([j.grad for j in ej]).T  # [a, i] = d_a eta_i
        self.xi0 = np.array([j.value for j in xj])
        self.d_xi = np.array([j.grad for j in xj]).T
        self.phi0 = np.array([[pj[i][j].value for j in range(m)] for i in range(m)])
        self.d_phi = np.empty((m, m, m))
        for i in range(m):
            for j in range(m):
                self.d_phi[:, i, j] = pj[i][j].grad
        self.gamma, _ = _christoffel_from_channels(g0, dg)
        self.frame = _frame_from_values(x, g0)

    # frame-component views used by the orthonormal-frame identities
    @property
    def eta_f(self):
        return self.frame.frame @ self.eta0

    @property
    def phi_f(self):
        # phi_ab = g(phi e_a, e_b) = e_a^j phi^k_j g_kl e_b^l
        f = self.frame.frame
        return np.einsum("aj,kj,kl,bl->ab", f, self.phi0, self.g0, f)

    def nabla_phi(self):
        """Coordinate components (nabla_a phi)^i_j."""
        out = self.d_phi + np.einsum("iab,bj->aij", self.gamma, self.phi0)
        out -= np.einsum("baj,ib->aij", self.gamma, self.phi0)
        return out

    def nabla_xi(self):
        """Coordinate components (nabla_a xi)^i."""
        return self.d_xi + np.einsum("iab,b->ai", self.gamma, self.xi0)


@dataclass(frozen=True)
class ResidualReport:
    """Worst residual per identity over the evaluated points."""

    name: str
    tol: float
    n_points: int
    identities: dict

    @property
    def passed(self):
        return all(v < self.tol for v in self.identities.values())

    def worst(self):
        key = max(self.identities, key=self.identities.get)
        return key, self.identities[key]


def _merge(worst, new):
    for k, v in new.items():
        if k not in worst or v > worst[k]:
            worst[k] = v


def verify_contact_metric(cs, points, tol=DEFAULT_TOL):
    """Check the algebraic compatibility identities and d eta = g(., phi .).

    Residuals reported per identity, maximized over the points:
    eta_from_metric   |eta_i - g_ij xi^j|
    eta_of_xi         |eta(xi) - 1|
    phi_of_xi         |phi xi|
    eta_after_phi     |eta(phi .)|
    phi_square        |phi^2 + Id - xi (x) eta|
    metric_phi_compat |g(phi X, phi Y) - g(X,Y) + eta(X)eta(Y)|
    d_eta             |d eta_ij - g_ik phi^k_j|
    """
    worst = {}
    for x in points:
        d = StructurePointData(cs, x)
        g0, eta0, xi0, phi0 = d.g0, d.eta0, d.xi0, d.phi0
        res = {
            "eta_from_metric": np.abs(eta0 - g0 @ xi0).max(),
            "eta_of_xi": abs(eta0 @ xi0 - 1.0),
            "phi_of_xi": np.abs(phi0 @ xi0).max(),
            "eta_after_phi": np.abs(eta0 @ phi0).max(),
            "phi_square": np.abs(phi0 @ phi0 + np.eye(d.m) - np.outer(xi0, eta0)).max(),
            "metric_phi_compat": np.abs(
                phi0.T @ g0 @ phi0 - g0 + np.outer(eta0, eta0)
            ).max(),
            "d_eta": np.abs(0.5 * (d.d_eta - d.d_eta.T) - g0 @ phi0).max(),
        }
        _merge(worst, res)
    return ResidualReport("contact_metric", tol, len(points), worst)


def verify_sasakian(cs, points, tol=DEFAULT_TOL):
    """Check the defining covariant identities of a Sasakian structure.

    nabla_phi: (nabla_a phi)^i_j = g_aj xi^i - eta_j delta^i_a
    nabla_xi:  (nabla_a xi)^i = -phi^i_a
    """
    worst = {}
    for x in points:
        d = StructurePointData(cs, x)
        m = d.m
        target = np.einsum("aj,i->aij", d.g0, d.xi0)
        target -= np.einsum("j,ai->aij", d.eta0, np.eye(m))
        res = {
            "nabla_phi": np.abs(d.nabla_phi() - target).max(),
            "nabla_xi": np.abs(d.nabla_xi() + d.phi0.T).max(),
        }
        _merge(worst, res)
    return ResidualReport("sasakian", tol, len(points), worst)


def verify_structure_identities(cs, curv, point, tol=DEFAULT_TOL):
    """Orthonormal-frame identities tying the structure to its curvature.

    nabla_phi_frame  nabla_i phi_jk = d_ij eta_k - eta_j d_ik
    nabla_eta_frame  nabla_i eta_j = -phi_ij
    riemann_eta      R_ijkl eta_k = eta_j d_il - eta_i d_jl
    ricci_reeb       rho(xi, xi) = m - 1
    """
    d = StructurePointData(cs, point)
    m, f = d.m, d.frame.frame
    eta_f, phi_f = d.eta_f, d.phi_f

    nphi = d.nabla_phi()
    nphi_low = np.einsum("adb,dc->abc", nphi, d.g0)
    nphi_frame = np.einsum("abc,ia,jb,kc->ijk", nphi_low, f, f, f)
    eye = np.eye(m)
    target = np.einsum("ij,k->ijk", eye, eta_f) - np.einsum("j,ik->ijk", eta_f, eye)

    nxi = d.nabla_xi()
    neta_frame = np.einsum("ac,cb,ia,jb->ij", nxi, d.g0, f, f)

    r_eta = np.einsum("ijkl,k->ijl", curv.riemann, eta_f)
    r_eta_target = np.einsum("j,il->ijl", eta_f, eye) - np.einsum("i,jl->ijl", eta_f, eye)

    res = {
        "nabla_phi_frame": np.abs(nphi_frame - target).max(),
        "nabla_eta_frame": np.abs(neta_frame + phi_f).max(),
        "riemann_eta": np.abs(r_eta - r_eta_target).max(),
        "ricci_reeb": abs(float(eta_f @ curv.ricci @ eta_f) - (m - 1)),
    }
    return ResidualReport("structure_identities", tol, 1, res)


@dataclass(frozen=True)
class EtaEinsteinReport:
    """Decomposition rho = alpha g + beta eta (x) eta and its residual norm."""

    alpha: float
    beta: float
    s_norm_sq: float
    gamma: float
    is_eta_einstein: bool
    tau: float
    advisory: bool = False


def eta_einstein_decompose(curv, cs, point, tol=DEFAULT_TOL, advisory=False):
    """Split the Ricci tensor against the eta-Einstein model.

    alpha = tau/(m-1) - 1 and beta = m - tau/(m-1) are forced by tracing
    the model against g and eta (x) eta.  The squared norm of the deviation
    rho - alpha g - beta eta (x) eta is computed both componentwise and
    through the closed form |rho|^2 - 2 alpha tau + gamma with
    gamma = m alpha^2 + 2 alpha beta + beta^2 - 2(m-1) beta; the closed
    form substitutes rho(xi,xi) = m-1, so that substitution's deviation is
    credited before the two routes are required to agree.
    """
    m = curv.m
    if m < 5 and not advisory:
        raise DimensionTooSmall(
            "alpha, beta need not be constant below dimension 5 "
            "(pass advisory=True for an advisory report)",
            m=m,
        )
    d = StructurePointData(cs, point)
    eta_f = d.eta_f
    tau = curv.tau
    alpha = tau / (m - 1) - 1.0
    beta = m - tau / (m - 1)
    gamma = m * alpha**2 + 2 * alpha * beta + beta**2 - 2 * (m - 1) * beta
    s = curv.ricci - alpha * np.eye(m) - beta * np.outer(eta_f, eta_f)
    direct = float((s**2).sum())
    closed = curv.norm_ricci_sq - 2 * alpha * tau + gamma
    reeb_gap = abs(2 * beta * (float(eta_f @ curv.ricci @ eta_f) - (m - 1)))
    scale = max(1.0, curv.norm_ricci_sq)
    if abs(direct - closed) > tol * scale + reeb_gap * (1 + tol):
        raise ConsistencyFailure(
            "componentwise and closed-form deviation norms disagree",
            direct=direct,
            closed=closed,
            reeb_gap=reeb_gap,
        )
    return EtaEinsteinReport(
        alpha=alpha,
        beta=beta,
        s_norm_sq=direct,
        gamma=gamma,
        is_eta_einstein=bool(direct < tol * scale),
        tau=tau,
        advisory=m < 5,
    )


@dataclass(frozen=True)
class ChainLink:
    lhs: float
    rhs: float

    @property
    def residual(self):
        return abs(self.lhs - self.rhs)


@dataclass(frozen=True)
class ChainReport:
    """Every link of the curvature/phi contraction chain at one point."""

    tol: float
    links: dict
    final_value: float
    expected_final: float

    @property
    def passed(self):
        return all(l.residual < self.tol for l in self.links.values())


def phi_contraction_chain(curv, cs, point, tol=DEFAULT_TOL):
    """Evaluate the contraction chain reducing the double phi trace of R.

    Each link is an independent identity on a Sasakian manifold; the chain
    ends with R_ijkl {phi_ki phi_jl - phi_kj phi_il + 2 phi_ji phi_kl}
    = 6 tau - 6(m-1)^2.
    """
    d = StructurePointData(cs, point)
    m = d.m
    r = curv.riemann
    rho = curv.ricci
    tau = curv.tau
    phi = d.phi_f
    eta = d.eta_f

    a_kijl = float(np.einsum("ijkl,ki,jl->", r, phi, phi))
    b_kjil = float(np.einsum("ijkl,kj,il->", r, phi, phi))
    c_jikl = float(np.einsum("ijkl,ji,kl->", r, phi, phi))
    c_ijkl = float(np.einsum("ijkl,ij,kl->", r, phi, phi))
    combined = a_kijl - b_kjil + 2 * c_jikl

    # matrix identity -R_lija phi_ai - rho_la phi_ja = (m-2) phi_lj
    ricci_id = -np.einsum("lija,ai->lj", r, phi) - np.einsum("la,ja->lj", rho, phi)
    traced = float(np.einsum("lj,lj->", ricci_id, phi))
    phi_norm_sq = float((phi**2).sum())

    half_contraction = 0.5 * float(np.einsum("jkil,jk,il->", r, phi, phi))
    reduction_mid = -float(rho.trace()) + float(eta @ rho @ eta) + (m - 1) * (m - 2)

    links = {
        "antisym_rewrite": ChainLink(a_kijl, -0.5 * float(np.einsum("kijl,ki,jl->", r, phi, phi))),
        "antisym_rewrite_mixed": ChainLink(-b_kjil, -0.5 * float(np.einsum("jkil,jk,il->", r, phi, phi))),
        "pair_antisymmetry": ChainLink(c_jikl, -c_ijkl),
        "three_term_combination": ChainLink(combined, -3.0 * c_ijkl),
        "ricci_identity_matrix": ChainLink(
            float(np.abs(ricci_id - (m - 2) * phi).max()), 0.0
        ),
        "ricci_identity_traced": ChainLink(traced, (m - 2) * phi_norm_sq),
        "phi_norm": ChainLink(phi_norm_sq, float(m - 1)),
        "traced_reduction": ChainLink(traced, (m - 1) * (m - 2)),
        "phi_ricci_reduction": ChainLink(
            -float(np.einsum("lija,ai,lj->", r, phi, phi)), -tau + (m - 1) ** 2
        ),
        "reduction_closed_form": ChainLink(reduction_mid, -tau + (m - 1) ** 2),
        "half_contraction": ChainLink(half_contraction, -tau + (m - 1) ** 2),
        "final_contraction": ChainLink(combined, 6 * tau - 6.0 * (m - 1) ** 2),
    }
    return ChainReport(
        tol=tol,
        links=links,
        final_value=combined,
        expected_final=6 * tau - 6.0 * (m - 1) ** 2,
    )
