"""Explicit Sasakian model spaces and the space-form comparison tensors.

Three constructions: the unit sphere S^(2n+1) in a graph chart with the
structure induced from the ambient complex coordinates (phi-sectional
curvature 1), its transverse homotheties g -> a g + a(a-1) eta (x) eta
(curvature (c+3)/a - 3), and the Heisenberg group R^(2n+1) with
eta = (dz - sum y_i dx_i)/2 (curvature -3).

For a structure of constant phi-sectional curvature c the curvature
tensor is an explicit algebraic expression K in (g, eta, phi, c); the
deviation R - K and its closed-form norm |R|^2 - 4 c tau + d are what the
classifier consumes.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .contact_sasaki import ContactStructure, StructurePointData
from .errors import (
    ConsistencyFailure,
    DegenerateDirection,
    DimensionTooSmall,
    EvaluationDomain,
    NonPositiveParameter,
)
from .jets import Jet3, seed_variables
from .tensor_calculus import MetricField


@dataclass(frozen=True)
class SpaceFormParams:
    """Closed-form constants of an m-dimensional space form of curvature c."""

    c: float
    alpha: float
    beta: float
    tau: float
    d: float

    @classmethod
    def from_dimension(cls, c, m):
        alpha = 0.25 * ((m + 1) * c + 3 * m - 5)
        beta = -0.25 * (m + 1) * (c - 1)
        tau = 0.25 * (m - 1) * ((m + 1) * c + 3 * m - 1)
        d = (
            0.5 * (m - 1) * (m + 1) * c**2
            + (m - 1) * (3 * m - 1) * c
            - 0.5 * (m - 1) * (3 * m - 1)
        )
        return cls(c=c, alpha=alpha, beta=beta, tau=tau, d=d)

    @classmethod
    def riemann_norm_sq(cls, c, m):
        return 0.5 * (m - 1) * ((m + 1) * c**2 + 3 * m - 1)


@dataclass(frozen=True)
class ModelSpace:
    """A homogeneous Sasakian model addressed by (kind, n, a)."""

    kind: str  # standard_sphere | deformed_sphere | heisenberg
    n: int
    a: float
    structure: ContactStructure
    base_point: np.ndarray
    total_volume: Optional[float]
    phi_sectional_c: float

    @property
    def m(self):
        return 2 * self.n + 1

    def sample_points(self, count, seed):
        """Deterministic chart points, comfortably inside the domain."""
        rng = np.random.default_rng(seed)
        u = rng.uniform(-1.0, 1.0, size=(count, self.m))
        if self.kind == "heisenberg":
            return [0.8 * row for row in u]
        return [0.35 * row / math.sqrt(self.m) for row in u]


# ---------------------------------------------------------------------------
# sphere


def _sphere_chart_guard(x):
    s = float(np.dot(x, x))
    if s >= 1.0:
        raise EvaluationDomain(
            "graph chart of the sphere needs |x| < 1, got |x|^2 = %.6f" % s,
            norm_sq=s,
        )


def sphere_metric(m):
    """Graph-chart metric of the unit m-sphere over the open unit ball."""

    def components(x):
        _sphere_chart_guard(x)
        xs = seed_variables(x)
        r = (1.0 - sum(xi * xi for xi in xs)).reciprocal()
        g = [[xs[i] * xs[j] * r for j in range(m)] for i in range(m)]
        for i in range(m):
            g[i][i] = g[i][i] + 1.0
        return g

    return MetricField(dim=m, components=components)


def _sphere_ambient(x, m):
    """Jets of the ambient embedding P(x) = (x, w), w = sqrt(1 - |x|^2)."""
    xs = seed_variables(x)
    w = (1.0 - sum(xi * xi for xi in xs)).sqrt()
    return xs + [w]


def _ambient_j(vec):
    """Ambient complex structure on consecutive coordinate pairs."""
    out = []
    for k in range(0, len(vec), 2):
        out.append(-1.0 * vec[k + 1])
        out.append(vec[k])
    return out


def build_standard_sphere(n):
    """Unit sphere S^(2n+1) with its standard Sasakian structure."""
    if n < 2:
        raise DimensionTooSmall("need n >= 2 so that m = 2n+1 >= 5", n=n)
    m = 2 * n + 1
    metric = sphere_metric(m)

    def xi_components(x):
        _sphere_chart_guard(x)
        p = _sphere_ambient(x, m)
        return [-1.0 * v for v in _ambient_j(p)][:m]

    def eta_components(x):
        gj = metric.components(x)
        xij = xi_components(x)
        return [sum(gj[i][j] * xij[j] for j in range(m)) for i in range(m)]

    def phi_components(x):
        _sphere_chart_guard(x)
        p = _sphere_ambient(x, m)
        w = p[m]
        winv = w.reciprocal()
        phi = [[None] * m for _ in range(m)]
        for j in range(m):
            # ambient basis vector of the chart direction j, then its J-image
            dp = [Jet3.constant(m, 1.0 if idx == j else 0.0) for idx in range(m)]
            dp.append(-1.0 * p[j] * winv)
            a = _ambient_j(dp)
            pairing = sum(a[idx] * p[idx] for idx in range(m + 1))
            for i in range(m):
                phi[i][j] = a[i] - pairing * p[i]
        return phi

    structure = ContactStructure(
        metric=metric, eta=eta_components, xi=xi_components, phi=phi_components
    )
    volume = 2.0 * math.pi ** (n + 1) / math.factorial(n)
    return ModelSpace(
        kind="standard_sphere",
        n=n,
        a=1.0,
        structure=structure,
        base_point=np.zeros(m),
        total_volume=volume,
        phi_sectional_c=1.0,
    )


# ---------------------------------------------------------------------------
# Heisenberg group


def build_heisenberg(n):
    """Heisenberg group R^(2n+1), the noncompact model of curvature -3.

    Coordinates (x_1..x_n, y_1..y_n, z); eta = (dz - sum y_i dx_i)/2,
    xi = 2 d/dz, metric eta (x) eta + (dx^2 + dy^2)/4.
    """
    if n < 2:
        raise DimensionTooSmall("need n >= 2 so that m = 2n+1 >= 5", n=n)
    m = 2 * n + 1
    z = 2 * n

    def metric_components(x):
        xs = seed_variables(x)
        zero = Jet3.constant(m, 0.0)
        g = [[zero for _ in range(m)] for _ in range(m)]
        for i in range(n):
            yi = xs[n + i]
            for j in range(n):
                g[i][j] = 0.25 * (yi * xs[n + j])
            g[i][i] = g[i][i] + 0.25
            g[n + i][n + i] = Jet3.constant(m, 0.25)
            g[i][z] = -0.25 * yi
            g[z][i] = g[i][z]
        g[z][z] = Jet3.constant(m, 0.25)
        return g

    metric = MetricField(dim=m, components=metric_components, volume_density=2.0**-m)

    def eta_components(x):
        xs = seed_variables(x)
        out = [Jet3.constant(m, 0.0) for _ in range(m)]
        for i in range(n):
            out[i] = -0.5 * xs[n + i]
        out[z] = Jet3.constant(m, 0.5)
        return out

    def xi_components(x):
        out = [Jet3.constant(m, 0.0) for _ in range(m)]
        out[z] = Jet3.constant(m, 2.0)
        return out

    def phi_components(x):
        xs = seed_variables(x)
        zero = Jet3.constant(m, 0.0)
        phi = [[zero for _ in range(m)] for _ in range(m)]
        for i in range(n):
            phi[n + i][i] = Jet3.constant(m, -1.0)
            phi[i][n + i] = Jet3.constant(m, 1.0)
            phi[z][n + i] = xs[n + i]
        return phi

    structure = ContactStructure(
        metric=metric, eta=eta_components, xi=xi_components, phi=phi_components
    )
    return ModelSpace(
        kind="heisenberg",
        n=n,
        a=1.0,
        structure=structure,
        base_point=np.zeros(m),
        total_volume=None,
        phi_sectional_c=-3.0,
    )


# ---------------------------------------------------------------------------
# transverse homothety


def d_homothetic_deform(space, a):
    """Rescale eta -> a eta, xi -> xi/a, g -> a g + a(a-1) eta (x) eta.

    Preserves the Sasakian condition and sends phi-sectional curvature c
    to (c+3)/a - 3; sphere volumes scale by a^(n+1).
    """
    if not a > 0:
        raise NonPositiveParameter("deformation parameter must be > 0", a=a)
    base = space.structure
    m = space.m
    coeff = a * (a - 1.0)

    def metric_components(x):
        gj = base.metric.components(x)
        ej = base.eta(x)
        return [
            [a * gj[i][j] + coeff * (ej[i] * ej[j]) for j in range(m)]
            for i in range(m)
        ]

    density = None
    if base.metric.volume_density is not None:
        density = base.metric.volume_density * a ** (space.n + 1)
    metric = MetricField(dim=m, components=metric_components, volume_density=density)

    def eta_components(x):
        return [a * e for e in base.eta(x)]

    def xi_components(x):
        return [(1.0 / a) * v for v in base.xi(x)]

    structure = ContactStructure(
        metric=metric, eta=eta_components, xi=xi_components, phi=base.phi
    )
    volume = None
    if space.total_volume is not None:
        volume = space.total_volume * a ** (space.n + 1)
    kind = "heisenberg" if space.kind == "heisenberg" else "deformed_sphere"
    return ModelSpace(
        kind=kind,
        n=space.n,
        a=space.a * a,
        structure=structure,
        base_point=space.base_point,
        total_volume=volume,
        phi_sectional_c=(space.phi_sectional_c + 3.0) / a - 3.0,
    )


# ---------------------------------------------------------------------------
# comparison tensors


def space_form_curvature_components(eta, phi, c):
    """Model curvature tensor of curvature c from orthonormal (eta, phi).

    Three blocks: constant-curvature, double-phi, and the eta block; the
    result carries all algebraic curvature symmetries.
    """
    m = len(eta)
    eye = np.eye(m)
    k = 0.25 * (c + 3.0) * (
        np.einsum("jk,il->ijkl", eye, eye) - np.einsum("ik,jl->ijkl", eye, eye)
    )
    k += 0.25 * (c - 1.0) * (
        np.einsum("ki,jl->ijkl", phi, phi)
        - np.einsum("kj,il->ijkl", phi, phi)
        + 2.0 * np.einsum("ji,kl->ijkl", phi, phi)
    )
    k += 0.25 * (c - 1.0) * (
        np.einsum("i,k,jl->ijkl", eta, eta, eye)
        - np.einsum("j,k,il->ijkl", eta, eta, eye)
        + np.einsum("ik,j,l->ijkl", eye, eta, eta)
        - np.einsum("jk,i,l->ijkl", eye, eta, eta)
    )
    return k


def space_form_curvature_tensor(cs, point, c):
    """Model curvature tensor of the structure at a point, orthonormal frame."""
    d = StructurePointData(cs, point)
    return space_form_curvature_components(d.eta_f, d.phi_f, c)


def norm_sq_closed_form(c, m):
    """Closed form of |K|^2 on a Sasakian structure."""
    return 0.5 * (m - 1) * ((m + 1) * c**2 + 3 * m - 1)


def riemann_dot_model_closed_form(c, m, tau):
    """Closed form of the full contraction R . K on a Sasakian structure."""
    return 2.0 * c * tau - 0.5 * (m - 1) * (3 * m - 1) * (c - 1.0)


def space_form_deviation_norm_sq(curv, cs, point, c, tol=1e-8):
    """|R - K|^2 by brute-force contraction, cross-checked two more ways.

    The closed form |R|^2 - 4 c tau + d, the intermediate contraction
    R . K = 2 c tau - (m-1)(3m-1)(c-1)/2 and the double-phi trace it
    consumes must all agree with the brute-force contractions; any
    disagreement signals a convention bug and raises ConsistencyFailure.
    Returns the brute-force value.
    """
    m = curv.m
    d = StructurePointData(cs, point)
    k = space_form_curvature_components(d.eta_f, d.phi_f, c)
    t = curv.riemann - k
    brute = float((t**2).sum())
    params = SpaceFormParams.from_dimension(c, m)
    closed = curv.norm_riemann_sq - 4.0 * c * curv.tau + params.d
    scale = max(1.0, curv.norm_riemann_sq, abs(closed))
    rk = float(np.einsum("ijkl,ijkl->", curv.riemann, k))
    rk_closed = riemann_dot_model_closed_form(c, m, curv.tau)
    phi_trace = float(
        np.einsum("ijkl,ki,jl->", curv.riemann, d.phi_f, d.phi_f)
        - np.einsum("ijkl,kj,il->", curv.riemann, d.phi_f, d.phi_f)
        + 2.0 * np.einsum("ijkl,ji,kl->", curv.riemann, d.phi_f, d.phi_f)
    )
    phi_trace_closed = 6.0 * curv.tau - 6.0 * (m - 1) ** 2
    checks = {
        "deviation_norm": (brute, closed),
        "riemann_dot_model": (rk, rk_closed),
        "double_phi_trace": (phi_trace, phi_trace_closed),
    }
    for name, (got, want) in checks.items():
        if abs(got - want) > tol * scale:
            raise ConsistencyFailure(
                "%s: brute-force %r vs closed form %r" % (name, got, want),
                check=name,
                brute=got,
                closed=want,
            )
    return brute


def phi_sectional(curv, cs, point, direction):
    """Sectional curvature of the plane spanned by X and phi X.

    ``direction`` is a coordinate-frame vector; its component along the
    Reeb field is projected away and the remainder normalized.  On a space
    form the value is c for every admissible direction.
    """
    d = StructurePointData(cs, point)
    x_f = d.frame.coframe @ np.asarray(direction, dtype=float)
    eta_f = d.eta_f
    y = x_f - (x_f @ eta_f) * eta_f
    norm = float(np.sqrt(y @ y))
    if norm < 1e-10:
        raise DegenerateDirection(
            "direction is parallel to the Reeb field", norm=norm
        )
    y = y / norm
    py = y @ d.phi_f
    return float(np.einsum("ijkl,i,j,k,l->", curv.riemann, y, py, py, y))
