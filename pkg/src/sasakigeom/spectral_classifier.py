"""Recovery of geometric integrals from heat coefficients and the
spectral classification of eta-Einstein and space-form structure.

Two compact Sasakian manifolds with equal p-form spectra (p = 0, 1, 2)
share the five integrated invariants {1[M], tau[M], tau^2[M], |rho|^2[M],
|R|^2[M]}; "isospectral input" is operationalized here as equality of
that invariant vector.  The classifiers replay the transfer argument: if
the left space is eta-Einstein (or a space form of curvature c), equality
of the invariant vectors forces the corresponding deviation integral of
the right space to vanish, so the property transfers with the same
constants.

Comparison tiers: dimension gates at order a0; the scalar-curvature
constant gates at order a2; the remaining densities gate at order a4.
Volumes are computed and reported but do not gate (densities are compared
per unit volume).  A false claim about the left space raises
HypothesisViolation carrying the deviation residual.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConsistencyFailure,
    DimensionTooSmall,
    HypothesisViolation,
    NoncompactSpace,
    SingularSystem,
    ZeroVolume,
)
from .heat_invariants import heat_coefficients
from .space_forms import SpaceFormParams
from .tensor_calculus import curvature_at

DEFAULT_TOL = 1e-8

VERDICT_KINDS = frozenset(
    {
        "matched",
        "mismatch_at_a0",
        "mismatch_at_a2",
        "mismatch_at_a4",
        "eta_einstein_transferred",
        "space_form_transferred",
    }
)


@dataclass(frozen=True)
class InvariantVector:
    """The five spectrally determined integrals plus the dimension."""

    m: int
    vol: float
    tau_int: float
    tau2_int: float
    rho2_int: float
    riem2_int: float

    def __post_init__(self):
        if not self.vol > 0:
            raise ZeroVolume("volume must be positive, got %r" % (self.vol,))
        slack = 1e-8 * max(1.0, abs(self.tau2_int) * self.vol, self.tau_int**2)
        if self.tau2_int * self.vol < self.tau_int**2 - slack:
            raise ConsistencyFailure(
                "Cauchy-Schwarz violated: tau^2[M] vol < tau[M]^2",
                tau2_int=self.tau2_int,
                tau_int=self.tau_int,
                vol=self.vol,
            )

    @property
    def tau_mean(self):
        return self.tau_int / self.vol


@dataclass(frozen=True)
class Verdict:
    kind: str
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in VERDICT_KINDS:
            raise ValueError("unknown verdict kind %r" % (self.kind,))

    @property
    def transferred(self):
        return self.kind.endswith("_transferred")


def geometric_invariant_vector(space):
    """Invariant vector straight from pointwise curvature times volume."""
    if space.total_volume is None:
        raise NoncompactSpace("invariant vector needs a finite volume",
                              kind=space.kind)
    curv = curvature_at(space.structure.metric, space.base_point)
    vol = space.total_volume
    return InvariantVector(
        m=space.m,
        vol=vol,
        tau_int=curv.tau * vol,
        tau2_int=curv.tau**2 * vol,
        rho2_int=curv.norm_ricci_sq * vol,
        riem2_int=curv.norm_riemann_sq * vol,
    )


def heat_invariant_vector(space, constants):
    """Invariant vector recovered by inverting the heat-coefficient relations.

    ``constants`` maps p to the UniversalConstants row of the space's
    dimension; rows for p = 1 and p = 2 are required.
    """
    if space.total_volume is None:
        raise NoncompactSpace("invariant vector needs a finite volume",
                              kind=space.kind)
    m = space.m
    u1, u2 = constants[1], constants[2]
    if u1.m != m or u2.m != m:
        raise SingularSystem(
            "constants table is for m = %d, space has m = %d" % (u1.m, m)
        )
    scale = (4.0 * math.pi) ** (m / 2.0)
    a_00 = heat_coefficients(space, 0)
    a_01 = heat_coefficients(space, 1)
    a_02 = heat_coefficients(space, 2)
    vol = scale * a_00.a0
    tau_int = scale * (m * a_00.a2 - a_01.a2)
    tau2_int = tau_int**2 / vol
    matrix = np.array([[u1.c2, u1.c3], [u2.c2, u2.c3]])
    det = float(np.linalg.det(matrix))
    if abs(det) < 1e-10 * max(1.0, float(np.abs(matrix).max()) ** 2):
        raise SingularSystem(
            "(|rho|^2, |R|^2) coefficient matrix is singular for m = %d" % m,
            det=det,
        )
    rhs = np.array(
        [
            scale * a_01.a4 - u1.c1 * tau2_int,
            scale * a_02.a4 - u2.c1 * tau2_int,
        ]
    )
    rho2_int, riem2_int = np.linalg.solve(matrix, rhs)
    return InvariantVector(
        m=m,
        vol=vol,
        tau_int=tau_int,
        tau2_int=tau2_int,
        rho2_int=float(rho2_int),
        riem2_int=float(riem2_int),
    )


def invariant_vector(space, constants, tol=DEFAULT_TOL):
    """Invariant vector computed two ways; the routes must agree.

    Returns the geometric route; raises ConsistencyFailure if the
    heat-coefficient inversion disagrees beyond ``tol`` (relative).
    """
    geo = geometric_invariant_vector(space)
    heat = heat_invariant_vector(space, constants)
    pairs = [
        ("vol", geo.vol, heat.vol),
        ("tau_int", geo.tau_int, heat.tau_int),
        ("tau2_int", geo.tau2_int, heat.tau2_int),
        ("rho2_int", geo.rho2_int, heat.rho2_int),
        ("riem2_int", geo.riem2_int, heat.riem2_int),
    ]
    for name, g, h in pairs:
        if abs(g - h) > tol * max(1.0, abs(g)):
            raise ConsistencyFailure(
                "geometric and heat-coefficient routes disagree on %s" % name,
                field=name,
                geometric=g,
                heat=h,
            )
    return geo


def recover_tau_from_a2(a2_p0, a2_p1, vol, m):
    """Scalar curvature constant from the p = 0 and p = 1 a_2 coefficients."""
    if not vol > 0:
        raise ZeroVolume("volume must be positive, got %r" % (vol,))
    return (4.0 * math.pi) ** (m / 2.0) / vol * (m * a2_p0 - a2_p1)


def _compare_tiers(inv1, inv2, tol):
    """First mismatching tier as a Verdict, or None if all densities agree."""
    details = {
        "m_1": inv1.m,
        "m_2": inv2.m,
        "vol_1": inv1.vol,
        "vol_2": inv2.vol,
        "vol_equal": bool(
            abs(inv1.vol - inv2.vol) <= tol * max(1.0, abs(inv1.vol))
        ),
    }
    if inv1.m != inv2.m:
        details["first_failing"] = "m"
        return Verdict("mismatch_at_a0", details)
    t1, t2 = inv1.tau_mean, inv2.tau_mean
    if abs(t1 - t2) > tol * max(1.0, abs(t1)):
        details.update({"first_failing": "tau", "tau_1": t1, "tau_2": t2})
        return Verdict("mismatch_at_a2", details)
    for name in ("tau2_int", "rho2_int", "riem2_int"):
        d1 = getattr(inv1, name) / inv1.vol
        d2 = getattr(inv2, name) / inv2.vol
        if abs(d1 - d2) > tol * max(1.0, abs(d1)):
            details.update(
                {
                    "first_failing": name + "_density",
                    name + "_density_1": d1,
                    name + "_density_2": d2,
                }
            )
            return Verdict("mismatch_at_a4", details)
    return None


def _eta_einstein_deviation(inv, alpha, beta):
    """Integral of |rho - alpha g - beta eta (x) eta|^2 from the invariants."""
    m = inv.m
    gamma = m * alpha**2 + 2 * alpha * beta + beta**2 - 2 * (m - 1) * beta
    return inv.rho2_int - 2.0 * alpha * inv.tau_int + gamma * inv.vol, gamma


def classify_eta_einstein(inv1, inv2, alpha1, beta1, tol=DEFAULT_TOL):
    """Transfer the eta-Einstein property from inv1 to inv2.

    inv1 must honestly be eta-Einstein with constants (alpha1, beta1):
    the constants must match tau_1/(m-1) - 1 and m - tau_1/(m-1) and the
    deviation integral of inv1 must vanish, else HypothesisViolation.
    """
    m = inv1.m
    if m < 5 or inv2.m < 5:
        raise DimensionTooSmall(
            "classification needs dimension >= 5", m1=m, m2=inv2.m
        )
    tau1 = inv1.tau_mean
    alpha_expected = tau1 / (m - 1) - 1.0
    beta_expected = m - tau1 / (m - 1)
    if (
        abs(alpha1 - alpha_expected) > tol * max(1.0, abs(alpha_expected))
        or abs(beta1 - beta_expected) > tol * max(1.0, abs(beta_expected))
    ):
        raise HypothesisViolation(
            "claimed coefficients (%r, %r) are not the trace-forced (%r, %r)"
            % (alpha1, beta1, alpha_expected, beta_expected),
            alpha_claimed=alpha1,
            beta_claimed=beta1,
            alpha_expected=alpha_expected,
            beta_expected=beta_expected,
        )
    s1, gamma1 = _eta_einstein_deviation(inv1, alpha1, beta1)
    scale1 = max(1.0, inv1.rho2_int / inv1.vol)
    if abs(s1) > tol * scale1 * inv1.vol:
        raise HypothesisViolation(
            "left space is not eta-Einstein: deviation integral %.6e" % s1,
            residual_integral=s1,
            residual_density=s1 / inv1.vol,
        )
    mismatch = _compare_tiers(inv1, inv2, tol)
    if mismatch is not None:
        return mismatch
    tau2 = inv2.tau_mean
    alpha2 = tau2 / (m - 1) - 1.0
    beta2 = m - tau2 / (m - 1)
    s2, gamma2 = _eta_einstein_deviation(inv2, alpha2, beta2)
    details = {
        "alpha": alpha2,
        "beta": beta2,
        "gamma": gamma2,
        "alpha_matches_left": bool(abs(alpha2 - alpha1) <= tol * max(1.0, abs(alpha1))),
        "deviation_integral_1": s1,
        "deviation_integral_2": s2,
        "deviation_density_2": s2 / inv2.vol,
        "vol_1": inv1.vol,
        "vol_2": inv2.vol,
    }
    scale2 = max(1.0, inv2.rho2_int / inv2.vol)
    if abs(s2) <= tol * scale2 * inv2.vol:
        return Verdict("eta_einstein_transferred", details)
    return Verdict("matched", details)


def classify_space_form(inv1, inv2, c, tol=DEFAULT_TOL):
    """Transfer constant phi-sectional curvature c from inv1 to inv2.

    The deviation integral is |R|^2[M] - 4c tau[M] + d vol with the
    closed-form constant d of the comparison tensor; a nonzero value on
    inv1 means the claim about the left space is false and raises
    HypothesisViolation carrying the residual.
    """
    m = inv1.m
    if m < 5 or inv2.m < 5:
        raise DimensionTooSmall(
            "classification needs dimension >= 5", m1=m, m2=inv2.m
        )
    params = SpaceFormParams.from_dimension(c, m)
    r1 = inv1.riem2_int - 4.0 * c * inv1.tau_int + params.d * inv1.vol
    scale1 = max(1.0, inv1.riem2_int / inv1.vol)
    if abs(r1) > tol * scale1 * inv1.vol:
        raise HypothesisViolation(
            "left space is not a space form of curvature %r: "
            "deviation integral %.6e" % (c, r1),
            c=c,
            residual_integral=r1,
            residual_density=r1 / inv1.vol,
        )
    mismatch = _compare_tiers(inv1, inv2, tol)
    if mismatch is not None:
        return mismatch
    r2 = inv2.riem2_int - 4.0 * c * inv2.tau_int + params.d * inv2.vol
    details = {
        "c": c,
        "d": params.d,
        "alpha": params.alpha,
        "beta": params.beta,
        "tau": params.tau,
        "deviation_integral_1": r1,
        "deviation_integral_2": r2,
        "deviation_density_2": r2 / inv2.vol,
        "vol_1": inv1.vol,
        "vol_2": inv2.vol,
    }
    scale2 = max(1.0, inv2.riem2_int / inv2.vol)
    if abs(r2) <= tol * scale2 * inv2.vol:
        return Verdict("space_form_transferred", details)
    return Verdict("matched", details)
