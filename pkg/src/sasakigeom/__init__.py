"""Verification toolkit for the spectral geometry of Sasakian model spaces.

Builds explicit contact metric model spaces (sphere, its transverse
homotheties, the Heisenberg group), checks every structure and curvature
identity they satisfy, computes the a0/a2/a4 heat-trace invariants of the
p-form Laplacians, and replays the classification argument that
eta-Einstein and space-form structure are determined by those invariants.
"""

__version__ = "0.1.0"

from .contact_sasaki import (
    ChainReport,
    ContactStructure,
    EtaEinsteinReport,
    ResidualReport,
    eta_einstein_decompose,
    phi_contraction_chain,
    verify_contact_metric,
    verify_sasakian,
    verify_structure_identities,
)
from .heat_invariants import (
    AlgebraicCurvature,
    HeatCoefficients,
    HeatTraceFit,
    LaplaceTypeData,
    UniversalConstants,
    heat_coefficients,
    heat_density,
    heat_trace_fit,
    independence_check,
    random_algebraic_curvature,
    sphere_spectrum,
    universal_constants,
    weitzenboeck_data,
)
from .jets import BACKEND, Jet3, seed_variables
from .space_forms import (
    ModelSpace,
    SpaceFormParams,
    build_heisenberg,
    build_standard_sphere,
    d_homothetic_deform,
    phi_sectional,
    space_form_curvature_tensor,
    space_form_deviation_norm_sq,
    sphere_metric,
)
from .spectral_classifier import (
    InvariantVector,
    Verdict,
    classify_eta_einstein,
    classify_space_form,
    geometric_invariant_vector,
    heat_invariant_vector,
    invariant_vector,
    recover_tau_from_a2,
)
from .tensor_calculus import (
    CurvaturePoint,
    FrameData,
    MetricField,
    christoffel,
    contract_norm_sq,
    covariant_derivative_11,
    curvature_at,
    orthonormal_frame,
)

__all__ = [name for name in dir() if not name.startswith("_")]
