"""Invariant-vector recovery and the classification pipeline."""

import math

import numpy as np
import pytest

from sasakigeom import (
    InvariantVector,
    classify_eta_einstein,
    classify_space_form,
    geometric_invariant_vector,
    heat_coefficients,
    heat_invariant_vector,
    invariant_vector,
    recover_tau_from_a2,
    universal_constants,
)
from sasakigeom.errors import (
    ConsistencyFailure,
    DimensionTooSmall,
    HypothesisViolation,
    NoncompactSpace,
    ZeroVolume,
)

PI3 = math.pi**3


@pytest.fixture(scope="module")
def tables():
    return {
        5: {p: universal_constants(5, p) for p in (1, 2)},
        7: {p: universal_constants(7, p) for p in (1, 2)},
    }


def test_invariant_vector_s5(spaces, tables):
    iv = invariant_vector(spaces["s5"], tables[5])
    assert iv.m == 5
    assert iv.vol == pytest.approx(PI3, rel=1e-12)
    assert iv.tau_int == pytest.approx(20 * PI3, rel=1e-10)
    assert iv.tau2_int == pytest.approx(400 * PI3, rel=1e-10)
    assert iv.rho2_int == pytest.approx(80 * PI3, rel=1e-10)
    assert iv.riem2_int == pytest.approx(40 * PI3, rel=1e-10)


def test_invariant_vector_routes_agree_on_all_compact_models(spaces, tables):
    for key in ("s5", "s7", "def_half", "def2", "def3"):
        space = spaces[key]
        table = tables[space.m]
        geo = geometric_invariant_vector(space)
        heat = heat_invariant_vector(space, table)
        for name in ("vol", "tau_int", "tau2_int", "rho2_int", "riem2_int"):
            g, h = getattr(geo, name), getattr(heat, name)
            assert abs(g - h) < 1e-8 * max(1.0, abs(g)), (key, name)
        invariant_vector(space, table)  # the combined route must not raise


def test_invariant_vector_deformed_tau(spaces, tables):
    iv = invariant_vector(spaces["def2"], tables[5])
    assert iv.vol == pytest.approx(8 * PI3, rel=1e-10)
    assert iv.tau_int == pytest.approx(64 * PI3, rel=1e-9)


def test_invariant_vector_noncompact(spaces, tables):
    with pytest.raises(NoncompactSpace):
        geometric_invariant_vector(spaces["heis5"])
    with pytest.raises(NoncompactSpace):
        heat_invariant_vector(spaces["heis5"], tables[5])


def test_flat_torus_stand_in_vector():
    iv = InvariantVector(m=5, vol=3.7, tau_int=0.0, tau2_int=0.0,
                         rho2_int=0.0, riem2_int=0.0)
    assert iv.tau_mean == 0.0


def test_invariant_vector_validation():
    with pytest.raises(ZeroVolume):
        InvariantVector(m=5, vol=0.0, tau_int=0, tau2_int=0, rho2_int=0, riem2_int=0)
    with pytest.raises(ConsistencyFailure):
        # Cauchy-Schwarz: tau^2[M] vol >= tau[M]^2
        InvariantVector(m=5, vol=1.0, tau_int=10.0, tau2_int=50.0,
                        rho2_int=100.0, riem2_int=100.0)


def test_recover_tau_examples(spaces):
    s5 = spaces["s5"]
    tau = recover_tau_from_a2(
        heat_coefficients(s5, 0).a2, heat_coefficients(s5, 1).a2, s5.total_volume, 5
    )
    assert tau == pytest.approx(20.0, rel=1e-10)
    assert recover_tau_from_a2(0.0, 0.0, 2.0, 5) == 0.0
    with pytest.raises(ZeroVolume):
        recover_tau_from_a2(1.0, 1.0, 0.0, 5)


def test_recover_tau_heisenberg_advisory(spaces, curv_of):
    """Pointwise densities with volume formally 1 recover the constant tau."""
    from sasakigeom import heat_density, weitzenboeck_data

    heis = spaces["heis5"]
    curv = curv_of(heis, heis.base_point)
    factor = (4 * math.pi) ** -2.5
    a2_p0 = factor * heat_density(weitzenboeck_data(0, curv), curv)[1]
    a2_p1 = factor * heat_density(weitzenboeck_data(1, curv), curv)[1]
    assert recover_tau_from_a2(a2_p0, a2_p1, 1.0, 5) == pytest.approx(-4.0, abs=1e-10)


def _self_pair(space, tables):
    return invariant_vector(space, tables[space.m])


def test_eta_einstein_self_pairs_transferred(spaces, tables, curv_of):
    expected = {"s5": (4.0, 0.0), "s7": (6.0, 0.0), "def2": (1.0, 3.0)}
    for key in ("s5", "s7", "def_half", "def2", "def3"):
        space = spaces[key]
        iv = _self_pair(space, tables)
        tau = iv.tau_mean
        alpha = tau / (space.m - 1) - 1
        beta = space.m - tau / (space.m - 1)
        verdict = classify_eta_einstein(iv, iv, alpha, beta)
        assert verdict.kind == "eta_einstein_transferred", key
        assert verdict.transferred
        if key in expected:
            assert alpha == pytest.approx(expected[key][0], abs=1e-9)
            assert beta == pytest.approx(expected[key][1], abs=1e-9)
            assert verdict.details["alpha"] == pytest.approx(expected[key][0], abs=1e-8)


def test_space_form_self_pairs_transferred(spaces, tables):
    for key in ("s5", "s7", "def_half", "def2", "def3"):
        space = spaces[key]
        iv = _self_pair(space, tables)
        verdict = classify_space_form(iv, iv, space.phi_sectional_c)
        assert verdict.kind == "space_form_transferred", key


def test_s5_vs_deformed_mismatch_at_a2(spaces, tables):
    iv1 = _self_pair(spaces["s5"], tables)
    iv2 = _self_pair(spaces["def2"], tables)
    verdict = classify_eta_einstein(iv1, iv2, 4.0, 0.0)
    assert verdict.kind == "mismatch_at_a2"
    assert verdict.details["first_failing"] == "tau"
    assert verdict.details["tau_1"] == pytest.approx(20.0, abs=1e-8)
    assert verdict.details["tau_2"] == pytest.approx(8.0, abs=1e-8)
    verdict = classify_space_form(iv1, iv2, 1.0)
    assert verdict.kind == "mismatch_at_a2"


def test_s5_vs_s7_mismatch_at_a0(spaces, tables):
    iv1 = _self_pair(spaces["s5"], tables)
    iv2 = _self_pair(spaces["s7"], tables)
    verdict = classify_eta_einstein(iv1, iv2, 4.0, 0.0)
    assert verdict.kind == "mismatch_at_a0"
    assert verdict.details["first_failing"] == "m"


def test_wrong_c_space_form_refused_with_residual(spaces, tables):
    iv = _self_pair(spaces["s5"], tables)
    with pytest.raises(HypothesisViolation) as err:
        classify_space_form(iv, iv, -1.0)
    details = err.value.details
    assert details["residual_integral"] == pytest.approx(48 * PI3, rel=1e-8)
    assert details["residual_density"] == pytest.approx(48.0, rel=1e-8)


def test_wrong_alpha_eta_einstein_refused(spaces, tables):
    iv = _self_pair(spaces["s5"], tables)
    with pytest.raises(HypothesisViolation):
        classify_eta_einstein(iv, iv, 3.0, 1.0)


def test_non_eta_einstein_left_space_refused():
    """A vector whose deviation integral is positive violates the hypothesis."""
    # tau = 20 but |rho|^2 strictly above the eta-Einstein floor 80
    iv = InvariantVector(m=5, vol=1.0, tau_int=20.0, tau2_int=400.0,
                         rho2_int=90.0, riem2_int=40.0)
    with pytest.raises(HypothesisViolation) as err:
        classify_eta_einstein(iv, iv, 4.0, 0.0)
    assert err.value.details["residual_integral"] == pytest.approx(10.0)


def test_mismatch_at_a4(spaces, tables):
    iv1 = _self_pair(spaces["s5"], tables)
    iv2 = InvariantVector(m=5, vol=iv1.vol, tau_int=iv1.tau_int,
                          tau2_int=iv1.tau2_int, rho2_int=iv1.rho2_int,
                          riem2_int=iv1.riem2_int + 1.0)
    verdict = classify_eta_einstein(iv1, iv2, 4.0, 0.0)
    assert verdict.kind == "mismatch_at_a4"
    assert verdict.details["first_failing"] == "riem2_int_density"


def test_small_dimension_refused():
    iv = InvariantVector(m=3, vol=1.0, tau_int=6.0, tau2_int=36.0,
                         rho2_int=12.0, riem2_int=12.0)
    with pytest.raises(DimensionTooSmall):
        classify_eta_einstein(iv, iv, 2.0, 0.0)
    with pytest.raises(DimensionTooSmall):
        classify_space_form(iv, iv, 1.0)


def test_verdict_kind_validation():
    from sasakigeom import Verdict

    with pytest.raises(ValueError):
        Verdict(kind="nonsense")


def test_classifier_reflexivity_property(spaces, tables):
    """classify(inv, inv) is transferred for every verified eta-Einstein model."""
    for key in ("s5", "s7", "def_half", "def2", "def3"):
        space = spaces[key]
        iv = _self_pair(space, tables)
        tau = iv.tau_mean
        alpha = tau / (space.m - 1) - 1
        beta = space.m - tau / (space.m - 1)
        assert classify_eta_einstein(iv, iv, alpha, beta).transferred
        assert classify_space_form(iv, iv, space.phi_sectional_c).transferred
        with pytest.raises(HypothesisViolation) as err:
            classify_space_form(iv, iv, space.phi_sectional_c + 1.0)
        assert err.value.details["residual_integral"] > 0
        expected = (
            iv.riem2_int
            - 4 * (space.phi_sectional_c + 1.0) * iv.tau_int
            + __import__("sasakigeom").SpaceFormParams.from_dimension(
                space.phi_sectional_c + 1.0, space.m
            ).d
            * iv.vol
        )
        assert err.value.details["residual_integral"] == pytest.approx(
            expected, rel=1e-10
        )
