"""Jet arithmetic against finite differences and across backends."""

import math

import numpy as np
import pytest

from sasakigeom.jets import Jet3, packed_size, seed_variables
from sasakigeom import _jetcore_fallback

FD_STEP = 1e-5
FD_RTOL = 1e-6


def _sqrt(v):
    return v.sqrt() if isinstance(v, Jet3) else math.sqrt(v)


def _expressions(rng):
    """Composite scalar expressions usable on floats and on jets."""
    c = rng.uniform(0.5, 2.0, size=8)

    def e1(x):
        return (c[0] + x[0] * x[1] + c[1] * x[2] * x[2]) * _sqrt(
            c[2] + x[0] * x[0] + x[1] * x[1] + x[2] * x[2]
        )

    def e2(x):
        return (x[0] + c[0] * x[1] * x[2]) / (c[1] + x[0] * x[0] + x[2] * x[2])

    def e3(x):
        return _sqrt(c[0] + (x[0] + c[1] * x[1]) * (x[0] + c[1] * x[1])) / (
            c[2] + x[1] * x[2] * x[0] * x[1]
        )

    def e4(x):
        num = c[0] + x[0] * x[1] * x[2] + c[1] * (x[0] - c[2] * x[2]) * x[1]
        return num * num / _sqrt(c[3] + x[1] * x[1])

    return [e1, e2, e3, e4]


def _jet_eval(expr, x):
    return expr(seed_variables(x))


def test_variable_seeding():
    x = np.array([0.3, -0.2, 0.9])
    xs = seed_variables(x)
    assert xs[1].value == -0.2
    assert np.array_equal(xs[1].grad, [0.0, 1.0, 0.0])
    assert np.abs(xs[1].hess).max() == 0.0


def test_product_rule_exact():
    x = np.array([0.4, -0.7])
    a, b = seed_variables(x)
    p = a * b
    assert p.value == pytest.approx(0.4 * -0.7)
    assert np.allclose(p.grad, [-0.7, 0.4])
    assert np.allclose(p.hess, [[0, 1], [1, 0]])
    assert np.abs(p.third).max() == 0.0


def test_quotient_and_scalar_ops():
    x = np.array([0.5, 1.5])
    a, b = seed_variables(x)
    q = (2.0 * a + 1.0) / (b - 0.5)
    assert q.value == pytest.approx(2.0)
    back = q * (b - 0.5) - (2.0 * a + 1.0)
    assert np.abs(back.data).max() < 1e-14


def test_power_matches_repeated_product():
    x = np.array([0.3, 0.8, -0.4])
    a = seed_variables(x)[1]
    assert np.allclose((a**4).data, (a * a * a * a).data)


@pytest.mark.parametrize("case", range(20))
def test_jet_matches_finite_differences(case):
    """grad vs FD(value), hess vs FD(grad), third vs FD(hess), step 1e-5."""
    rng = np.random.default_rng(1000 + case)
    expr = _expressions(rng)[case % 4]
    m = 3
    x = rng.uniform(-0.6, 0.6, size=m)
    jet = _jet_eval(expr, x)

    grad_fd = np.empty(m)
    hess_fd = np.empty((m, m))
    third_fd = np.empty((m, m, m))
    for i in range(m):
        dx = np.zeros(m)
        dx[i] = FD_STEP
        f_plus = expr(x + dx)
        f_minus = expr(x - dx)
        grad_fd[i] = (f_plus - f_minus) / (2 * FD_STEP)
        j_plus = _jet_eval(expr, x + dx)
        j_minus = _jet_eval(expr, x - dx)
        hess_fd[i] = (j_plus.grad - j_minus.grad) / (2 * FD_STEP)
        third_fd[i] = (j_plus.hess - j_minus.hess) / (2 * FD_STEP)

    for got, want in ((jet.grad, grad_fd), (jet.hess, hess_fd), (jet.third, third_fd)):
        scale = max(1.0, np.abs(want).max())
        assert np.abs(got - want).max() <= FD_RTOL * scale


def test_hess_and_third_symmetry():
    rng = np.random.default_rng(7)
    for expr in _expressions(rng):
        jet = _jet_eval(expr, np.array([0.25, -0.5, 0.75]))
        assert np.allclose(jet.hess, jet.hess.T, rtol=0, atol=1e-14)
        t = jet.third
        for perm in [(0, 2, 1), (1, 0, 2), (2, 1, 0)]:
            assert np.allclose(t, t.transpose(perm), rtol=0, atol=1e-13)


def test_sqrt_round_trip():
    x = np.array([0.2, 0.1])
    a = seed_variables(x)[0]
    s = (a + 1.3).sqrt()
    back = s * s - (a + 1.3)
    assert np.abs(back.data).max() < 1e-14


def test_reciprocal_at_zero_raises():
    a = Jet3.constant(2, 0.0)
    with pytest.raises(ZeroDivisionError):
        a.reciprocal()


def test_sqrt_of_nonpositive_raises():
    with pytest.raises(ValueError):
        Jet3.constant(2, -1.0).sqrt()


def test_backends_agree():
    """Compiled kernels must reproduce the numpy fallback."""
    try:
        from sasakigeom import _jetcore
    except ImportError:
        pytest.skip("compiled extension not built")
    rng = np.random.default_rng(5)
    m = 4
    size = packed_size(m)
    for _ in range(20):
        a = rng.standard_normal(size)
        b = rng.standard_normal(size)
        out_c = np.empty(size)
        out_py = np.empty(size)
        _jetcore.mul(m, a, b, out_c)
        _jetcore_fallback.mul(m, a, b, out_py)
        assert np.allclose(out_c, out_py, rtol=1e-13, atol=1e-13)
        c = rng.standard_normal(4)
        _jetcore.compose(m, a, c[0], c[1], c[2], c[3], out_c)
        _jetcore_fallback.compose(m, a, c[0], c[1], c[2], c[3], out_py)
        assert np.allclose(out_c, out_py, rtol=1e-13, atol=1e-13)
