"""Truncated third-order jet arithmetic.

A :class:`Jet3` carries the value of a scalar expression at a chart point
together with all partial derivatives up to third order in the m chart
coordinates.  Sums, products, quotients and compositions with analytic
scalar functions propagate the derivatives through truncated Leibniz /
Faa di Bruno rules, so every channel is exact to roundoff — no step-size
noise and no expression swell.

Storage is one packed float64 buffer of length 1 + m + m^2 + m^3 (hess
and third kept fully redundant).  The two hot kernels (multiply and
compose) come from the compiled extension when it imported successfully,
otherwise from the numpy fallback; set SASAKIGEOM_BACKEND=python or
=compiled to force a choice.
"""

import math
import os

import numpy as np

_requested = os.environ.get("SASAKIGEOM_BACKEND", "").strip().lower()
if _requested not in ("", "compiled", "python"):
    raise ValueError(
        "SASAKIGEOM_BACKEND must be 'compiled' or 'python', got %r" % _requested
    )
if _requested == "python":
    from . import _jetcore_fallback as _kernels
else:
    try:
        from . import _jetcore as _kernels  # type: ignore[attr-defined]
    except ImportError:
        if _requested == "compiled":
            raise
        from . import _jetcore_fallback as _kernels

BACKEND = "compiled" if _kernels.__name__.endswith("._jetcore") else "python"

_SCALAR = (int, float, np.integer, np.floating)


def packed_size(m):
    return 1 + m + m * m + m * m * m


class Jet3:
    """Scalar jet of order 3 in m variables."""

    __slots__ = ("m", "data")

    def __init__(self, m, data):
        self.m = m
        self.data = data

    @classmethod
    def constant(cls, m, value):
        data = np.zeros(packed_size(m))
        data[0] = value
        return cls(m, data)

    @classmethod
    def variable(cls, x, i):
        """The i-th coordinate function seeded at chart point x."""
        m = len(x)
        data = np.zeros(packed_size(m))
        data[0] = x[i]
        data[1 + i] = 1.0
        return cls(m, data)

    @property
    def value(self):
        return float(self.data[0])

    @property
    def grad(self):
        return self.data[1 : 1 + self.m]

    @property
    def hess(self):
        m = self.m
        return self.data[1 + m : 1 + m + m * m].reshape(m, m)

    @property
    def third(self):
        m = self.m
        return self.data[1 + m + m * m :].reshape(m, m, m)

    def copy(self):
        return Jet3(self.m, self.data.copy())

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Jet3):
            return Jet3(self.m, self.data + other.data)
        if isinstance(other, _SCALAR):
            data = self.data.copy()
            data[0] += other
            return Jet3(self.m, data)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Jet3):
            return Jet3(self.m, self.data - other.data)
        if isinstance(other, _SCALAR):
            data = self.data.copy()
            data[0] -= other
            return Jet3(self.m, data)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, _SCALAR):
            data = -self.data
            data[0] += other
            return Jet3(self.m, data)
        return NotImplemented

    def __neg__(self):
        return Jet3(self.m, -self.data)

    def __mul__(self, other):
        if isinstance(other, Jet3):
            out = np.empty(packed_size(self.m))
            _kernels.mul(self.m, self.data, other.data, out)
            return Jet3(self.m, out)
        if isinstance(other, _SCALAR):
            return Jet3(self.m, self.data * float(other))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet3):
            return self * other.reciprocal()
        if isinstance(other, _SCALAR):
            return Jet3(self.m, self.data / float(other))
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, _SCALAR):
            return float(other) * self.reciprocal()
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, (int, np.integer)) or n < 0:
            return NotImplemented
        out = Jet3.constant(self.m, 1.0)
        for _ in range(int(n)):
            out = out * self
        return out

    # -- composition with analytic scalar functions -----------------------

    def compose(self, c0, c1, c2, c3):
        """f(self) for f with value/derivatives (c0..c3) at self.value."""
        out = np.empty(packed_size(self.m))
        _kernels.compose(self.m, self.data, c0, c1, c2, c3, out)
        return Jet3(self.m, out)

    def reciprocal(self):
        v = self.value
        if v == 0.0:
            raise ZeroDivisionError("jet reciprocal at value 0")
        iv = 1.0 / v
        return self.compose(iv, -iv * iv, 2.0 * iv**3, -6.0 * iv**4)

    def sqrt(self):
        v = self.value
        if v <= 0.0:
            raise ValueError("jet sqrt needs a positive value, got %g" % v)
        s = math.sqrt(v)
        return self.compose(s, 0.5 / s, -0.25 / s**3, 0.375 / s**5)

    def exp(self):
        e = math.exp(self.value)
        return self.compose(e, e, e, e)

    def __repr__(self):
        return "Jet3(m=%d, value=%.17g)" % (self.m, self.value)


def seed_variables(x):
    """Coordinate functions of the chart, seeded at point x."""
    x = np.asarray(x, dtype=float)
    return [Jet3.variable(x, i) for i in range(len(x))]
