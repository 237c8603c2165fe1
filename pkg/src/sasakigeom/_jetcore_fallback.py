"""Pure-numpy kernels for packed third-order jets.

Same calling convention as the compiled extension ``_jetcore``: a jet in
m variables is a flat float64 buffer
``[value | grad (m) | hess (m*m) | third (m*m*m)]`` with hess and third
stored with full redundancy.  ``out`` must not alias ``a`` or ``b``.
"""

import numpy as np


def _views(m, buf):
    g = buf[1 : 1 + m]
    h = buf[1 + m : 1 + m + m * m].reshape(m, m)
    t = buf[1 + m + m * m :].reshape(m, m, m)
    return buf[0], g, h, t


def mul(m, a, b, out):
    """out = a * b under the truncated Leibniz rule."""
    av, ag, ah, at = _views(m, a)
    bv, bg, bh, bt = _views(m, b)
    _, og, oh, ot = _views(m, out)
    out[0] = av * bv
    og[:] = av * bg + bv * ag
    oh[:] = av * bh + bv * ah
    oh += np.multiply.outer(ag, bg)
    oh += np.multiply.outer(bg, ag)
    ot[:] = av * bt + bv * at
    gh = np.multiply.outer(ag, bh)
    ot += gh
    ot += gh.transpose(1, 0, 2)
    ot += gh.transpose(1, 2, 0)
    hg = np.multiply.outer(bg, ah)
    ot += hg
    ot += hg.transpose(1, 0, 2)
    ot += hg.transpose(1, 2, 0)


def compose(m, a, c0, c1, c2, c3, out):
    """out = f(a) given f and its first three derivatives at a's value."""
    _, ag, ah, at = _views(m, a)
    _, og, oh, ot = _views(m, out)
    out[0] = c0
    og[:] = c1 * ag
    oh[:] = c1 * ah
    oh += c2 * np.multiply.outer(ag, ag)
    ot[:] = c1 * at
    gh = np.multiply.outer(ag, ah)
    ot += c2 * (gh + gh.transpose(1, 0, 2) + gh.transpose(1, 2, 0))
    ot += c3 * np.multiply.outer(np.multiply.outer(ag, ag), ag)
