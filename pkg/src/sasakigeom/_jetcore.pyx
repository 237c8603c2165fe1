# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for packed third-order jets.

Buffer layout per jet in m variables (float64, C-contiguous):
[value | grad (m) | hess (m*m) | third (m*m*m)], hess and third fully
redundant.  ``out`` must not alias ``a`` or ``b``.
"""


def mul(Py_ssize_t m, double[::1] a, double[::1] b, double[::1] out):
    cdef Py_ssize_t H = 1 + m
    cdef Py_ssize_t T = 1 + m + m * m
    cdef Py_ssize_t i, j, k, hij, tij
    cdef double av = a[0]
    cdef double bv = b[0]
    cdef double agi, bgi, agj, bgj

    out[0] = av * bv
    for i in range(m):
        out[1 + i] = av * b[1 + i] + bv * a[1 + i]
    for i in range(m):
        agi = a[1 + i]
        bgi = b[1 + i]
        for j in range(m):
            hij = H + i * m + j
            out[hij] = av * b[hij] + bv * a[hij] + agi * b[1 + j] + bgi * a[1 + j]
    for i in range(m):
        agi = a[1 + i]
        bgi = b[1 + i]
        for j in range(m):
            agj = a[1 + j]
            bgj = b[1 + j]
            tij = T + (i * m + j) * m
            for k in range(m):
                out[tij + k] = (
                    av * b[tij + k]
                    + bv * a[tij + k]
                    + agi * b[H + j * m + k]
                    + agj * b[H + i * m + k]
                    + a[1 + k] * b[H + i * m + j]
                    + bgi * a[H + j * m + k]
                    + bgj * a[H + i * m + k]
                    + b[1 + k] * a[H + i * m + j]
                )


def compose(Py_ssize_t m, double[::1] a, double c0, double c1, double c2,
            double c3, double[::1] out):
    cdef Py_ssize_t H = 1 + m
    cdef Py_ssize_t T = 1 + m + m * m
    cdef Py_ssize_t i, j, k, tij
    cdef double agi, agj, gg

    out[0] = c0
    for i in range(m):
        out[1 + i] = c1 * a[1 + i]
    for i in range(m):
        agi = a[1 + i]
        for j in range(m):
            out[H + i * m + j] = c1 * a[H + i * m + j] + c2 * agi * a[1 + j]
    for i in range(m):
        agi = a[1 + i]
        for j in range(m):
            agj = a[1 + j]
            gg = agi * agj
            tij = T + (i * m + j) * m
            for k in range(m):
                out[tij + k] = (
                    c1 * a[tij + k]
                    + c2 * (agi * a[H + j * m + k]
                            + agj * a[H + i * m + k]
                            + a[1 + k] * a[H + i * m + j])
                    + c3 * gg * a[1 + k]
                )
