"""Deterministic report serialization.

All floats are printed with 17 significant digits so reports round-trip
exactly and two runs with the same seed produce byte-identical output.
Dicts serialize in insertion order; report builders construct them in a
fixed order.
"""

import json

import numpy as np

CONVENTIONS = {
    "riemann": (
        "R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z; "
        "R_ijkl = g(R(e_i,e_j)e_k, e_l); unit sphere: "
        "R_ijkl = d_jk d_il - d_ik d_jl"
    ),
    "ricci": "rho_ij = R_ikkj; tau = R_ijji",
    "d_eta": "d eta(X,Y) = (X eta(Y) - Y eta(X) - eta([X,Y])) / 2",
    "frame": "Gram-Schmidt on the coordinate basis, ascending index order",
    "omega_square": "sum over all ordered frame pairs (i,j) of Omega_ij Omega_ij",
    "total_derivative_terms": (
        "E_;kk and tau_;kk set to zero: they vanish on homogeneous data and "
        "integrate to zero on closed manifolds"
    ),
}


def format_float(x):
    return format(float(x), ".17g")


def _serialize(obj, out):
    if isinstance(obj, dict):
        out.append("{")
        first = True
        for k, v in obj.items():
            if not first:
                out.append(", ")
            first = False
            out.append(json.dumps(str(k)))
            out.append(": ")
            _serialize(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(", ")
            _serialize(v, out)
        out.append("]")
    elif isinstance(obj, np.ndarray):
        _serialize(obj.tolist(), out)
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        x = float(obj)
        if x != x or x in (float("inf"), float("-inf")):
            out.append(json.dumps(repr(x)))
        else:
            out.append(format_float(x))
    elif obj is None:
        out.append("null")
    else:
        out.append(json.dumps(str(obj)))


def dumps(obj):
    """Canonical JSON text with fixed float formatting."""
    out = []
    _serialize(obj, out)
    out.append("\n")
    return "".join(out)


def dumps_csv(rows, header):
    """CSV text for a list of flat dict rows, same float formatting."""
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for key in header:
            v = row[key]
            if isinstance(v, (float, np.floating)):
                cells.append(format_float(v))
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
