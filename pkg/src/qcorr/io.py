"""JSON interchange for algebras, quantum groups, groups and reports.

Algebra::

    {"dim": n, "labels": [...], "unit": [[re, im], ...],
     "invol": n x n (row i = coefficients of e_i^*),
     "mult": [[i, j, k, re, im], ...]}       # e_i e_j has e_k-coefficient re + i im

A quantum group adds ``"delta"``: ``n`` rows of length ``n^2``, row ``j``
being ``Delta(e_j)`` in the lexicographic tensor basis.  Dense entries may
be plain numbers or ``[re, im]`` pairs.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

from .algebra import StarAlgebra
from .errors import InvalidGroup, ParseError
from .groups import FiniteGroup, from_dict as group_from_dict, named_group


def _num(v):
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ParseError(f"complex entries are [re, im] pairs, got {v!r}")
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)):
        return complex(v)
    raise ParseError(f"not a number: {v!r}")


def _dense(rows, shape, what):
    try:
        arr = np.array([[_num(v) for v in row] for row in rows], dtype=complex)
    except TypeError:
        raise ParseError(f"{what} must be a list of rows") from None
    if arr.shape != shape:
        raise ParseError(f"{what} has shape {arr.shape}, expected {shape}")
    return arr


def _pair(z):
    return [float(np.real(z)), float(np.imag(z))]


def algebra_from_dict(data) -> StarAlgebra:
    try:
        n = int(data["dim"])
        labels = data.get("labels") or [f"e{i}" for i in range(n)]
        unit = np.array([_num(v) for v in data["unit"]], dtype=complex)
        invol = _dense(data["invol"], (n, n), "invol")
        mult = np.zeros((n, n, n), dtype=complex)
        for entry in data["mult"]:
            if len(entry) not in (4, 5):
                raise ParseError(f"mult entries are [i, j, k, re, im], got {entry!r}")
            i, j, k = (int(t) for t in entry[:3])
            mult[i, j, k] += complex(float(entry[3]), float(entry[4]) if len(entry) == 5 else 0.0)
    except (KeyError, ValueError, IndexError, AttributeError) as exc:
        raise ParseError(f"malformed algebra: {exc!r}") from None
    if unit.shape != (n,):
        raise ParseError(f"unit has length {unit.shape[0]}, expected {n}")
    return StarAlgebra.create(mult, unit, invol, labels)


def algebra_to_dict(alg: StarAlgebra, tol=0.0):
    idx = np.argwhere(np.abs(alg.mult) > tol)
    return {"dim": alg.dim, "labels": list(alg.labels),
            "unit": [_pair(z) for z in alg.unit],
            "invol": [[_pair(z) for z in row] for row in alg.invol],
            "mult": [[int(i), int(j), int(k), *_pair(alg.mult[i, j, k])] for i, j, k in idx]}


def quantum_group_from_dict(data):
    """``(alg, delta)`` with ``delta`` in column convention, shape ``(n^2, n)``."""
    alg = algebra_from_dict(data)
    if "delta" not in data:
        raise ParseError("quantum group needs a 'delta' field")
    n = alg.dim
    rows = _dense(data["delta"], (n, n * n), "delta")
    return alg, rows.T.copy()


def quantum_group_to_dict(qg_or_alg, delta=None):
    alg = getattr(qg_or_alg, "alg", qg_or_alg)
    delta = qg_or_alg.delta if delta is None else delta
    out = algebra_to_dict(alg)
    out["delta"] = [[_pair(z) for z in row] for row in np.asarray(delta).T]
    if getattr(qg_or_alg, "name", ""):
        out["name"] = qg_or_alg.name
    return out


def group_to_dict(G: FiniteGroup):
    return G.to_dict()


def read_json(path):
    """Load JSON from ``path`` (``"-"`` for stdin), raising :class:`ParseError` on any failure."""
    try:
        if str(path) == "-":
            return json.load(sys.stdin)
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ParseError(f"no such file: {path}") from None
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from None


def load_group(path_or_name) -> FiniteGroup:
    p = Path(str(path_or_name))
    if not p.exists():
        try:
            return named_group(str(path_or_name))
        except InvalidGroup:
            raise ParseError(f"{path_or_name} is neither a file nor a group name") from None
    data = read_json(p)
    try:
        return group_from_dict(data)
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError(f"malformed group: {exc!r}") from None


def write_json(obj, path, **kw):
    Path(path).write_text(json.dumps(obj, **kw))
