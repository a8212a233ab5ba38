"""Named quantum-group instances and the default corpus.

An instance spec is a plain dict (JSON-compatible)::

    {"kind": "function_algebra", "group": "S3"}
    {"kind": "group_algebra", "group": {"order": 2, "cayley": [0, 1, 1, 0]}}
    {"kind": "kac_paljutkin"}
    {"kind": "dual_of", "inner": {...}}
    {"kind": "literal", "data": {...quantum group interchange format...}}
"""
from __future__ import annotations

import numpy as np

from .algebra import StarAlgebra
from .cocommutative import build_function_algebra, build_group_algebra
from .errors import UnknownKind
from .groups import from_dict as group_from_dict, named_group
from .qgroup import QuantumGroup, build_dual, validate_quantum_group

KINDS = ("function_algebra", "group_algebra", "kac_paljutkin", "dual_of", "literal")
CORPUS_GROUPS = ("Z/2", "Z/3", "Z/4", "S3", "D4", "Q8")

KP_LABELS = ("e1", "e2", "e3", "e4", "a11", "a12", "a21", "a22")


def kac_paljutkin_data():
    """The 8-dimensional Kac-Paljutkin quantum group, ``C^4 (+) M_2``.

    ``e1..e4`` are the minimal projections of the commutative part and
    ``a_ij`` the matrix units of ``M_2``.  The phases
    in ``Delta(a12)`` and ``Delta(a21)`` were fixed by requiring
    co-associativity and multiplicativity; every axiom is re-checked when
    the instance is built.
    """
    n = 8
    idx = {name: i for i, name in enumerate(KP_LABELS)}
    e1, e2, e3, e4, a11, a12, a21, a22 = range(n)
    mult = np.zeros((n, n, n), dtype=complex)
    for e in (e1, e2, e3, e4):
        mult[e, e, e] = 1
    units = {(0, 0): a11, (0, 1): a12, (1, 0): a21, (1, 1): a22}
    for (i, j), x in units.items():
        for (k, l), y in units.items():
            if j == k:
                mult[x, y, units[(i, l)]] = 1
    unit = np.array([1, 1, 1, 1, 1, 0, 0, 1], dtype=complex)
    invol = np.eye(n, dtype=complex)
    invol[[a12, a21]] = invol[[a21, a12]]

    h = 0.5
    terms = {
        "e1": [(1, "e1", "e1"), (1, "e2", "e2"), (1, "e3", "e3"), (1, "e4", "e4"),
               (h, "a11", "a11"), (h, "a12", "a12"), (h, "a21", "a21"), (h, "a22", "a22")],
        "e2": [(1, "e1", "e2"), (1, "e2", "e1"), (1, "e3", "e4"), (1, "e4", "e3"),
               (h, "a11", "a22"), (h, "a22", "a11"), (h * 1j, "a21", "a12"),
               (-h * 1j, "a12", "a21")],
        "e3": [(1, "e1", "e3"), (1, "e3", "e1"), (1, "e2", "e4"), (1, "e4", "e2"),
               (h, "a11", "a22"), (h, "a22", "a11"), (-h * 1j, "a21", "a12"),
               (h * 1j, "a12", "a21")],
        "e4": [(1, "e1", "e4"), (1, "e4", "e1"), (1, "e2", "e3"), (1, "e3", "e2"),
               (h, "a11", "a11"), (h, "a22", "a22"), (-h, "a12", "a12"), (-h, "a21", "a21")],
        "a11": [(1, "e1", "a11"), (1, "a11", "e1"), (1, "e2", "a22"), (1, "a22", "e3"),
                (1, "e3", "a22"), (1, "a11", "e4"), (1, "e4", "a11"), (1, "a22", "e2")],
        "a12": [(1, "e1", "a12"), (1, "a12", "e1"), (1j, "e2", "a21"), (-1j, "a21", "e2"),
                (-1j, "e3", "a21"), (1j, "a21", "e3"), (-1, "e4", "a12"), (-1, "a12", "e4")],
        "a21": [(1, "e1", "a21"), (1, "a21", "e1"), (-1j, "e2", "a12"), (1j, "a12", "e2"),
                (1j, "e3", "a12"), (-1j, "a12", "e3"), (-1, "e4", "a21"), (-1, "a21", "e4")],
        "a22": [(1, "e1", "a22"), (1, "a22", "e1"), (1, "e2", "a11"), (1, "a11", "e3"),
                (1, "e3", "a11"), (1, "a11", "e2"), (1, "e4", "a22"), (1, "a22", "e4")],
    }
    delta = np.zeros((n * n, n), dtype=complex)
    for target, rows in terms.items():
        for c, x, y in rows:
            delta[idx[x] * n + idx[y], idx[target]] += c
    return StarAlgebra.create(mult, unit, invol, KP_LABELS), delta


def build_kac_paljutkin(tol=None) -> QuantumGroup:
    alg, delta = kac_paljutkin_data()
    return validate_quantum_group(alg, delta, tol, name="KP")


def _resolve_group(g):
    if isinstance(g, str):
        return named_group(g)
    return group_from_dict(g)


def instance_name(spec) -> str:
    kind = spec.get("kind")
    if "name" in spec:
        return spec["name"]
    if kind in ("function_algebra", "group_algebra"):
        g = spec["group"]
        gname = g if isinstance(g, str) else g.get("name", f"G{g['order']}")
        return f"C({gname})" if kind == "function_algebra" else f"C*({gname})"
    if kind == "kac_paljutkin":
        return "KP"
    if kind == "dual_of":
        return f"dual({instance_name(spec['inner'])})"
    return "literal"


def build_instance(spec, tol=None) -> QuantumGroup:
    kind = spec.get("kind")
    if kind == "function_algebra":
        qg = build_function_algebra(_resolve_group(spec["group"]), tol)
    elif kind == "group_algebra":
        qg = build_group_algebra(_resolve_group(spec["group"]), tol)
    elif kind == "kac_paljutkin":
        qg = build_kac_paljutkin(tol)
    elif kind == "dual_of":
        qg = build_dual(build_instance(spec["inner"], tol), tol).dual_qg
    elif kind == "literal":
        from .io import quantum_group_from_dict
        alg, delta = quantum_group_from_dict(spec["data"])
        qg = validate_quantum_group(alg, delta, tol)
    else:
        raise UnknownKind(f"unknown instance kind {kind!r}; expected one of {', '.join(KINDS)}")
    return _renamed(qg, instance_name(spec))


def _renamed(qg, name):
    from dataclasses import replace
    return replace(qg, name=name)


def corpus():
    """Function and group algebras of the small groups plus Kac-Paljutkin and its dual."""
    specs = []
    for g in CORPUS_GROUPS:
        specs.append({"kind": "function_algebra", "group": g})
        specs.append({"kind": "group_algebra", "group": g})
    specs.append({"kind": "kac_paljutkin"})
    specs.append({"kind": "dual_of", "inner": {"kind": "kac_paljutkin"}})
    return specs


def degenerate_semigroup_data():
    """``C(S)`` for the semigroup ``S = Z/2 x {0, 1}``, ``(g, i)(h, j) = (gh, max(i, j))``.

    The comultiplication ``Delta(f)(s, t) = f(st)`` is co-associative but
    ``S`` is not a group: the invariant state is uniform on ``Z/2 x {1}``
    and not faithful.  Its null ideal cuts the algebra down to ``C(Z/2)``.
    Returns ``(alg, delta, invariant_state)``.
    """
    elems = [(g, i) for i in (0, 1) for g in (0, 1)]
    n = len(elems)
    mult = np.zeros((n, n, n), dtype=complex)
    for k in range(n):
        mult[k, k, k] = 1
    alg = StarAlgebra.create(mult, np.ones(n), np.eye(n),
                             [f"δ({g},{i})" for g, i in elems])
    delta = np.zeros((n * n, n), dtype=complex)
    for a, (g, i) in enumerate(elems):
        for b, (h, j) in enumerate(elems):
            delta[a * n + b, elems.index(((g + h) % 2, max(i, j)))] = 1
    state = np.array([0, 0, 0.5, 0.5], dtype=complex)
    return alg, delta, state
