"""Group algebras and function algebras of finite groups.

The group algebra has basis ``lambda(s)`` with grouplike comultiplication;
the function algebra has basis ``delta_s`` with ``Delta(f)(s, t) = f(st)``.
"""
from __future__ import annotations

import numpy as np

from . import subspace as sub
from .algebra import StarAlgebra, Subalgebra
from .config import get_tol
from .correspondence import (basis_of, build_quotient_subgroup, enumerate_quantum_subgroups,
                             f0_span, f_perp, invariant_closure, invariant_subalgebra_of, is_ideal,
                             is_symmetric, kernel_isomorphism, make_subgroup)
from .errors import InvalidGroup, NotInvariant, NotNormal
from .groups import FiniteGroup, as_group, named_group
from .qgroup import QuantumGroup, validate_quantum_group


def _group(G):
    return named_group(G) if isinstance(G, str) else G


def group_algebra_data(G: FiniteGroup):
    n = G.order
    mult = np.zeros((n, n, n), dtype=complex)
    for s in range(n):
        for t in range(n):
            mult[s, t, G.mul(s, t)] = 1
    invol = np.zeros((n, n), dtype=complex)
    invol[np.arange(n), G.inverse] = 1
    unit = np.zeros(n, dtype=complex)
    unit[G.identity] = 1
    alg = StarAlgebra.create(mult, unit, invol, [f"λ({x})" for x in G.labels])
    delta = np.zeros((n * n, n), dtype=complex)
    for s in range(n):
        delta[s * n + s, s] = 1
    return alg, delta


def function_algebra_data(G: FiniteGroup):
    n = G.order
    mult = np.zeros((n, n, n), dtype=complex)
    for s in range(n):
        mult[s, s, s] = 1
    alg = StarAlgebra.create(mult, np.ones(n), np.eye(n), [f"δ({x})" for x in G.labels])
    delta = np.zeros((n * n, n), dtype=complex)
    for h in range(n):
        for g in range(n):
            delta[h * n + G.mul(G.inv(h), g), g] = 1
    return alg, delta


def build_group_algebra(G, tol=None) -> QuantumGroup:
    G = _group(G)
    alg, delta = group_algebra_data(G)
    return validate_quantum_group(alg, delta, tol, name=f"C*({G.name})")


def build_function_algebra(G, tol=None) -> QuantumGroup:
    G = _group(G)
    alg, delta = function_algebra_data(G)
    return validate_quantum_group(alg, delta, tol, name=f"C({G.name})")


def support(x, tol=None):
    """``{s : |x_s| > tol * max |x|}`` for ``x`` in the group algebra."""
    x = np.abs(np.asarray(x))
    if x.size == 0 or x.max() == 0:
        return frozenset()
    return frozenset(int(s) for s in np.where(x > get_tol(tol) * x.max())[0])


# ---------------------------------------------------------------------------
# subgroups versus invariant subalgebras

_GROUP_ALGEBRAS: dict = {}


def group_algebra_of(G: FiniteGroup) -> QuantumGroup:
    """Cached :func:`build_group_algebra`, so repeated calls share one algebra object."""
    hit = _GROUP_ALGEBRAS.get(id(G))
    if hit is None or hit[0] is not G:
        hit = (G, build_group_algebra(G))
        _GROUP_ALGEBRAS[id(G)] = hit
    return hit[1]


def lam(G: FiniteGroup, *elements, coeffs=None):
    """``sum_k c_k lambda(s_k)``; elements are labels or indices."""
    v = np.zeros(G.order, dtype=complex)
    coeffs = [1] * len(elements) if coeffs is None else coeffs
    for s, c in zip(elements, coeffs):
        v[G.index(s) if isinstance(s, str) else s] += c
    return v


def span_lambda(G: FiniteGroup, H, qg=None) -> Subalgebra:
    qg = group_algebra_of(G) if qg is None else qg
    return Subalgebra(qg.alg, np.eye(G.order, dtype=complex)[:, sorted(H)])


def subalgebra_of_subgroup(G: FiniteGroup, H, qg=None) -> Subalgebra:
    """``{x : supp x in H} = span lambda(H)``."""
    if not G.is_subgroup(H):
        raise InvalidGroup(f"{sorted(H)} is not a subgroup")
    return span_lambda(G, H, qg)


def subgroup_of_subalgebra(G: FiniteGroup, X, qg=None, tol=None):
    """The union of supports of a basis of ``X``, checked to be a subgroup ``H`` with ``X = span lambda(H)``."""
    qg = group_algebra_of(G) if qg is None else qg
    B = basis_of(qg.alg, X, tol)
    H = set()
    for x in B.T:
        H |= support(x, tol)
    H = tuple(sorted(H))
    if not G.is_subgroup(H):
        raise NotInvariant(f"union of supports {H} is not a subgroup")
    equal, res = sub.subspace_equal(B, span_lambda(G, H, qg).basis, tol)
    if not equal:
        raise NotInvariant(f"X is not span lambda(H) for H = {H} (residual {res:.2e})")
    return H


def indicator_state(G: FiniteGroup, H):
    """``1_H`` as a functional on the group algebra: ``lambda(s) -> [s in H]``."""
    u = np.zeros(G.order, dtype=complex)
    u[list(H)] = 1
    return u


def random_invariant_search(G: FiniteGroup, trials, gen, qg=None, tol=None):
    """Invariant closures of random sparse elements; returns the subgroups they come from.

    Raises :class:`NotInvariant` if a closure is not of the form ``span lambda(H)``.
    """
    qg = group_algebra_of(G) if qg is None else qg
    found = {}
    n = G.order
    for _ in range(trials):
        k = int(gen.integers(1, 4))
        pts = gen.choice(n, size=k, replace=False)
        x = np.zeros(n, dtype=complex)
        x[pts] = gen.standard_normal(k) + 1j * gen.standard_normal(k)
        X = invariant_closure(qg, x, tol)
        H = subgroup_of_subalgebra(G, X, qg, tol)
        found[H] = found.get(H, 0) + 1
    return found


def coset_constancy_span(G: FiniteGroup, H, qg=None, tol=None):
    """``span F_0`` for ``X = span lambda(H)`` computed two ways.

    (a) blockwise, as the span of states equal to ``eps`` on ``X``;
    (b) functions constant on left and right cosets of ``H``, i.e. on
    double cosets.  Returns ``(basis, equal, residual)``.
    """
    qg = group_algebra_of(G) if qg is None else qg
    X = span_lambda(G, H, qg)
    a = f0_span(qg, X, tol)
    classes = double_cosets(G, H)
    b = sub.orth(np.array([indicator_state(G, c) for c in classes]).T, tol)
    equal, res = sub.subspace_equal(a, b, tol)
    return b, equal, res


def double_cosets(G: FiniteGroup, H):
    seen, out = set(), []
    for s in range(G.order):
        if s in seen:
            continue
        c = tuple(sorted({G.mul(G.mul(h, s), k) for h in H for k in H}))
        seen.update(c)
        out.append(c)
    return out


def normality_symmetry_check(G: FiniteGroup, H, qg=None, tol=None):
    """``{normal, symmetric, f_perp_ideal, agree, ...}`` for the subgroup ``H``."""
    qg = group_algebra_of(G) if qg is None else qg
    X = span_lambda(G, H, qg)
    normal = G.is_normal(H)
    symmetric, res = is_symmetric(qg, X, tol)
    Fp = f_perp(qg, X, tol)
    ideal, _ = is_ideal(qg.alg, Fp, tol)
    return {"normal": bool(normal), "symmetric": bool(symmetric), "f_perp_ideal": bool(ideal),
            "agree": bool(normal) == bool(symmetric) == bool(ideal),
            "symmetry_residual": res, "f_perp_dim": Fp.shape[1]}


def restriction_subgroup(G: FiniteGroup, H, qg=None, tol=None):
    """``C(G) -> C(H)``, ``f -> f|_H``, as a quantum subgroup of the function algebra."""
    qg = build_function_algebra(G, tol) if qg is None else qg
    H = tuple(sorted(H))
    target = build_function_algebra(as_group(G, H), tol)
    pi = np.zeros((len(H), G.order), dtype=complex)
    pi[np.arange(len(H)), list(H)] = 1
    name = "C({" + ",".join(G.labels[h] for h in H) + "})"
    return make_subgroup(qg, target, pi, tol, name=name)


def quotient_map(G: FiniteGroup, K, target: QuantumGroup):
    """``lambda(s) -> lambda(sK)`` as a matrix into the group algebra of ``G/K``."""
    _, where = G.quotient(K)
    pi = np.zeros((target.dim, G.order), dtype=complex)
    pi[where, np.arange(G.order)] = 1
    return pi


def quotient_by_normal(G: FiniteGroup, H, strict=False, qg=None, tol=None):
    """The dual of ``G/K`` as a quantum subgroup, against the quotient built from ``span lambda(H)``.

    ``K = H`` when ``H`` is normal, else the conjugate closure of ``H``
    (or :class:`NotNormal` when ``strict``).
    """
    tol = get_tol(tol)
    qg = group_algebra_of(G) if qg is None else qg
    if G.is_normal(H):
        K = tuple(sorted(H))
    elif strict:
        raise NotNormal(f"{[G.labels[h] for h in sorted(H)]} is not normal")
    else:
        K = G.conjugate_closure(H)
    GK, _ = G.quotient(K)
    target = build_group_algebra(GK, tol)
    oracle = make_subgroup(qg, target, quotient_map(G, K, target), tol, name=f"({G.name}/K)^")
    built = build_quotient_subgroup(qg, span_lambda(G, H, qg), tol)
    equal, kres = sub.subspace_equal(oracle.kernel, built.kernel, tol)
    rho, rres = kernel_isomorphism(oracle, built, tol) if equal else (None, {})
    iso = equal and all(v <= tol for v in rres.values())
    return {"K": K, "quotient_order": GK.order, "oracle": oracle, "built": built,
            "kernel_equal": bool(equal), "isomorphic": bool(iso),
            "residuals": {"kernel": kres, **rres}}


def final_corollary(G: FiniteGroup, qg=None, tol=None):
    """Every quantum subgroup of the group algebra is ``(G/H)^`` for a normal ``H``.

    For each quantum subgroup: ``X_H`` gives ``H`` via :func:`subgroup_of_subalgebra`;
    ``H`` must be normal and the subgroup isomorphic to the dual quotient.
    """
    qg = group_algebra_of(G) if qg is None else qg
    rows = []
    for s in enumerate_quantum_subgroups(qg, tol):
        X, _ = invariant_subalgebra_of(qg, s, tol)
        H = subgroup_of_subalgebra(G, X, qg, tol)
        q = quotient_by_normal(G, H, strict=True, qg=qg, tol=tol)
        equal, res = sub.subspace_equal(q["oracle"].kernel, s.kernel, tol)
        rows.append({"H": H, "normal": G.is_normal(H), "dim": s.dim, "kernel_equal": bool(equal),
                     "residual": res})
    return rows


# names used by the operation contract
theorem61_forward = subalgebra_of_subgroup
theorem61_backward = subgroup_of_subalgebra
