"""Quantum subgroups versus left invariant subalgebras.

Subgroup -> subalgebra: ``P = (id (x) phi_H pi) Delta`` and ``X_H = P(A)``.
Subalgebra -> subgroup: the quotient of ``A`` by ``J_X``, the ideal
generated by ``x - eps(x) 1``; in finite dimension ``J_X`` is the sum of
the matrix blocks on which ``X`` does not act by ``eps``.

Subspaces ``X`` may be passed as a :class:`~qcorr.algebra.Subalgebra`, or
as an ``(n, k)`` array whose columns span ``X``.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import subspace as sub
from .algebra import (BlockDecomposition, StarAlgebra, Subalgebra, block_decompose, gns_construct,
                      ideal_closure, is_state, subalgebra_closure)
from .config import get_tol
from .errors import (DegenerateVector, HaarNotFaithful, HypothesisFailed, InvalidSubgroup,
                     NotInvariant, NotPositive, ZeroSubalgebra)
from .qgroup import QuantumGroup, build_dual, delta3, op_coordinates, tensor_op_coordinates, \
    validate_quantum_group

_BLOCKS: dict = {}


def blocks_of(alg: StarAlgebra) -> BlockDecomposition:
    """Block decomposition, cached per algebra object."""
    hit = _BLOCKS.get(id(alg))
    if hit is not None and hit[0] is alg:
        return hit[1]
    b = block_decompose(alg)
    _BLOCKS[id(alg)] = (alg, b)
    return b


def basis_of(alg, X, tol=None):
    if isinstance(X, Subalgebra):
        return X.basis
    X = np.asarray(X, dtype=complex)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    return sub.orth(X, tol, dim=alg.dim)


def as_subalgebra(alg, X, tol=None) -> Subalgebra:
    return X if isinstance(X, Subalgebra) else Subalgebra(alg, basis_of(alg, X, tol))


# ---------------------------------------------------------------------------
# invariance


def left_invariance_residual(qg: QuantumGroup, X, tol=None):
    """Largest distance of ``(e_i^* (x) id) Delta(x_j)`` from ``X``."""
    B = basis_of(qg.alg, X, tol)
    if B.shape[1] == 0:
        return 0.0
    D3 = qg.delta3
    slices = np.einsum("ibj,jk->bik", D3, B).reshape(qg.dim, -1)
    return sub.max_distance(B, slices)


def is_left_invariant(qg: QuantumGroup, X, tol=None):
    tol = get_tol(tol)
    return left_invariance_residual(qg, X, tol) <= tol


def invariant_closure(qg: QuantumGroup, seed, tol=None, max_iter=50) -> Subalgebra:
    """Smallest unital, left invariant C*-subalgebra containing ``seed``."""
    alg = qg.alg
    vecs = np.asarray(seed, dtype=complex).reshape(-1, alg.dim)
    B = sub.orth(np.column_stack([vecs.T, alg.unit]), tol)
    D3 = qg.delta3
    for _ in range(max_iter):
        slices = np.einsum("ibj,jk->bik", D3, B).reshape(alg.dim, -1)
        grown = subalgebra_closure(alg, np.column_stack([B, slices]).T, tol).basis
        if grown.shape[1] == B.shape[1]:
            break
        B = grown
    return Subalgebra(alg, B)


# ---------------------------------------------------------------------------
# X-trivial blocks and J_X


def x_trivial_blocks(qg: QuantumGroup, X, tol=None):
    """Indices of the blocks on which every ``x`` in ``X`` acts as ``eps(x) I``."""
    tol = get_tol(tol)
    B = basis_of(qg.alg, X, tol)
    blocks = blocks_of(qg.alg)
    out = []
    for p, d in enumerate(blocks.sizes):
        worst = 0.0
        for x in B.T:
            worst = max(worst, np.abs(blocks.block(p, x) - (qg.counit @ x) * np.eye(d)).max())
        if worst <= tol:
            out.append(p)
    return out


def block_ideal(alg: StarAlgebra, block_indices) -> np.ndarray:
    """Orthonormal basis of the sum of the given matrix blocks."""
    blocks = blocks_of(alg)
    units = [blocks.matrix_unit(p, i, j) for p in block_indices
             for i in range(blocks.sizes[p]) for j in range(blocks.sizes[p])]
    if not units:
        return np.zeros((alg.dim, 0), dtype=complex)
    return sub.orth(np.array(units).T, dim=alg.dim)


def _check_x(qg, X, tol):
    B = basis_of(qg.alg, X, tol)
    if B.shape[1] == 0:
        raise ZeroSubalgebra("X is the zero subspace")
    res = left_invariance_residual(qg, B, tol)
    if res > tol:
        raise NotInvariant(f"X is not left invariant (residual {res:.2e})")
    return B


def x_trivial_ideal(qg: QuantumGroup, X, tol=None) -> Subalgebra:
    """``J_X``: the ideal generated by ``{x - eps(x) 1}``."""
    tol = get_tol(tol)
    B = _check_x(qg, X, tol)
    seed = B - np.outer(qg.alg.unit, qg.counit @ B)
    return ideal_closure(qg.alg, seed.T, tol)


def x_trivial_ideal_oracle(qg: QuantumGroup, X, tol=None) -> np.ndarray:
    """``J_X`` as the sum of the blocks that are not X-trivial."""
    trivial = set(x_trivial_blocks(qg, X, tol))
    return block_ideal(qg.alg, [p for p in range(len(blocks_of(qg.alg).sizes))
                                if p not in trivial])


# ---------------------------------------------------------------------------
# quotients and quantum subgroups


@dataclass(frozen=True)
class QuantumSubgroup:
    """``pi: A -> B`` onto the algebra of ``target``; ``pi`` is an ``(m, n)`` matrix."""

    parent: QuantumGroup
    target: QuantumGroup
    pi: np.ndarray
    kernel: np.ndarray  # orthonormal basis of ker pi
    name: str = ""
    reduced: bool = False

    @property
    def dim(self):
        return self.target.dim

    def section(self):
        """A linear right inverse of ``pi``."""
        return np.linalg.pinv(self.pi)


def quotient_by_ideal(alg: StarAlgebra, delta, J, tol=None):
    """Structure of ``A / J`` for a Hopf ideal ``J`` (orthonormal columns).

    The quotient basis is the image of a greedy set of original basis
    elements, so labels carry over as ``[label]``.  Returns the quotient
    algebra, its comultiplication, ``pi`` and the residual of
    ``(pi (x) pi) Delta`` on ``J`` (zero iff ``J`` is a coideal).
    """
    tol = get_tol(tol)
    n = alg.dim
    comp = np.eye(n) - J @ J.conj().T
    piv = sub.pivot_columns(comp, tol)
    Q = comp[:, piv]
    pi = np.linalg.pinv(Q) @ comp
    m = len(piv)
    lift = np.eye(n)[:, piv]  # e_{i_k}
    prods = alg.product(lift.T[:, None, :], lift.T[None, :, :])  # (m, m, n)
    mult = prods @ pi.T
    unit = pi @ alg.unit
    invol = alg.star(lift.T) @ pi.T
    labels = [f"[{alg.labels[i]}]" for i in piv]
    Bq = StarAlgebra.create(mult, unit, invol, labels)
    PP = np.kron(pi, pi)
    dq = PP @ delta @ lift
    coideal = float(np.abs(PP @ delta @ J).max()) if J.shape[1] else 0.0
    return Bq, dq, pi, coideal


def _quotient_subgroup(qg, J, tol, name=""):
    Bq, dq, pi, coideal = quotient_by_ideal(qg.alg, qg.delta, J, tol)
    if coideal > tol:
        raise InvalidSubgroup(f"ideal is not a coideal (residual {coideal:.2e})")
    try:
        target = validate_quantum_group(Bq, dq, tol, name=name)
        return QuantumSubgroup(qg, target, pi, J, name)
    except HaarNotFaithful:
        target, pi2 = reduce_by_null_ideal(Bq, dq, _invariant_functional(Bq, dq, tol), tol)
        full_pi = pi2 @ pi
        kernel = sub.null_space(full_pi, tol)
        return QuantumSubgroup(qg, target, full_pi, kernel, name, reduced=True)


def _invariant_functional(alg, delta, tol):
    from .qgroup import compute_haar_state
    return compute_haar_state(alg, delta, tol=tol)


def build_quotient_subgroup(qg: QuantumGroup, X, tol=None, name="") -> QuantumSubgroup:
    """The compact quantum subgroup ``A -> A / J_X``."""
    tol = get_tol(tol)
    J = x_trivial_ideal(qg, X, tol)
    return _quotient_subgroup(qg, J.basis, tol, name or f"H_X<{qg.name}>")


def subgroup_residuals(sub_: QuantumSubgroup):
    qg, tg, pi = sub_.parent, sub_.target, sub_.pi
    A, B = qg.alg, tg.alg
    n = A.dim
    out = {}
    lhs = np.einsum("ijk,mk->ijm", A.mult, pi)
    rhs = np.einsum("ai,bj,abm->ijm", pi, pi, B.mult)
    out["pi multiplicative"] = np.abs(lhs - rhs).max()
    out["pi unital"] = np.abs(pi @ A.unit - B.unit).max()
    out["pi star"] = np.abs(pi @ A.invol.T - (B.star(pi.T)).T).max()
    out["pi intertwines delta"] = np.abs(np.kron(pi, pi) @ qg.delta - tg.delta @ pi).max()
    out["pi surjective deficit"] = float(B.dim - sub.rank(pi))
    out["kernel"] = np.abs(pi @ sub_.kernel).max() if sub_.kernel.shape[1] else 0.0
    out["kernel dimension"] = float(abs(sub_.kernel.shape[1] - (n - B.dim)))
    return out


def make_subgroup(qg: QuantumGroup, target: QuantumGroup, pi, tol=None, name="") -> QuantumSubgroup:
    """Wrap and check a user supplied morphism ``pi: A -> B``."""
    tol = get_tol(tol)
    pi = np.asarray(pi, dtype=complex)
    if pi.shape != (target.dim, qg.dim):
        raise InvalidSubgroup(f"pi has shape {pi.shape}, expected {(target.dim, qg.dim)}")
    s = QuantumSubgroup(qg, target, pi, sub.null_space(pi, tol), name)
    bad = [k for k, v in subgroup_residuals(s).items() if not v <= tol]
    if bad:
        raise InvalidSubgroup(f"not a quantum subgroup: {bad[0]}")
    return s


def counit_block(qg: QuantumGroup, tol=None):
    tol = get_tol(tol)
    blocks = blocks_of(qg.alg)
    for p, d in enumerate(blocks.sizes):
        if d == 1 and np.abs(blocks.maps[p][:, 0, 0] - qg.counit).max() <= tol:
            return p
    raise InvalidSubgroup("no block carries the co-unit")  # pragma: no cover


def enumerate_quantum_subgroups(qg: QuantumGroup, tol=None):
    """All quantum subgroups, one per Hopf ideal.

    A kernel is an ideal, hence a sum of blocks; it must miss the co-unit
    block and be a coideal.
    """
    tol = get_tol(tol)
    blocks = blocks_of(qg.alg)
    k = len(blocks.sizes)
    c = counit_block(qg, tol)
    others = [p for p in range(k) if p != c]
    found = []
    for r in range(len(others) + 1):
        for kept in itertools.combinations(others, r):
            killed = [p for p in others if p not in kept]
            J = block_ideal(qg.alg, killed)
            keep_rows = _block_rows(blocks, [c, *kept])
            PP = np.kron(keep_rows, keep_rows)
            if J.shape[1] and np.abs(PP @ qg.delta @ J).max() > tol:
                continue
            name = f"H{{{','.join(str(p) for p in sorted([c, *kept]))}}}<{qg.name}>"
            found.append(_quotient_subgroup(qg, J, tol, name))
    found.sort(key=lambda s: (s.dim, s.name))
    return found


def _block_rows(blocks, keep):
    """Rows of the block isomorphism belonging to the kept blocks."""
    rows, start = [], 0
    for p, d in enumerate(blocks.sizes):
        if p in keep:
            rows.extend(range(start, start + d * d))
        start += d * d
    return blocks.iso[rows]


# ---------------------------------------------------------------------------
# F_0


@dataclass(frozen=True)
class F0Set:
    """``{mu state : (id (x) mu) Delta(x) = x for x in X}`` as ``M mu = rhs`` plus witnesses."""

    matrix: np.ndarray
    rhs: np.ndarray
    witnesses: tuple

    def residual(self, mu):
        return float(np.abs(self.matrix @ np.asarray(mu) - self.rhs).max())


def f0_of(qg: QuantumGroup, X, theta=None, tol=None) -> F0Set:
    B = basis_of(qg.alg, X, tol)
    M = np.einsum("abj,jk->kab", qg.delta3, B).reshape(-1, qg.dim)
    rhs = B.T.reshape(-1)
    wit = [qg.counit]
    if theta is not None:
        wit.append(np.asarray(theta))
    return F0Set(M, rhs, tuple(wit))


def f0_residual(qg: QuantumGroup, X, mu):
    return f0_of(qg, X).residual(mu)


def is_in_F0(qg: QuantumGroup, X, mu, tol=None):
    tol = get_tol(tol)
    return is_state(qg.alg, mu, tol) and f0_residual(qg, X, mu) <= tol


def agrees_with_counit(qg: QuantumGroup, X, mu, tol=None):
    """``mu = eps`` on ``X``."""
    B = basis_of(qg.alg, X, tol)
    return float(np.abs(np.asarray(mu) @ B - qg.counit @ B).max()) <= get_tol(tol)


def multiplicativity_residual(qg: QuantumGroup, X, mu):
    """``max |mu(a x) - mu(a) mu(x)|`` over basis ``a`` and basis ``x`` of ``X``."""
    B = basis_of(qg.alg, X)
    mu = np.asarray(mu)
    ax = qg.alg.product(np.eye(qg.dim)[:, None, :], B.T[None, :, :])  # (n, k, n)
    return float(np.abs(ax @ mu - np.outer(mu, mu @ B)).max())


def mu_a_transform(qg: QuantumGroup, X, mu, a, tol=None):
    """``mu_a(b) = mu(a^* b a) / mu(a^* a)``."""
    tol = get_tol(tol)
    alg = qg.alg
    mu = np.asarray(mu, dtype=complex)
    a = np.asarray(a, dtype=complex)
    astar = alg.star(a)
    norm = mu @ alg.product(astar, a)
    if abs(norm) <= tol:
        raise DegenerateVector("mu(a^* a) vanishes")
    E = np.eye(alg.dim)
    sandwiches = alg.product(alg.product(astar, E), a)  # rows: a^* e_i a
    return (sandwiches @ mu) / norm


def f0_span(qg: QuantumGroup, X, tol=None):
    """Orthonormal basis (columns, as functional coefficients) of ``span F_0``.

    A state agrees with ``eps`` on ``X`` iff its GNS vector is fixed by
    ``X`` up to ``eps``, so blockwise the densities live on
    ``V_p = {v : block_p(x) v = eps(x) v}``.
    """
    tol = get_tol(tol)
    B = basis_of(qg.alg, X, tol)
    blocks = blocks_of(qg.alg)
    funcs = []
    for p, d in enumerate(blocks.sizes):
        rows = [blocks.block(p, x) - (qg.counit @ x) * np.eye(d) for x in B.T]
        V = sub.null_space(np.vstack(rows), tol) if rows else np.eye(d)
        M = blocks.maps[p]
        for i in range(V.shape[1]):
            for j in range(V.shape[1]):
                # a -> <block_p(a) v_i, v_j>
                funcs.append(np.einsum("a,kab,b->k", V[:, j].conj(), M, V[:, i]))
    if not funcs:
        return np.zeros((qg.dim, 0), dtype=complex)
    return sub.orth(np.array(funcs).T, tol)


def f_perp(qg: QuantumGroup, X, tol=None):
    """``{a : u(a) = 0 for u in span F_0}`` as an orthonormal basis."""
    F = f0_span(qg, X, tol)
    if F.shape[1] == 0:
        return np.eye(qg.dim, dtype=complex)
    return sub.null_space(F.T, tol)


def is_ideal(alg: StarAlgebra, basis, tol=None):
    closure = ideal_closure(alg, basis.T, tol)
    return closure.dim == basis.shape[1], closure


def gns_x_trivial_residual(qg: QuantumGroup, X, mu, tol=None):
    B = basis_of(qg.alg, X, tol)
    try:
        g = gns_construct(qg.alg, mu, tol)
    except NotPositive:
        return np.inf
    eye = np.eye(g.hilbert_dim)
    return max(float(np.abs(g.rep(x) - (qg.counit @ x) * eye).max()) for x in B.T)


def gns_x_trivial_check(qg: QuantumGroup, X, mu, tol=None):
    """Does the GNS representation of ``mu`` send each ``x`` to ``eps(x) I``?"""
    return gns_x_trivial_residual(qg, X, mu, tol) <= get_tol(tol)


def factors_through(subgroup: QuantumSubgroup, mu, tol=None):
    """Is ``mu = nu pi`` for a functional ``nu`` on the quotient?  (iff ``mu`` kills ``ker pi``)."""
    K = subgroup.kernel
    if K.shape[1] == 0:
        return True
    return float(np.abs(np.asarray(mu) @ K).max()) <= get_tol(tol)


def random_state_near(qg: QuantumGroup, X, gen, tol=None):
    """A random state, supported on X-trivial blocks about half of the time."""
    blocks = blocks_of(qg.alg)
    trivial = x_trivial_blocks(qg, X, tol)
    k = len(blocks.sizes)
    if gen.uniform() < 0.5:
        pool = trivial
    else:
        pool = list(range(k))
    size = int(gen.integers(1, len(pool) + 1))
    support = list(gen.choice(pool, size=size, replace=False))
    from .algebra import random_state
    return random_state(qg.alg, gen, blocks, support=support)


def membership_verdicts(qg: QuantumGroup, X, subgroup: QuantumSubgroup, mu, tol=None):
    """``(mu in F_0, GNS of mu is X-trivial, mu factors through pi)``."""
    return (is_in_F0(qg, X, mu, tol), gns_x_trivial_check(qg, X, mu, tol),
            factors_through(subgroup, mu, tol))


theorem36_verdicts = membership_verdicts  # contract name


# ---------------------------------------------------------------------------
# symmetry


def symmetry_residual(qg: QuantumGroup, X, tol=None):
    """Largest distance of a slice ``(id (x) omega_pq)(W (x (x) 1) W^*)`` from ``pi(X)``."""
    B = basis_of(qg.alg, X, tol)
    r = qg.W.hilbert_dim
    W = qg.W.matrix
    reps = qg.gns.rep_basis
    piX = np.einsum("jk,jab->kab", B, reps).reshape(B.shape[1], -1).T
    span = sub.orth(piX, tol)
    worst = 0.0
    eye = np.eye(r)
    for x in B.T:
        T = W @ np.kron(qg.rep(x), eye) @ W.conj().T
        slices = T.reshape(r, r, r, r).transpose(0, 2, 1, 3).reshape(r * r, r * r)
        scale = 1.0 + np.abs(T).max()
        worst = max(worst, sub.max_distance(span, slices) / scale)
    return worst


def is_symmetric(qg: QuantumGroup, X, tol=None):
    """``(verdict, residual)``."""
    res = symmetry_residual(qg, X, tol)
    return res <= get_tol(tol), res


# ---------------------------------------------------------------------------
# conditional expectations


@dataclass(frozen=True)
class ConditionalExpectation:
    matrix: np.ndarray  # P[:, j] = P(e_j)
    range: Subalgebra
    theta: Optional[np.ndarray] = None

    def __call__(self, a):
        return self.matrix @ np.asarray(a, dtype=complex)


def choi_margins(alg: StarAlgebra, P):
    """``(smallest, largest)`` Choi eigenvalue over all block components of ``P``."""
    blocks = blocks_of(alg)
    lo, hi = np.inf, 0.0
    for p, dp in enumerate(blocks.sizes):
        units = np.array([[blocks.matrix_unit(p, i, j) for j in range(dp)] for i in range(dp)])
        images = units @ P.T  # (dp, dp, n): P(E_ij)
        for q, dq in enumerate(blocks.sizes):
            out = np.einsum("ijk,kab->ijab", images, blocks.maps[q])
            choi = out.transpose(0, 2, 1, 3).reshape(dp * dq, dp * dq)
            w = np.linalg.eigvalsh((choi + choi.conj().T) / 2)
            lo, hi = min(lo, w.min()), max(hi, np.abs(w).max())
    return float(lo), float(hi)


def cp_residual(alg, P):
    """``max(0, -lambda_min / lambda_max)`` of the Choi matrices; 0 means completely positive."""
    lo, hi = choi_margins(alg, P)
    return max(0.0, -lo / max(hi, 1e-300))


def expectation_residuals(qg: QuantumGroup, ce: ConditionalExpectation, tol=None):
    alg = qg.alg
    P = ce.matrix
    n = alg.dim
    R = ce.range.basis
    out = {}
    out["idempotent"] = np.abs(P @ P - P).max()
    out["range"] = sub.subspace_equal(sub.orth(P, tol), R, tol)[1]
    out["unital"] = np.abs(P @ alg.unit - alg.unit).max()
    out["completely positive"] = cp_residual(alg, P)
    worst = 0.0
    E = np.eye(n)
    for x in R.T:
        for y in R.T:
            xay = alg.product(alg.product(x, E), y)  # rows: x e_i y
            lhs = xay @ P.T
            rhs = alg.product(alg.product(x, P.T), y)
            worst = max(worst, np.abs(lhs - rhs).max())
    out["bimodule"] = worst
    out["covariance"] = np.abs(np.kron(np.eye(n), P) @ qg.delta - qg.delta @ P).max()
    out["haar preserved"] = np.abs(qg.haar @ P - qg.haar).max()
    PA = P.T  # rows P(e_i)
    prods = alg.product(PA[:, None, :], PA[None, :, :])
    out["P(P(a)P(b))"] = np.abs(prods @ P.T - prods).max()
    return out


def expectation_from_subgroup(qg: QuantumGroup, subgroup: QuantumSubgroup, tol=None):
    theta = subgroup.pi.T @ subgroup.target.haar
    P = np.einsum("abj,b->aj", qg.delta3, theta)
    return ConditionalExpectation(P, Subalgebra(qg.alg, sub.orth(P, tol, dim=qg.dim)), theta)


def invariant_subalgebra_of(qg: QuantumGroup, subgroup: QuantumSubgroup, tol=None):
    """``(X_H, P)`` with ``P = (id (x) phi_H pi) Delta`` and ``X_H = P(A)``."""
    tol = get_tol(tol)
    bad = [k for k, v in subgroup_residuals(subgroup).items() if not v <= tol]
    if bad:
        raise InvalidSubgroup(f"not a quantum subgroup: {bad[0]}")
    ce = expectation_from_subgroup(qg, subgroup, tol)
    return ce.range, ce


def _kron_left(M, n):
    """``vec(M Q)`` for row-major ``vec``."""
    return np.kron(M, np.eye(n))


def _kron_right(M, n):
    """``vec(Q M)``."""
    return np.kron(np.eye(n), M.T)


def expectation_system(qg: QuantumGroup, X, covariant=True, state_preserving=False, tol=None):
    """Linear constraints ``C vec(Q) = d`` on maps ``Q`` onto ``X``.

    Always: range in ``X``, ``Q = id`` on ``X``, ``X``-bimodule map.
    Optionally: ``(id (x) Q) Delta = Delta Q`` and ``psi Q = psi``.
    """
    alg = qg.alg
    n = alg.dim
    B = basis_of(alg, X, tol)
    rows, rhs = [], []
    rows.append(_kron_left(np.eye(n) - B @ B.conj().T, n))
    rhs.append(np.zeros(n * n))
    rows.append(_kron_right(B, n))
    rhs.append(B.reshape(-1))
    for x in B.T:
        Lx, Rx = alg.left_matrix(x), alg.right_matrix(x)
        rows.append(_kron_right(Lx, n) - _kron_left(Lx, n))
        rows.append(_kron_right(Rx, n) - _kron_left(Rx, n))
        rhs += [np.zeros(n * n)] * 2
    if covariant:
        D3 = qg.delta3
        # (id (x) Q)Delta: sum_c Q[b,c] D3[a,c,j];  Delta Q: sum_c D[(a,b),c] Q[c,j]
        lhs = np.einsum("bu,acj->abjuc", np.eye(n), D3)
        rgt = np.einsum("abu,jv->abjuv", D3, np.eye(n))
        rows.append((lhs - rgt).reshape(n ** 3, n * n))
        rhs.append(np.zeros(n ** 3))
    if state_preserving:
        rows.append(np.kron(qg.haar[None, :], np.eye(n)))
        rhs.append(qg.haar)
    return np.vstack(rows), np.concatenate(rhs).astype(complex)


def solve_expectations(qg: QuantumGroup, X, covariant=True, state_preserving=False, tol=None):
    """``(particular solution, null-space dimension, residual)``; ``None`` if inconsistent."""
    tol = get_tol(tol)
    n = qg.dim
    C, d = expectation_system(qg, X, covariant, state_preserving, tol)
    u, s, vh = np.linalg.svd(C, full_matrices=False)
    rank = int(np.sum(s > tol * max(s[0], 1.0)))
    q = vh[:rank].conj().T @ ((u[:, :rank].conj().T @ d) / s[:rank])
    res = float(np.abs(C @ q - d).max())
    if res > tol * max(1.0, np.abs(q).max()):
        return None, 0, res
    return q.reshape(n, n), n * n - rank, res


def covariant_expectation(qg: QuantumGroup, X, tol=None) -> ConditionalExpectation:
    """A completely positive covariant conditional expectation onto ``X``.

    Raises :class:`HypothesisFailed` when none exists.
    """
    tol = get_tol(tol)
    B = basis_of(qg.alg, X, tol)
    Q, nulldim, res = solve_expectations(qg, B, True, False, tol)
    if Q is None:
        raise HypothesisFailed(f"no covariant expectation onto X (residual {res:.2e})")
    if nulldim:
        Q, nulldim, res = solve_expectations(qg, B, True, True, tol)
        if Q is None:  # pragma: no cover - psi Q = psi is implied by covariance
            raise HypothesisFailed("no state preserving covariant expectation onto X")
    if cp_residual(qg.alg, Q) > tol:
        raise HypothesisFailed("the covariant expectation onto X is not completely positive")
    return ConditionalExpectation(Q, Subalgebra(qg.alg, B))


def expectation_uniqueness(qg: QuantumGroup, ce: ConditionalExpectation, tol=None):
    """Solve for haar preserving expectations onto ``range(ce)`` without covariance.

    Returns ``(dimension of the solution set, distance of the solution to ce)``.
    """
    Q, nulldim, _ = solve_expectations(qg, ce.range.basis, False, True, tol)
    if Q is None:
        return -1, np.inf
    return nulldim, float(np.abs(Q - ce.matrix).max())


# ---------------------------------------------------------------------------
# dual inclusion


@dataclass(frozen=True)
class DualInclusion:
    """``rho: dual(H) -> dual(G)`` on basis operators ``u_k`` of the dual of ``H``."""

    images: np.ndarray  # (m, r_G, r_G): rho(u_k)
    matrix: np.ndarray  # (n, m): coordinates in the basis of dual(G)
    residuals: dict


def build_dual_inclusion(qg: QuantumGroup, subgroup: QuantumSubgroup, tol=None) -> DualInclusion:
    """``rho((omega (x) id) U) = (omega pi (x) id) W``.

    With ``U = sum_k pi_H(f_k) (x) u_k`` and ``W = sum_j pi_G(e_j) (x) w_j`` this
    reads ``rho(u_k) = sum_j pi[k, j] w_j`` on the quotient basis ``f_k``.
    """
    tol = get_tol(tol)
    H = subgroup.target
    pi = subgroup.pi
    m, n = pi.shape
    u = H.W.second_leg  # (m, rH, rH)
    w = qg.W.second_leg  # (n, rG, rG)
    images = np.einsum("kj,jab->kab", pi, w)
    gdual = build_dual(qg, tol)
    hdual = build_dual(H, tol)
    coords, fit = op_coordinates(gdual.ops, images)
    res = {"rho fit": fit}
    # identity (id (x) rho) U = (pi (x) id) W
    lhs = np.einsum("kpq,kab->paqb", H.W.first_leg, images)
    rhs = np.einsum("jk,kpq,jab->paqb", pi.T, H.W.first_leg, w)
    res["(id x rho)U = (pi x id)W"] = np.abs(lhs - rhs).max()
    # *-homomorphism on u_k: check through coordinates of products in dual(H)
    uu = np.einsum("apq,bqs->abps", u, u)
    c, r1 = op_coordinates(u, uu)
    rho_of = np.einsum("abk,kpq->abpq", c, images)
    prod_images = np.einsum("apq,bqs->abps", images, images)
    res["rho multiplicative"] = max(r1, np.abs(rho_of - prod_images).max())
    cs, r2 = op_coordinates(u, u.conj().transpose(0, 2, 1))
    res["rho star"] = max(r2, np.abs(np.einsum("ak,kpq->apq", cs, images)
                                     - images.conj().transpose(0, 2, 1)).max())
    cu, r3 = op_coordinates(u, np.eye(u.shape[1])[None])
    res["rho unital"] = max(r3, np.abs(np.einsum("k,kpq->pq", cu[0], images)
                                       - np.eye(images.shape[1])).max())
    res["rho injective deficit"] = float(m - sub.rank(images.reshape(m, -1).T, tol))
    # (rho (x) rho) Delta^_H = Delta^_G rho, with Delta^(x) = W^^* (1 (x) x) W^
    rG, rH = w.shape[1], u.shape[1]
    worst = 0.0
    hat_H = _hat(H.W.matrix, rH)
    hat_G = _hat(qg.W.matrix, rG)
    for k in range(m):
        XH = hat_H.conj().T @ np.kron(np.eye(rH), u[k]) @ hat_H
        cH, rfit = tensor_op_coordinates(u, XH)
        lhs = np.einsum("ab,apq,bst->psqt", cH.reshape(m, m), images, images).reshape(rG * rG, -1)
        rhs = hat_G.conj().T @ np.kron(np.eye(rG), images[k]) @ hat_G
        worst = max(worst, rfit, np.abs(lhs - rhs).max())
    res["rho intertwines dual delta"] = worst
    return DualInclusion(images, coords.T, res)


def _hat(W, r):
    from .qgroup import _flip
    F = _flip(r)
    return F @ W.conj().T @ F


# ---------------------------------------------------------------------------
# faithfulness repair


def reduce_by_null_ideal(alg: StarAlgebra, delta, state, tol=None):
    """Quotient by ``N = {a : state(a^* a) = 0}``.

    ``state`` must be a left and right invariant state.  Returns the
    validated quotient and the quotient map.
    """
    tol = get_tol(tol)
    state = np.asarray(state, dtype=complex)
    if not is_state(alg, state, tol):
        raise NotPositive("reduce_by_null_ideal needs a state")
    n = alg.dim
    D3 = delta3(delta, n)
    left = np.abs(np.einsum("abj,b->aj", D3, state) - np.outer(alg.unit, state)).max()
    right = np.abs(np.einsum("abj,a->bj", D3, state) - np.outer(alg.unit, state)).max()
    if max(left, right) > tol:
        raise NotInvariant("the state is not invariant")
    g = gns_construct(alg, state, tol)
    N = sub.null_space(g.lambda_map, tol)
    Bq, dq, pi, coideal = quotient_by_ideal(alg, delta, N, tol)
    if coideal > tol:
        raise NotInvariant(f"null ideal is not a coideal (residual {coideal:.2e})")
    return validate_quantum_group(Bq, dq, tol, name="reduced"), pi


# ---------------------------------------------------------------------------
# round trips


@dataclass
class CorrespondenceReport:
    input: str
    jx_dim: Optional[int] = None
    quotient_dim: Optional[int] = None
    symmetric: dict = field(default_factory=dict)
    roundtrip: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)

    @property
    def passed(self):
        rt = self.roundtrip
        return all(v for k, v in rt.items() if k in ("subalgebra_equal", "kernel_equal"))

    def to_dict(self):
        return _jsonable({"input": self.input, "jx_dim": self.jx_dim,
                          "quotient_dim": self.quotient_dim, "symmetric": self.symmetric,
                          "roundtrip": self.roundtrip, "witnesses": self.witnesses})

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)] if obj.imag else float(obj.real)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def roundtrip_subalgebra(qg: QuantumGroup, X, tol=None, label="") -> CorrespondenceReport:
    """``X -> H_X -> X_{H_X}``; the hypothesis (a covariant expectation) is solved for first."""
    tol = get_tol(tol)
    Xs = as_subalgebra(qg.alg, X, tol)
    report = CorrespondenceReport(label or f"subalgebra of {qg.name} (dim {Xs.dim})")
    verdict, sres = is_symmetric(qg, Xs, tol)
    report.symmetric = {"verdict": verdict, "residual": sres}
    if not verdict:
        raise HypothesisFailed(f"X is not symmetric (residual {sres:.2e})")
    ce = covariant_expectation(qg, Xs, tol)
    H = build_quotient_subgroup(qg, Xs, tol)
    report.jx_dim = H.kernel.shape[1]
    report.quotient_dim = H.dim
    back, P = invariant_subalgebra_of(qg, H, tol)
    equal, res = Xs.equals(back, tol)
    report.roundtrip = {"subalgebra_equal": bool(equal),
                        "residuals": {"subalgebra": res,
                                      "expectation vs P_H": float(np.abs(ce.matrix - P.matrix).max())}}
    report.witnesses = {"quotient_labels": list(H.target.alg.labels),
                        "counit": coamenability_residual(H)}
    return report


def kernel_isomorphism(a: QuantumSubgroup, b: QuantumSubgroup, tol=None):
    """``rho`` with ``rho pi_a = pi_b`` (requires equal kernels) and its residuals."""
    rho = b.pi @ a.section()
    res = {"rho pi = pi'": float(np.abs(rho @ a.pi - b.pi).max())}
    A, B = a.target.alg, b.target.alg
    lhs = np.einsum("ijk,mk->ijm", A.mult, rho)
    rhs = np.einsum("ai,bj,abm->ijm", rho, rho, B.mult)
    res["rho multiplicative"] = float(np.abs(lhs - rhs).max())
    res["rho star"] = float(np.abs(rho @ A.invol.T - B.star(rho.T).T).max())
    res["rho unital"] = float(np.abs(rho @ A.unit - B.unit).max())
    res["rho bijective deficit"] = float(abs(B.dim - sub.rank(rho, tol)) + abs(A.dim - B.dim))
    res["rho intertwines delta"] = float(np.abs(np.kron(rho, rho) @ a.target.delta
                                                - b.target.delta @ rho).max())
    return rho, res


def roundtrip_subgroup(qg: QuantumGroup, subgroup: QuantumSubgroup, tol=None,
                       label="") -> CorrespondenceReport:
    """``H -> X_H -> H_{X_H}``, certified by equal kernels and an explicit isomorphism."""
    tol = get_tol(tol)
    X, P = invariant_subalgebra_of(qg, subgroup, tol)
    report = CorrespondenceReport(label or subgroup.name or f"subgroup of {qg.name}")
    verdict, sres = is_symmetric(qg, X, tol)
    report.symmetric = {"verdict": verdict, "residual": sres}
    H2 = build_quotient_subgroup(qg, X, tol)
    report.jx_dim = H2.kernel.shape[1]
    report.quotient_dim = H2.dim
    equal, kres = sub.subspace_equal(subgroup.kernel, H2.kernel, tol)
    rho, rres = kernel_isomorphism(subgroup, H2, tol) if equal else (None, {})
    iso_ok = bool(rres) and all(v <= tol for v in rres.values())
    report.roundtrip = {"kernel_equal": bool(equal), "isomorphism": iso_ok,
                        "residuals": {"kernel": kres, **rres}}
    report.witnesses = {"x_dim": X.dim, "rho": rho}
    return report


def coamenability_residual(subgroup: QuantumSubgroup):
    """``|eps_H pi - eps|``."""
    return float(np.abs(subgroup.target.counit @ subgroup.pi - subgroup.parent.counit).max())


def verify_coamenability(subgroup: QuantumSubgroup, tol=None):
    """The quotient carries a co-unit compatible with ``pi``: ``(verdict, residual)``."""
    res = coamenability_residual(subgroup)
    return res <= get_tol(tol), res


def correspond(qg: QuantumGroup, X, roundtrip=False, tol=None, label="") -> CorrespondenceReport:
    """Quotient subgroup of ``X`` with symmetry verdict; optional round trips."""
    tol = get_tol(tol)
    Xs = as_subalgebra(qg.alg, X, tol)
    if roundtrip:
        return roundtrip_subalgebra(qg, Xs, tol, label)
    report = CorrespondenceReport(label or f"subalgebra of {qg.name} (dim {Xs.dim})")
    verdict, sres = is_symmetric(qg, Xs, tol)
    report.symmetric = {"verdict": verdict, "residual": sres}
    H = build_quotient_subgroup(qg, Xs, tol)
    report.jx_dim = H.kernel.shape[1]
    report.quotient_dim = H.dim
    report.witnesses = {"quotient_labels": list(H.target.alg.labels)}
    return report
