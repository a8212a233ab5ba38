"""Finite quantum groups: a C*-algebra with a comultiplication.

The comultiplication ``delta`` is an ``(n*n, n)`` matrix whose column ``j``
holds the coefficients of ``Delta(e_j)`` in the basis ``e_a (x) e_b`` of
``A (x) A``, ordered lexicographically (index ``a*n + b``, as ``np.kron``).
Everything else (co-unit, antipode, Haar state, multiplicative unitary,
dual) is derived by linear solves and then checked against its axioms.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import subspace as sub
from .algebra import (GnsData, StarAlgebra, ValidationReport, gns_construct, gns_residuals,
                      is_positive, positivity_margin, validate_star_algebra)
from .config import get_tol, rng as make_rng
from .errors import (GaloisSingular, HaarNotFaithful, NoHaarState, NoSolution, NotCoassociative,
                     ShapeMismatch, ValidationFailed)

# operators on H (x) H are indexed ((p, q), (p', q')) with p the first leg;
# reshaped to 4 indices that is W4[p, q, p', q'].
EXACT_PENTAGON_MAX = 12


def _raise(cls, msg, report):
    exc = cls(msg)
    exc.report = report
    raise exc


def delta3(delta, n):
    """``D3[a, b, j]``: coefficient of ``e_a (x) e_b`` in ``Delta(e_j)``."""
    return np.asarray(delta).reshape(n, n, n)


def check_delta_shape(alg: StarAlgebra, delta):
    delta = np.asarray(delta, dtype=complex)
    n = alg.dim
    if delta.shape != (n * n, n):
        raise ShapeMismatch(f"delta has shape {delta.shape}, expected {(n * n, n)}")
    return delta


# ---------------------------------------------------------------------------
# residuals of the comultiplication itself


def _tensor_products(alg, D3):
    """``P[i, j, e, f]``: coefficients of ``Delta(e_i) Delta(e_j)``."""
    m = alg.mult
    return np.einsum("abi,ace,cdj,bdf->ijef", D3, m, D3, m, optimize=True)


def delta_residuals(alg: StarAlgebra, delta):
    n = alg.dim
    D3 = delta3(delta, n)
    out = {}
    lhs = _tensor_products(alg, D3)
    rhs = np.einsum("ijk,efk->ijef", alg.mult, D3)
    out["homomorphism"] = np.abs(lhs - rhs).max()
    out["unital"] = np.abs(delta @ alg.unit - np.kron(alg.unit, alg.unit)).max()
    # Delta(e_i^*) = Delta(e_i)^*
    lhs = (delta @ alg.invol.T).T  # row i: Delta(e_i^*)
    rhs = delta.T.conj() @ np.kron(alg.invol, alg.invol)
    out["star"] = np.abs(lhs - rhs).max()
    # (id (x) Delta) Delta  vs  (Delta (x) id) Delta
    left = np.einsum("abj,cdb->acdj", D3, D3)
    right = np.einsum("abj,cda->cdbj", D3, D3)
    out["coassociativity"] = np.abs(left - right).max()
    return out


def galois_maps(alg: StarAlgebra, delta):
    """Matrices of ``a(x)b -> Delta(a)(1(x)b)`` and ``a(x)b -> (a(x)1)Delta(b)``."""
    n = alg.dim
    D3 = delta3(delta, n)
    m = alg.mult
    T1 = np.einsum("cda,dbf->cfab", D3, m).reshape(n * n, n * n)
    T2 = np.einsum("ace,cdb->edab", m, D3).reshape(n * n, n * n)
    return T1, T2


def _rank_deficit(M, tol):
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return M.shape[1]
    return int(M.shape[1] - np.sum(s > tol * s[0]))


# ---------------------------------------------------------------------------
# derived structure


def compute_counit(alg: StarAlgebra, delta, tol=None):
    """The functional with ``(eps (x) id) Delta = id``."""
    tol = get_tol(tol)
    n = alg.dim
    D3 = delta3(delta, n)
    M = D3.transpose(1, 2, 0).reshape(n * n, n)  # rows (b, j), column a
    rhs = np.eye(n).reshape(-1)
    eps, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    res = np.abs(M @ eps - rhs).max()
    if res > tol * max(1.0, np.abs(eps).max()):
        raise NoSolution(f"(eps (x) id) Delta = id has no solution (residual {res:.2e})")
    return eps


def counit_residuals(alg, delta, eps):
    n = alg.dim
    D3 = delta3(delta, n)
    eye = np.eye(n)
    return {
        "counit left": np.abs(np.einsum("a,abj->bj", eps, D3) - eye).max(),
        "counit right": np.abs(np.einsum("b,abj->aj", eps, D3) - eye).max(),
        "counit multiplicative": np.abs(np.einsum("ijk,k->ij", alg.mult, eps)
                                        - np.outer(eps, eps)).max(),
        "counit star": np.abs(alg.invol @ eps - eps.conj()).max(),
    }


def compute_antipode(alg: StarAlgebra, delta, counit, tol=None):
    """The linear map ``S`` (as a matrix, ``S(e_a) = S[:, a]``) with ``m(S(x)id)Delta = eps(.)1``."""
    tol = get_tol(tol)
    n = alg.dim
    D3 = delta3(delta, n)
    # sum_{a,b,k} D3[a,b,j] S[k,a] m[k,b,l] = eps_j u_l
    C = np.einsum("abj,kbl->jlka", D3, alg.mult).reshape(n * n, n * n)
    rhs = np.outer(counit, alg.unit).reshape(-1)
    x, *_ = np.linalg.lstsq(C, rhs, rcond=None)
    res = np.abs(C @ x - rhs).max()
    if res > tol * max(1.0, np.abs(x).max()):
        raise NoSolution(f"antipode equation has no solution (residual {res:.2e})")
    if _rank_deficit(C, tol):
        raise NoSolution("antipode equation does not determine S uniquely")
    return x.reshape(n, n)


def antipode_residuals(alg, delta, counit, S):
    n = alg.dim
    D3 = delta3(delta, n)
    m = alg.mult
    target = np.outer(counit, alg.unit)
    out = {}
    out["antipode left"] = np.abs(np.einsum("abj,ka,kbl->jl", D3, S, m) - target).max()
    out["antipode right"] = np.abs(np.einsum("abj,kb,akl->jl", D3, S, m) - target).max()
    # S(e_i e_j) = S(e_j) S(e_i)
    lhs = np.einsum("ijk,lk->ijl", m, S)
    rhs = np.einsum("bj,ai,bac->ijc", S, S, m)
    out["antipode anti-multiplicative"] = np.abs(lhs - rhs).max()
    # S(S(a^*)^*) = a, on basis elements: x -> conj(x) @ invol is the star of coefficient rows
    Sstar = alg.star((S @ alg.invol.T).T)  # row i: S(e_i^*)^*
    back = (S @ Sstar.T).T  # row i: S(S(e_i^*)^*)
    out["antipode star"] = np.abs(back - np.eye(n)).max()
    out["antipode squared"] = np.abs(S @ S - np.eye(n)).max()
    return out


def haar_candidates(alg: StarAlgebra, delta, tol=None):
    """Basis of ``{phi : (id (x) phi) Delta(a) = phi(a) 1}``."""
    n = alg.dim
    D3 = delta3(delta, n)
    # (a, j) rows: sum_b D3[a,b,j] phi_b - u_a phi_j
    M = np.einsum("abj->ajb", D3) - np.einsum("a,jb->ajb", alg.unit, np.eye(n))
    return sub.null_space(M.reshape(n * n, n), tol)


def compute_haar_state(alg_or_qg, delta=None, tol=None):
    """The unique invariant state.  Accepts a :class:`QuantumGroup` or ``(alg, delta)``."""
    if isinstance(alg_or_qg, QuantumGroup):
        alg, delta = alg_or_qg.alg, alg_or_qg.delta
    else:
        alg = alg_or_qg
    tol = get_tol(tol)
    N = haar_candidates(alg, delta, tol)
    if N.shape[1] == 0:
        raise NoHaarState("no left invariant functional")
    if N.shape[1] > 1:
        raise NoHaarState(f"left invariant functionals form a {N.shape[1]}-dimensional space")
    phi = N[:, 0]
    norm = phi @ alg.unit
    if abs(norm) < tol:
        raise NoHaarState("the invariant functional vanishes on the unit")
    phi = phi / norm
    if not is_positive(alg, phi, tol):
        raise NoHaarState("the normalized invariant functional is not positive")
    return phi


def haar_residuals(alg, delta, phi):
    n = alg.dim
    D3 = delta3(delta, n)
    return {
        "haar left invariance": np.abs(np.einsum("abj,b->aj", D3, phi)
                                       - np.outer(alg.unit, phi)).max(),
        "haar right invariance": np.abs(np.einsum("abj,a->bj", D3, phi)
                                        - np.outer(alg.unit, phi)).max(),
        "haar normalization": abs(phi @ alg.unit - 1),
        "haar positivity": max(0.0, -positivity_margin(alg, phi)),
    }


# ---------------------------------------------------------------------------
# multiplicative unitary


@dataclass(frozen=True)
class MultiplicativeUnitary:
    """``W`` on ``H (x) H`` with its leg decomposition ``W = sum_j pi(e_j) (x) w_j``."""

    matrix: np.ndarray
    hilbert_dim: int
    first_leg: np.ndarray  # (n, r, r): pi(e_j)
    second_leg: np.ndarray  # (n, r, r): w_j
    leg_residual: float = 0.0

    @property
    def four(self):
        r = self.hilbert_dim
        return self.matrix.reshape(r, r, r, r)

    def slice_left(self, omega):
        """``(omega (x) id) W`` for ``omega`` an r x r density (``omega(x) = Tr(omega x)``)."""
        return np.einsum("qp,pbqd->bd", omega, self.four)

    def slice_right(self, omega):
        return np.einsum("qp,apcq->ac", omega, self.four)


def _flip(r):
    """The flip Sigma on C^r (x) C^r."""
    F = np.zeros((r * r, r * r))
    for p in range(r):
        for q in range(r):
            F[q * r + p, p * r + q] = 1
    return F


def build_multiplicative_unitary(alg: StarAlgebra, delta, gns: GnsData, tol=None):
    """``W^*(Lambda(a) (x) Lambda(b)) = (Lambda (x) Lambda)(Delta(b)(a (x) 1))``."""
    tol = get_tol(tol)
    if not gns.faithful:
        raise HaarNotFaithful("the Haar state is not faithful; reduce the algebra first")
    n = alg.dim
    D3 = delta3(delta, n)
    T = np.einsum("cdb,cae->edab", D3, alg.mult).reshape(n * n, n * n)
    V = gns.lambda_map
    VV = np.kron(V, V)
    Wstar = VV @ T @ np.linalg.inv(VV)
    W = Wstar.conj().T
    first = gns.rep_basis
    second, res = leg_decomposition(W, first)
    return MultiplicativeUnitary(W, gns.hilbert_dim, first, second, res)


def leg_decomposition(W, first):
    """Solve ``W = sum_j first[j] (x) w_j`` for the ``w_j``; returns them and the fit residual."""
    n, r, _ = first.shape
    R = W.reshape(r, r, r, r).transpose(0, 2, 1, 3).reshape(r * r, r * r)  # ((p,p'), (q,q'))
    P = first.reshape(n, r * r).T
    w, *_ = np.linalg.lstsq(P, R, rcond=None)
    res = float(np.abs(P @ w - R).max())
    return w.reshape(n, r, r), res


def pentagon_residual(W, r, gen=None):
    """``max |W12 W13 W23 - W23 W12|`` entrywise, or on random probes for large ``r``."""
    eye = np.eye(r)
    if r <= EXACT_PENTAGON_MAX:
        W12 = np.kron(W, eye)
        W23 = np.kron(eye, W)
        # W13 = Sigma_23 W12 Sigma_23
        perm = np.arange(r ** 3).reshape(r, r, r).transpose(0, 2, 1).reshape(-1)
        W13 = W12[np.ix_(perm, perm)]
        return float(np.abs(W12 @ W13 @ W23 - W23 @ W12).max())
    W4 = W.reshape(r, r, r, r)

    def w12(x):
        return np.einsum("abcd,cdt...->abt...", W4, x, optimize=True)

    def w23(x):
        return np.einsum("bcde,ade...->abc...", W4, x, optimize=True)

    def w13(x):
        return np.einsum("acdf,dbf...->abc...", W4, x, optimize=True)

    gen = make_rng() if gen is None else gen
    X = gen.standard_normal((r, r, r, 16)) + 1j * gen.standard_normal((r, r, r, 16))
    X /= np.linalg.norm(X.reshape(-1, 16), axis=0)
    return float(np.abs(w12(w13(w23(X))) - w23(w12(X))).max())


def unitary_residuals(alg, delta, gns, mu: MultiplicativeUnitary, counit, S):
    W = mu.matrix
    r = mu.hilbert_dim
    n = alg.dim
    out = {}
    out["W unitary"] = np.abs(W.conj().T @ W - np.eye(r * r)).max()
    out["W legs"] = mu.leg_residual
    out["pentagon"] = pentagon_residual(W, r)
    reps = gns.rep_basis
    D3 = delta3(delta, n)
    worst = 0.0
    eye = np.eye(r)
    for j in range(n):
        lhs = W.conj().T @ np.kron(eye, reps[j]) @ W
        rhs = np.einsum("ab,apq,bst->psqt", D3[:, :, j], reps, reps).reshape(r * r, r * r)
        worst = max(worst, np.abs(lhs - rhs).max())
    out["W implements delta"] = worst
    out["W counit"] = np.abs(np.einsum("j,jab->ab", counit, mu.second_leg) - eye).max()
    # S((id (x) sigma) W) = (id (x) sigma) W^* for all matrix coefficients sigma
    w = mu.second_leg
    c = w.reshape(n, r * r)  # column (p, q): coefficients of (id (x) omega_pq) W
    lhs = S @ c
    wstar = w.conj().transpose(0, 2, 1).reshape(n, r * r)
    rhs = alg.invol.T @ wstar  # sum_j sigma(w_j^*) e_j^*
    out["W antipode"] = np.abs(lhs - rhs).max()
    return out


# ---------------------------------------------------------------------------
# the quantum group


@dataclass(frozen=True)
class QuantumGroup:
    alg: StarAlgebra
    delta: np.ndarray
    counit: np.ndarray
    antipode: np.ndarray
    haar: np.ndarray
    gns: GnsData
    W: MultiplicativeUnitary
    report: ValidationReport = field(default=None, compare=False, repr=False)
    name: str = ""

    @property
    def dim(self):
        return self.alg.dim

    @property
    def delta3(self):
        return delta3(self.delta, self.alg.dim)

    def comultiply(self, a):
        return self.delta @ np.asarray(a, dtype=complex)

    def rep(self, a):
        return self.gns.rep(a)


def validate_quantum_group(alg: StarAlgebra, delta, tol=None, name="") -> QuantumGroup:
    """Check every axiom and derive the remaining structure.

    Failures raise in the order co-associativity, Galois bijectivity,
    *-homomorphism, co-unit, antipode, Haar state, multiplicative unitary;
    the exception carries the report as ``.report``.
    """
    tol = get_tol(tol)
    delta = check_delta_shape(alg, delta)
    areport = validate_star_algebra(alg, tol)
    if not areport.passed:
        raise ValidationFailed(f"not a C*-algebra: {areport.first_failure}", areport)
    report = ValidationReport(tol)
    report.notes.update(areport.notes)
    dres = delta_residuals(alg, delta)
    report.add("coassociativity", dres.pop("coassociativity"))
    if "coassociativity" in report.failed:
        _raise(NotCoassociative, "(id (x) Delta) Delta != (Delta (x) id) Delta", report)
    T1, T2 = galois_maps(alg, delta)
    report.add("galois left rank deficit", _rank_deficit(T1, tol))
    report.add("galois right rank deficit", _rank_deficit(T2, tol))
    if report.failed:
        _raise(GaloisSingular, f"Galois map not invertible ({report.first_failure})", report)
    for k, v in dres.items():
        report.add(k, v)
    if report.failed:
        _raise(ValidationFailed, f"Delta is not a unital *-homomorphism ({report.first_failure})",
               report)

    eps = compute_counit(alg, delta, tol)
    for k, v in counit_residuals(alg, delta, eps).items():
        report.add(k, v)
    S = compute_antipode(alg, delta, eps, tol)
    for k, v in antipode_residuals(alg, delta, eps, S).items():
        report.add(k, v)
    phi = compute_haar_state(alg, delta, tol=tol)
    report.add("haar uniqueness", haar_candidates(alg, delta, tol).shape[1] - 1)
    for k, v in haar_residuals(alg, delta, phi).items():
        report.add(k, v)
    gns = gns_construct(alg, phi, tol)
    for k, v in gns_residuals(alg, gns).items():
        report.add("gns " + k, v)
    mu = build_multiplicative_unitary(alg, delta, gns, tol)
    for k, v in unitary_residuals(alg, delta, gns, mu, eps, S).items():
        report.add(k, v)
    if not report.passed:
        _raise(ValidationFailed, f"quantum group axiom failed: {report.first_failure}", report)
    return QuantumGroup(alg, delta, eps, S, phi, gns, mu, report, name)


# ---------------------------------------------------------------------------
# convolution


def left_translate(qg: QuantumGroup, mu, a):
    """``L_mu(a) = (mu (x) id) Delta(a)``."""
    return np.einsum("a,abj,j->b", np.asarray(mu, dtype=complex), qg.delta3,
                     np.asarray(a, dtype=complex))


def right_translate(qg: QuantumGroup, mu, a):
    """``(id (x) mu) Delta(a)``."""
    return np.einsum("b,abj,j->a", np.asarray(mu, dtype=complex), qg.delta3,
                     np.asarray(a, dtype=complex))


def left_translation_matrix(qg: QuantumGroup, mu):
    return np.einsum("a,abj->bj", np.asarray(mu, dtype=complex), qg.delta3)


def convolve(qg: QuantumGroup, mu, nu):
    """``mu * nu = (mu (x) nu) Delta``."""
    return np.einsum("a,b,abj->j", np.asarray(mu, dtype=complex),
                     np.asarray(nu, dtype=complex), qg.delta3)


def functional_star(qg: QuantumGroup, omega):
    """``omega^*(x) = conj(omega(S(x)^*))``."""
    S = qg.antipode
    # S(e_j)^* has coefficient row conj(S[:, j]) @ invol
    images = qg.alg.star(S.T)
    return (images @ np.asarray(omega, dtype=complex)).conj()


# ---------------------------------------------------------------------------
# the dual


def op_coordinates(ops, X):
    """Coordinates of operators ``X`` (shape ``(..., r, r)``) in the span of ``ops``.

    Least squares in the Hilbert-Schmidt inner product; returns the
    coefficients (last axis indexes ``ops``) and the largest fit residual.
    """
    k, r, _ = ops.shape
    X = np.asarray(X, dtype=complex)
    flat = ops.reshape(k, -1)
    G = flat.conj() @ flat.T
    rhs = X.reshape(-1, r * r) @ flat.conj().T
    coef = np.linalg.solve(G.T, rhs.T).T
    res = float(np.abs(coef @ flat - X.reshape(-1, r * r)).max()) if X.size else 0.0
    return coef.reshape(X.shape[:-2] + (k,)), res


def tensor_op_coordinates(ops, X):
    """Coordinates of ``X`` on ``H (x) H`` in the basis ``ops[a] (x) ops[b]``."""
    k, r, _ = ops.shape
    G = np.einsum("apq,bpq->ab", ops.conj(), ops)
    X4 = np.asarray(X).reshape(r, r, r, r)
    rhs = np.einsum("apc,bqd,pqcd->ab", ops.conj(), ops.conj(), X4, optimize=True).reshape(-1)
    coef = np.linalg.solve(np.kron(G, G).T, rhs)
    recon = np.einsum("ab,apc,bqd->pqcd", coef.reshape(k, k), ops, ops, optimize=True)
    return coef, float(np.abs(recon - X4).max())


def algebra_from_operators(ops, labels=None, tol=None):
    """Structure constants of the span of the (linearly independent) operators ``ops``."""
    k, r, _ = ops.shape
    prods = np.einsum("apq,bqs->abps", ops, ops)
    mult, r1 = op_coordinates(ops, prods)
    unit, r2 = op_coordinates(ops, np.eye(r)[None])
    invol, r3 = op_coordinates(ops, ops.conj().transpose(0, 2, 1))
    res = max(r1, r2, r3)
    if res > get_tol(tol) * 1e3 * max(1.0, np.abs(ops).max()):
        raise NoSolution(f"operators do not span a unital *-algebra (residual {res:.2e})")
    labels = labels or [f"x{i}" for i in range(k)]
    return StarAlgebra.create(mult, unit[0], invol, labels), res


@dataclass(frozen=True)
class DualPair:
    """The dual quantum group realized by operators on the GNS space of ``qg``."""

    qg: QuantumGroup
    dual_qg: QuantumGroup
    ops: np.ndarray  # (n, r, r): the dual basis elements as operators on H
    W_hat: np.ndarray
    pivots: tuple
    residuals: dict

    def to_operator(self, x):
        return np.einsum("i,ipq->pq", np.asarray(x, dtype=complex), self.ops)


_DUALS: dict = {}


def build_dual(qg: QuantumGroup, tol=None) -> DualPair:
    """``span{(omega (x) id) W}`` with ``Delta^(x) = W^^*(1 (x) x)W^``, ``W^ = Sigma W^* Sigma``."""
    tol = get_tol(tol)
    hit = _DUALS.get((id(qg), tol))
    if hit is not None and hit[0] is qg:
        return hit[1]
    pair = _build_dual(qg, tol)
    _DUALS[(id(qg), tol)] = (qg, pair)
    return pair


def _build_dual(qg, tol):
    r = qg.W.hilbert_dim
    w = qg.W.second_leg
    n = qg.dim
    pivots = sub.pivot_columns(w.reshape(n, -1).T, tol)
    if len(pivots) != n:
        raise NoSolution(f"slices of W span {len(pivots)} dimensions, expected {n}")
    ops = w[pivots]
    labels = [f"ŵ({qg.alg.labels[j]})" for j in pivots]
    dalg, fit = algebra_from_operators(ops, labels, tol)
    F = _flip(r)
    W_hat = F @ qg.W.matrix.conj().T @ F
    ddelta = np.empty((n * n, n), dtype=complex)
    worst = 0.0
    eye = np.eye(r)
    for j in range(n):
        X = W_hat.conj().T @ np.kron(eye, ops[j]) @ W_hat
        c, res = tensor_op_coordinates(ops, X)
        ddelta[:, j] = c
        worst = max(worst, res)
    dual_qg = validate_quantum_group(dalg, ddelta, tol, name=f"dual of {qg.name}".strip())
    residuals = {"dual structure fit": fit, "dual delta fit": worst}
    return DualPair(qg, dual_qg, ops, W_hat, tuple(pivots), residuals)


def biduality_residuals(pair: DualPair, tol=None):
    """The dual of the dual, computed on the same Hilbert space, is the original.

    Slices of ``W^`` must span ``pi(A)``, and the comultiplication
    implemented by ``Sigma W^^* Sigma`` on ``pi(A)`` must be ``Delta``.
    """
    qg = pair.qg
    n, r = qg.dim, qg.W.hilbert_dim
    reps = qg.gns.rep_basis
    # legs of W^ = sum_k ops[k] (x) v_k
    v, leg_res = leg_decomposition(pair.W_hat, pair.ops)
    span_v = sub.orth(v.reshape(n, -1).T, tol)
    span_a = sub.orth(reps.reshape(n, -1).T, tol)
    _, span_res = sub.subspace_equal(span_v, span_a, tol)
    F = _flip(r)
    W_back = F @ pair.W_hat.conj().T @ F
    eye = np.eye(r)
    worst = 0.0
    for j in range(n):
        X = W_back.conj().T @ np.kron(eye, reps[j]) @ W_back
        c, res = tensor_op_coordinates(reps, X)
        worst = max(worst, res, np.abs(c - qg.delta[:, j]).max())
    return {"bidual legs": leg_res, "bidual span": span_res,
            "bidual W": np.abs(W_back - qg.W.matrix).max(), "bidual delta": worst}


def bidual_invariants(pair: DualPair, tol=None):
    """Abstract dual of the dual: dimension and block structure must match the original."""
    dd = build_dual(pair.dual_qg, tol)
    a = pair.qg.report.notes.get("blocks")
    b = dd.dual_qg.report.notes.get("blocks")
    return {"dim": (pair.qg.dim, dd.dual_qg.dim), "blocks": (a, b),
            "commutative": (pair.qg.alg.is_commutative(tol), dd.dual_qg.alg.is_commutative(tol)),
            "bidual": dd}
