"""Quantum group axioms, derived structure, W and the dual."""
import numpy as np
import pytest

from qcorr.algebra import StarAlgebra
from qcorr.cocommutative import build_function_algebra, build_group_algebra, function_algebra_data
from qcorr.errors import GaloisSingular, NotCoassociative
from qcorr.groups import cyclic, named_group
from qcorr.qgroup import (_flip, biduality_residuals, build_dual, compute_counit, convolve,
                          functional_star, left_translate, pentagon_residual, validate_quantum_group)

TOL = 1e-9


def in_point_basis(qg, op):
    """Operator on the GNS space written in the basis Lambda(e_j)/|Lambda(e_j)|."""
    V = qg.gns.lambda_map
    U = V / np.linalg.norm(V, axis=0)
    Ui = np.linalg.inv(U)
    if op.shape[0] == U.shape[0]:
        return Ui @ op @ U
    return np.kron(Ui, Ui) @ op @ np.kron(U, U)


def perm_matrix(n, f):
    """Matrix of xi -> xi o f on C^n (x) C^n: (P xi)(s, t) = xi(f(s, t))."""
    P = np.zeros((n * n, n * n))
    for s in range(n):
        for t in range(n):
            a, b = f(s, t)
            P[s * n + t, a * n + b] = 1
    return P


def test_function_algebra_z2_valid_and_structure():
    G = cyclic(2)
    qg = build_function_algebra(G)
    assert np.abs(qg.counit - [1, 0]).max() < TOL
    assert np.abs(qg.haar - [0.5, 0.5]).max() < TOL


def test_grouplike_diagonal_delta_is_galois_singular():
    alg = function_algebra_data(cyclic(2))[0]
    delta = np.zeros((4, 2))
    delta[0, 0] = delta[3, 1] = 1  # Delta(d_g) = d_g (x) d_g
    with pytest.raises(GaloisSingular):
        validate_quantum_group(alg, delta)


def test_noncoassociative_rejected():
    alg = function_algebra_data(cyclic(3))[0]
    delta = np.zeros((9, 3))
    # Delta(f)(s, t) = f(s - t) is not co-associative on Z/3
    for s in range(3):
        for t in range(3):
            delta[s * 3 + t, (s - t) % 3] = 1
    with pytest.raises(NotCoassociative):
        validate_quantum_group(alg, delta)


def test_counits(S3, cs3, fs3, kp):
    assert np.abs(fs3.counit - np.eye(6)[S3.identity]).max() < TOL
    assert np.abs(cs3.counit - 1).max() < TOL
    assert kp.report.residuals["counit left"] < TOL
    assert np.abs(compute_counit(kp.alg, kp.delta) - kp.counit).max() < TOL


def test_antipodes(S3, cs3, fs3):
    inv = S3.inverse
    expected = np.eye(6)[:, inv]  # S(e_s) = e_{s^-1}
    assert np.abs(fs3.antipode - expected).max() < TOL
    assert np.abs(cs3.antipode - expected).max() < TOL


def test_antipode_squares_to_identity(corpus_qgs):
    for qg in corpus_qgs.values():
        assert np.abs(qg.antipode @ qg.antipode - np.eye(qg.dim)).max() < TOL


def test_haar_states(S3, cs3, fs3, kp):
    assert np.abs(fs3.haar - 1 / 6).max() < TOL
    assert np.abs(cs3.haar - np.eye(6)[S3.identity]).max() < TOL
    assert kp.report.residuals["haar left invariance"] < TOL
    assert kp.report.residuals["haar right invariance"] < TOL
    assert kp.report.residuals["haar uniqueness"] == 0


def test_w_function_algebra_z2_formula():
    qg = build_function_algebra(cyclic(2))
    G = cyclic(2)
    W = in_point_basis(qg, qg.W.matrix)
    # W xi(s, t) = xi(s, s^-1 t)
    P = perm_matrix(2, lambda s, t: (s, G.mul(G.inv(s), t)))
    assert np.abs(W - P).max() < TOL


def test_w_function_algebra_s3_formula(S3, fs3):
    W = in_point_basis(fs3, fs3.W.matrix)
    P = perm_matrix(6, lambda s, t: (s, S3.mul(S3.inv(s), t)))
    assert np.abs(W - P).max() < TOL


def test_w_hat_formula_z2():
    G = cyclic(2)
    qg = build_function_algebra(G)
    pair = build_dual(qg)
    # W^ xi(s, t) = xi(ts, t)
    P = perm_matrix(2, lambda s, t: (G.mul(t, s), t))
    assert np.abs(in_point_basis(qg, pair.W_hat) - P).max() < TOL
    # the group algebra's own W has the same form
    ga = build_group_algebra(G)
    assert np.abs(in_point_basis(ga, ga.W.matrix) - P).max() < TOL


def test_one_dimensional_quantum_group_has_trivial_w():
    alg = StarAlgebra.create([[[1]]], [1], [[1]])
    qg = validate_quantum_group(alg, np.array([[1.0]]))
    assert np.abs(qg.W.matrix - 1).max() < TOL


def test_pentagon_and_implementation_on_corpus(corpus_qgs):
    for name, qg in corpus_qgs.items():
        r = qg.W.hilbert_dim
        assert pentagon_residual(qg.W.matrix, r) < TOL, name
        assert qg.report.residuals["W implements delta"] < TOL, name


def test_pentagon_probe_path_agrees_with_dense(kp):
    gen = np.random.default_rng(1)
    r = kp.W.hilbert_dim
    from qcorr import qgroup
    old = qgroup.EXACT_PENTAGON_MAX
    try:
        qgroup.EXACT_PENTAGON_MAX = 0
        assert pentagon_residual(kp.W.matrix, r, gen) < TOL
        # a unitary that is not multiplicative fails on probes too
        bad = np.kron(np.eye(r), np.roll(np.eye(r), 1, axis=0)) @ kp.W.matrix
        assert pentagon_residual(bad, r, gen) > 1e-3
    finally:
        qgroup.EXACT_PENTAGON_MAX = old


def test_antipode_matches_w_formula(corpus_qgs):
    # S((id (x) sigma) W) = (id (x) sigma) W^* for matrix-unit functionals sigma
    for name, qg in corpus_qgs.items():
        w = qg.W.second_leg
        r = qg.W.hilbert_dim
        for p in range(r):
            for q in range(r):
                lhs = qg.antipode @ w[:, p, q]
                rhs = w[:, q, p].conj() @ qg.alg.invol
                assert np.abs(lhs - rhs).max() < 1e-8, name


def test_counit_slice_of_w_is_one(corpus_qgs):
    for qg in corpus_qgs.values():
        s = np.einsum("j,jab->ab", qg.counit, qg.W.second_leg)
        assert np.abs(s - np.eye(qg.W.hilbert_dim)).max() < TOL


def test_left_translation(S3, fs3, cs3):
    f = np.arange(6, dtype=float) + 1
    for s in range(6):
        ev = np.eye(6)[s]
        expected = np.array([f[S3.mul(s, t)] for t in range(6)])
        assert np.abs(left_translate(fs3, ev, f) - expected).max() < TOL
    assert np.abs(left_translate(fs3, fs3.counit, f) - f).max() < TOL
    mu = np.random.default_rng(0).standard_normal(6)
    for s in range(6):
        e = np.eye(6)[s]
        assert np.abs(left_translate(cs3, mu, e) - mu[s] * e).max() < TOL


def test_left_translation_is_right_action(kp):
    gen = np.random.default_rng(2)
    mu, nu, a = (gen.standard_normal(8) + 1j * gen.standard_normal(8) for _ in range(3))
    lhs = left_translate(kp, convolve(kp, mu, nu), a)
    rhs = left_translate(kp, nu, left_translate(kp, mu, a))
    assert np.abs(lhs - rhs).max() < TOL


def test_convolution(S3, fs3, kp):
    for s in range(6):
        for t in range(6):
            c = convolve(fs3, np.eye(6)[s], np.eye(6)[t])
            assert np.abs(c - np.eye(6)[S3.mul(s, t)]).max() < TOL
    gen = np.random.default_rng(7)
    mu, nu, om = (gen.standard_normal(8) + 1j * gen.standard_normal(8) for _ in range(3))
    assert np.abs(convolve(kp, kp.counit, mu) - mu).max() < TOL
    assert np.abs(convolve(kp, kp.haar, kp.haar) - kp.haar).max() < TOL
    assert np.abs(convolve(kp, convolve(kp, mu, nu), om)
                  - convolve(kp, mu, convolve(kp, nu, om))).max() < TOL
    assert np.abs(functional_star(kp, functional_star(kp, mu)) - mu).max() < TOL
    # conjugate linear
    assert np.abs(functional_star(kp, 1j * mu) + 1j * functional_star(kp, mu)).max() < TOL


def test_dual_of_function_algebra_is_left_regular_span(S3, fs3):
    pair = build_dual(fs3)
    ops = np.array([in_point_basis(fs3, op) for op in pair.ops])
    lam = np.zeros((6, 6, 6))
    for s in range(6):
        for t in range(6):
            lam[s, S3.mul(s, t), t] = 1  # lambda(s) delta_t = delta_{st}
    from qcorr import subspace as sub
    a = sub.orth(ops.reshape(6, -1).T)
    b = sub.orth(lam.reshape(6, -1).T)
    assert sub.subspace_equal(a, b)[0]
    assert pair.dual_qg.report.notes["blocks"] == [1, 1, 2]


def test_dual_of_group_algebra_is_commutative(cs3):
    pair = build_dual(cs3)
    d = pair.dual_qg
    assert d.alg.is_commutative()
    ops = np.array([in_point_basis(cs3, op) for op in pair.ops])
    off = ops - np.einsum("kii->ki", ops)[:, :, None] * np.eye(6)
    assert np.abs(off).max() < TOL  # multiplication operators


def test_biduality_on_corpus(corpus_qgs):
    for name, qg in corpus_qgs.items():
        pair = build_dual(qg)
        assert pair.dual_qg.dim == qg.dim
        assert max(biduality_residuals(pair).values()) < TOL, name


def test_flip_is_an_involution():
    F = _flip(3)
    assert np.abs(F @ F - np.eye(9)).max() == 0
