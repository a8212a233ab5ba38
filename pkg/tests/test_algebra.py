"""Star algebras: validation, blocks, closures, GNS."""
import numpy as np
import pytest

from qcorr.algebra import (StarAlgebra, block_decompose, center, gns_construct, gns_residuals,
                           ideal_closure, is_positive, is_state, random_state, span,
                           subalgebra_closure, trace_functional, validate_star_algebra)
from qcorr.cocommutative import function_algebra_data, group_algebra_data, lam
from qcorr.errors import NotCStar, NotPositive, ShapeMismatch
from qcorr.groups import cyclic, named_group
from qcorr import subspace as sub

from conftest import subgroup_idx


def z2_group_algebra():
    return group_algebra_data(cyclic(2))[0]


def test_scalars_validate():
    alg = StarAlgebra.create([[[1]]], [1], [[1]])
    assert validate_star_algebra(alg).passed


def test_group_algebra_z2_validates():
    assert validate_star_algebra(z2_group_algebra()).passed


def test_negated_involution_fails_positivity():
    # lambda(g)* = -lambda(g) is still antimultiplicative and involutive;
    # what breaks is lambda(g)* lambda(g) = -1, so no C*-norm exists
    alg = z2_group_algebra()
    invol = alg.invol.copy()
    invol[1, 1] = -1
    bad = StarAlgebra.create(alg.mult, alg.unit, invol, alg.labels)
    rep = validate_star_algebra(bad)
    assert not rep.passed
    assert rep.residuals["involution antimultiplicative"] < 1e-12
    assert rep.residuals["involution involutive"] < 1e-12
    assert "c_star" in rep.failed


def test_identity_involution_on_nonabelian_group_algebra_is_not_antimultiplicative():
    alg = group_algebra_data(named_group("S3"))[0]
    bad = StarAlgebra.create(alg.mult, alg.unit, np.eye(6), alg.labels)
    rep = validate_star_algebra(bad)
    assert rep.first_failure == "involution antimultiplicative"


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        StarAlgebra.create(np.zeros((2, 2, 2)), [1, 0, 0], np.eye(2))


@pytest.mark.parametrize("name,sizes", [("Z/2", [1, 1]), ("S3", [1, 1, 2]), ("D4", [1, 1, 1, 1, 2]),
                                        ("Q8", [1, 1, 1, 1, 2])])
def test_group_algebra_blocks(name, sizes):
    # oracle: the irreducible representation dimensions of the group
    G = named_group(name)
    alg = group_algebra_data(G)[0]
    b = block_decompose(alg)
    assert sorted(b.sizes) == sizes
    assert sum(d * d for d in b.sizes) == G.order
    assert b.residual(alg) < 1e-9


def test_function_algebra_blocks_are_points():
    alg = function_algebra_data(named_group("S3"))[0]
    assert block_decompose(alg).sizes == (1,) * 6


def test_central_projections_partition_unity(S3):
    alg = group_algebra_data(S3)[0]
    b = block_decompose(alg)
    P = b.central_projections
    assert np.abs(P.sum(axis=0) - alg.unit).max() < 1e-9
    for i in range(len(P)):
        assert np.abs(alg.star(P[i]) - P[i]).max() < 1e-9
        for j in range(len(P)):
            target = P[i] if i == j else 0
            assert np.abs(alg.product(P[i], P[j]) - target).max() < 1e-9
    # the centre of C*(S3) is spanned by the three class sums
    assert center(alg).shape[1] == 3


def test_noncommutative_matrix_algebra_is_rejected_when_not_semisimple():
    # upper triangular 2x2 matrices: an algebra without a C*-structure
    E11, E12, E22 = 0, 1, 2
    mult = np.zeros((3, 3, 3))
    mult[E11, E11, E11] = 1
    mult[E11, E12, E12] = 1
    mult[E12, E22, E12] = 1
    mult[E22, E22, E22] = 1
    invol = np.eye(3)
    alg = StarAlgebra.create(mult, [1, 0, 1], invol, ["E11", "E12", "E22"])
    assert not validate_star_algebra(alg).passed
    with pytest.raises(NotCStar):
        block_decompose(alg)


def test_subalgebra_closure_examples(S3):
    alg = group_algebra_data(S3)[0]
    X = subalgebra_closure(alg, [alg.unit])
    assert X.dim == 1
    X = subalgebra_closure(alg, [lam(S3, "(123)")])
    target = span(alg, [lam(S3, s) for s in ("e", "(123)", "(132)")])
    assert X.equals(target)[0]
    fz2 = function_algebra_data(cyclic(2))[0]
    assert subalgebra_closure(fz2, [[1, 0]]).dim == 1


def test_ideal_closure_examples(S3):
    alg = group_algebra_data(S3)[0]
    assert ideal_closure(alg, np.zeros((0, 6))).dim == 0
    J = ideal_closure(alg, [lam(S3, "e") - lam(S3, "(12)")])
    assert J.dim == 5
    # the complement is spanned by the sum of all group elements
    total = np.ones(6)
    assert np.abs(sub.projector(J.basis) @ total).max() < 1e-9
    assert ideal_closure(alg, [alg.unit]).dim == 6


def test_closures_are_idempotent_and_monotone(S3):
    alg = group_algebra_data(S3)[0]
    x = lam(S3, "(12)")
    X = subalgebra_closure(alg, [x])
    assert subalgebra_closure(alg, X).equals(X)[0]
    Y = subalgebra_closure(alg, [x, lam(S3, "(123)")])
    assert sub.max_distance(Y.basis, X.basis) < 1e-9
    J = ideal_closure(alg, [x - alg.unit])
    assert ideal_closure(alg, J).equals(J)[0]


def test_gns_function_algebra_uniform_state():
    alg = function_algebra_data(cyclic(2))[0]
    g = gns_construct(alg, [0.5, 0.5])
    assert g.hilbert_dim == 2 and g.faithful
    # multiplication operators: diagonal with the function values
    f = np.array([2.0, -3.0])
    assert sorted(np.linalg.eigvalsh(g.rep(f))) == pytest.approx([-3, 2])
    assert max(gns_residuals(alg, g).values()) < 1e-12


def test_gns_group_algebra_plancherel_is_regular_representation(S3):
    alg = group_algebra_data(S3)[0]
    phi = np.eye(6)[S3.identity]
    g = gns_construct(alg, phi)
    assert g.hilbert_dim == 6
    # traces of the left regular representation: 6 at e, 0 elsewhere
    traces = np.array([np.trace(g.rep(np.eye(6)[s])) for s in range(6)])
    assert np.abs(traces - 6 * phi).max() < 1e-9
    assert max(gns_residuals(alg, g).values()) < 1e-9


def test_gns_point_evaluation_is_one_dimensional():
    alg = function_algebra_data(cyclic(2))[0]
    g = gns_construct(alg, [1, 0])
    assert g.hilbert_dim == 1 and not g.faithful
    assert max(gns_residuals(alg, g).values()) < 1e-12


def test_gns_rejects_non_positive():
    alg = function_algebra_data(cyclic(2))[0]
    with pytest.raises(NotPositive):
        gns_construct(alg, [1, -1])


def test_random_states_are_states(S3):
    alg = group_algebra_data(S3)[0]
    gen = np.random.default_rng(5)
    for _ in range(20):
        mu = random_state(alg, gen)
        assert is_state(alg, mu)
    assert is_state(alg, trace_functional(alg))
    assert not is_positive(alg, -trace_functional(alg))
