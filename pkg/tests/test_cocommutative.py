import numpy as np
import pytest

from qcorr import subspace as sub
from qcorr.algebra import span
from qcorr.cocommutative import (build_function_algebra, build_group_algebra, coset_constancy_span,
                                 double_cosets, final_corollary, group_algebra_of, indicator_state,
                                 lam, normality_symmetry_check, quotient_by_normal,
                                 random_invariant_search, span_lambda, support,
                                 subgroup_of_subalgebra, subalgebra_of_subgroup)
from qcorr.correspondence import f0_span, is_in_F0, is_left_invariant
from qcorr.algebra import is_positive
from qcorr.errors import InvalidGroup, NotInvariant, NotNormal
from qcorr.groups import enumerate_subgroups, named_group

from conftest import subgroup_idx

TOL = 1e-9
GROUPS = ("S3", "D4", "Q8")


def brute_positive_definite(G, u):
    """u is positive definite iff [u(s^-1 t)]_{s,t} is positive semidefinite."""
    M = np.array([[u[G.mul(G.inv(s), t)] for t in range(G.order)] for s in range(G.order)])
    return np.linalg.eigvalsh((M + M.conj().T) / 2).min() > -TOL


def test_support_examples(S3):
    assert support(lam(S3, "e")) == {S3.index("e")}
    assert support(lam(S3, "(12)", "(123)", coeffs=[2, -1j])) == {S3.index("(12)"), S3.index("(123)")}
    assert support(np.zeros(6)) == frozenset()
    assert support(lam(S3, "e") + 1e-14 * lam(S3, "(12)")) == {S3.index("e")}


def test_group_and_function_algebras_validate():
    for g in GROUPS:
        a = build_group_algebra(g)
        b = build_function_algebra(g)
        assert a.report.passed and b.report.passed
        assert b.alg.is_commutative()
        assert a.alg.is_commutative() == (g != "S3" and g != "D4" and g != "Q8")


@pytest.mark.parametrize("g", GROUPS)
def test_subgroups_and_invariant_subalgebras_are_mutually_inverse(g):
    G = named_group(g)
    qg = group_algebra_of(G)
    for H in enumerate_subgroups(G):
        X = subalgebra_of_subgroup(G, H, qg)
        assert is_left_invariant(qg, X)
        assert subgroup_of_subalgebra(G, X, qg) == tuple(sorted(H))


def test_forward_rejects_non_subgroup(S3):
    with pytest.raises(InvalidGroup):
        subalgebra_of_subgroup(S3, subgroup_idx(S3, "e", "(12)", "(13)"))


def test_backward_rejects_non_invariant(S3, cs3):
    X = span(cs3.alg, [cs3.alg.unit, lam(S3, "e", "(12)")])
    assert subgroup_of_subalgebra(S3, X) == subgroup_idx(S3, "e", "(12)")
    with pytest.raises(NotInvariant):
        subgroup_of_subalgebra(S3, span(cs3.alg, [lam(S3, "e", "(12)")]))


def test_random_search_finds_only_subgroups(S3):
    found = random_invariant_search(S3, 60, np.random.default_rng(3))
    subs = {tuple(sorted(H)) for H in enumerate_subgroups(S3)}
    assert set(found) <= subs and len(found) > 1


def test_normality_symmetry_and_ideal_agree():
    for g in GROUPS + ("Z/4",):
        G = named_group(g)
        rows = [normality_symmetry_check(G, H) for H in enumerate_subgroups(G)]
        assert all(r["agree"] for r in rows), g
        if g == "S3":
            assert sum(r["symmetric"] for r in rows) == 3
        if g == "Q8":
            assert all(r["symmetric"] for r in rows)


def test_f0_states_are_positive_definite_and_one_on_h(S3, cs3):
    # a state u lies in F_0 of span lambda(H) exactly when u = 1 on H
    gen = np.random.default_rng(5)
    H = subgroup_idx(S3, "e", "(12)")
    X = span_lambda(S3, H)
    verdicts = set()
    for k in range(20):
        c = gen.random(3)
        c[1] *= k % 2  # even k: no delta_e term, so u = 1 on H
        u = sum(ci * indicator_state(S3, cl) for ci, cl in zip(c, [H, (0,), tuple(range(6))]))
        u = u / u[S3.identity]
        if not (is_positive(cs3.alg, u) and brute_positive_definite(S3, u)):
            continue
        verdict = is_in_F0(cs3, X, u)
        assert verdict == bool(np.abs(u[list(H)] - 1).max() < TOL)
        verdicts.add(verdict)
    assert verdicts == {True, False}
    assert is_in_F0(cs3, X, indicator_state(S3, H))
    assert not is_in_F0(cs3, X, indicator_state(S3, (S3.identity,)))


def test_coset_constancy(S3):
    dims = {}
    for H in enumerate_subgroups(S3):
        basis, equal, res = coset_constancy_span(S3, H)
        assert equal and res < TOL
        dims[len(H)] = basis.shape[1]
    assert dims[1] == 6 and dims[6] == 1 and dims[3] == 2 and dims[2] == 2


def test_double_cosets_partition(S3):
    for H in enumerate_subgroups(S3):
        cl = double_cosets(S3, H)
        assert sorted(x for c in cl for x in c) == list(range(6))


def test_f0_span_is_coset_constant_everywhere():
    for g in GROUPS:
        G = named_group(g)
        for H in enumerate_subgroups(G):
            F = f0_span(group_algebra_of(G), span_lambda(G, H))
            for f in F.T:
                for s in range(G.order):
                    for h in H:
                        assert abs(f[G.mul(s, h)] - f[s]) < 1e-8
                        assert abs(f[G.mul(h, s)] - f[s]) < 1e-8


def test_quotient_by_normal_a3(S3):
    q = quotient_by_normal(S3, subgroup_idx(S3, "e", "(123)", "(132)"), strict=True)
    assert q["quotient_order"] == 2 and q["kernel_equal"] and q["isomorphic"]
    assert q["built"].target.alg.is_commutative()


def test_quotient_by_non_normal(S3):
    H = subgroup_idx(S3, "e", "(12)")
    with pytest.raises(NotNormal):
        quotient_by_normal(S3, H, strict=True)
    q = quotient_by_normal(S3, H)
    assert q["K"] == tuple(range(6)) and q["quotient_order"] == 1
    assert q["built"].dim == 1 and q["kernel_equal"]


def test_every_quantum_subgroup_is_a_dual_quotient():
    counts = {"S3": 3, "D4": 6, "Q8": 6}
    for g, n in counts.items():
        rows = final_corollary(named_group(g))
        assert len(rows) == n
        assert all(r["normal"] and r["kernel_equal"] for r in rows)
