import itertools

import numpy as np
import pytest

from qcorr.errors import InvalidGroup, TooLarge
from qcorr.groups import (FiniteGroup, cyclic, enumerate_subgroups, from_dict, named_group,
                          symmetric)


def brute_force_subgroups(G):
    """Every subset containing e and closed under products (finite => subgroup)."""
    out = []
    others = [s for s in range(G.order) if s != G.identity]
    for r in range(len(others) + 1):
        for c in itertools.combinations(others, r):
            H = {G.identity, *c}
            if all(G.mul(a, b) in H for a in H for b in H):
                out.append(tuple(sorted(H)))
    return sorted(out, key=lambda H: (len(H), H))


@pytest.mark.parametrize("name,count", [("Z/2", 2), ("S3", 6), ("D4", 10), ("Q8", 6), ("Z/4", 3),
                                        ("V4", 5)])
def test_subgroup_counts_match_brute_force(name, count):
    G = named_group(name)
    subs = enumerate_subgroups(G)
    assert len(subs) == count
    assert subs == brute_force_subgroups(G)


def test_s4_has_30_subgroups():
    assert len(enumerate_subgroups(symmetric(4))) == 30


def test_bound():
    with pytest.raises(TooLarge):
        enumerate_subgroups(named_group("Z/8"), bound=4)


def test_s3_normal_subgroups(S3):
    normal = [H for H in enumerate_subgroups(S3) if S3.is_normal(H)]
    assert [len(H) for H in normal] == [1, 3, 6]


def test_q8_relations():
    Q = named_group("Q8")
    i, j, k, m1 = (Q.index(x) for x in ("i", "j", "k", "-1"))
    assert Q.mul(i, j) == k and Q.mul(j, i) == Q.index("-k")
    assert Q.mul(i, i) == m1 and Q.mul(m1, m1) == Q.identity
    assert all(Q.is_normal(H) for H in enumerate_subgroups(Q))


def test_permutation_convention(S3):
    # (st)(i) = s(t(i)): (12)(23) = (123)
    assert S3.labels[S3.mul(S3.index("(12)"), S3.index("(23)"))] == "(123)"
    assert S3.labels[S3.conjugate(S3.index("(12)"), S3.index("(123)"))] == "(23)"


def test_conjugate_closure_and_quotient(S3):
    H = S3.generated([S3.index("(12)")])
    assert S3.conjugate_closure(H) == tuple(range(6))
    A3 = S3.generated([S3.index("(123)")])
    Q, where = S3.quotient(A3)
    assert Q.order == 2
    for s in range(6):
        for t in range(6):
            assert where[S3.mul(s, t)] == Q.mul(where[s], where[t])
    with pytest.raises(InvalidGroup):
        S3.quotient(H)


def test_cosets(S3):
    H = S3.generated([S3.index("(12)")])
    assert len(S3.cosets(H)) == 3 and len(S3.right_cosets(H)) == 3
    assert set(S3.cosets(H)) != set(S3.right_cosets(H))


def test_invalid_tables_rejected():
    with pytest.raises(InvalidGroup):
        FiniteGroup(2, np.array([[0, 1], [0, 1]]), ("a", "b"))
    # Latin square that is not associative
    t = np.array([[0, 1, 2], [1, 0, 2], [2, 2, 0]])
    with pytest.raises(InvalidGroup):
        FiniteGroup(3, t, ("a", "b", "c"))


def test_dict_roundtrip():
    G = cyclic(5)
    H = from_dict(G.to_dict())
    assert np.array_equal(G.cayley, H.cayley) and G.labels == H.labels
