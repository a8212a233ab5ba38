import numpy as np
import pytest

from qcorr.errors import UnknownKind
from qcorr.instances import build_instance, corpus, instance_name


def test_corpus_has_fourteen_distinct_instances(corpus_qgs):
    assert len(corpus()) == 14 and len(corpus_qgs) == 14


def test_corpus_validates(corpus_qgs):
    for name, qg in corpus_qgs.items():
        assert qg.report.passed, name
        assert max(qg.report.residuals.values()) < 1e-9, name


def test_kac_paljutkin_shape(kp):
    assert kp.dim == 8
    assert sorted(kp.report.notes["blocks"]) == [1, 1, 1, 1, 2]
    assert not kp.alg.is_commutative()
    # not cocommutative: the flipped comultiplication differs
    D = kp.delta.reshape(8, 8, 8)
    assert np.abs(D - D.transpose(1, 0, 2)).max() > 0.1


def test_kac_paljutkin_is_self_dual_in_shape(corpus_qgs):
    d = corpus_qgs["dual(KP)"]
    assert d.dim == 8 and sorted(d.report.notes["blocks"]) == [1, 1, 1, 1, 2]


def test_dual_of_nonabelian_group_algebra_is_commutative():
    d = build_instance({"kind": "dual_of", "inner": {"kind": "group_algebra", "group": "D4"}})
    assert d.alg.is_commutative() and d.dim == 8


def test_inline_group_spec():
    spec = {"kind": "group_algebra", "group": {"order": 2, "cayley": [[0, 1], [1, 0]]}}
    qg = build_instance(spec)
    assert qg.dim == 2 and instance_name(spec) == "C*(G2)"


def test_unknown_kind():
    with pytest.raises(UnknownKind):
        build_instance({"kind": "hopf"})
