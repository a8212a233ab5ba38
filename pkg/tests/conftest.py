import numpy as np
import pytest

from qcorr.cocommutative import build_function_algebra, group_algebra_of
from qcorr.groups import named_group
from qcorr.instances import build_instance, build_kac_paljutkin, corpus, instance_name

TOL = 1e-9


@pytest.fixture(scope="session")
def S3():
    return named_group("S3")


@pytest.fixture(scope="session")
def cs3(S3):
    """Group algebra of S3 (cached per group object)."""
    return group_algebra_of(S3)


@pytest.fixture(scope="session")
def fs3(S3):
    return build_function_algebra(S3)


@pytest.fixture(scope="session")
def kp():
    return build_kac_paljutkin()


@pytest.fixture(scope="session")
def corpus_qgs():
    return {instance_name(s): build_instance(s) for s in corpus()}


def subgroup_idx(G, *labels):
    return tuple(sorted(G.index(x) for x in labels))
