import numpy as np
import pytest

from peiffer import ambient as amb
from peiffer import catalog as cat


@pytest.fixture(scope="session")
def group_stream():
    return cat.build_stream("group", seed=0)


@pytest.fixture(scope="session")
def lie_stream_2():
    return cat.build_stream("lie", prime=2, seed=0)


@pytest.fixture(scope="session")
def lie_stream_3():
    return cat.build_stream("lie", prime=3, seed=0)


@pytest.fixture(scope="session")
def s3():
    return amb.group_from_permutations([[1, 0, 2], [1, 2, 0]], name="S3")


@pytest.fixture(scope="session")
def q8_oracle_table():
    """Quaternion group realized independently as 2x2 complex matrices."""
    e = np.eye(2, dtype=complex)
    i = np.array([[1j, 0], [0, -1j]])
    j = np.array([[0, 1], [-1, 0]], dtype=complex)
    k = i @ j
    mats = [e, i, j, k, -e, -i, -j, -k]

    def find(m):
        for idx, cand in enumerate(mats):
            if np.allclose(m, cand):
                return idx
        raise AssertionError("product left the group")

    return [[find(a @ b) for b in mats] for a in mats]
