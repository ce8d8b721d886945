import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def basis_ket(dim, k):
    v = np.zeros(dim, dtype=complex)
    v[k] = 1.0
    return v


def ketbra(v):
    v = np.asarray(v, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())
