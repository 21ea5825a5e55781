import numpy as np
import pytest

import deltaop as d

# 3x3 all-ones-off-diagonal reference operator: eigenvalues -1 (twice) and 2.
VIOLA = np.array([[0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]])
P_LOW = np.array([[2.0, -1.0, -1.0], [-1.0, 2.0, -1.0], [-1.0, -1.0, 2.0]]) / 3.0
P_HIGH = np.full((3, 3), 1.0 / 3.0)

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def maxabs(m):
    return float(np.max(np.abs(m)))


def random_hermitian(seed, n):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return d.new_hermitian((a + a.conj().T) / 2.0)


def random_unitary(seed, n):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(a)
    # fix phases so the factorization is unique and well-conditioned
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def viola():
    return d.new_hermitian(VIOLA)


@pytest.fixture
def viola_file(tmp_path):
    import json

    path = tmp_path / "viola.json"
    path.write_text(json.dumps({"n": 3, "entries": VIOLA.tolist()}))
    return str(path)
