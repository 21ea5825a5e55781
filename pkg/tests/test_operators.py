import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import deltaop as d
from deltaop.errors import NotHermitian, NotSquare

from conftest import P_HIGH, P_LOW, VIOLA, maxabs, random_hermitian, random_unitary


def test_new_hermitian_symmetrizes_last_bit_asymmetry():
    a = VIOLA.copy()
    a[0, 1] += 1e-13
    op = d.new_hermitian(a)
    assert maxabs(op.entries - op.entries.conj().T) == 0.0


def test_new_hermitian_rejects_genuine_asymmetry():
    with pytest.raises(NotHermitian):
        d.new_hermitian([[0.0, 1.0], [2.0, 0.0]])


def test_new_hermitian_rejects_non_square():
    with pytest.raises(NotSquare):
        d.new_hermitian([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])


def test_new_hermitian_rejects_nan():
    with pytest.raises(NotHermitian):
        d.new_hermitian([[np.nan, 0.0], [0.0, 1.0]])


def test_entries_are_read_only(viola):
    with pytest.raises(ValueError):
        viola.entries[0, 0] = 5.0


def test_viola_eigenvalues(viola):
    dec = d.decompose(viola)
    assert np.allclose(dec.eigenvalues, [-1.0, -1.0, 2.0], atol=1e-10)


def test_viola_eigenprojectors(viola):
    pairs = d.eigenprojectors(d.decompose(viola))
    assert len(pairs) == 2
    (e1, p1), (e2, p2) = pairs
    assert abs(e1 + 1.0) < 1e-10 and abs(e2 - 2.0) < 1e-10
    assert maxabs(p1 - P_LOW) < 1e-10
    assert maxabs(p2 - P_HIGH) < 1e-10


def test_degenerate_cluster_merges():
    op = d.new_hermitian(np.diag([1.0, 1.0 + 1e-12, 3.0]))
    dec = d.decompose(op)
    assert len(dec.clusters()) == 2


@pytest.mark.parametrize("seed,n", [(0, 1), (1, 2), (2, 5), (3, 9)])
def test_completeness_and_orthogonality(seed, n):
    pairs = d.eigenprojectors(d.decompose(random_hermitian(seed, n)))
    total = sum(p for _, p in pairs)
    assert maxabs(total - np.eye(n)) < 1e-10
    for i, (_, pi) in enumerate(pairs):
        assert maxabs(pi @ pi - pi) < 1e-10
        for _, pj in pairs[i + 1:]:
            assert maxabs(pi @ pj) < 1e-10


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(1, 8))
def test_conjugation_covariance_of_eigenvalues(seed, n):
    op = random_hermitian(seed, n)
    u = random_unitary(seed + 1, n)
    conj = d.new_hermitian(u.conj().T @ op.entries @ u)
    a = np.sort(d.decompose(op).eigenvalues)
    b = np.sort(d.decompose(conj).eigenvalues)
    assert np.max(np.abs(a - b)) < 1e-9 * max(1.0, op.norm())


def test_spectral_range_and_norm(viola):
    dec = d.decompose(viola)
    assert abs(dec.spectral_norm() - 2.0) < 1e-10
    assert abs(dec.spectral_range() - 3.0) < 1e-10
