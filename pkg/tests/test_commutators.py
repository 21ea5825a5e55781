import numpy as np
import pytest

import deltaop as d
from deltaop.commutators import (
    OperatorPair,
    commutator,
    delta_product_curve,
    double_moment_commutator,
    single_moment_check,
)
from deltaop.errors import (
    CoverageError,
    DimensionMismatch,
    MemoryBudgetError,
    ParameterError,
)
from deltaop.kernels import GAUSSIAN, LORENTZIAN, SmoothingKernel

from conftest import PAULI_X, PAULI_Y, PAULI_Z, maxabs, random_hermitian

SIGMA = 0.1
PAULI_GRID = np.linspace(-2.0, 2.0, 1201)
KERNEL = SmoothingKernel(GAUSSIAN, SIGMA)


def pauli_pair():
    return d.new_hermitian(PAULI_X), d.new_hermitian(PAULI_Y)


# --- plain commutators ---------------------------------------------------------


def test_pauli_commutator():
    sx, sy = pauli_pair()
    assert maxabs(commutator(sx, sy) - 2j * PAULI_Z) < 1e-14


def test_commutator_antisymmetry_and_antihermiticity():
    s = random_hermitian(0, 5)
    t = random_hermitian(1, 5)
    c = commutator(s, t)
    assert maxabs(c + commutator(t, s)) < 1e-12
    assert maxabs(c + c.conj().T) < 1e-12


def test_commutator_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        commutator(random_hermitian(0, 3), random_hermitian(0, 4))
    with pytest.raises(DimensionMismatch):
        OperatorPair(random_hermitian(0, 3), random_hermitian(0, 4))
    assert OperatorPair(*pauli_pair()).n == 2


# --- moment identities -----------------------------------------------------------


def test_single_moment_recovers_pauli():
    sx, _ = pauli_pair()
    got = single_moment_check(sx, KERNEL, PAULI_GRID)
    assert maxabs(got - PAULI_X) < 1e-8


def test_single_moment_recovers_viola(viola):
    grid = np.linspace(-4.5, 5.5, 4001)
    got = single_moment_check(viola, SmoothingKernel(GAUSSIAN, 0.15), grid)
    assert maxabs(got - viola.entries) < 1e-8


def test_moment_paths_require_gaussian(viola):
    bad = SmoothingKernel(LORENTZIAN, 0.1)
    grid = np.linspace(-40.0, 40.0, 801)
    with pytest.raises(ParameterError):
        single_moment_check(viola, bad, grid)
    with pytest.raises(ParameterError):
        double_moment_commutator(viola, viola, bad, grid, grid)
    with pytest.raises(ParameterError):
        delta_product_curve(viola, viola, grid, grid, bad)


def test_moment_grids_must_cover_spectrum(viola):
    short = np.linspace(-1.5, 2.5, 801)  # misses the 8-width margins
    with pytest.raises(CoverageError):
        single_moment_check(viola, KERNEL, short)


def test_double_moment_recovers_pauli_commutator():
    sx, sy = pauli_pair()
    got = double_moment_commutator(sx, sy, KERNEL, PAULI_GRID, PAULI_GRID)
    assert maxabs(got - 2j * PAULI_Z) < 1e-6


def test_double_moment_matches_factorized_path():
    sx, sy = pauli_pair()
    double = double_moment_commutator(sx, sy, KERNEL, PAULI_GRID, PAULI_GRID)
    m_x = single_moment_check(sx, KERNEL, PAULI_GRID)
    m_y = single_moment_check(sy, KERNEL, PAULI_GRID)
    assert maxabs(double - (m_x @ m_y - m_y @ m_x)) < 1e-10


def test_double_moment_random_pair():
    s = random_hermitian(5, 4)
    t = random_hermitian(6, 4)
    lo = min(np.linalg.eigvalsh(s.entries).min(), np.linalg.eigvalsh(t.entries).min())
    hi = max(np.linalg.eigvalsh(s.entries).max(), np.linalg.eigvalsh(t.entries).max())
    grid = np.linspace(lo - 1.0, hi + 1.0, int((hi - lo + 2.0) * 200) + 1)
    got = double_moment_commutator(s, t, KERNEL, grid, grid)
    assert maxabs(got - commutator(s, t)) < 1e-8


def test_double_moment_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        double_moment_commutator(random_hermitian(0, 3), random_hermitian(0, 4),
                                 KERNEL, PAULI_GRID, PAULI_GRID)


# --- product curves ------------------------------------------------------------


def oracle_product(s, t, lam_grid, mu_grid, kernel):
    def smoothed(op, lam):
        dec = d.decompose(op)
        out = np.zeros((op.n, op.n), dtype=complex)
        for e, v in zip(dec.eigenvalues, dec.vectors.T):
            out += kernel.profile(lam - e) * np.outer(v, v.conj())
        return out

    out = np.empty((lam_grid.size, mu_grid.size, s.n, s.n), dtype=complex)
    for i, lam in enumerate(lam_grid):
        for j, mu in enumerate(mu_grid):
            out[i, j] = smoothed(s, lam) @ smoothed(t, mu)
    return out


def test_product_curve_matches_oracle():
    sx, sy = pauli_pair()
    lam_grid = np.linspace(-1.5, 1.5, 5)
    mu_grid = np.linspace(-1.2, 1.2, 7)
    got = delta_product_curve(sx, sy, lam_grid, mu_grid, KERNEL)
    want = oracle_product(sx, sy, lam_grid, mu_grid, KERNEL)
    assert got.shape == (5, 7, 2, 2)
    assert maxabs(got - want) < 1e-12


def test_product_curve_contracted_form():
    sx, sy = pauli_pair()
    lam_grid = np.linspace(-1.5, 1.5, 5)
    mu_grid = np.linspace(-1.2, 1.2, 7)
    rng = np.random.default_rng(2)
    x = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    y = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    full = delta_product_curve(sx, sy, lam_grid, mu_grid, KERNEL)
    got = delta_product_curve(sx, sy, lam_grid, mu_grid, KERNEL, x=x, y=y)
    want = np.einsum("n,ijnm,m->ij", y.conj(), full, x)
    assert got.shape == (5, 7)
    assert maxabs(got - want) < 1e-12


def test_product_curve_vector_validation():
    sx, sy = pauli_pair()
    lam_grid = np.linspace(-1.5, 1.5, 5)
    with pytest.raises(ParameterError):
        delta_product_curve(sx, sy, lam_grid, lam_grid, KERNEL,
                            x=np.ones(2, dtype=complex))
    with pytest.raises(DimensionMismatch):
        delta_product_curve(sx, sy, lam_grid, lam_grid, KERNEL,
                            x=np.ones(3, complex), y=np.ones(3, complex))


def test_product_curve_memory_budget():
    sx, sy = pauli_pair()
    grid = np.linspace(-2.0, 2.0, 201)
    with pytest.raises(MemoryBudgetError):
        delta_product_curve(sx, sy, grid, grid, KERNEL, budget_bytes=1 << 20)
    # the contracted form sidesteps the budget
    got = delta_product_curve(sx, sy, grid, grid, KERNEL,
                              x=np.ones(2, complex), y=np.ones(2, complex),
                              budget_bytes=1 << 20)
    assert got.shape == (201, 201)
