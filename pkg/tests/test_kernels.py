import numpy as np
import pytest

import deltaop as d
from deltaop.errors import CoverageError, DomainError, GridError, ParameterError
from deltaop.kernels import (
    GAUSSIAN,
    LORENTZIAN,
    SmoothingKernel,
    _lorentzian_delta_quadratic,
    eigen_smoothed_delta,
    time_quadrature_delta,
    trapezoid_weights,
    weighted_evolution_sum,
)

from conftest import P_LOW, VIOLA, maxabs, random_hermitian, random_unitary


# --- Lorentzian kernel -----------------------------------------------------


@pytest.mark.parametrize("lam,eps", [(0.0, 0.1), (0.5, 0.05), (-1.0, 0.01), (2.0, 0.3)])
def test_lorentzian_two_paths_agree(viola, lam, eps):
    a = d.lorentzian_delta(viola, lam, eps)
    b = _lorentzian_delta_quadratic(viola, lam, eps)
    # on-eigenvalue peaks scale like 1/eps, so compare relative to the peak
    assert maxabs(a - b) < 1e-11 * max(1.0, maxabs(a))


@pytest.mark.parametrize("seed,n", [(0, 2), (1, 4), (2, 7)])
def test_lorentzian_two_paths_agree_random(seed, n):
    op = random_hermitian(seed, n)
    a = d.lorentzian_delta(op, 0.3, 0.07)
    b = _lorentzian_delta_quadratic(op, 0.3, 0.07)
    assert maxabs(a - b) < 1e-12 * max(1.0, maxabs(a))


def test_lorentzian_scalar_peak():
    op = d.new_hermitian([[0.7]])
    eps = 0.02
    got = d.lorentzian_delta(op, 0.7, eps)
    assert abs(got[0, 0] - 1.0 / (np.pi * eps)) < 1e-10 / eps


def test_lorentzian_viola_projector_peak(viola):
    # pi*eps*delta at an isolated eigenvalue approaches that eigenprojector
    eps = 1e-3
    got = np.pi * eps * d.lorentzian_delta(viola, 2.0, eps)
    assert maxabs(got - np.ones((3, 3)) / 3.0) < 1e-2


def test_lorentzian_scalar_tail_bound():
    got = d.lorentzian_delta(d.new_hermitian([[0.0]]), 10.0, 0.1)
    assert got[0, 0].real <= 0.1 / (np.pi * (100.0 - 0.01))


@pytest.mark.parametrize("seed,n", [(0, 3), (5, 6)])
def test_lorentzian_positive_semidefinite(seed, n):
    op = random_hermitian(seed, n)
    for lam in (-1.0, 0.0, 2.5):
        w = np.linalg.eigvalsh(d.lorentzian_delta(op, lam, 0.05))
        assert w.min() >= -1e-12


def test_lorentzian_reflection_symmetry(viola):
    neg = d.new_hermitian(-viola.entries)
    for lam in (-2.0, 0.3, 1.0):
        a = d.lorentzian_delta(viola, lam, 0.05)
        b = d.lorentzian_delta(neg, -lam, 0.05)
        assert maxabs(a - b) < 1e-12


@pytest.mark.parametrize("kind", [LORENTZIAN, GAUSSIAN])
def test_support_decay_bounded_by_tail(viola, kind):
    # operator norm at distance d from the spectrum is at most the profile there
    kernel = SmoothingKernel(kind, 0.1)
    lam = 4.0  # distance 2 from the nearest eigenvalue
    if kind == LORENTZIAN:
        delta = d.lorentzian_delta(viola, lam, 0.1)
    else:
        delta = d.gaussian_delta(viola, lam, 0.1)
    norm = np.linalg.norm(delta, 2)
    assert norm <= kernel.tail_bound(2.0) * (1.0 + 1e-10)


def test_kernel_width_must_be_positive():
    with pytest.raises(ParameterError):
        SmoothingKernel(LORENTZIAN, 0.0)


@pytest.mark.parametrize("kind,span,tol", [
    (LORENTZIAN, 2000.0, 1e-3),  # heavy tails: 2/(pi*span) truncation bias
    (GAUSSIAN, 12.0, 1e-12),
])
def test_kernel_profile_has_unit_mass(kind, span, tol):
    w = 0.17
    k = SmoothingKernel(kind, w)
    u = np.linspace(-span * w, span * w, 800_001)
    mass = np.trapezoid(k.profile(u), u)
    assert abs(mass - 1.0) < tol


# --- Gaussian / time-quadrature kernel --------------------------------------


def test_gaussian_delta_matches_eigen_route(viola):
    dec = d.decompose(viola)
    kernel = SmoothingKernel(GAUSSIAN, 0.2)
    a = d.gaussian_delta(viola, 0.5, 0.2)
    b = eigen_smoothed_delta(dec, np.array([0.5]), kernel)[0]
    assert maxabs(a - b) < 1e-12


def test_time_quadrature_scalar_operator():
    a, sigma = 0.4, 0.1
    op = d.new_hermitian([[a]])
    for lam in (0.4, 0.55):
        got = time_quadrature_delta(op, lam, sigma, t_cut=80.0, n_t=4001)
        want = np.exp(-0.5 * ((lam - a) / sigma) ** 2) / (sigma * np.sqrt(2 * np.pi))
        assert abs(got[0, 0] - want) < 1e-8


def test_time_quadrature_viola_projector(viola):
    sigma = 0.05
    got = time_quadrature_delta(viola, -1.0, sigma, t_cut=120.0, n_t=8001)
    want = P_LOW / (sigma * np.sqrt(2 * np.pi))
    assert maxabs(got - want) / maxabs(want) < 0.01


def test_time_quadrature_far_tail(viola):
    sigma = 0.2
    got = time_quadrature_delta(viola, 2.0 + 8 * sigma, sigma, t_cut=40.0, n_t=4001)
    assert maxabs(got) <= 1e-10


def test_time_quadrature_preconditions(viola):
    with pytest.raises(ParameterError):
        time_quadrature_delta(viola, 0.0, 0.1, t_cut=10.0, n_t=1001)  # t_cut < 6/sigma
    with pytest.raises(ParameterError):
        time_quadrature_delta(viola, 0.0, 0.1, t_cut=80.0, n_t=8)


def test_weighted_evolution_sum_matches_direct(viola):
    rng = np.random.default_rng(7)
    weights = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    t0, dt = -0.3, 0.17
    got = weighted_evolution_sum(viola, t0, dt, weights)
    dec = d.decompose(viola)
    v, lam = dec.vectors, dec.eigenvalues
    want = sum(
        w * (v * np.exp(-1j * (t0 + k * dt) * lam)) @ v.conj().T
        for k, w in enumerate(weights)
    )
    assert maxabs(got - want) < 1e-12


# --- moments -----------------------------------------------------------------


def test_first_moment_recovers_operator(viola):
    kernel = SmoothingKernel(GAUSSIAN, 0.15)
    grid = np.linspace(-4.5, 5.5, 4001)
    got = d.single_moment_check(viola, kernel, grid)
    assert maxabs(got - viola.entries) < 1e-6


def test_second_moment_gains_sigma_squared(viola):
    # integral of lambda^2 against the Gaussian-smoothed delta is T^2 + sigma^2 I
    sigma = 0.15
    kernel = SmoothingKernel(GAUSSIAN, sigma)
    grid = np.linspace(-4.5, 5.5, 4001)
    want = viola.entries @ viola.entries + sigma**2 * np.eye(3)
    got = np.empty((3, 3), dtype=complex)
    for i in range(3):
        for j in range(3):
            x = np.zeros(3, complex)
            y = np.zeros(3, complex)
            x[j] = 1.0
            y[i] = 1.0
            curve = d.density_curve(viola, x, y, grid, kernel)
            got[i, j] = d.weak_pairing(curve, lambda lam: lam**2)
    assert maxabs(got - want) < 1e-6


def test_lorentzian_mass_matches_truncation_oracle(viola):
    # heavy tails: the truncated mass is predicted by the arctan primitive
    eps = 0.05
    kernel = SmoothingKernel(LORENTZIAN, eps)
    x = np.array([1.0, 0.0, 0.0], dtype=complex)
    weights = {-1.0: 2.0 / 3.0, 2.0: 1.0 / 3.0}

    def oracle(a, b):
        return sum(
            w * (np.arctan((b - e) / eps) - np.arctan((a - e) / eps)) / np.pi
            for e, w in weights.items()
        )

    deviations = []
    for a, b, n in ((-6.0, 7.0, 2001), (-30.0, 31.0, 8001), (-150.0, 151.0, 40001)):
        grid = np.linspace(a, b, n)
        curve = d.density_curve(viola, x, x, grid, kernel)
        mass = float(np.real(np.trapezoid(curve.values, grid)))
        assert abs(mass - oracle(a, b)) < 1e-6
        deviations.append(abs(mass - 1.0))
    # converges to full normalization as the window widens
    assert deviations[0] > deviations[1] > deviations[2]
    assert deviations[2] < 1e-3


# --- norm identity and bounded convergence ----------------------------------


def test_norm_identity_eigen_exact(viola):
    dec = d.decompose(viola)
    v, lam = dec.vectors, dec.eigenvalues
    x = np.array([0.3, -0.2, 0.9], dtype=complex)
    f_of_t = (v * np.exp(-lam**2)) @ v.conj().T
    lhs = float(np.real(np.vdot(f_of_t @ x, f_of_t @ x)))
    weights = np.abs(v.conj().T @ x) ** 2
    rhs = float(np.sum(np.exp(-lam**2) ** 2 * weights))
    assert abs(lhs - rhs) < 1e-10


def test_norm_identity_smoothed_converges(viola):
    dec = d.decompose(viola)
    v, lam = dec.vectors, dec.eigenvalues
    x = np.array([0.3, -0.2, 0.9], dtype=complex)
    fx = ((v * np.exp(-0.5 * lam**2)) @ v.conj().T) @ x
    want = float(np.real(np.vdot(fx, fx)))
    errs = []
    for width in (0.4, 0.2, 0.1):
        kernel = SmoothingKernel(GAUSSIAN, width)
        grid = np.linspace(-8.0, 8.0, 8001)
        curve = d.density_curve(viola, x, x, grid, kernel)
        got = float(np.real(d.weak_pairing(curve, lambda l: np.exp(-l**2))))
        errs.append(abs(got - want))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 5e-3


def test_bounded_pointwise_convergence(viola):
    # f_n(lambda) = lambda / (1 + lambda^2/n) applied through the calculus
    dec = d.decompose(viola)
    v, lam = dec.vectors, dec.eigenvalues
    x = np.array([0.5, -1.0, 0.25], dtype=complex)
    t = viola.entries
    errs = []
    for n in (10, 100, 1000):
        fn = (v * (lam / (1.0 + lam**2 / n))) @ v.conj().T
        closed = t @ np.linalg.inv(np.eye(3) + t @ t / n)
        assert maxabs(fn - closed) < 1e-12
        errs.append(float(np.linalg.norm(fn @ x - t @ x)))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 2e-3


# --- density curves and weak pairings ---------------------------------------


def test_density_curve_scalar_is_unit_lorentzian():
    op = d.new_hermitian([[0.0]])
    eps = 0.3
    grid = np.linspace(-5.0, 5.0, 801)
    kernel = SmoothingKernel(LORENTZIAN, eps)
    curve = d.density_curve(op, np.array([1.0 + 0j]), np.array([1.0 + 0j]), grid, kernel)
    want = (eps / np.pi) / (grid**2 + eps**2)
    assert maxabs(curve.values - want) < 1e-14


def test_density_curve_diagonal_is_real_nonnegative(viola):
    rng = np.random.default_rng(3)
    x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    grid = np.linspace(-4.0, 5.0, 501)
    curve = d.density_curve(viola, x, x, grid, SmoothingKernel(LORENTZIAN, 0.05))
    assert np.max(np.abs(curve.values.imag)) <= 1e-12
    assert np.min(curve.values.real) >= -1e-12


def test_density_curve_orthogonal_vector_sees_no_peak(viola):
    # x in the eigenvalue -1 eigenspace: no weight at eigenvalue 2
    x = np.array([1.0, -1.0, 0.0], dtype=complex) / np.sqrt(2.0)
    kernel = SmoothingKernel(GAUSSIAN, 0.5)
    grid = np.array([1.5, 2.0])
    curve = d.density_curve(viola, x, x, grid, kernel)
    # tail bound at distance 3 plus fp leakage of the eigenvector overlap
    assert abs(curve.values[-1]) <= kernel.tail_bound(3.0) * 1.001 + 1e-28


def test_density_curve_rejects_bad_grid(viola):
    x = np.ones(3, dtype=complex)
    with pytest.raises(GridError):
        d.density_curve(viola, x, x, np.array([0.0, 1.0, 0.5]),
                        SmoothingKernel(LORENTZIAN, 0.1))


def test_weak_pairing_normalization(viola):
    rng = np.random.default_rng(11)
    x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    y = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    grid = np.linspace(-4.5, 5.5, 8001)
    curve = d.density_curve(viola, x, y, grid, SmoothingKernel(GAUSSIAN, 0.1))
    got = d.weak_pairing(curve, lambda lam: np.ones_like(lam))
    assert abs(got - np.vdot(y, x)) < 1e-6


def test_weak_pairing_heaviside_converges_to_family(viola):
    x = np.array([1.0, 0.0, 0.0], dtype=complex)
    y = np.array([0.2, -0.4, 1.0], dtype=complex)
    want = np.vdot(y, d.spectral_family(viola, 0.5) @ x)
    errs = []
    for width in (0.6, 0.3, 0.15):
        grid = np.linspace(-9.0, 10.0, 16001)
        curve = d.density_curve(viola, x, y, grid, SmoothingKernel(GAUSSIAN, width))
        got = d.weak_pairing(curve, lambda lam: (lam <= 0.5).astype(float))
        errs.append(abs(got - want))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-4


def test_weak_pairing_requires_coverage(viola):
    x = np.ones(3, dtype=complex)
    grid = np.linspace(-1.0, 1.0, 101)  # misses eigenvalue 2 + 8 widths
    curve = d.density_curve(viola, x, x, grid, SmoothingKernel(LORENTZIAN, 0.1))
    with pytest.raises(CoverageError):
        d.weak_pairing(curve, lambda lam: np.ones_like(lam))


# --- derivative pairing and the square split ---------------------------------


def test_derivative_pairing_polynomial(viola):
    # exact odd-moment cancellation: integrating lambda^2 against the kernel
    # derivative gives -2T with only quadrature error left
    kernel = SmoothingKernel(GAUSSIAN, 0.05)
    grid = np.linspace(-4.0, 5.0, 8001)
    got = d.delta_derivative_pairing(viola, d.Polynomial((0.0, 0.0, 1.0)), kernel, grid)
    assert maxabs(got - (-2.0) * viola.entries) < 1e-8


def test_derivative_pairing_scalar():
    a = 0.6
    op = d.new_hermitian([[a]])
    f = d.Gaussian(0.0, 1.0)
    kernel = SmoothingKernel(GAUSSIAN, 0.02)
    grid = np.linspace(-3.0, 3.0, 6001)
    got = d.delta_derivative_pairing(op, f, kernel, grid)
    want = -(-a * np.exp(-0.5 * a**2))
    assert abs(got[0, 0] - want) < 1e-3


def test_square_split_diag_1_2():
    op = d.new_hermitian(np.diag([1.0, 2.0]))
    kernel = SmoothingKernel(GAUSSIAN, 0.01)
    grid = np.linspace(0.05, 7.0, 8001)
    got = d.square_split_apply(op, d.Polynomial((0.0, 1.0)), kernel, grid)
    assert maxabs(got - np.diag([1.0, 4.0])) < 1e-3


def test_square_split_involution_collapses():
    # T^2 = I: any f must give f(1) I
    op = d.new_hermitian(np.diag([1.0, -1.0]))
    kernel = SmoothingKernel(GAUSSIAN, 0.01)
    grid = np.linspace(0.05, 7.0, 8001)
    f = d.Gaussian(0.0, 1.0)
    got = d.square_split_apply(op, f, kernel, grid)
    assert maxabs(got - np.exp(-0.5) * np.eye(2)) < 1e-3


def test_square_split_rejects_nonpositive_grid(viola):
    kernel = SmoothingKernel(GAUSSIAN, 0.01)
    with pytest.raises(DomainError):
        d.square_split_apply(viola, d.Polynomial((1.0,)), kernel,
                             np.linspace(-1.0, 7.0, 100))


def test_squared_operator_has_no_negative_spectrum(viola):
    sq = d.new_hermitian(viola.entries @ viola.entries)
    kernel = SmoothingKernel(LORENTZIAN, 0.01)
    delta = d.lorentzian_delta(sq, -0.5, 0.01)
    assert np.linalg.norm(delta, 2) <= kernel.tail_bound(1.5) * (1 + 1e-12)


# --- defaults ----------------------------------------------------------------


def test_default_width_tracks_spectral_range(viola):
    dec = d.decompose(viola)
    assert abs(d.default_width(dec) - 0.05 * 3.0) < 1e-12


def test_default_grid_covers_spectrum_with_margin(viola):
    dec = d.decompose(viola)
    width = d.default_width(dec)
    grid = d.default_grid(dec, width)
    assert grid[0] <= -1.0 - 8 * width
    assert grid[-1] >= 2.0 + 8 * width


def test_trapezoid_weights_sum_to_span():
    grid = np.linspace(0.0, 2.0, 41)
    assert abs(trapezoid_weights(grid).sum() - 2.0) < 1e-14
