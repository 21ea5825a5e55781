"""Discretized model operators and their closed-form spectral kernels.

Momentum is fixed as P = iD, so exp(-itP) shifts arguments by +t and the
plane wave exp(-ikx) is an eigenvector with eigenvalue +k.  The sign is a
convention; the reflected choice works the same way throughout.

The discretization is spectral: P is diagonal in the discrete Fourier basis
with wavenumbers k = pi*m/L for m in (-n/2, n/2] (alias block chosen so the
n=8, L=pi spectrum is the integers -4..3).  Plane waves on the grid are then
exact eigenvectors, which keeps comparisons against the continuum kernels
free of finite-difference dispersion.

Laplacian kernel record: the closed-form spectral family of -D^2 is
implemented with the real sinc kernel

    (E_lam phi)(x) = (1/pi) integral sin(sqrt(lam)(s-x))/(s-x) phi(s) ds

with diagonal value sqrt(lam)/pi and E_lam = 0 for lam < 0.  The alternative
grouping (1/(i*pi)) * [cos(lam(s-x)) - 1]/(s-x) fails the eigen-oracle cross
check twice over: the prefactor makes the action non-real on real input, and
the frequency must be sqrt(lam), not lam, for T = -D^2 (band |k| <= sqrt(lam)).
The sinc form reproduces the projector; the cos-difference form does not.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, GridError, ParameterError, SpectrumHit, SupportError
from .operators import HermitianOperator, new_hermitian

# Fraction of nodes at each edge that the closed-form kernels require to be
# numerically zero (support guard against periodization error).
EDGE_FRACTION = 0.1
SUPPORT_TOL = 1e-10

SCHMIDT_TOL = 1e-12


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid of n points on [-L, L), spacing h = 2L/n."""

    n: int
    length: float
    periodic: bool = True

    def __post_init__(self):
        if self.n < 8 or self.n % 2 != 0:
            raise GridError(f"grid needs an even number of points, at least 8; got {self.n}")
        if not (np.isfinite(self.length) and self.length > 0):
            raise GridError(f"grid half-width must be positive, got {self.length}")

    @property
    def h(self) -> float:
        return 2.0 * self.length / self.n

    def nodes(self) -> np.ndarray:
        return -self.length + self.h * np.arange(self.n)

    def wavenumbers(self) -> np.ndarray:
        """k = pi*m/L for m = -n/2+1 .. n/2 (ascending)."""
        m = np.arange(-self.n // 2 + 1, self.n // 2 + 1)
        return np.pi * m / self.length


@dataclass(frozen=True)
class GridFunction:
    """Complex samples of a function on a Grid1D."""

    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.grid.n,):
            raise DimensionMismatch(
                f"expected {self.grid.n} samples, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ParameterError("grid function samples must be finite")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def l2_norm(self) -> float:
        return float(np.sqrt(self.grid.h * np.sum(np.abs(self.values) ** 2)))


def _fourier_basis(grid: Grid1D) -> tuple[np.ndarray, np.ndarray]:
    x = grid.nodes()
    ks = grid.wavenumbers()
    v = np.exp(1j * np.outer(x, ks)) / np.sqrt(grid.n)
    return ks, v


def build_momentum(grid: Grid1D) -> HermitianOperator:
    """Spectral discretization of P = iD on a periodic grid.

    Eigenvalues are -k over the grid wavenumbers, so exp(-ikx) sampled on
    the grid is an exact eigenvector with eigenvalue +k.
    """
    if not grid.periodic:
        raise GridError("momentum needs a periodic grid")
    ks, v = _fourier_basis(grid)
    p = (v * (-ks)) @ v.conj().T
    return new_hermitian(p)


def build_laplacian(grid: Grid1D) -> HermitianOperator:
    """T = -D^2 as the exact matrix square of the momentum discretization."""
    if not grid.periodic:
        raise GridError("laplacian needs a periodic grid")
    p = build_momentum(grid).entries
    return new_hermitian(p @ p)


def build_position(grid: Grid1D) -> HermitianOperator:
    """Multiplication by x: diagonal matrix of the grid abscissae."""
    return new_hermitian(np.diag(grid.nodes().astype(complex)))


def build_bounded_momentum(n_modes: int) -> HermitianOperator:
    """Momentum on the circle in the Fourier basis: diag(-K..K), n_modes = 2K+1."""
    if n_modes < 1 or n_modes % 2 == 0:
        raise ParameterError(f"n_modes must be odd and positive, got {n_modes}")
    k = n_modes // 2
    return new_hermitian(np.diag(np.arange(-k, k + 1).astype(complex)))


def _check_support(phi: GridFunction) -> None:
    vals = np.abs(phi.values)
    peak = float(vals.max()) if vals.size else 0.0
    if peak == 0.0:
        return
    margin = max(1, int(round(EDGE_FRACTION * phi.grid.n)))
    edge = max(float(vals[:margin].max()), float(vals[-margin:].max()))
    if edge > SUPPORT_TOL * peak:
        raise SupportError(
            f"samples must vanish on the outer {margin} nodes per side "
            f"(edge/peak = {edge / peak:.2e})")


def momentum_family_matrix(grid: Grid1D, lam: float) -> np.ndarray:
    """Trapezoid discretization of the momentum spectral-family kernel.

    Row x, column s:  h * exp(i*lam*(s-x)) / (2*pi*i*(s-x))  off the
    diagonal (principal value by symmetric node exclusion), plus I/2.
    """
    x = grid.nodes()
    diff = x[None, :] - x[:, None]
    m = np.zeros((grid.n, grid.n), dtype=complex)
    off = diff != 0.0
    m[off] = grid.h * np.exp(1j * lam * diff[off]) / (2j * np.pi * diff[off])
    m += 0.5 * np.eye(grid.n)
    return m


def laplacian_family_matrix(grid: Grid1D, lam: float) -> np.ndarray:
    """Sinc-kernel discretization of the -D^2 spectral family; zero for lam <= 0.

    Off-diagonal  h * sin(sqrt(lam)(s-x)) / (pi*(s-x)),  diagonal
    h * sqrt(lam)/pi  (the removable-singularity value).
    """
    if lam <= 0.0:
        return np.zeros((grid.n, grid.n), dtype=complex)
    root = np.sqrt(lam)
    x = grid.nodes()
    diff = x[None, :] - x[:, None]
    m = np.full((grid.n, grid.n), grid.h * root / np.pi, dtype=complex)
    off = diff != 0.0
    m[off] = grid.h * np.sin(root * diff[off]) / (np.pi * diff[off])
    return m


def momentum_family_closed_form(phi: GridFunction, lam: float) -> GridFunction:
    """Closed-form E_lam action for P = iD.

    (E_lam phi)(x) = phi(x)/2 + (1/(2*pi*i)) p.v. integral of
    exp(i*lam*(s-x))/(s-x) * phi(s) ds, evaluated by trapezoid with the
    s = x node excluded.  Requires phi to vanish near the grid edges.
    """
    _check_support(phi)
    out = momentum_family_matrix(phi.grid, lam) @ phi.values
    return GridFunction(phi.grid, out)


def laplacian_family_closed_form(phi: GridFunction, lam: float) -> GridFunction:
    """Closed-form E_lam action for T = -D^2 (sinc kernel; see module notes).

    Returns the zero function for lam < 0; requires phi to vanish near the
    grid edges.
    """
    _check_support(phi)
    out = laplacian_family_matrix(phi.grid, lam) @ phi.values
    return GridFunction(phi.grid, out)


@dataclass(frozen=True)
class CompactOperatorSpec:
    """Compact self-adjoint operator given by its nonzero eigenvalues.

    Coordinates are taken in the (implicit) orthonormal eigenbasis, ordered
    by descending modulus; zero is excluded from the point spectrum.
    """

    eigenvalues: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.eigenvalues)
        object.__setattr__(self, "eigenvalues", vals)
        if not vals:
            raise ParameterError("need at least one eigenvalue")
        if any(not np.isfinite(v) or v == 0.0 for v in vals):
            raise ParameterError("eigenvalues must be finite and nonzero")
        if any(abs(b) > abs(a) for a, b in zip(vals, vals[1:])):
            raise ParameterError("eigenvalues must descend in modulus")

    @property
    def m(self) -> int:
        return len(self.eigenvalues)


def schmidt_resolve(spec: CompactOperatorSpec, coeffs, lam: float) -> np.ndarray:
    """(lam*I - K)^{-1} in eigenbasis coordinates: coeffs / (lam - mu_i)."""
    c = np.asarray(coeffs, dtype=complex)
    if c.shape != (spec.m,):
        raise DimensionMismatch(f"expected {spec.m} coefficients, got shape {c.shape}")
    mu = np.array(spec.eigenvalues)
    gaps = np.abs(lam - mu)
    if gaps.min() <= SCHMIDT_TOL:
        raise SpectrumHit(f"lam = {lam} is within {SCHMIDT_TOL} of an eigenvalue")
    return c / (lam - mu)


def schmidt_solve(spec: CompactOperatorSpec, y_coeffs, z: complex) -> np.ndarray:
    """(I - z*K)^{-1} in eigenbasis coordinates: coeffs / (1 - z*mu_i)."""
    c = np.asarray(y_coeffs, dtype=complex)
    if c.shape != (spec.m,):
        raise DimensionMismatch(f"expected {spec.m} coefficients, got shape {c.shape}")
    mu = np.array(spec.eigenvalues)
    denom = 1.0 - complex(z) * mu
    if np.abs(denom).min() <= SCHMIDT_TOL:
        raise SpectrumHit(f"1/z = {z} hits the spectrum within {SCHMIDT_TOL}")
    return c / denom
