"""Moment identities for products of smoothed deltas of two operators.

Everything here uses the Gaussian kernel only: its first moments against the
smoothed delta are exact (odd-moment cancellation), so the double integral of
lam*mu over the commutator of smoothed deltas recovers [S, T] limited only by
grid truncation.  Lorentzian moments diverge absolutely and are excluded.

The double integral factorizes analytically into
[integral lam delta(lam, S), integral mu delta(mu, T)]; the code nevertheless
performs the literal double sum (fixed naive reduction order) so the
factorized identity remains a genuine cross-check between two computation
paths rather than a tautology.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, MemoryBudgetError, ParameterError
from .kernels import (
    GAUSSIAN,
    SmoothingKernel,
    _check_coverage,
    eigen_smoothed_delta,
    trapezoid_weights,
    validate_grid,
)
from .operators import HermitianOperator, decompose

DEFAULT_BUDGET_BYTES = 1 << 28


@dataclass(frozen=True)
class OperatorPair:
    """Two operators on the same space."""

    s: HermitianOperator
    t: HermitianOperator

    def __post_init__(self):
        if self.s.n != self.t.n:
            raise DimensionMismatch(
                f"operators must act on the same space: {self.s.n} vs {self.t.n}")

    @property
    def n(self) -> int:
        return self.s.n


def commutator(s: HermitianOperator, t: HermitianOperator) -> np.ndarray:
    """[S, T] = ST - TS; anti-Hermitian for Hermitian inputs."""
    if s.n != t.n:
        raise DimensionMismatch(f"dimension mismatch: {s.n} vs {t.n}")
    return s.entries @ t.entries - t.entries @ s.entries


def _require_gaussian(kernel: SmoothingKernel) -> None:
    if kernel.kind != GAUSSIAN:
        raise ParameterError(
            "moment identities need the gaussian kernel (lorentzian moments diverge)")


def delta_product_curve(s: HermitianOperator, t: HermitianOperator,
                        lam_grid, mu_grid, kernel: SmoothingKernel,
                        x=None, y=None,
                        budget_bytes: int = DEFAULT_BUDGET_BYTES) -> np.ndarray:
    """Pointwise products delta_g(lam_i, S) delta_g(mu_j, T) on a 2-d grid.

    Returns the full (n_lam, n_mu, n, n) array when x and y are omitted
    (refused with MemoryBudgetError beyond ``budget_bytes``), or the
    contracted scalars <y, delta delta x> of shape (n_lam, n_mu) when both
    vectors are given.
    """
    _require_gaussian(kernel)
    if s.n != t.n:
        raise DimensionMismatch(f"dimension mismatch: {s.n} vs {t.n}")
    lam_grid = validate_grid(lam_grid, "lam_grid")
    mu_grid = validate_grid(mu_grid, "mu_grid")
    if (x is None) != (y is None):
        raise ParameterError("pass both x and y for the contracted form, or neither")
    a = eigen_smoothed_delta(decompose(s), lam_grid, kernel)
    b = eigen_smoothed_delta(decompose(t), mu_grid, kernel)
    if x is None:
        need = lam_grid.size * mu_grid.size * s.n * s.n * 16
        if need > budget_bytes:
            raise MemoryBudgetError(
                f"full product curve needs {need} bytes (budget {budget_bytes}); "
                "pass x and y for the contracted form")
        return np.einsum("inm,jmk->ijnk", a, b, optimize=True)
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.shape != (s.n,) or y.shape != (s.n,):
        raise DimensionMismatch(f"x and y must be vectors of length {s.n}")
    left = np.einsum("n,inm->im", y.conj(), a, optimize=True)
    right = np.einsum("jmk,k->jm", b, x, optimize=True)
    return left @ right.T


def single_moment_check(t: HermitianOperator, kernel: SmoothingKernel,
                        grid) -> np.ndarray:
    """Trapezoid of lam * delta_g(lam I - T); returns T up to truncation."""
    _require_gaussian(kernel)
    grid = validate_grid(grid)
    dec = decompose(t)
    _check_coverage(grid, dec.eigenvalues, kernel.width)
    deltas = eigen_smoothed_delta(dec, grid, kernel)
    weights = trapezoid_weights(grid) * grid
    return np.tensordot(weights, deltas, axes=1)


def double_moment_commutator(s: HermitianOperator, t: HermitianOperator,
                             kernel: SmoothingKernel, lam_grid,
                             mu_grid) -> np.ndarray:
    """Double trapezoid of lam*mu*[delta_g(lam, S), delta_g(mu, T)] -> [S, T].

    Summed as the literal double grid sum with a fixed naive reduction order;
    see the module notes on why this is kept distinct from the factorized
    single-moment path.
    """
    _require_gaussian(kernel)
    if s.n != t.n:
        raise DimensionMismatch(f"dimension mismatch: {s.n} vs {t.n}")
    lam_grid = validate_grid(lam_grid, "lam_grid")
    mu_grid = validate_grid(mu_grid, "mu_grid")
    dec_s = decompose(s)
    dec_t = decompose(t)
    _check_coverage(lam_grid, dec_s.eigenvalues, kernel.width)
    _check_coverage(mu_grid, dec_t.eigenvalues, kernel.width)
    a = eigen_smoothed_delta(dec_s, lam_grid, kernel)
    b = eigen_smoothed_delta(dec_t, mu_grid, kernel)
    wl = trapezoid_weights(lam_grid) * lam_grid
    wm = trapezoid_weights(mu_grid) * mu_grid
    forward = np.einsum("i,j,inm,jmk->nk", wl, wm, a, b, optimize=False)
    reverse = np.einsum("i,j,jnm,imk->nk", wl, wm, b, a, optimize=False)
    return forward - reverse
