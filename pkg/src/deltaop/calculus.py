"""Scalar functions and four routes to f(T).

The eigen route sums f over the eigenprojectors and is the oracle the other
three approximate: a contour integral of the resolvent, a damped Fourier
quadrature over the unitary group exp(-itT), and a lambda-quadrature against
pointwise smoothed deltas.

Each scalar function carries its own analytic machinery: pointwise values and
derivative, a power series at 0 with its convergence radius (for the Taylor
route), and where one exists in closed form, the inverse Fourier transform
(1/sqrt(2 pi)) integral f(lam) exp(i lam t) dlam used by the time quadrature.
Transforms are never computed numerically; kinds without a closed form raise
UnsupportedTransform.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import hermite_e, polynomial as npoly

from .errors import (
    CoverageError,
    DimensionMismatch,
    DivergenceWarning,
    NotUnitary,
    ParameterError,
    SpectrumHit,
    UnsupportedTransform,
)
from .kernels import (
    GAUSSIAN,
    LORENTZIAN,
    COVERAGE_MARGIN,
    DEFAULT_POINTS_PER_WIDTH,
    DEFAULT_WIDTH_FRACTION,
    SmoothingKernel,
    gaussian_delta,
    lorentzian_delta_sweep,
    trapezoid_weights,
    validate_grid,
    weighted_evolution_sum,
)
from .operators import HermitianOperator, decompose, new_hermitian
from .resolvent import Contour, dunford_apply

UNITARY_TOL = 1e-10

# Gaussian-type time tails are cut where exp(-r^2 t^2 / 2) ~ 1e-22,
# exponential-type where exp(-r t) ~ 1e-18.
GAUSS_TAIL_FACTOR = 10.0
EXP_TAIL_FACTOR = 40.0


def _coeffs_tuple(coeffs) -> tuple[complex, ...]:
    out = tuple(complex(c) for c in coeffs)
    if not out:
        raise ParameterError("need at least one coefficient")
    if any(not np.isfinite(c) for c in out):
        raise ParameterError("coefficients must be finite")
    return out


class ScalarFunction:
    """Base for the admitted scalar-function kinds.

    Instances are callable on real or complex arrays.  Subclasses override
    the analytic hooks they support; the base versions raise
    UnsupportedTransform so a route can report precisely what is missing.
    """

    kind = "abstract"

    def __call__(self, lam):
        raise NotImplementedError

    def derivative(self, lam):
        raise NotImplementedError

    def is_real(self) -> bool:
        return True

    def taylor(self, order: int):
        """Series coefficients a_0..a_order with f = sum a_n lam^n near 0."""
        raise UnsupportedTransform(f"{self.kind} has no power series at 0")

    def convergence_radius(self) -> float:
        raise UnsupportedTransform(f"{self.kind} has no power series at 0")

    def inverse_fourier(self, t):
        raise UnsupportedTransform(
            f"{self.kind} has no closed-form inverse Fourier transform")

    def time_decay(self) -> tuple[str, float]:
        """("gauss", r) for exp(-r^2 t^2/2) transform tails, ("exp", r) for exp(-r|t|)."""
        raise UnsupportedTransform(
            f"{self.kind} has no closed-form inverse Fourier transform")

    def frequency_shift(self) -> float:
        """Center frequency of the transform (widens the time-grid Nyquist band)."""
        return 0.0


@dataclass(frozen=True)
class Polynomial(ScalarFunction):
    """p(lam) with ascending coefficients."""

    coeffs: tuple

    kind = "polynomial"

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _coeffs_tuple(self.coeffs))

    def __call__(self, lam):
        return npoly.polyval(lam, self.coeffs)

    def derivative(self, lam):
        return npoly.polyval(lam, npoly.polyder(self.coeffs))

    def is_real(self) -> bool:
        return all(c.imag == 0.0 for c in self.coeffs)

    def taylor(self, order: int):
        out = np.zeros(order + 1, dtype=complex)
        take = min(order + 1, len(self.coeffs))
        out[:take] = self.coeffs[:take]
        return out

    def convergence_radius(self) -> float:
        return np.inf


@dataclass(frozen=True)
class Exponential(ScalarFunction):
    """exp(scale * lam)."""

    scale: float = 1.0

    kind = "exponential"

    def __post_init__(self):
        if not np.isfinite(self.scale):
            raise ParameterError("scale must be finite")

    def __call__(self, lam):
        return np.exp(self.scale * np.asarray(lam))

    def derivative(self, lam):
        return self.scale * self(lam)

    def taylor(self, order: int):
        out = np.empty(order + 1, dtype=complex)
        out[0] = 1.0
        for n in range(1, order + 1):
            out[n] = out[n - 1] * self.scale / n
        return out

    def convergence_radius(self) -> float:
        return np.inf


def _gauss_exponent_series(center: float, width: float) -> np.ndarray:
    # series of -(lam - c)^2 / (2 w^2) in lam
    w2 = width * width
    return np.array([-(center * center) / (2 * w2), center / w2, -1.0 / (2 * w2)])


def _exp_of_series(g: np.ndarray, order: int) -> np.ndarray:
    """Power series of exp(g(lam)) given the series of g (b' = g' b recurrence)."""
    b = np.zeros(order + 1, dtype=complex)
    b[0] = np.exp(g[0])
    for n in range(1, order + 1):
        acc = 0.0 + 0.0j
        for k in range(1, min(n, len(g) - 1) + 1):
            acc += k * g[k] * b[n - k]
        b[n] = acc / n
    return b


@dataclass(frozen=True)
class Gaussian(ScalarFunction):
    """exp(-(lam - center)^2 / (2 width^2)), unit peak height."""

    center: float = 0.0
    width: float = 1.0

    kind = "gaussian"

    def __post_init__(self):
        if not (np.isfinite(self.center) and np.isfinite(self.width) and self.width > 0):
            raise ParameterError("gaussian needs finite center and positive width")

    def __call__(self, lam):
        u = np.asarray(lam) - self.center
        return np.exp(-(u * u) / (2.0 * self.width ** 2))

    def derivative(self, lam):
        u = np.asarray(lam) - self.center
        return -(u / self.width ** 2) * self(lam)

    def taylor(self, order: int):
        return _exp_of_series(_gauss_exponent_series(self.center, self.width), order)

    def convergence_radius(self) -> float:
        return np.inf

    def inverse_fourier(self, t):
        t = np.asarray(t, dtype=float)
        return self.width * np.exp(1j * self.center * t - 0.5 * (self.width * t) ** 2)

    def time_decay(self) -> tuple[str, float]:
        return ("gauss", self.width)

    def frequency_shift(self) -> float:
        return abs(self.center)


@dataclass(frozen=True)
class Heaviside(ScalarFunction):
    """Indicator of lam <= threshold (the value at the jump is 1)."""

    threshold: float = 0.0

    kind = "heaviside"

    def __post_init__(self):
        if not np.isfinite(self.threshold):
            raise ParameterError("threshold must be finite")

    def __call__(self, lam):
        # routes hand over complex-typed grids; the indicator reads Re(lam)
        return (np.asarray(lam).real <= self.threshold).astype(float)

    def derivative(self, lam):
        # zero off the jump; the jump itself is excluded by the collision guard
        return np.zeros_like(np.asarray(lam).real)


@dataclass(frozen=True)
class Reciprocal(ScalarFunction):
    """1 / (shift - lam): pairing with the delta gives the resolvent at shift."""

    shift: complex

    kind = "reciprocal"

    def __post_init__(self):
        object.__setattr__(self, "shift", complex(self.shift))
        if not np.isfinite(self.shift):
            raise ParameterError("shift must be finite")

    def __call__(self, lam):
        return 1.0 / (self.shift - np.asarray(lam, dtype=complex))

    def derivative(self, lam):
        return 1.0 / (self.shift - np.asarray(lam, dtype=complex)) ** 2

    def is_real(self) -> bool:
        return False

    def taylor(self, order: int):
        if self.shift == 0:
            raise UnsupportedTransform("reciprocal with shift 0 has no series at 0")
        n = np.arange(order + 1)
        return self.shift ** (-(n + 1.0))

    def convergence_radius(self) -> float:
        return abs(self.shift)

    def inverse_fourier(self, t):
        if self.shift.imag <= 0:
            raise UnsupportedTransform(
                "reciprocal transform needs a shift in the upper half plane")
        t = np.asarray(t, dtype=float)
        step = np.where(t > 0, 1.0, np.where(t < 0, 0.0, 0.5))
        return -1j * np.sqrt(2.0 * np.pi) * np.exp(1j * self.shift * t) * step

    def time_decay(self) -> tuple[str, float]:
        if self.shift.imag <= 0:
            raise UnsupportedTransform(
                "reciprocal transform needs a shift in the upper half plane")
        return ("exp", self.shift.imag)

    def frequency_shift(self) -> float:
        return abs(self.shift.real)


@dataclass(frozen=True)
class LorentzianWeight(ScalarFunction):
    """(eps/pi) / ((lam - center)^2 + eps^2), unit mass."""

    center: float = 0.0
    eps: float = 1.0

    kind = "lorentzian-weight"

    def __post_init__(self):
        if not (np.isfinite(self.center) and np.isfinite(self.eps) and self.eps > 0):
            raise ParameterError("lorentzian weight needs finite center and positive eps")

    def __call__(self, lam):
        u = np.asarray(lam) - self.center
        return (self.eps / np.pi) / (u * u + self.eps ** 2)

    def derivative(self, lam):
        u = np.asarray(lam) - self.center
        return -(self.eps / np.pi) * 2.0 * u / (u * u + self.eps ** 2) ** 2

    def taylor(self, order: int):
        pole = self.center + 1j * self.eps
        n = np.arange(order + 1)
        return -np.imag(pole ** (-(n + 1.0))) / np.pi

    def convergence_radius(self) -> float:
        return float(np.hypot(self.center, self.eps))

    def inverse_fourier(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(1j * self.center * t - self.eps * np.abs(t)) / np.sqrt(2.0 * np.pi)

    def time_decay(self) -> tuple[str, float]:
        return ("exp", self.eps)

    def frequency_shift(self) -> float:
        return abs(self.center)


@dataclass(frozen=True)
class PolynomialGaussian(ScalarFunction):
    """p(lam) * exp(-(lam - center)^2 / (2 width^2))."""

    coeffs: tuple
    center: float = 0.0
    width: float = 1.0

    kind = "polynomial-gaussian"

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _coeffs_tuple(self.coeffs))
        if not (np.isfinite(self.center) and np.isfinite(self.width) and self.width > 0):
            raise ParameterError("needs finite center and positive width")

    def _gauss(self) -> Gaussian:
        return Gaussian(self.center, self.width)

    def __call__(self, lam):
        return npoly.polyval(lam, self.coeffs) * self._gauss()(lam)

    def derivative(self, lam):
        p = npoly.polyval(lam, self.coeffs)
        dp = npoly.polyval(lam, npoly.polyder(self.coeffs))
        g = self._gauss()
        return dp * g(lam) + p * g.derivative(lam)

    def is_real(self) -> bool:
        return all(c.imag == 0.0 for c in self.coeffs)

    def taylor(self, order: int):
        g = self._gauss().taylor(order)
        out = np.zeros(order + 1, dtype=complex)
        for k, c in enumerate(self.coeffs[:order + 1]):
            out[k:] += c * g[:order + 1 - k]
        return out

    def convergence_radius(self) -> float:
        return np.inf

    def inverse_fourier(self, t):
        t = np.asarray(t, dtype=float)
        # substitute lam = center + width*u; in u the polynomial picks up
        # Hermite moments: integral u^k e^{-u^2/2} e^{ivu} du
        #   = sqrt(2 pi) i^k He_k(v) e^{-v^2/2}
        shifted = npoly.Polynomial(self.coeffs)(npoly.Polynomial([self.center, self.width]))
        q = shifted.coef.astype(complex) * (1j ** np.arange(len(shifted.coef)))
        v = self.width * t
        return (self.width * np.exp(1j * self.center * t - 0.5 * v * v)
                * hermite_e.hermeval(v, q))

    def time_decay(self) -> tuple[str, float]:
        return ("gauss", self.width)

    def frequency_shift(self) -> float:
        return abs(self.center)


_BUILTINS = {
    "one": lambda: Polynomial((1.0,)),
    "identity": lambda: Polynomial((0.0, 1.0)),
    "square": lambda: Polynomial((0.0, 0.0, 1.0)),
    "exp": lambda: Exponential(1.0),
    "std-gaussian": lambda: Gaussian(0.0, 1.0),
}


@dataclass(frozen=True)
class NamedBuiltin(ScalarFunction):
    """A function from the builtin table, addressed by id."""

    id: str

    kind = "named"

    def __post_init__(self):
        if self.id not in _BUILTINS:
            raise ParameterError(
                f"unknown builtin {self.id!r}; have {sorted(_BUILTINS)}")

    def _delegate(self) -> ScalarFunction:
        return _BUILTINS[self.id]()

    def __call__(self, lam):
        return self._delegate()(lam)

    def derivative(self, lam):
        return self._delegate().derivative(lam)

    def is_real(self) -> bool:
        return self._delegate().is_real()

    def taylor(self, order: int):
        return self._delegate().taylor(order)

    def convergence_radius(self) -> float:
        return self._delegate().convergence_radius()

    def inverse_fourier(self, t):
        return self._delegate().inverse_fourier(t)

    def time_decay(self) -> tuple[str, float]:
        return self._delegate().time_decay()

    def frequency_shift(self) -> float:
        return self._delegate().frequency_shift()


def _unwrap(f: ScalarFunction) -> ScalarFunction:
    return f._delegate() if isinstance(f, NamedBuiltin) else f


# ---------------------------------------------------------------------------
# Methods
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Eigen:
    """Exact route through the eigendecomposition (the oracle)."""


@dataclass(frozen=True)
class Dunford:
    """Contour-integral route; f must be analytic on and inside the contour."""

    contour: Contour


@dataclass(frozen=True)
class TimeQuadrature:
    """Damped Fourier route over exp(-itT).

    sigma = 0 integrates the exact transform (result converges to f(T));
    sigma > 0 damps by exp(-sigma^2 t^2/2), yielding the Gaussian-smoothed
    calculus (f convolved with g_sigma)(T).  t_cut and n_t default to values
    that push the tail and aliasing errors below the quadrature floor.
    """

    sigma: float = 0.0
    t_cut: float | None = None
    n_t: int | None = None

    def __post_init__(self):
        if not (np.isfinite(self.sigma) and self.sigma >= 0):
            raise ParameterError(f"sigma must be nonnegative, got {self.sigma}")
        if self.t_cut is not None and not (np.isfinite(self.t_cut) and self.t_cut > 0):
            raise ParameterError(f"t_cut must be positive, got {self.t_cut}")
        if self.n_t is not None and self.n_t < 16:
            raise ParameterError(f"n_t must be at least 16, got {self.n_t}")


@dataclass(frozen=True)
class ResolventLimit:
    """Lambda-quadrature of f against pointwise smoothed deltas.

    Lorentzian kernels go through shifted linear solves, Gaussian kernels
    through the direct matrix-Gaussian route; neither touches the
    eigendecomposition, so agreement with the eigen route is a real check.
    Without an explicit grid one is built from Gershgorin disks.
    """

    kernel: SmoothingKernel
    grid: np.ndarray | None = None

    def __post_init__(self):
        if self.grid is not None:
            object.__setattr__(self, "grid", validate_grid(self.grid))


def _heaviside_guard(f: ScalarFunction, op: HermitianOperator) -> None:
    dec = decompose(op)
    gap = float(np.min(np.abs(dec.eigenvalues - f.threshold)))
    if gap <= dec.cluster_tol:
        raise ParameterError(
            f"heaviside threshold {f.threshold} collides with an eigenvalue "
            f"(distance {gap:.2e})")


def eigen_apply(op: HermitianOperator, f: ScalarFunction) -> np.ndarray:
    """f(T) as the eigenprojector sum — the exact reference route."""
    fu = _unwrap(f)
    if isinstance(fu, Heaviside):
        _heaviside_guard(fu, op)
    dec = decompose(op)
    if isinstance(fu, Reciprocal):
        gap = float(np.min(np.abs(fu.shift - dec.eigenvalues)))
        if gap <= 1e-12 * max(1.0, dec.spectral_norm()):
            raise SpectrumHit(f"reciprocal shift {fu.shift} sits on the spectrum")
    fv = np.asarray(fu(dec.eigenvalues.astype(complex)), dtype=complex)
    v = dec.vectors
    return np.einsum("i,ni,mi->nm", fv, v, v.conj(), optimize=True)


def _gershgorin_bounds(op: HermitianOperator) -> tuple[float, float]:
    t = op.entries
    radii = np.sum(np.abs(t), axis=1) - np.abs(np.diag(t))
    centers = np.real(np.diag(t))
    return float(np.min(centers - radii)), float(np.max(centers + radii))


def _resolvent_limit_apply(op: HermitianOperator, f: ScalarFunction,
                           method: ResolventLimit) -> np.ndarray:
    fu = _unwrap(f)
    kernel = method.kernel
    lo, hi = _gershgorin_bounds(op)
    if method.grid is None:
        width = kernel.width
        span_lo = lo - COVERAGE_MARGIN * width
        span_hi = hi + COVERAGE_MARGIN * width
        count = int(np.ceil((span_hi - span_lo) * DEFAULT_POINTS_PER_WIDTH / width)) + 1
        grid = np.linspace(span_lo, span_hi, max(count, 2))
    else:
        grid = method.grid
        _check_grid_coverage_bounds(grid, lo, hi, kernel.width)
    if isinstance(fu, Heaviside):
        _heaviside_guard(fu, op)
    fv = np.asarray(fu(grid.astype(complex)), dtype=complex)
    qw = trapezoid_weights(grid) * fv
    acc = np.zeros((op.n, op.n), dtype=complex)
    if kernel.kind == LORENTZIAN:
        block = 4096
        for start in range(0, grid.size, block):
            sweep = lorentzian_delta_sweep(op, grid[start:start + block], kernel.width)
            acc += np.tensordot(qw[start:start + block], sweep, axes=1)
    else:
        for k in range(grid.size):
            acc += qw[k] * gaussian_delta(op, float(grid[k]), kernel.width)
    return acc


def _check_grid_coverage_bounds(grid, lo, hi, width) -> None:
    need_lo = lo - COVERAGE_MARGIN * width
    need_hi = hi + COVERAGE_MARGIN * width
    if grid[0] > need_lo or grid[-1] < need_hi:
        raise CoverageError(
            f"grid [{grid[0]:g}, {grid[-1]:g}] must cover the Gershgorin bound "
            f"plus {COVERAGE_MARGIN:g} widths: [{need_lo:g}, {need_hi:g}]")


def _time_apply(op: HermitianOperator, f: ScalarFunction,
                method: TimeQuadrature) -> np.ndarray:
    fu = _unwrap(f)
    if isinstance(fu, Polynomial) and len(fu.coeffs) == 1:
        # constant: its transform is a point mass at t = 0, so the quadrature
        # degenerates to c * U(0); damping does not change a constant
        return fu.coeffs[0] * np.eye(op.n, dtype=complex)
    decay_kind, rate = fu.time_decay()
    sigma = method.sigma
    if decay_kind == "gauss":
        g = float(np.hypot(rate, sigma))
        t_need = GAUSS_TAIL_FACTOR / g
    else:
        t_need = EXP_TAIL_FACTOR / rate
        if sigma > 0:
            t_need = min(t_need, GAUSS_TAIL_FACTOR / sigma)
    t_cut = method.t_cut if method.t_cut is not None else t_need
    if sigma > 0 and t_cut < 6.0 / sigma and t_cut < t_need:
        raise ParameterError(
            f"t_cut={t_cut:g} leaves a visible damping tail; need >= {min(6.0 / sigma, t_need):g}")
    freq = decompose(op).spectral_norm() + fu.frequency_shift()
    if method.n_t is not None:
        n_t = int(method.n_t)
    else:
        n_t = max(1025, 2 * int(np.ceil(2.0 * t_cut * (freq + 2.0))) + 1)
    times = np.linspace(-t_cut, t_cut, n_t)
    dt = times[1] - times[0]
    weights = fu.inverse_fourier(times) * np.exp(-0.5 * (sigma * times) ** 2)
    weights *= dt / np.sqrt(2.0 * np.pi)
    weights[0] *= 0.5
    weights[-1] *= 0.5
    return weighted_evolution_sum(op, float(times[0]), float(dt), weights)


def apply(op: HermitianOperator, f: ScalarFunction, method=None) -> np.ndarray:
    """Evaluate f(T) by the requested route (eigen route by default)."""
    if method is None or isinstance(method, Eigen):
        return eigen_apply(op, f)
    if isinstance(method, Dunford):
        fu = _unwrap(f)
        if isinstance(fu, Heaviside):
            raise UnsupportedTransform(
                "heaviside is not analytic; use the eigen or resolvent-limit route")
        return dunford_apply(op, fu, method.contour)
    if isinstance(method, TimeQuadrature):
        return _time_apply(op, f, method)
    if isinstance(method, ResolventLimit):
        return _resolvent_limit_apply(op, f, method)
    raise ParameterError(f"unknown method {method!r}")


def taylor_delta_apply(op: HermitianOperator, f: ScalarFunction,
                       order: int) -> np.ndarray:
    """Partial sum sum_{n<=order} f^(n)(0)/n! T^n by Horner evaluation.

    Warns with DivergenceWarning (and still returns the partial sum) when the
    spectral radius reaches the series' convergence radius.
    """
    if order < 0:
        raise ParameterError(f"order must be nonnegative, got {order}")
    fu = _unwrap(f)
    coeffs = np.asarray(fu.taylor(int(order)), dtype=complex)
    radius = fu.convergence_radius()
    spectral_radius = decompose(op).spectral_norm()
    if np.isfinite(radius) and spectral_radius >= radius:
        warnings.warn(
            f"spectral radius {spectral_radius:g} >= convergence radius "
            f"{radius:g}; the partial sums do not converge",
            DivergenceWarning, stacklevel=2)
    t = op.entries
    eye = np.eye(op.n, dtype=complex)
    acc = coeffs[-1] * eye
    for a in coeffs[-2::-1]:
        acc = acc @ t + a * eye
    return acc


def conjugate(op: HermitianOperator, u) -> HermitianOperator:
    """U^dagger T U for unitary U (the change-of-basis the delta respects)."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (op.n, op.n):
        raise DimensionMismatch(f"expected a {op.n}x{op.n} matrix, got {u.shape}")
    defect = float(np.max(np.abs(u.conj().T @ u - np.eye(op.n))))
    if defect > UNITARY_TOL:
        raise NotUnitary(f"U^dagger U deviates from I by {defect:.2e}")
    return new_hermitian(u.conj().T @ op.entries @ u)
