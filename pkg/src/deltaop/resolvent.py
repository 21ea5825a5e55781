"""Resolvents, Dunford contour calculus, and the Laplace-transform resolvent.

Three eigendecomposition-free routes live here: pointwise resolvents by dense
LU solve, the contour functional calculus ``(1/2 pi i) oint f(z) R(z) dz`` by
periodic trapezoid quadrature, and the half-line time integral
``(z I - T)^(-1) = -i integral_0^inf e^{izt} e^{-itT} dt`` valid for
``Im z > 0``.  The eigendecomposition is used only to guard preconditions
(distance of a shift or contour from the spectrum), never as the numerical
path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContourTooClose, ParameterError, SpectrumHit
from .kernels import _solve_shifted, weighted_evolution_sum
from .operators import HermitianOperator, decompose

# Relative distance to the spectrum below which a shift is treated as singular.
SINGULAR_TOL = 1e-10

MIN_CONTOUR_NODES = 16


@dataclass(frozen=True)
class Circle:
    """Counterclockwise circle ``center + radius * e^{i theta}``."""

    center: complex
    radius: float
    n_nodes: int = 256

    def __post_init__(self):
        if not (np.isfinite(self.radius) and self.radius > 0):
            raise ParameterError(f"radius must be positive, got {self.radius}")
        if self.n_nodes < MIN_CONTOUR_NODES:
            raise ParameterError(f"need at least {MIN_CONTOUR_NODES} nodes")

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        theta = 2.0 * np.pi * np.arange(self.n_nodes) / self.n_nodes
        ring = np.exp(1j * theta)
        z = self.center + self.radius * ring
        weights = 2.0j * np.pi * self.radius * ring / self.n_nodes
        return z, weights

    def spacing(self) -> float:
        return 2.0 * np.pi * self.radius / self.n_nodes

    def distance(self, points: np.ndarray) -> float:
        return float(np.min(np.abs(np.abs(points - self.center) - self.radius)))


@dataclass(frozen=True)
class Rectangle:
    """Counterclockwise axis-aligned rectangle between two corners."""

    corner_min: complex
    corner_max: complex
    n_nodes: int = 256

    def __post_init__(self):
        if not (self.corner_max.real > self.corner_min.real
                and self.corner_max.imag > self.corner_min.imag):
            raise ParameterError("corner_max must lie strictly above-right of corner_min")
        if self.n_nodes < MIN_CONTOUR_NODES:
            raise ParameterError(f"need at least {MIN_CONTOUR_NODES} nodes")

    def _corners(self) -> list[complex]:
        a, b = self.corner_min, self.corner_max
        return [a, complex(b.real, a.imag), b, complex(a.real, b.imag)]

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        corners = self._corners()
        lengths = [abs(corners[(i + 1) % 4] - corners[i]) for i in range(4)]
        per = max(self.n_nodes // 4, 4)
        zs, ws = [], []
        for i in range(4):
            start, stop = corners[i], corners[(i + 1) % 4]
            count = max(int(round(per * lengths[i] * 4 / sum(lengths))), 4)
            t = np.linspace(0.0, 1.0, count)
            seg = start + t * (stop - start)
            w = np.full(count, (stop - start) / (count - 1), dtype=complex)
            w[0] *= 0.5
            w[-1] *= 0.5
            zs.append(seg)
            ws.append(w)
        return np.concatenate(zs), np.concatenate(ws)

    def spacing(self) -> float:
        corners = self._corners()
        perimeter = sum(abs(corners[(i + 1) % 4] - corners[i]) for i in range(4))
        return perimeter / self.n_nodes

    def distance(self, points: np.ndarray) -> float:
        corners = self._corners()
        best = np.inf
        for i in range(4):
            a, b = corners[i], corners[(i + 1) % 4]
            seg = b - a
            t = np.clip(((points - a) * np.conj(seg)).real / abs(seg) ** 2, 0.0, 1.0)
            best = min(best, float(np.min(np.abs(points - (a + t * seg)))))
        return best


Contour = Circle | Rectangle


@dataclass(frozen=True)
class ResolventSample:
    """A shift ``z`` together with ``R(z, T) = (z I - T)^(-1)``."""

    z: complex
    matrix: np.ndarray


def _singular_tolerance(spectral_norm: float) -> float:
    return SINGULAR_TOL * spectral_norm


def resolvent(op: HermitianOperator, z: complex) -> ResolventSample:
    """Dense-LU resolvent sample at ``z``.

    Raises
    ------
    SpectrumHit
        If ``z`` lies within ``1e-10 * ||T||`` of an eigenvalue.
    """
    z = complex(z)
    dec = decompose(op)
    dist = float(np.min(np.abs(z - dec.eigenvalues)))
    if dist <= _singular_tolerance(dec.spectral_norm()):
        raise SpectrumHit(f"shift {z} is within tolerance of the spectrum")
    return ResolventSample(z, _solve_shifted(np.array([z]), op.entries)[0])


def contour_integral(g, contour: Contour) -> complex:
    """Scalar contour integral ``oint g(z) dz`` by the contour's quadrature."""
    z, w = contour.nodes()
    return complex(np.sum(w * np.asarray(g(z), dtype=complex)))


def dunford_apply(op: HermitianOperator, f, contour: Contour) -> np.ndarray:
    """Contour functional calculus ``(1/2 pi i) oint f(z) R(z, T) dz``.

    Picks out ``sum f(e_i) P_i`` over the eigenvalues the contour encloses.
    ``f`` must be analytic on and inside the contour.  Periodic trapezoid on a
    circle converges spectrally in the node count.

    Raises
    ------
    ContourTooClose
        If an eigenvalue lies within twice the node spacing of the contour.
    """
    dec = decompose(op)
    if dec.n and contour.distance(dec.eigenvalues.astype(complex)) < 2.0 * contour.spacing():
        raise ContourTooClose(
            "contour passes within two node spacings of an eigenvalue"
        )
    z, w = contour.nodes()
    samples = _solve_shifted(z, op.entries)
    fw = np.asarray(f(z), dtype=complex) * w
    return np.tensordot(fw, samples, axes=1) / (2.0j * np.pi)


def hille_yosida_resolvent(op: HermitianOperator, z: complex,
                           t_cut: float | None = None, n_t: int = 16384) -> np.ndarray:
    """Resolvent from the damped half-line time integral (upper half-plane).

    ``-i integral_0^{t_cut} e^{izt} e^{-itT} dt`` by composite Simpson on a
    uniform grid (``n_t`` is rounded up to an odd count); the truncation bias
    is ``exp(-Im(z) t_cut)/Im(z)``.

    Raises
    ------
    ParameterError
        If ``Im z <= 0``, ``t_cut < 40/Im(z)``, or ``n_t < 16``.
    """
    z = complex(z)
    if z.imag <= 0:
        raise ParameterError(f"Laplace route needs Im z > 0, got z={z}")
    if t_cut is None:
        t_cut = 40.0 / z.imag
    if t_cut < 40.0 / z.imag:
        raise ParameterError(
            f"t_cut={t_cut:g} too small for Im z={z.imag:g}; need >= {40.0 / z.imag:g}"
        )
    if n_t < 16:
        raise ParameterError(f"n_t must be at least 16, got {n_t}")
    n = int(n_t) | 1  # Simpson needs an even interval count
    times = np.linspace(0.0, t_cut, n)
    dt = times[1] - times[0]
    simpson = np.ones(n)
    simpson[1:-1:2] = 4.0
    simpson[2:-1:2] = 2.0
    weights = -1j * (dt / 3.0) * simpson * np.exp(1j * z * times)
    return weighted_evolution_sum(op, 0.0, float(dt), weights)
