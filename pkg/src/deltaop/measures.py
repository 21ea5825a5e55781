"""Spectral families, spectral measures, and the resolvent-limit projector.

The spectral family ``E_lam`` is right-continuous: an eigenvalue exactly at
``lam`` is included.  Finite precision makes "exactly" a tolerance statement,
so membership snaps to the decomposition's cluster tolerance — an eigenvalue
within that distance of a threshold or interval endpoint is treated as
sitting on it.

``stone_formula`` recovers interval projectors without the eigendecomposition
by integrating the resolvent boundary difference over ``[a, b]`` at a
shrinking imaginary offset ``eps`` and Richardson-extrapolating the O(eps)
limit; eigenvalues at the endpoints enter with weight one half.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .kernels import lorentzian_delta_sweep, trapezoid_weights
from .operators import HermitianOperator, decompose

# Lambda-quadrature resolution: at least this many nodes per eps across the
# integration window plus a 2*eps shoulder on each side.
NODES_PER_EPS = 10

DEFAULT_EPS_SCHEDULE = (0.1, 0.05, 0.025, 0.0125)


@dataclass(frozen=True)
class Interval:
    """One interval with independent open/closed endpoint flags."""

    a: float
    b: float
    a_closed: bool = False
    b_closed: bool = False

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise ParameterError("interval endpoints must be finite")
        if self.a > self.b:
            raise ParameterError(f"interval endpoints out of order: ({self.a}, {self.b})")
        if self.a == self.b and not (self.a_closed and self.b_closed):
            raise ParameterError("degenerate interval must be closed at both ends")


@dataclass(frozen=True)
class BorelSet:
    """Finite union of pairwise disjoint intervals, ascending."""

    intervals: tuple[Interval, ...]

    def __post_init__(self):
        ivs = tuple(self.intervals)
        object.__setattr__(self, "intervals", ivs)
        for prev, cur in zip(ivs, ivs[1:]):
            if prev.b > cur.a:
                raise ParameterError("intervals must be ascending and disjoint")
            if prev.b == cur.a and prev.b_closed and cur.a_closed:
                raise ParameterError("touching intervals share a closed endpoint")

    @classmethod
    def interval(cls, a: float, b: float, a_closed: bool = False,
                 b_closed: bool = False) -> "BorelSet":
        return cls((Interval(a, b, a_closed, b_closed),))

    @classmethod
    def point(cls, v: float) -> "BorelSet":
        return cls((Interval(v, v, True, True),))

    @classmethod
    def from_config(cls, config) -> "BorelSet":
        """Build from a list of ``{"a":, "b":, "a_closed":, "b_closed":}`` dicts."""
        try:
            ivs = tuple(
                Interval(float(c["a"]), float(c["b"]),
                         bool(c.get("a_closed", False)), bool(c.get("b_closed", False)))
                for c in config
            )
        except (TypeError, KeyError, ValueError) as exc:
            raise ParameterError(f"malformed Borel set config: {exc}") from exc
        return cls(ivs)

    def contains(self, value: float, snap: float = 0.0) -> bool:
        for iv in self.intervals:
            if abs(value - iv.a) <= snap:
                if iv.a_closed:
                    return True
                continue
            if abs(value - iv.b) <= snap:
                if iv.b_closed:
                    return True
                continue
            if iv.a < value < iv.b:
                return True
        return False


@dataclass(frozen=True)
class EpsilonSchedule:
    """Strictly descending positive offsets, optionally extrapolated to 0."""

    values: tuple[float, ...]
    extrapolate: bool = True

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not vals or any(v <= 0 or not np.isfinite(v) for v in vals):
            raise ParameterError("epsilon schedule must contain positive values")
        if any(b >= a for a, b in zip(vals, vals[1:])):
            raise ParameterError("epsilon schedule must be strictly descending")

    @classmethod
    def default(cls) -> "EpsilonSchedule":
        return cls(DEFAULT_EPS_SCHEDULE)


def spectral_family(op: HermitianOperator, lam: float) -> np.ndarray:
    """Right-continuous spectral projector ``E_lam`` (eigenvalue at lam included)."""
    dec = decompose(op)
    mask = dec.eigenvalues <= float(lam) + dec.cluster_tol
    v = dec.vectors[:, mask]
    p = v @ v.conj().T
    return (p + p.conj().T) / 2.0


def spectral_measure(op: HermitianOperator, borel: BorelSet) -> np.ndarray:
    """Spectral projector of a Borel set, honoring endpoint flags exactly."""
    dec = decompose(op)
    mask = np.array([borel.contains(float(e), dec.cluster_tol) for e in dec.eigenvalues])
    v = dec.vectors[:, mask]
    p = v @ v.conj().T
    return (p + p.conj().T) / 2.0


def arctan_weight(mu: float, a: float, b: float, eps: float) -> float:
    """Exact weight the Stone sweep puts on an eigenvalue ``mu``.

    ``(1/pi)(atan((b-mu)/eps) - atan((a-mu)/eps))``; tends to 1 inside
    ``(a, b)``, 1/2 at either endpoint, and 0 outside as ``eps -> 0+``.
    Serves as the module's internal oracle for the sweep.
    """
    if eps <= 0:
        raise ParameterError(f"eps must be positive, got {eps}")
    return float(np.arctan((b - mu) / eps) - np.arctan((a - mu) / eps)) / np.pi


@dataclass(frozen=True)
class StoneResult:
    """Per-epsilon sweep matrices together with the extrapolated limit."""

    per_eps: tuple[tuple[float, np.ndarray], ...]
    extrapolated: np.ndarray


def _integrate_lorentzian(op: HermitianOperator, grid: np.ndarray, eps: float) -> np.ndarray:
    weights = trapezoid_weights(grid)
    n = op.n
    acc = np.zeros((n, n), dtype=complex)
    block = 4096
    for start in range(0, grid.size, block):
        sweep = lorentzian_delta_sweep(op, grid[start:start + block], eps)
        acc += np.tensordot(weights[start:start + block], sweep, axes=1)
    return acc


def stone_formula_study(op: HermitianOperator, a: float, b: float,
                        schedule: EpsilonSchedule | None = None,
                        n_lambda: int = 2001) -> StoneResult:
    """Stone sweep at every scheduled epsilon, plus the Richardson limit.

    For each ``eps`` integrates the Lorentzian-smoothed delta over ``[a, b]``
    by trapezoid; the node count is raised so the window plus a ``2 eps``
    shoulder on each side carries at least ``NODES_PER_EPS`` nodes per eps.
    The extrapolation assumes an O(eps) leading error and uses the last two
    entries of the schedule.
    """
    a, b = float(a), float(b)
    if not a < b:
        raise ParameterError(f"need a < b, got a={a}, b={b}")
    if n_lambda < 200:
        raise ParameterError(f"n_lambda must be at least 200, got {n_lambda}")
    if schedule is None:
        schedule = EpsilonSchedule.default()
    per_eps = []
    for eps in schedule.values:
        needed = int(np.ceil((b - a + 4.0 * eps) * NODES_PER_EPS / eps)) + 1
        grid = np.linspace(a, b, max(int(n_lambda), needed))
        per_eps.append((eps, _integrate_lorentzian(op, grid, eps)))
    if schedule.extrapolate and len(per_eps) >= 2:
        (e2, m2), (e1, m1) = per_eps[-2], per_eps[-1]
        limit = (e2 * m1 - e1 * m2) / (e2 - e1)
    else:
        limit = per_eps[-1][1]
    return StoneResult(tuple(per_eps), limit)


def stone_formula(op: HermitianOperator, a: float, b: float,
                  schedule: EpsilonSchedule | None = None,
                  n_lambda: int = 2001) -> np.ndarray:
    """Interval projector by the resolvent limit; see :func:`stone_formula_study`.

    Converges to ``E(a,b) + (E({a}) + E({b}))/2`` — interior eigenvalues with
    weight one, endpoint eigenvalues with weight one half.
    """
    return stone_formula_study(op, a, b, schedule, n_lambda).extrapolated
