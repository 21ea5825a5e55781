"""Golden reference cases with known closed-form outcomes.

Each case checks one quantity whose exact value is known by hand — the
3x3 all-ones-off-diagonal matrix with spectrum {-1, -1, 2} and projector
(1/3)[[2,-1,-1],[-1,2,-1],[-1,-1,2]], scalar operators, diagonal models,
contour residues, endpoint weights — and reports the observed deviation
against a per-case tolerance.  Tolerances can be overridden (e.g. tightened
to force a visible failure table); the case list itself is fixed.

The reference operator can optionally be loaded from ``<inputs>/viola.json``
to exercise the file path; by default the cases run from in-memory data.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .calculus import Eigen, Gaussian, Heaviside, Polynomial, TimeQuadrature, apply, conjugate
from .errors import ParameterError
from .kernels import (
    GAUSSIAN,
    LORENTZIAN,
    SmoothingKernel,
    density_curve,
    gaussian_delta,
    lorentzian_delta,
    time_quadrature_delta,
    weak_pairing,
)
from .measures import BorelSet, arctan_weight, spectral_family, spectral_measure, stone_formula
from .models import (
    Grid1D,
    GridFunction,
    build_bounded_momentum,
    build_laplacian,
    build_position,
    laplacian_family_closed_form,
)
from .operators import decompose, eigenprojectors, new_hermitian
from .resolvent import Circle, contour_integral, dunford_apply, resolvent

VIOLA_ENTRIES = np.array([[0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]])
VIOLA_EIGENVALUES = np.array([-1.0, -1.0, 2.0])
PROJECTOR_LOW = np.array([[2.0, -1.0, -1.0], [-1.0, 2.0, -1.0], [-1.0, -1.0, 2.0]]) / 3.0
PROJECTOR_HIGH = np.full((3, 3), 1.0 / 3.0)


def _maxabs(m) -> float:
    return float(np.max(np.abs(m)))


@dataclass(frozen=True)
class CaseResult:
    case_id: str
    description: str
    observed: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.observed <= self.tolerance


def _load_reference(inputs_dir) -> np.ndarray:
    if inputs_dir is not None:
        path = Path(inputs_dir) / "viola.json"
        if path.exists():
            from .io import load_matrix

            return load_matrix(path)
    return VIOLA_ENTRIES.astype(complex)


def _closed_form_resolvent(z: complex) -> np.ndarray:
    m = np.full((3, 3), 1.0, dtype=complex)
    np.fill_diagonal(m, z - 1.0)
    return m / (z * z - z - 2.0)


def run_suite(inputs_dir=None, tolerances=None, seed: int = 0) -> list[CaseResult]:
    """Run every golden case; returns the per-case results in fixed order."""
    overrides = dict(tolerances or {})
    ref = new_hermitian(_load_reference(inputs_dir), tol=0.0)
    dec = decompose(ref)
    rng = np.random.default_rng(seed)
    results: list[CaseResult] = []

    def case(case_id: str, description: str, tol: float, runner) -> None:
        if overrides:
            tol = float(overrides.get(case_id, tol))
        results.append(CaseResult(case_id, description, float(runner()), tol))

    case("reference-accepted", "symmetric integer matrix validates with tol 0",
         0.0, lambda: 0.0 if ref.n == 3 else 1.0)

    case("reference-eigenvalues", "spectrum is {-1, -1, 2}", 1e-10,
         lambda: _maxabs(dec.eigenvalues - VIOLA_EIGENVALUES))

    def _projector() -> float:
        pairs = eigenprojectors(dec)
        low = min(pairs, key=lambda p: p[0])[1]
        return _maxabs(low - PROJECTOR_LOW)

    case("reference-projector", "lowest eigenprojector has entries +-1/3 pattern",
         1e-10, _projector)

    def _scalar_delta() -> float:
        a, sigma = 0.7, 0.1
        op = new_hermitian(a * np.eye(3))
        worst = 0.0
        for lam in (0.2, 0.7, 1.3):
            got = time_quadrature_delta(op, lam, sigma, t_cut=80.0, n_t=6401)
            want = np.exp(-((lam - a) ** 2) / (2 * sigma ** 2)) \
                / (sigma * np.sqrt(2 * np.pi)) * np.eye(3)
            worst = max(worst, _maxabs(got - want))
        return worst

    case("scalar-delta", "delta of a*I is the scalar line shape times I",
         1e-8, _scalar_delta)

    def _heaviside_pairing() -> float:
        kernel = SmoothingKernel(GAUSSIAN, 0.01)
        grid = np.linspace(-1.2, 2.2, 6801)
        x = np.array([1.0, 0.0, 0.0], dtype=complex)
        y = np.array([0.0, 1.0, 0.0], dtype=complex)
        curve = density_curve(ref, x, y, grid, kernel)
        got = weak_pairing(curve, Heaviside(0.5))
        want = complex(y.conj() @ (PROJECTOR_LOW @ x))
        return abs(got - want)

    case("half-line-pairing", "step-weighted pairing recovers <y, E_lam x>",
         1e-6, _heaviside_pairing)

    def _negative_density() -> float:
        t = new_hermitian(np.diag([1.0, -1.0]))
        square = new_hermitian(t.entries @ t.entries)
        eps, lam = 0.01, -0.5
        got = _maxabs(lorentzian_delta(square, lam, eps))
        bound = SmoothingKernel(LORENTZIAN, eps).tail_bound(1.5)
        return max(0.0, got - bound)

    case("square-negative-tail", "delta of T^2 below 0 is within the tail bound",
         1e-12, _negative_density)

    def _resolvent_closed_form() -> float:
        worst = 0.0
        for _ in range(20):
            z = complex(rng.uniform(-3, 3), rng.uniform(0.2, 2.0))
            got = resolvent(ref, z).matrix
            want = _closed_form_resolvent(z)
            worst = max(worst, _maxabs(got - want) / _maxabs(want))
        return worst

    case("resolvent-closed-form", "resolvent matches the rational closed form",
         1e-10, _resolvent_closed_form)

    contour = Circle(-1.0 + 0.0j, 1.0, 256)

    case("contour-projector", "unit circle around -1 integrates to the projector",
         1e-8, lambda: _maxabs(dunford_apply(ref, Polynomial((1.0,)), contour)
                               - PROJECTOR_LOW))

    def _residues() -> float:
        tau = 2.0j * np.pi
        got1 = contour_integral(lambda z: 1.0 / ((z + 1.0) * (z - 2.0)), contour) / tau
        got2 = contour_integral(lambda z: (z - 1.0) / ((z + 1.0) * (z - 2.0)), contour) / tau
        return max(abs(got1 - (-1.0 / 3.0)), abs(got2 - 2.0 / 3.0))

    case("contour-residues", "scalar residues at -1 are -1/3 and 2/3",
         1e-10, _residues)

    case("family-threshold", "family at 0 keeps only the negative eigenvalue",
         1e-10, lambda: _maxabs(spectral_family(ref, 0.0) - PROJECTOR_LOW))

    case("measure-open-interval", "measure of (-2, 0) is the low projector",
         1e-10, lambda: _maxabs(spectral_measure(ref, BorelSet.interval(-2.0, 0.0))
                                - PROJECTOR_LOW))

    case("resolvent-limit-projector", "swept boundary difference extrapolates to the projector",
         1e-3, lambda: _maxabs(stone_formula(ref, -2.0, 0.0) - PROJECTOR_LOW))

    def _arctan_limits() -> float:
        eps = 1e-6
        return max(abs(arctan_weight(0.0, 0.0, 1.0, eps) - 0.5),
                   abs(arctan_weight(0.5, 0.0, 1.0, eps) - 1.0),
                   abs(arctan_weight(2.0, 0.0, 1.0, eps)))

    case("endpoint-weights", "sweep weight tends to 1/2 at endpoints, 1 inside, 0 outside",
         1e-5, _arctan_limits)

    def _laplacian_positive() -> float:
        eigs = decompose(build_laplacian(Grid1D(64, np.pi))).eigenvalues
        return max(0.0, -float(eigs[0]))

    case("laplacian-nonnegative", "discretized -D^2 has nonnegative spectrum",
         1e-10, _laplacian_positive)

    def _position_family() -> float:
        grid = Grid1D(32, 5.0)
        q = build_position(grid)
        lam = 0.37
        want = np.diag((grid.nodes() <= lam).astype(complex))
        return _maxabs(spectral_family(q, lam) - want)

    case("position-family", "position family multiplies by the step in x",
         1e-12, _position_family)

    def _position_delta() -> float:
        grid = Grid1D(32, 5.0)
        q = build_position(grid)
        lam, eps = 0.3, 0.1
        kernel = SmoothingKernel(LORENTZIAN, eps)
        want = np.diag(kernel.profile(lam - grid.nodes()).astype(complex))
        return _maxabs(lorentzian_delta(q, lam, eps) - want)

    case("position-delta-diagonal", "position delta is the diagonal line shape",
         1e-12, _position_delta)

    def _bounded_family() -> float:
        s = build_bounded_momentum(11)
        modes = np.arange(-5, 6)
        want = np.diag((modes <= 1).astype(complex))
        return _maxabs(spectral_family(s, 1.5) - want)

    case("mode-truncation", "family at 1.5 keeps modes up to 1",
         1e-12, _bounded_family)

    def _bounded_delta() -> float:
        s = build_bounded_momentum(11)
        lam, sigma = 0.8, 0.3
        modes = np.arange(-5, 6)
        want = np.diag(np.exp(-((lam - modes) ** 2) / (2 * sigma ** 2))
                       / (sigma * np.sqrt(2 * np.pi)) + 0.0j)
        return _maxabs(gaussian_delta(s, lam, sigma) - want)

    case("mode-delta", "delta acts coefficient-wise on the mode basis",
         1e-12, _bounded_delta)

    def _negative_lambda_kernel() -> float:
        grid = Grid1D(64, 10.0)
        phi = GridFunction(grid, np.exp(-grid.nodes() ** 2 / 2.0))
        out = laplacian_family_closed_form(phi, -1.0)
        return _maxabs(out.values)

    case("kernel-negative-lambda", "closed-form family of -D^2 vanishes below 0",
         0.0, _negative_lambda_kernel)

    def _scalar_apply() -> float:
        a = 0.7
        op = new_hermitian(a * np.eye(3))
        f = Gaussian(0.0, 1.0)
        want = float(f(a)) * np.eye(3)
        err_eigen = _maxabs(apply(op, f, Eigen()) - want)
        err_time = _maxabs(apply(op, f, TimeQuadrature()) - want)
        return max(err_eigen, err_time)

    case("scalar-function", "f of a*I is f(a) times I on two routes",
         1e-8, _scalar_apply)

    def _conjugation() -> float:
        q = conjugate(ref, dec.vectors).entries
        off = q - np.diag(np.diag(q))
        return max(_maxabs(off),
                   _maxabs(np.sort(np.real(np.diag(q))) - VIOLA_EIGENVALUES))

    case("basis-change", "conjugating by the eigenbasis diagonalizes",
         1e-10, _conjugation)

    unknown = set(overrides) - {r.case_id for r in results}
    if unknown:
        raise ParameterError(f"tolerance overrides for unknown cases: {sorted(unknown)}")
    return results
