"""Operator-valued delta toolbox for Hermitian matrices.

The central object is the smoothed delta delta_ker(lambda I - T): a positive
matrix-valued density in lambda that concentrates on the spectrum of T as the
kernel width shrinks.  Everything else is built on top of it: spectral
densities and weak pairings, spectral families and Borel measures, the
boundary-value route from resolvents, damped time quadrature, contour
calculus, and closed-form kernels for a few translation-invariant model
operators.
"""

from ._version import __version__
from .calculus import (
    Dunford,
    Eigen,
    Exponential,
    Gaussian,
    Heaviside,
    LorentzianWeight,
    NamedBuiltin,
    Polynomial,
    PolynomialGaussian,
    Reciprocal,
    ResolventLimit,
    ScalarFunction,
    TimeQuadrature,
    apply,
    conjugate,
    eigen_apply,
    taylor_delta_apply,
)
from .commutators import (
    OperatorPair,
    commutator,
    delta_product_curve,
    double_moment_commutator,
    single_moment_check,
)
from .errors import (
    ContourTooClose,
    ConvergenceFailure,
    CoverageError,
    DeltaOpError,
    DimensionMismatch,
    DivergenceWarning,
    DomainError,
    GridError,
    MemoryBudgetError,
    NotHermitian,
    NotSquare,
    NotUnitary,
    ParameterError,
    SingularSolve,
    SpectrumHit,
    SupportError,
    UnsupportedTransform,
)
from .kernels import (
    GAUSSIAN,
    LORENTZIAN,
    DensityCurve,
    SmoothingKernel,
    default_grid,
    default_width,
    delta_derivative_pairing,
    density_curve,
    eigen_smoothed_delta,
    gaussian_delta,
    lorentzian_delta,
    lorentzian_delta_sweep,
    square_split_apply,
    time_quadrature_delta,
    weak_pairing,
    weighted_evolution_sum,
)
from .measures import (
    BorelSet,
    EpsilonSchedule,
    Interval,
    StoneResult,
    arctan_weight,
    spectral_family,
    spectral_measure,
    stone_formula,
    stone_formula_study,
)
from .models import (
    CompactOperatorSpec,
    Grid1D,
    GridFunction,
    build_bounded_momentum,
    build_laplacian,
    build_momentum,
    build_position,
    laplacian_family_closed_form,
    laplacian_family_matrix,
    momentum_family_closed_form,
    momentum_family_matrix,
    schmidt_resolve,
    schmidt_solve,
)
from .operators import (
    HermitianOperator,
    SpectralDecomposition,
    decompose,
    eigenprojectors,
    new_hermitian,
)
from .resolvent import (
    Circle,
    Rectangle,
    ResolventSample,
    contour_integral,
    dunford_apply,
    hille_yosida_resolvent,
    resolvent,
)
from .suite import CaseResult, run_suite

__all__ = [
    "__version__",
    # operators
    "HermitianOperator", "SpectralDecomposition", "decompose",
    "eigenprojectors", "new_hermitian",
    # kernels
    "GAUSSIAN", "LORENTZIAN", "DensityCurve", "SmoothingKernel",
    "default_grid", "default_width", "delta_derivative_pairing",
    "density_curve", "eigen_smoothed_delta", "gaussian_delta",
    "lorentzian_delta", "lorentzian_delta_sweep", "square_split_apply",
    "time_quadrature_delta", "weak_pairing", "weighted_evolution_sum",
    # resolvent
    "Circle", "Rectangle", "ResolventSample", "contour_integral",
    "dunford_apply", "hille_yosida_resolvent", "resolvent",
    # measures
    "BorelSet", "EpsilonSchedule", "Interval", "StoneResult", "arctan_weight",
    "spectral_family", "spectral_measure", "stone_formula",
    "stone_formula_study",
    # models
    "CompactOperatorSpec", "Grid1D", "GridFunction", "build_bounded_momentum",
    "build_laplacian", "build_momentum", "build_position",
    "laplacian_family_closed_form", "laplacian_family_matrix",
    "momentum_family_closed_form", "momentum_family_matrix",
    "schmidt_resolve", "schmidt_solve",
    # calculus
    "Dunford", "Eigen", "Exponential", "Gaussian", "Heaviside",
    "LorentzianWeight", "NamedBuiltin", "Polynomial", "PolynomialGaussian",
    "Reciprocal", "ResolventLimit", "ScalarFunction", "TimeQuadrature",
    "apply", "conjugate", "eigen_apply", "taylor_delta_apply",
    # commutators
    "OperatorPair", "commutator", "delta_product_curve",
    "double_moment_commutator", "single_moment_check",
    # suite
    "CaseResult", "run_suite",
    # errors
    "ContourTooClose", "ConvergenceFailure", "CoverageError", "DeltaOpError",
    "DimensionMismatch", "DivergenceWarning", "DomainError", "GridError",
    "MemoryBudgetError", "NotHermitian", "NotSquare", "NotUnitary",
    "ParameterError", "SingularSolve", "SpectrumHit", "SupportError",
    "UnsupportedTransform",
]
