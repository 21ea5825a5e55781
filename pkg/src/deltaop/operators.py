"""Hermitian operators and their spectral decompositions.

Everything downstream (smoothed deltas, spectral measures, the functional
calculus routes) consumes the two records defined here.  ``decompose`` is the
package's eigen oracle: routes that are supposed to be independent of it
(resolvent solves, contour and time quadratures) only use it for guard checks,
never for their numerical path.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceFailure, NotHermitian, NotSquare

# Relative spacing below which eigenvalues are treated as one degenerate
# cluster; scaled by max(1, spectral norm) inside `decompose`.
CLUSTER_TOL = 1e-8


def _as_readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=complex, copy=True, order="C")
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class HermitianOperator:
    """A validated, symmetrized Hermitian matrix.

    Attributes
    ----------
    entries : ndarray
        The (n, n) complex matrix, exactly Hermitian after symmetrization.
        The array is read-only.
    hermiticity_tol : float
        Tolerance the input deviation was checked against.
    """

    entries: np.ndarray
    hermiticity_tol: float

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def norm(self) -> float:
        """Largest absolute entry; cheap scale used for tolerances."""
        return float(np.max(np.abs(self.entries))) if self.n else 0.0


def new_hermitian(entries, tol: float = 1e-10) -> HermitianOperator:
    """Validate and symmetrize a matrix into a :class:`HermitianOperator`.

    Parameters
    ----------
    entries : array_like
        Square complex matrix.
    tol : float
        Maximum allowed entrywise deviation ``max|A - A^H|``.  The accepted
        matrix is replaced by ``(A + A^H)/2``, which removes last-bit
        asymmetry from file round-trips.

    Raises
    ------
    NotSquare
        If the input is not a square 2-d array.
    NotHermitian
        If the deviation exceeds ``tol`` or entries are not finite.
    """
    a = np.asarray(entries, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {a.shape}")
    if a.size and not np.all(np.isfinite(a.view(float))):
        raise NotHermitian("matrix entries must be finite")
    deviation = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    if deviation > tol:
        raise NotHermitian(
            f"hermiticity deviation {deviation:.3e} exceeds tolerance {tol:.3e}"
        )
    return HermitianOperator(_as_readonly((a + a.conj().T) / 2.0), float(tol))


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending), orthonormal eigenvectors, and the cluster scale.

    ``cluster_tol`` is the gap below which adjacent eigenvalues are merged
    into one degenerate cluster by :func:`eigenprojectors` and by every
    consumer that must treat a degenerate eigenspace as a unit.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray
    cluster_tol: float

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    def spectral_norm(self) -> float:
        return float(np.max(np.abs(self.eigenvalues))) if self.n else 0.0

    def spectral_range(self) -> float:
        if self.n == 0:
            return 0.0
        return float(self.eigenvalues[-1] - self.eigenvalues[0])

    def clusters(self) -> list[np.ndarray]:
        """Index groups of degenerate eigenvalues (gap-based, ascending)."""
        if self.n == 0:
            return []
        groups: list[list[int]] = [[0]]
        for i in range(1, self.n):
            if self.eigenvalues[i] - self.eigenvalues[i - 1] <= self.cluster_tol:
                groups[-1].append(i)
            else:
                groups.append([i])
        return [np.asarray(g) for g in groups]

    def cluster_eigenvalues(self) -> np.ndarray:
        """Representative (mean) eigenvalue per cluster."""
        return np.array([float(np.mean(self.eigenvalues[g])) for g in self.clusters()])


def decompose(op: HermitianOperator) -> SpectralDecomposition:
    """Full eigendecomposition with ascending eigenvalues.

    Raises
    ------
    ConvergenceFailure
        If the eigensolver fails (propagated from LAPACK).
    """
    try:
        eigenvalues, vectors = np.linalg.eigh(op.entries)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    scale = max(1.0, float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 0.0)
    return SpectralDecomposition(
        _as_readonly(eigenvalues).real,
        _as_readonly(vectors),
        CLUSTER_TOL * scale,
    )


def eigenprojectors(dec: SpectralDecomposition) -> list[tuple[float, np.ndarray]]:
    """Orthogonal projectors onto the degenerate eigenspaces.

    Returns
    -------
    list of (eigenvalue, projector)
        One entry per cluster, ascending.  Projectors are Hermitian
        idempotents and sum to the identity.
    """
    out = []
    for group in dec.clusters():
        v = dec.vectors[:, group]
        p = v @ v.conj().T
        out.append((float(np.mean(dec.eigenvalues[group])), (p + p.conj().T) / 2.0))
    return out
