"""Complex-Hermitian linear algebra primitives.

Everything downstream (rates, closed forms, projected-gradient solvers)
is built on the handful of operations here: eigendecomposition with a fixed
descending order, SVD, PSD tests with a relative tolerance, log-det, and the
Frobenius projection onto the trace-bounded PSD cone.

All functions are pure and operate on plain ``numpy`` arrays; Hermitian
inputs are symmetrized on entry so that accumulated round-off from iterative
callers cannot leak into eigensolvers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidInputError

__all__ = [
    "Eigensystem",
    "as_matrix",
    "hermitian_part",
    "evd",
    "svd",
    "is_psd",
    "log_det",
    "psd_trace_projection",
    "simplex_clip",
]


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Validate and return ``m`` as a 2-D complex128 array with finite entries."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise InvalidInputError(f"{name} must be 2-D, got ndim={a.ndim}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return a


def hermitian_part(h, name: str = "matrix") -> np.ndarray:
    """Return (H + H^H)/2, validating shape and finiteness.

    Symmetrizing on construction is what keeps the machine-precision
    asymmetry produced by repeated matrix products out of ``eigh``.
    """
    a = as_matrix(h, name)
    if a.shape[0] != a.shape[1]:
        raise InvalidInputError(f"{name} must be square, got shape {a.shape}")
    return (a + a.conj().T) / 2.0


@dataclass(frozen=True)
class Eigensystem:
    """Unitary eigenvectors (columns) and real eigenvalues sorted descending."""

    vectors: np.ndarray
    values: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


def evd(h) -> Eigensystem:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    The descending order is the single global convention used by every
    solver ("the leading eigen-channels come first"); relying on one order
    everywhere removes an entire class of index bugs.
    """
    a = hermitian_part(h)
    values, vectors = np.linalg.eigh(a)
    order = np.argsort(values)[::-1]
    return Eigensystem(vectors=vectors[:, order], values=values[order])


def svd(m) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Full SVD ``m = u @ diag-embed(sigma) @ v^H``.

    Returns (u, sigma, v) with u, v square unitary and sigma nonnegative
    descending of length min(rows, cols).
    """
    a = as_matrix(m)
    u, sigma, vh = np.linalg.svd(a, full_matrices=True)
    return u, sigma, vh.conj().T


def is_psd(h, tol: float = 1e-9) -> bool:
    """True iff min eigenvalue >= -tol * max(1, max |eigenvalue|).

    The tolerance is relative to the spectral scale because scenarios span
    wide power ranges in sweeps.
    """
    if tol < 0:
        raise InvalidInputError("tol must be nonnegative")
    w = np.linalg.eigvalsh(hermitian_part(h))
    if w.size == 0:
        return True
    scale = max(1.0, float(np.max(np.abs(w))))
    return bool(w[0] >= -tol * scale)


def log_det(h) -> float:
    """Natural-log determinant of a positive definite Hermitian matrix."""
    w = np.linalg.eigvalsh(hermitian_part(h))
    if w.size and w[0] <= 0.0:
        raise DomainError("log_det requires a positive definite matrix "
                          f"(min eigenvalue {w[0]:.3e})")
    return float(np.sum(np.log(w)))


def simplex_clip(values: np.ndarray, budget: float) -> np.ndarray:
    """Project a real vector onto {x >= 0, sum(x) <= budget} in l2.

    Clamps negatives first; if the clamped sum still exceeds the budget,
    subtracts the exact water level found by the sorting-based simplex
    projection (no inner iteration).
    """
    v = np.asarray(values, dtype=float)
    clipped = np.maximum(v, 0.0)
    if clipped.sum() <= budget:
        return clipped
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    k = np.arange(1, v.size + 1)
    feasible = u - (css - budget) / k > 0
    k_star = int(np.nonzero(feasible)[0][-1])
    theta = (css[k_star] - budget) / (k_star + 1)
    return np.maximum(v - theta, 0.0)


def psd_trace_projection(h, budget: float) -> np.ndarray:
    """Frobenius-nearest matrix to ``h`` in {X >= 0, Tr X <= budget}.

    Computed spectrally: the projection shares eigenvectors with the
    Hermitian part of ``h`` and its eigenvalues are the simplex projection
    of the input eigenvalues.
    """
    if budget <= 0:
        raise InvalidInputError("budget must be positive")
    eig = evd(h)
    w = simplex_clip(eig.values, budget)
    return hermitian_part((eig.vectors * w) @ eig.vectors.conj().T)
