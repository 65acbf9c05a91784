"""Dense complex linear algebra for small Hermitian/unitary systems.

Everything here operates on plain numpy arrays.  Matrices are validated on
ingestion (``hermitian``) and eigenvector phases are normalized so that
repeated runs produce bit-identical decompositions.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

HERMITICITY_TOL = 1e-9
DENSITY_TOL = 1e-9


class LinalgError(RuntimeError):
    """Eigensolver failed to converge (diagnostic, never silent)."""


class InvalidDensityMatrixError(ValueError):
    """Input is not a valid density matrix (negative eigenvalue or bad trace)."""


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # (d,) real, ascending
    eigenvectors: np.ndarray  # (d, d) complex, columns are eigenvectors


def as_complex_matrix(m) -> np.ndarray:
    """Coerce to a square complex128 array."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def hermitian(m, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Validate Hermiticity within ``tol`` and return the exact Hermitian part.

    User-supplied matrices (e.g. from JSON) carry rounding noise; the stored
    form is always (M + M^dagger)/2 so downstream code sees exact symmetry.
    """
    a = as_complex_matrix(m)
    dev = np.max(np.abs(a - a.conj().T))
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian: max |M - M^dagger| = {dev:.3e}")
    return (a + a.conj().T) / 2


def as_state_vector(v, tol: float = 1e-10) -> np.ndarray:
    """Coerce to a complex vector and check unit norm within ``tol``."""
    a = np.asarray(v, dtype=np.complex128).ravel()
    nrm = float(np.sum(np.abs(a) ** 2))
    if abs(nrm - 1.0) > tol:
        raise ValueError(f"state vector norm^2 = {nrm!r}, expected 1")
    return a


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    """Make each column's largest-magnitude component real-positive.

    Fixes the free phase (and, together with LAPACK's deterministic output,
    the representation of degenerate subspaces) so identical inputs give
    bit-identical eigenvectors.
    """
    out = vecs.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        idx = int(np.argmax(np.abs(col)))
        pivot = col[idx]
        mag = abs(pivot)
        if mag > 0:
            out[:, k] = col * (pivot.conj() / mag)
    return out


def hermitian_eig(h: np.ndarray) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Raises LinalgError if the underlying solver fails to converge.
    """
    h = hermitian(h)
    try:
        vals, vecs = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise LinalgError(f"hermitian eigendecomposition failed: {exc}") from exc
    return EigenDecomposition(vals, _fix_phases(vecs))


def mat_exp_hamiltonian(h: np.ndarray, t: float) -> np.ndarray:
    """Unitary evolution operator exp(-i H t) via eigendecomposition."""
    if not np.isfinite(t):
        raise ValueError(f"evolution time must be finite, got {t!r}")
    vals, vecs = hermitian_eig(h)
    phases = np.exp(-1j * vals * t)
    return (vecs * phases) @ vecs.conj().T


def spectral_norm(m) -> float:
    """Largest singular value; for Hermitian input, max |eigenvalue|."""
    a = as_complex_matrix(m)
    return float(np.linalg.norm(a, 2))


def shannon_entropy(p, tol: float = 1e-9) -> float:
    """Entropy in bits of a probability vector, with 0 log 0 = 0.

    Entries may be noisy: values in [-1e-12, 0) are clamped to zero and the
    vector renormalized, but the sum must be 1 within ``tol``.
    """
    q = np.asarray(p, dtype=float).ravel()
    if np.any(q < -1e-12):
        raise ValueError("probability entries below -1e-12")
    s = float(q.sum())
    if abs(s - 1.0) > tol:
        raise ValueError(f"probabilities sum to {s!r}, expected 1")
    q = np.clip(q, 0.0, None) / np.clip(q, 0.0, None).sum()
    nz = q[q > 0]
    return float(-(nz * np.log2(nz)).sum())


def von_neumann_entropy(rho) -> float:
    """Von Neumann entropy in bits of a density matrix.

    Eigenvalues are clamped to [0, 1] before the log; an eigenvalue below
    -1e-9 or a trace off by more than 1e-9 raises InvalidDensityMatrixError.
    """
    r = hermitian(rho)
    tr = float(np.trace(r).real)
    if abs(tr - 1.0) > DENSITY_TOL:
        raise InvalidDensityMatrixError(f"trace = {tr!r}, expected 1")
    vals = np.linalg.eigvalsh(r)
    if np.any(vals < -DENSITY_TOL):
        raise InvalidDensityMatrixError(
            f"negative eigenvalue {float(vals.min()):.3e} below tolerance"
        )
    vals = np.clip(vals, 0.0, 1.0)
    nz = vals[vals > 0]
    return float(-(nz * np.log2(nz)).sum())
