"""Dense complex matrix helpers and a cyclic Jacobi eigensolver for Hermitian matrices.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Every function
here is pure: inputs are never modified.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    NoConvergenceError,
    NonSquareError,
    NotHermitianError,
)

HERMITIAN_TOL = 1e-10
MAX_SWEEPS = 100
CONVERGENCE_TOL = 1e-14


def as_matrix(a, name="matrix"):
    """Return ``a`` as a finite 2-D complex128 array (copy)."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise DimensionMismatchError(f"{name} must be a non-empty 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return m


def _require_square(m, name="matrix"):
    if m.shape[0] != m.shape[1]:
        raise NonSquareError(f"{name} must be square, got shape {m.shape}")


def adjoint(a):
    return np.conj(np.asarray(a)).T


def frobenius_norm(a):
    return float(np.linalg.norm(np.ravel(a)))


def kron(a, b):
    """Kronecker product; block ``(i, j)`` of the result is ``a[i, j] * b``."""
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def hadamard(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"hadamard needs equal shapes, got {a.shape} and {b.shape}")
    return a * b


def commutator_norm(a, b):
    """Frobenius norm of ``ab - ba``."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
    if a.shape != b.shape:
        raise DimensionMismatchError(f"commutator needs equal shapes, got {a.shape} and {b.shape}")
    return frobenius_norm(a @ b - b @ a)


def is_normal(m, tol=1e-10):
    """True iff ``||m m^H - m^H m||_F <= tol * max(1, ||m||_F^2)``."""
    m = np.asarray(m)
    _require_square(m)
    defect = frobenius_norm(m @ adjoint(m) - adjoint(m) @ m)
    return defect <= tol * max(1.0, frobenius_norm(m) ** 2)


def normality_defect(m):
    m = np.asarray(m)
    return frobenius_norm(m @ adjoint(m) - adjoint(m) @ m)


def hermiticity_defect(m):
    m = np.asarray(m)
    return frobenius_norm(m - adjoint(m))


@dataclass(frozen=True)
class HermitianEigResult:
    """Ascending eigenvalues and the matching unit eigenvectors (as columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __iter__(self):
        yield self.eigenvalues
        yield self.eigenvectors


def _off_norm(a):
    return frobenius_norm(a[~np.eye(a.shape[0], dtype=bool)])


def _rotate(a, v, p, q):
    apq = a[p, q]
    r = abs(apq)
    phase = apq / r
    theta = (a[q, q].real - a[p, p].real) / (2.0 * r)
    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.hypot(1.0, theta))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    # G = [[c, s*phase], [-s*conj(phase), c]] acting on coordinates (p, q); A <- G^H A G.
    sp = s * phase
    spc = np.conj(sp)
    app = a[p, p].real - t * r
    aqq = a[q, q].real + t * r

    col_p = a[:, p].copy()
    col_q = a[:, q]
    a[:, p] = c * col_p - spc * col_q
    a[:, q] = sp * col_p + c * col_q
    row_p = a[p, :].copy()
    row_q = a[q, :]
    a[p, :] = c * row_p - sp * row_q
    a[q, :] = spc * row_p + c * row_q
    a[p, p] = app
    a[q, q] = aqq
    a[p, q] = 0.0
    a[q, p] = 0.0

    vp = v[:, p].copy()
    vq = v[:, q]
    v[:, p] = c * vp - spc * vq
    v[:, q] = sp * vp + c * vq


def _fix_gauge(vectors, eigenvalues):
    """Make the first significant component of every column real positive, then order."""
    n = vectors.shape[0]
    lead = np.empty(vectors.shape[1], dtype=int)
    for j in range(vectors.shape[1]):
        col = vectors[:, j]
        big = np.flatnonzero(np.abs(col) > 1e-12)
        idx = int(big[0]) if big.size else n
        lead[j] = idx
        if idx < n:
            mag = abs(col[idx])
            vectors[:, j] = col * (mag / col[idx])
            vectors[idx, j] = mag
    # lexsort: last key is primary.
    order = np.lexsort((np.arange(len(eigenvalues)), lead, eigenvalues))
    return eigenvalues[order], vectors[:, order]


def hermitian_eig(m, tol=HERMITIAN_TOL, max_sweeps=MAX_SWEEPS):
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    The input is symmetrized as ``(m + m^H) / 2`` after checking that
    ``||m - m^H||_F <= tol * max(1, ||m||_F)``.  Sweeps run in row-cyclic
    order until the off-diagonal Frobenius mass drops to
    ``1e-14 * ||m||_F``.

    Returns a :class:`HermitianEigResult` with eigenvalues ascending; exact
    ties are ordered by the index of each eigenvector's first significant
    component, and that component is made real and positive.
    """
    m = as_matrix(m)
    _require_square(m)
    norm = frobenius_norm(m)
    defect = hermiticity_defect(m)
    if defect > tol * max(1.0, norm):
        raise NotHermitianError(f"matrix is not Hermitian: ||M - M^H||_F = {defect:.3e}")
    a = 0.5 * (m + adjoint(m))
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    target = CONVERGENCE_TOL * frobenius_norm(a)
    # Rotations are skipped below this size; far under the convergence target.
    negligible = max(1e-3 * target / n, 1e-300)

    sweeps = 0
    while _off_norm(a) > target:
        if sweeps == max_sweeps:
            raise NoConvergenceError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) > negligible:
                    _rotate(a, v, p, q)

    eigenvalues, vectors = _fix_gauge(v, np.diag(a).real.copy())
    return HermitianEigResult(eigenvalues, vectors)


def min_eigenvalue(m, tol=HERMITIAN_TOL):
    return float(hermitian_eig(m, tol=tol).eigenvalues[0])
