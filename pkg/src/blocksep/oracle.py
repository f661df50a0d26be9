"""Brute-force checks on the dense ``nd x nd`` matrix.

Nothing here touches the joint eigenbasis or the coefficient matrices, so a
bug in the fast path cannot cancel out against the same bug in its check.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, TooLargeError
from .linalg import frobenius_norm, hermiticity_defect, hermitian_eig

MAX_DIM = 512
UNIT_TOL = 1e-12


@dataclass
class PsdResult:
    is_psd: bool
    min_eigenvalue: float
    hermiticity_defect: float

    def __iter__(self):
        yield self.is_psd
        yield self.min_eigenvalue


def brute_force_psd(t, tol=1e-9):
    """Dense eigensolve of ``(T + T^H)/2``; PSD iff ``lambda_min >= -tol * max(1, ||T||_F)``."""
    if t.dim > MAX_DIM:
        raise TooLargeError(f"dense check limited to nd <= {MAX_DIM}, got {t.dim}")
    dense = t.to_dense()
    defect = hermiticity_defect(dense)
    sym = 0.5 * (dense + dense.conj().T)
    lam = float(hermitian_eig(sym).eigenvalues[0])
    return PsdResult(bool(lam >= -tol * max(1.0, frobenius_norm(dense))), lam, defect)


@dataclass
class Check:
    name: str
    passed: bool
    measured: float
    limit: float

    def to_dict(self):
        return {"name": self.name, "passed": bool(self.passed), "measured": float(self.measured), "limit": float(self.limit)}


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    @property
    def failed(self):
        return [c.name for c in self.checks if not c.passed]

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self):
        return {"passed": self.passed, "failed": self.failed, "checks": [c.to_dict() for c in self.checks]}


def verify_decomposition(t, decomposition, tol=1e-9):
    """Check a decomposition term by term against the dense matrix.

    Checks: ``nonnegative_weights``, ``unit_factors``, ``reconstruction``
    (``||T - sum terms||_F <= tol * max(1, ||T||_F)``) and ``length``
    (at most ``n*d`` terms).
    """
    n, d = t.n, t.d
    dense = t.to_dense()
    recon = np.zeros_like(dense)
    min_weight = min((float(term.weight) for term in decomposition.terms), default=0.0)
    worst_unit = 0.0
    for idx, term in enumerate(decomposition.terms):
        left = np.asarray(term.left, dtype=np.complex128)
        right = np.asarray(term.right, dtype=np.complex128)
        if left.shape != (n,) or right.shape != (d,):
            raise DimensionMismatchError(
                f"term {idx}: factors of length ({left.size}, {right.size}), expected ({n}, {d})"
            )
        worst_unit = max(worst_unit, abs(np.linalg.norm(left) - 1.0), abs(np.linalg.norm(right) - 1.0))
        recon += term.weight * np.kron(np.outer(left, left.conj()), np.outer(right, right.conj()))
    residual = frobenius_norm(dense - recon)
    limit = tol * max(1.0, frobenius_norm(dense))
    return VerificationReport(
        [
            Check("nonnegative_weights", min_weight >= 0.0, min_weight, 0.0),
            Check("unit_factors", worst_unit <= UNIT_TOL, worst_unit, UNIT_TOL),
            Check("reconstruction", residual <= limit, residual, limit),
            Check("length", len(decomposition.terms) <= n * d, float(len(decomposition.terms)), float(n * d)),
        ]
    )


def quadratic_form(t, x):
    x = np.asarray(x, dtype=np.complex128)
    if x.shape != (t.dim,):
        raise DimensionMismatchError(f"vector has shape {x.shape}, expected ({t.dim},)")
    return complex(np.vdot(x, t.to_dense() @ x))


def verify_witness(t, x, claimed, tol=1e-9):
    """True iff ``|X^H T X - claimed| <= tol * max(1, ||T||_F)`` and ``claimed < 0``."""
    value = quadratic_form(t, x)
    scale = max(1.0, t.frobenius_norm())
    return bool(abs(value - claimed) <= tol * scale and claimed < 0)
