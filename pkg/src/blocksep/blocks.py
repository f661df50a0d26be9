"""Block matrices ``T = sum_ij E_ij (x) B_ij`` and validation of their block family."""

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import DimensionMismatchError
from .linalg import as_matrix, commutator_norm, frobenius_norm, normality_defect

DEFAULT_TOL_NORMAL = 1e-10
DEFAULT_TOL_COMMUTE = 1e-10
MAX_REPORTED_PAIRS = 10


@dataclass(frozen=True)
class BlockMatrix:
    """An ``n x n`` grid of ``d x d`` complex blocks.

    ``blocks`` has shape ``(n, n, d, d)``.  The block index is the outer
    tensor factor: block ``(i, j)`` occupies dense rows ``[i*d, (i+1)*d)``
    and columns ``[j*d, (j+1)*d)``.
    """

    blocks: np.ndarray

    def __post_init__(self):
        b = np.array(self.blocks, dtype=np.complex128)
        if b.ndim != 4 or b.shape[0] != b.shape[1] or b.shape[2] != b.shape[3] or 0 in b.shape:
            raise DimensionMismatchError(f"blocks must have shape (n, n, d, d), got {b.shape}")
        if not np.all(np.isfinite(b)):
            raise ValueError("blocks contain NaN or Inf entries")
        b.setflags(write=False)
        object.__setattr__(self, "blocks", b)

    @property
    def n(self):
        return self.blocks.shape[0]

    @property
    def d(self):
        return self.blocks.shape[2]

    @property
    def dim(self):
        return self.n * self.d

    def __getitem__(self, ij):
        return self.blocks[ij]

    def to_dense(self):
        n, d = self.n, self.d
        return self.blocks.transpose(0, 2, 1, 3).reshape(n * d, n * d).copy()

    def frobenius_norm(self):
        return frobenius_norm(self.blocks)

    def adjoint(self):
        return BlockMatrix(np.conj(self.blocks).transpose(1, 0, 3, 2))


def from_blocks(grid):
    """Build a :class:`BlockMatrix` from a nested ``n x n`` list of ``d x d`` matrices."""
    rows = [[as_matrix(b, "block") for b in row] for row in grid]
    n = len(rows)
    if n == 0 or any(len(row) != n for row in rows):
        raise DimensionMismatchError("block grid must be square and non-empty")
    d = rows[0][0].shape[0]
    for i, row in enumerate(rows):
        for j, b in enumerate(row):
            if b.shape != (d, d):
                raise DimensionMismatchError(f"block ({i}, {j}) has shape {b.shape}, expected ({d}, {d})")
    return BlockMatrix(np.array(rows))


def from_dense(m, n, d):
    m = as_matrix(m)
    if n < 1 or d < 1 or m.shape != (n * d, n * d):
        raise DimensionMismatchError(f"expected a ({n * d}, {n * d}) matrix for n={n}, d={d}, got {m.shape}")
    return BlockMatrix(m.reshape(n, d, n, d).transpose(0, 2, 1, 3))


@dataclass
class FamilyReport:
    is_normal_family: bool
    is_commuting_family: bool
    max_normality_defect: float
    max_commutator_norm: float
    offending_pairs: list = field(default_factory=list)
    non_normal_blocks: list = field(default_factory=list)

    @property
    def ok(self):
        return self.is_normal_family and self.is_commuting_family

    def to_dict(self):
        return {
            "is_normal_family": self.is_normal_family,
            "is_commuting_family": self.is_commuting_family,
            "max_normality_defect": self.max_normality_defect,
            "max_commutator_norm": self.max_commutator_norm,
            "offending_pairs": [[list(a), list(b)] for a, b in self.offending_pairs],
            "non_normal_blocks": [list(ij) for ij in self.non_normal_blocks],
        }


def validate_family(t, tol_normal=DEFAULT_TOL_NORMAL, tol_commute=DEFAULT_TOL_COMMUTE):
    """Check that the blocks of ``t`` are normal and pairwise commuting.

    A block ``B`` is normal when ``||[B, B^H]||_F <= tol_normal * max(1, ||B||_F^2)``
    and a pair commutes when
    ``||[A, B]||_F <= tol_commute * max(1, ||A||_F) * max(1, ||B||_F)``.
    Reports the worst raw defects and up to ten offending pairs, sorted by
    block index.
    """
    if tol_normal <= 0 or tol_commute <= 0:
        raise ValueError("tolerances must be positive")
    n = t.n
    index = [(i, j) for i in range(n) for j in range(n)]
    norms = {ij: frobenius_norm(t[ij]) for ij in index}

    max_normal = 0.0
    non_normal = []
    for ij in index:
        defect = normality_defect(t[ij])
        max_normal = max(max_normal, defect)
        if defect > tol_normal * max(1.0, norms[ij] ** 2):
            non_normal.append(ij)

    max_comm = 0.0
    offending = []
    for a, b in combinations(index, 2):
        c = commutator_norm(t[a], t[b])
        max_comm = max(max_comm, c)
        if c > tol_commute * max(1.0, norms[a]) * max(1.0, norms[b]):
            offending.append((a, b))

    return FamilyReport(
        is_normal_family=not non_normal,
        is_commuting_family=not offending,
        max_normality_defect=max_normal,
        max_commutator_norm=max_comm,
        offending_pairs=offending[:MAX_REPORTED_PAIRS],
        non_normal_blocks=non_normal[:MAX_REPORTED_PAIRS],
    )
