"""Common orthonormal eigenbasis for a commuting family of normal blocks.

Every normal block ``B`` splits into commuting Hermitian parts
``H = (B + B^H)/2`` and ``K = (B - B^H)/(2i)``.  The basis is found by
recursive eigenspace refinement: starting from the whole space, each
Hermitian generator is diagonalized on every current subspace, and each
subspace is split along the clusters of the generator's eigenvalues.  The
column order of the result is fixed by the generator order (row-major over
blocks, ``H`` before ``K``), so the output is deterministic.
"""

from dataclasses import dataclass

import numpy as np

from .blocks import DEFAULT_TOL_COMMUTE, DEFAULT_TOL_NORMAL, validate_family
from .errors import FamilyInvalidError, InconsistentInputError, ResidualTooLargeError
from .linalg import adjoint, frobenius_norm, hermitian_eig

CLUSTER_GAP = 1e-8
RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class JointEigenStructure:
    """Unitary ``U`` and eigenvalue tables ``beta[k, i, j] = u_k^H B_ij u_k``."""

    U: np.ndarray
    beta: np.ndarray
    residual: float

    @property
    def d(self):
        return self.U.shape[0]

    @property
    def n(self):
        return self.beta.shape[1]

    def vector(self, k):
        return self.U[:, k]


def hermitian_generators(t):
    """The ``2 n^2`` Hermitian generators in refinement order."""
    gens = []
    for i in range(t.n):
        for j in range(t.n):
            b = t[i, j]
            gens.append(0.5 * (b + adjoint(b)))
            gens.append((b - adjoint(b)) / 2j)
    return gens


def clusters(eigenvalues, gap):
    """Split ascending eigenvalues into maximal runs whose consecutive gaps are below ``gap``."""
    out = []
    start = 0
    for idx in range(1, len(eigenvalues)):
        if eigenvalues[idx] - eigenvalues[idx - 1] >= gap:
            out.append(slice(start, idx))
            start = idx
    out.append(slice(start, len(eigenvalues)))
    return out


def _refine(subspaces, gen):
    gap = CLUSTER_GAP * max(1.0, frobenius_norm(gen))
    refined = []
    for q in subspaces:
        if q.shape[1] == 1:
            refined.append(q)
            continue
        compressed = adjoint(q) @ gen @ q
        compressed = 0.5 * (compressed + adjoint(compressed))
        vals, vecs = hermitian_eig(compressed)
        rotated = q @ vecs
        refined.extend(rotated[:, s] for s in clusters(vals, gap))
    return refined


def eigenvalue_tables(t, u):
    """Rayleigh quotients ``beta[k, i, j] = u_k^H B_ij u_k``."""
    return np.einsum("ak,ijab,bk->kij", np.conj(u), t.blocks, u)


def diagonalization_residual(t, u, beta):
    """Worst ``||U^H B_ij U - diag(beta[:, i, j])||_F`` over all blocks."""
    worst = 0.0
    uh = adjoint(u)
    for i in range(t.n):
        for j in range(t.n):
            leak = uh @ t[i, j] @ u - np.diag(beta[:, i, j])
            worst = max(worst, frobenius_norm(leak))
    return worst


def simultaneous_diagonalize(t, tol_normal=DEFAULT_TOL_NORMAL, tol_commute=DEFAULT_TOL_COMMUTE, check=True):
    """Compute a common orthonormal eigenbasis of the blocks of ``t``.

    Raises :class:`FamilyInvalidError` if the blocks are not a commuting
    normal family at the given tolerances, and
    :class:`ResidualTooLargeError` if the resulting basis leaves more than
    ``1e-8 * max(1, max_ij ||B_ij||_F)`` off the diagonal.
    """
    if check:
        report = validate_family(t, tol_normal, tol_commute)
        if not report.ok:
            raise FamilyInvalidError("blocks are not a commuting family of normal matrices", report)

    d = t.d
    subspaces = [np.eye(d, dtype=np.complex128)]
    for gen in hermitian_generators(t):
        if all(q.shape[1] == 1 for q in subspaces):
            break
        subspaces = _refine(subspaces, gen)
    u = np.hstack(subspaces)

    beta = eigenvalue_tables(t, u)
    residual = diagonalization_residual(t, u, beta)
    scale = max(1.0, max(frobenius_norm(t[i, j]) for i in range(t.n) for j in range(t.n)))
    if residual > RESIDUAL_TOL * scale:
        raise ResidualTooLargeError(
            f"joint diagonalization leaves off-diagonal mass {residual:.3e} "
            f"(bound {RESIDUAL_TOL * scale:.3e}); the family is only approximately commuting"
        )
    return JointEigenStructure(U=u, beta=beta, residual=residual)


def tensor_decomposition(t, joint):
    """Pairs ``(M_k, u_k)`` with ``T = sum_k M_k (x) u_k u_k^H`` and ``M_k[i, j] = beta[k, i, j]``."""
    if joint.U.shape != (t.d, t.d) or joint.beta.shape != (t.d, t.n, t.n):
        raise InconsistentInputError(
            f"joint structure for (n={joint.n}, d={joint.d}) does not match block matrix (n={t.n}, d={t.d})"
        )
    return [(joint.beta[k].copy(), joint.U[:, k].copy()) for k in range(t.d)]


def reconstruct(pairs):
    return sum(np.kron(m, np.outer(u, np.conj(u))) for m, u in pairs)
