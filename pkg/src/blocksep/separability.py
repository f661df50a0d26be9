"""Positivity test, separable decomposition and negativity witness.

For a block matrix whose blocks are normal and commute,
``T = sum_k M_k (x) u_k u_k^H`` where ``u_k`` is the common eigenbasis and
``M_k`` collects the block eigenvalues on ``u_k``.  ``T`` is PSD exactly
when every ``M_k`` is, and then the eigen-pairs of the ``M_k`` give a
decomposition into at most ``n*d`` rank-one product terms.  When some
``M_k`` has a negative eigenvalue with eigenvector ``v``, ``v (x) u_k`` is a
vector on which ``T`` is negative.
"""

from dataclasses import dataclass, field

import numpy as np

from .blocks import DEFAULT_TOL_COMMUTE, DEFAULT_TOL_NORMAL, FamilyReport, validate_family
from .errors import NotHermitianError, NotNegativeError, ResidualTooLargeError
from .formats import decode_array, encode_array
from .linalg import HermitianEigResult, frobenius_norm, hermiticity_defect, hermitian_eig
from .simdiag import simultaneous_diagonalize

DEFAULT_TOL_PSD = 1e-9
HERMITIAN_TOL = 1e-9
DROP_TOL = 1e-12
T_HERMITIAN_TOL = 1e-10


@dataclass
class CoefficientMatrix:
    """The ``n x n`` matrix of block eigenvalues attached to eigenvector ``k``."""

    k: int
    M: np.ndarray
    eig: HermitianEigResult | None = None

    def eigen(self):
        if self.eig is None:
            defect = hermiticity_defect(self.M)
            if defect > HERMITIAN_TOL * max(1.0, frobenius_norm(self.M)):
                raise NotHermitianError(
                    f"coefficient matrix {self.k} is not Hermitian (defect {defect:.3e}); "
                    "the block matrix itself is not Hermitian"
                )
            self.eig = hermitian_eig(self.M, tol=HERMITIAN_TOL)
        return self.eig


@dataclass(frozen=True)
class Term:
    weight: float
    left: np.ndarray
    right: np.ndarray

    def dense(self):
        return self.weight * np.kron(np.outer(self.left, np.conj(self.left)), np.outer(self.right, np.conj(self.right)))


@dataclass
class SeparableDecomposition:
    """``T = sum weight * (left left^H) (x) (right right^H)``."""

    terms: list = field(default_factory=list)

    def __len__(self):
        return len(self.terms)

    def dense(self, n, d):
        out = np.zeros((n * d, n * d), dtype=np.complex128)
        for term in self.terms:
            out += term.dense()
        return out

    def regroup(self, overlap_tol=1e-10):
        """Sum terms sharing a right factor into ``(M, u)`` pairs, in first-seen order."""
        groups = []
        for term in self.terms:
            rank_one = term.weight * np.outer(term.left, np.conj(term.left))
            for g in groups:
                if abs(abs(np.vdot(g[1], term.right)) - 1.0) <= overlap_tol:
                    g[0] += rank_one
                    break
            else:
                groups.append([rank_one.astype(np.complex128), term.right])
        return [(m, u) for m, u in groups]

    def to_dict(self):
        return {
            "terms": [
                {"weight": float(t.weight), "left": encode_array(t.left), "right": encode_array(t.right)}
                for t in self.terms
            ]
        }

    @classmethod
    def from_dict(cls, obj):
        terms = []
        for idx, item in enumerate(obj["terms"]):
            weight = item["weight"]
            if isinstance(weight, bool) or not isinstance(weight, (int, float)):
                raise ValueError(f"field 'terms[{idx}].weight': expected a number")
            terms.append(
                Term(
                    float(weight),
                    decode_array(item["left"], 1, f"terms[{idx}].left"),
                    decode_array(item["right"], 1, f"terms[{idx}].right"),
                )
            )
        return cls(terms)


@dataclass
class Separable:
    decomposition: SeparableDecomposition
    min_eigenvalues: list

    verdict = "separable"


@dataclass
class NotPsd:
    """Either a witness vector (``vector``, ``value``, ``k``) or, for non-Hermitian input, only the defect."""

    vector: np.ndarray | None
    value: float | None
    k: int | None
    min_eigenvalues: list | None = None
    hermiticity_defect: float | None = None

    verdict = "not_psd"

    def witness_dict(self):
        return {"vector": encode_array(self.vector), "value": float(self.value), "k": int(self.k)}


@dataclass
class HypothesesFail:
    """The blocks are outside the supported class; ``reason`` explains a failure the report cannot."""

    report: FamilyReport
    reason: str | None = None

    verdict = "hypotheses_fail"


def witness_from_dict(obj):
    vector = decode_array(obj["vector"], 1, "vector")
    value = obj["value"]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError("field 'value': expected a number")
    return vector, float(value), obj.get("k")


def coefficient_matrices(joint):
    return [CoefficientMatrix(k, joint.beta[k].copy()) for k in range(joint.d)]


def check_psd_all(ms, tol=DEFAULT_TOL_PSD):
    """Return ``(all_psd, min_eigenvalues)``.

    Each matrix passes when its smallest eigenvalue is at least
    ``-tol * max(1, ||M||_F)``.  Eigendecompositions are cached on the
    records.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    mins = []
    ok = True
    for cm in ms:
        lam = float(cm.eigen().eigenvalues[0])
        mins.append(lam)
        if lam < -tol * max(1.0, frobenius_norm(cm.M)):
            ok = False
    return ok, mins


def witness(ms, joint, k, tol=DEFAULT_TOL_PSD):
    """Vector ``X = v (x) u_k`` with ``X^H T X = lambda_min(M_k) < 0``."""
    cm = ms[k]
    res = cm.eigen()
    value = float(res.eigenvalues[0])
    if value >= -tol * max(1.0, frobenius_norm(cm.M)):
        raise NotNegativeError(f"coefficient matrix {k} is PSD at tolerance (min eigenvalue {value:.3e})")
    v = res.eigenvectors[:, 0]
    return np.kron(v, joint.U[:, k]), value


def _upper_pairs(n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def necessary_condition(ms, tol=DEFAULT_TOL_PSD):
    """Cheap pre-filter built from the 1x1 and 2x2 principal minors.

    With ``delta = tol * max(1, ||M||_F)``, any matrix accepted by
    :func:`check_psd_all` satisfies ``Re M_ii >= -delta`` and
    ``|M_ij|^2 <= (Re M_ii + delta)(Re M_jj + delta)``, because ``M + delta I``
    is PSD.  Returns ``(passes, violations)`` with ``(k, i, j)`` triples
    (``i == j`` for a diagonal entry).  A failure implies that some
    coefficient matrix is not PSD.
    """
    violations = []
    for cm in ms:
        m = cm.M
        delta = tol * max(1.0, frobenius_norm(m))
        diag = m.diagonal().real + delta
        for i in range(m.shape[0]):
            if diag[i] < 0:
                violations.append((cm.k, i, i))
        for i, j in _upper_pairs(m.shape[0]):
            if diag[i] >= 0 and diag[j] >= 0 and abs(m[i, j]) ** 2 > diag[i] * diag[j]:
                violations.append((cm.k, i, j))
    return not violations, violations


def diagonal_bound_violations(ms):
    """Entries with ``|M_ij| > Re M_ii``.

    Informational only: PSD matrices such as ``[[1, 1.5], [1.5, 4]]`` show
    such entries, so this is never used to reject.
    """
    out = []
    for cm in ms:
        m = cm.M
        for i in range(m.shape[0]):
            for j in range(m.shape[0]):
                if i != j and abs(m[i, j]) > m[i, i].real:
                    out.append((cm.k, i, j))
    return out


def separable_terms(ms, joint, tol=DEFAULT_TOL_PSD):
    terms = []
    for cm in ms:
        res = cm.eigen()
        norm = max(1.0, frobenius_norm(cm.M))
        drop = DROP_TOL * norm
        u = joint.U[:, cm.k]
        pairs = [(lam, res.eigenvectors[:, j]) for j, lam in enumerate(res.eigenvalues) if lam > drop]
        for lam, v in sorted(pairs, key=lambda p: -p[0]):
            terms.append(Term(float(lam), v.copy(), u.copy()))
    return SeparableDecomposition(terms)


def decompose(
    t,
    tol_normal=DEFAULT_TOL_NORMAL,
    tol_commute=DEFAULT_TOL_COMMUTE,
    tol_psd=DEFAULT_TOL_PSD,
):
    """Run the full pipeline on a block matrix and return a verdict.

    Returns :class:`HypothesesFail` if the blocks are not a commuting normal
    family, :class:`NotPsd` if ``T`` is not Hermitian or some coefficient
    matrix has an eigenvalue below ``-tol_psd * max(1, ||M_k||_F)``, and
    :class:`Separable` otherwise.
    """
    report = validate_family(t, tol_normal, tol_commute)
    if not report.ok:
        return HypothesesFail(report)

    dense = t.to_dense()
    defect = hermiticity_defect(dense)
    if defect > T_HERMITIAN_TOL * max(1.0, frobenius_norm(dense)):
        return NotPsd(None, None, None, hermiticity_defect=defect)

    try:
        joint = simultaneous_diagonalize(t, check=False)
    except ResidualTooLargeError as exc:
        return HypothesesFail(report, str(exc))
    ms = coefficient_matrices(joint)
    ok, mins = check_psd_all(ms, tol_psd)
    if not ok:
        failing = [k for k, cm in enumerate(ms) if mins[k] < -tol_psd * max(1.0, frobenius_norm(cm.M))]
        # most negative eigenvalue among the failures; min() keeps the smallest k on ties
        k = min(failing, key=lambda idx: mins[idx])
        x, value = witness(ms, joint, k, tol_psd)
        return NotPsd(x, value, k, min_eigenvalues=mins, hermiticity_defect=defect)
    return Separable(separable_terms(ms, joint, tol_psd), mins)

