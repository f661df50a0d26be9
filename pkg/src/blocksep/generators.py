"""Block-matrix families whose blocks are normal and commute.

* :func:`polynomial_family` -- blocks ``P_ij(B)`` for one normal ``B``.
* :func:`power_toeplitz` -- blocks ``B^(j-i)`` above the diagonal and their adjoints below.
* :func:`circulant_constant` -- blocks ``a_ij S^(i-j)`` with ``S`` the cyclic shift.
* :func:`random_instance` -- seeded Hermitian instances for tests and the CLI.
"""

from dataclasses import dataclass

import numpy as np

from .blocks import BlockMatrix
from .errors import DimensionMismatchError, NotNormalError
from .linalg import adjoint, as_matrix, is_normal


@dataclass(frozen=True)
class PolynomialSpec:
    """Complex coefficients in ascending degree."""

    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coefficients)
        if not coeffs:
            raise ValueError("a polynomial needs at least one coefficient")
        object.__setattr__(self, "coefficients", coeffs)

    def __call__(self, x):
        """Evaluate at a scalar or, by Horner's rule, at a square matrix."""
        if np.ndim(x) == 0:
            acc = 0j
            for c in reversed(self.coefficients):
                acc = acc * x + c
            return acc
        return matrix_polyval(self.coefficients, x)


def matrix_polyval(coefficients, x):
    x = np.asarray(x, dtype=np.complex128)
    eye = np.eye(x.shape[0], dtype=np.complex128)
    acc = np.zeros_like(x)
    for c in reversed(list(coefficients)):
        acc = acc @ x + c * eye
    return acc


def _check_dim(value, name, minimum=1):
    if isinstance(value, bool) or int(value) != value or value < minimum:
        raise DimensionMismatchError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def _require_normal(b):
    b = as_matrix(b, "B")
    if b.shape[0] != b.shape[1]:
        raise DimensionMismatchError(f"B must be square, got shape {b.shape}")
    if not is_normal(b):
        raise NotNormalError("B is not normal")
    return b


def shift_matrix(d):
    """Cyclic shift: ones on the subdiagonal and in the top-right corner."""
    d = _check_dim(d, "d")
    return np.roll(np.eye(d, dtype=np.complex128), 1, axis=0)


def fourier_vectors(d):
    """Columns ``u_k[l] = conj(eps)^(k l) / sqrt(d)`` with ``eps = exp(2 pi i / d)``; ``S u_k = eps^k u_k``."""
    k, l = np.meshgrid(np.arange(d), np.arange(d))
    return np.exp(-2j * np.pi * k * l / d) / np.sqrt(d)


def _signed_power(s, p):
    if p >= 0:
        return np.linalg.matrix_power(s, p)
    return adjoint(np.linalg.matrix_power(s, -p))


def circulant_constant(a, d):
    """Blocks ``a[i, j] * S^(i - j)``; negative powers mean adjoint powers."""
    a = as_matrix(a, "A")
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"A must be square, got shape {a.shape}")
    s = shift_matrix(d)
    n = a.shape[0]
    blocks = np.empty((n, n, s.shape[0], s.shape[0]), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            blocks[i, j] = a[i, j] * _signed_power(s, i - j)
    return BlockMatrix(blocks)


def power_toeplitz(b, n):
    """Blocks ``B^(j - i)`` for ``j >= i`` and ``(B^(i - j))^H`` for ``i > j``."""
    b = _require_normal(b)
    n = _check_dim(n, "n")
    d = b.shape[0]
    powers = [np.eye(d, dtype=np.complex128)]
    for _ in range(1, n):
        powers.append(powers[-1] @ b)
    blocks = np.empty((n, n, d, d), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            blocks[i, j] = powers[j - i] if j >= i else adjoint(powers[i - j])
    return BlockMatrix(blocks)


def polynomial_family(b, polys):
    """Blocks ``P_ij(B)`` evaluated by Horner's rule."""
    b = _require_normal(b)
    n = len(polys)
    if n == 0 or any(len(row) != n for row in polys):
        raise DimensionMismatchError("polynomial grid must be square and non-empty")
    blocks = np.empty((n, n) + b.shape, dtype=np.complex128)
    for i, row in enumerate(polys):
        for j, p in enumerate(row):
            if not isinstance(p, PolynomialSpec):
                p = PolynomialSpec(p)
            blocks[i, j] = p(b)
    return BlockMatrix(blocks)


def random_unitary(d, rng):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_normal(d, rng, eigenvalues=None):
    """``Q diag(eigenvalues) Q^H`` for a Haar-random unitary ``Q``; returns ``(B, Q, eigenvalues)``."""
    if eigenvalues is None:
        eigenvalues = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    q = random_unitary(d, rng)
    eigenvalues = np.asarray(eigenvalues, dtype=np.complex128)
    return (q * eigenvalues) @ adjoint(q), q, eigenvalues


def random_disk_spectrum(d, rng, boundary_fraction=0.25):
    """Eigenvalues uniform in the closed unit disk, some of them exactly on the circle."""
    radius = np.sqrt(rng.uniform(0.0, 1.0, d))
    radius[rng.uniform(size=d) < boundary_fraction] = 1.0
    return radius * np.exp(2j * np.pi * rng.uniform(size=d))


@dataclass
class RandomInstance:
    """A seeded Hermitian instance together with its analytic data."""

    t: BlockMatrix
    b: np.ndarray
    b_eigenvalues: np.ndarray
    min_eigenvalue: float
    seed: int
    meta: dict


def _random_poly(rng, degree):
    return PolynomialSpec(rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1))


def random_instance(seed, n=None, d=None, psd=None, degenerate=None):
    """Hermitian block matrix with blocks in the algebra generated by one random Hermitian ``G``.

    ``B = p(G) + i q(G)`` is normal for real polynomials ``p, q``.  Upper
    blocks are random polynomials in ``B``, lower blocks their adjoints and
    diagonal blocks Hermitian parts of polynomials in ``B``, so the family is
    normal, commuting and ``T`` is Hermitian.  The diagonal is then shifted by
    a multiple of the identity so that the smallest eigenvalue of ``T`` is a
    chosen target: positive, zero (rank deficient) or negative.  That target is
    computed analytically from the known spectrum of ``G``.
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7)) if n is None else _check_dim(n, "n")
    d = int(rng.integers(2, 7)) if d is None else _check_dim(d, "d")
    if psd is None:
        psd = bool(rng.uniform() < 0.5)
    if degenerate is None:
        degenerate = bool(rng.uniform() < 0.25)

    g_eigs = rng.standard_normal(d)
    if degenerate and d > 1:
        # force repeated eigenvalues in G (and hence in every block)
        g_eigs[: max(2, d // 2)] = g_eigs[0]
    q = random_unitary(d, rng)
    p_re = rng.standard_normal(3)
    p_im = rng.standard_normal(3)
    beta = np.polynomial.polynomial.polyval(g_eigs, p_re) + 1j * np.polynomial.polynomial.polyval(g_eigs, p_im)
    b = (q * beta) @ adjoint(q)

    blocks = np.empty((n, n, d, d), dtype=np.complex128)
    coeff = np.empty((d, n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(i, n):
            poly = _random_poly(rng, int(rng.integers(0, 3)))
            pb = poly(b)
            pk = np.array([poly(x) for x in beta])
            if i == j:
                blocks[i, i] = 0.5 * (pb + adjoint(pb))
                coeff[:, i, i] = pk.real
            else:
                blocks[i, j] = pb
                blocks[j, i] = adjoint(pb)
                coeff[:, i, j] = pk
                coeff[:, j, i] = np.conj(pk)

    lam = min(np.linalg.eigvalsh(coeff[k]).min() for k in range(d))
    scale = max(1.0, np.abs(coeff).max())
    if psd:
        target = 0.0 if rng.uniform() < 0.3 else float(rng.uniform(0.05, 1.0)) * scale
    else:
        target = -float(rng.uniform(0.05, 1.0)) * scale
    shift = target - lam
    for i in range(n):
        blocks[i, i] += shift * np.eye(d)

    meta = {"kind": "random", "seed": int(seed), "n": n, "d": d, "psd": psd, "degenerate": degenerate}
    return RandomInstance(BlockMatrix(blocks), b, beta, target, int(seed), meta)
