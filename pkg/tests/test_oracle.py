import numpy as np
import pytest

from blocksep.blocks import from_blocks
from blocksep.errors import DimensionMismatchError, TooLargeError
from blocksep.generators import circulant_constant
from blocksep.oracle import brute_force_psd, verify_decomposition, verify_witness
from blocksep.separability import SeparableDecomposition, Term, decompose
from blocksep.blocks import BlockMatrix

I2 = np.eye(2)


def test_brute_force_identity():
    is_psd, lam = brute_force_psd(from_blocks([[I2, 0 * I2], [0 * I2, I2]]))
    assert is_psd and lam == pytest.approx(1.0)


def test_brute_force_indefinite():
    # eigenvalues of [[1, 2], [2, 1]] (x) I2 are {3, 3, -1, -1}
    is_psd, lam = brute_force_psd(from_blocks([[I2, 2 * I2], [2 * I2, I2]]))
    assert not is_psd and lam == pytest.approx(-1.0, abs=1e-14)


def test_brute_force_circulant_psd():
    assert brute_force_psd(circulant_constant(np.array([[2.0, 1.0], [1.0, 1.0]]), 3)).is_psd


def test_brute_force_too_large():
    with pytest.raises(TooLargeError):
        brute_force_psd(BlockMatrix(np.zeros((1, 1, 513, 513))))


def _identity_decomposition():
    e = np.eye(2)
    return SeparableDecomposition([Term(1.0, e[i], e[j]) for i in range(2) for j in range(2)])


def test_verify_identity_decomposition():
    t = from_blocks([[I2, 0 * I2], [0 * I2, I2]])
    report = verify_decomposition(t, _identity_decomposition())
    assert report.passed
    assert report["reconstruction"].measured == 0.0


def test_verify_negative_weight():
    t = from_blocks([[I2, 0 * I2], [0 * I2, I2]])
    dec = _identity_decomposition()
    first = dec.terms[0]
    dec.terms[0] = Term(-first.weight, first.left, first.right)
    report = verify_decomposition(t, dec)
    assert not report.passed
    assert "nonnegative_weights" in report.failed


def test_verify_non_unit_and_overlong():
    t = from_blocks([[np.eye(1)]])
    dec = SeparableDecomposition([Term(0.25, np.array([2.0]), np.array([1.0]))] * 2)
    report = verify_decomposition(t, dec)
    assert "unit_factors" in report.failed and "length" in report.failed


def test_verify_shape_mismatch():
    t = from_blocks([[I2, 0 * I2], [0 * I2, I2]])
    with pytest.raises(DimensionMismatchError):
        verify_decomposition(t, SeparableDecomposition([Term(1.0, np.ones(3), np.ones(2))]))


def test_verify_witness():
    t = from_blocks([[I2, 2 * I2], [2 * I2, I2]])
    verdict = decompose(t)
    assert verify_witness(t, verdict.vector, verdict.value)
    assert not verify_witness(t, np.zeros(4), 0.0)
    with pytest.raises(DimensionMismatchError):
        verify_witness(t, np.zeros(3), -1.0)


def test_verify_witness_on_psd_matrix():
    t = from_blocks([[2 * I2, I2], [I2, 2 * I2]])
    w, v = np.linalg.eigh(t.to_dense())
    assert not verify_witness(t, v[:, 0], -1.0)
    assert not verify_witness(t, v[:, 0], w[0])  # value is positive
