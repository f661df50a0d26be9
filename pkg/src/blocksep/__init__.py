"""Separability of block matrices whose blocks are normal and pairwise commuting."""

__version__ = "0.1.0"

from .blocks import BlockMatrix, FamilyReport, from_blocks, from_dense, validate_family
from .generators import (
    PolynomialSpec,
    circulant_constant,
    polynomial_family,
    power_toeplitz,
    random_instance,
    shift_matrix,
)
from .linalg import HermitianEigResult, commutator_norm, hermitian_eig, is_normal
from .oracle import brute_force_psd, verify_decomposition, verify_witness
from .separability import (
    CoefficientMatrix,
    HypothesesFail,
    NotPsd,
    Separable,
    SeparableDecomposition,
    check_psd_all,
    coefficient_matrices,
    decompose,
    necessary_condition,
    witness,
)
from .simdiag import JointEigenStructure, simultaneous_diagonalize, tensor_decomposition
