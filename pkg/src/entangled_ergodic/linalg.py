"""Dense complex linear-algebra primitives.

Vectors and matrices are plain ``numpy`` arrays of dtype ``complex128``.
The helpers here add the validation and the handful of exact tensor and
projection constructions the rest of the package relies on.
"""

from __future__ import annotations

from functools import reduce
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, NonOrthonormalInput

UNITARY_TOL = 1e-10
PROJECTION_TOL = 1e-10
GRAM_TOL = 1e-8


def as_vector(x) -> np.ndarray:
    v = np.asarray(x, dtype=complex)
    if v.ndim != 1 or v.size == 0:
        raise DimensionMismatch(f"expected a non-empty 1-d vector, got shape {v.shape}")
    return v


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.size == 0:
        raise DimensionMismatch(f"expected a non-empty 2-d matrix, got shape {m.shape}")
    return m


def frobenius_distance(a, b) -> float:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    return float(np.linalg.norm(a - b))


def is_unitary(a, tol: float = UNITARY_TOL) -> bool:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        return False
    return frobenius_distance(a.conj().T @ a, np.eye(a.shape[0])) <= tol


def is_projection(a, tol: float = PROJECTION_TOL) -> bool:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        return False
    return (frobenius_distance(a @ a, a) <= tol
            and frobenius_distance(a.conj().T, a) <= tol)


def kron(a, b) -> np.ndarray:
    """Tensor product with the convention ``kron(a, b) @ kron(x, y) == kron(a @ x, b @ y)``."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def projector_from_vectors(basis: Sequence, dim: int | None = None) -> np.ndarray:
    """Orthogonal projection onto the span of an orthonormal family.

    ``dim`` is only needed when ``basis`` is empty (the zero projection).

    Raises:
        NonOrthonormalInput: if the Gram matrix of ``basis`` is farther than
            1e-8 from the identity in Frobenius norm.
    """
    vecs = [as_vector(v) for v in basis]
    if not vecs:
        if dim is None:
            raise DimensionMismatch("dimension required for an empty basis")
        return np.zeros((dim, dim), dtype=complex)
    d = vecs[0].size
    if any(v.size != d for v in vecs) or (dim is not None and dim != d):
        raise DimensionMismatch("basis vectors have inconsistent dimensions")
    cols = np.column_stack(vecs)
    gram = cols.conj().T @ cols
    if frobenius_distance(gram, np.eye(len(vecs))) > GRAM_TOL:
        raise NonOrthonormalInput("basis vectors are not orthonormal")
    return cols @ cols.conj().T


def chain_product(factors: Sequence) -> np.ndarray:
    """Left-to-right product ``F_1 F_2 ... F_r`` with shape checking."""
    mats = [as_matrix(f) for f in factors]
    if not mats:
        raise DimensionMismatch("chain_product needs at least one factor")
    for left, right in zip(mats, mats[1:]):
        if left.shape[1] != right.shape[0]:
            raise DimensionMismatch(
                f"cannot multiply {left.shape} by {right.shape}")
    return reduce(np.matmul, mats)


def operator_norm(a, tol: float = 1e-6, max_iter: int = 10_000, seed: int = 0) -> float:
    """Largest singular value of ``a`` by power iteration on ``a* a``."""
    a = as_matrix(a)
    gram = a.conj().T @ a
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(a.shape[1]) + 1j * rng.standard_normal(a.shape[1])
    x /= np.linalg.norm(x)
    lam = 0.0
    for _ in range(max_iter):
        y = gram @ x
        ny = np.linalg.norm(y)
        if ny == 0.0:
            return 0.0
        x = y / ny
        if abs(ny - lam) <= tol * 1e-8 * ny:
            lam = ny
            break
        lam = ny
    return float(np.sqrt(lam))


def random_unitary_matrix(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR with phase correction."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_matrix(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    return scale * (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))


def random_vector(dim: int, rng: np.random.Generator, normalize: bool = True) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v) if normalize else v
