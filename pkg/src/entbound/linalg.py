"""Dense complex linear algebra for small matrices.

Matrices and vectors are plain ``numpy`` arrays of dtype ``complex128``.
Products of Kronecker type are checked against a side-length guard, since
two-copy constructions grow as ``(dA*dB)**2``. The guard defaults to 4096 and
is read from the ``ENTBOUND_MAX_DIM`` environment variable.
"""

import os

import numpy as np

from .errors import ContractError, DimensionError

HERMITIAN_TOL = 1e-10
DEFAULT_MAX_DIM = 4096


def max_dim():
    value = os.environ.get("ENTBOUND_MAX_DIM")
    if value is None:
        return DEFAULT_MAX_DIM
    try:
        return int(value)
    except ValueError:
        raise DimensionError(f"ENTBOUND_MAX_DIM must be an integer, got {value!r}") from None


def check_side(n):
    limit = max_dim()
    if n > limit:
        raise DimensionError(f"matrix side {n} exceeds the configured maximum {limit}")


def as_matrix(a):
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ContractError("matrix has non-finite entries")
    return a


def kron(a, b):
    """Kronecker product with entry ``(i*rb + k, j*cb + l) = a[i, j] * b[k, l]``."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.ndim == 2 and b.ndim == 2:
        check_side(max(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]))
    else:
        check_side(a.size * b.size)
    return np.kron(a, b)


def dagger(a):
    return np.conj(np.asarray(a)).T


def matmul(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[-1] != b.shape[0]:
        raise DimensionError(f"cannot multiply shapes {a.shape} and {b.shape}")
    return a @ b


def trace(a):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"trace needs a square matrix, got shape {a.shape}")
    return np.trace(a)


def frobenius_norm(a):
    return float(np.linalg.norm(np.asarray(a)))


def is_hermitian(h, tol=HERMITIAN_TOL):
    h = np.asarray(h)
    return h.ndim == 2 and h.shape[0] == h.shape[1] and np.abs(h - dagger(h)).max(initial=0.0) <= tol


def partial_trace(rho, dimA, dimB, keep="A"):
    """Reduce an operator on ``H_A (x) H_B`` to the subsystem named by ``keep``.

    ``keep`` is ``"A"`` (trace out B) or ``"B"`` (trace out A).
    """
    rho = np.asarray(rho)
    n = dimA * dimB
    if rho.shape != (n, n):
        raise DimensionError(f"operator of shape {rho.shape} does not act on a {dimA}x{dimB} space")
    t = rho.reshape(dimA, dimB, dimA, dimB)
    if keep == "A":
        return np.einsum("ibjb->ij", t)
    if keep == "B":
        return np.einsum("aiaj->ij", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def herm_eig(h, tol=HERMITIAN_TOL):
    """Eigendecomposition of a Hermitian matrix, eigenvalues in descending order.

    Returns ``(values, vectors)`` with eigenvectors stored as columns.
    Raises ``ContractError`` when ``h`` is not Hermitian within ``tol``.
    """
    h = np.asarray(h, dtype=np.complex128)
    if not is_hermitian(h, tol):
        raise ContractError("herm_eig needs a Hermitian matrix")
    values, vectors = np.linalg.eigh((h + dagger(h)) / 2)
    return values[::-1].copy(), vectors[:, ::-1].copy()


def singular_values(a):
    """Singular values in descending order."""
    a = np.asarray(a, dtype=np.complex128)
    if a.size == 0:
        return np.zeros(0)
    return np.linalg.svd(a, compute_uv=False)
