"""Concurrence and its computable lower bounds (ALB, MLB, tau).

Two-copy operators act on ``H_A (x) H_B (x) H_A' (x) H_B'`` (the order in
which ``numpy.kron(rho, rho)`` lives). Pairwise constructions are naturally
written on ``AA' (x) BB'``; they are built there and moved to the two-copy
order with one cached permutation matrix.

All functionals accept unnormalized operators: concurrence and ALB are
homogeneous of degree one in the trace, squared MLB of degree two.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from . import linalg
from .errors import DimensionError, DomainError
from .states import DensityOperator, PureBipartiteState, as_density

ALB_EIG_CUTOFF = 1e-12
WOOTTERS_EIG_CUTOFF = 1e-13


class PairIndex(NamedTuple):
    lo: int
    hi: int


def make_pair(lo, hi=None, dim=None):
    if hi is None:
        lo, hi = lo
    p = PairIndex(int(lo), int(hi))
    if not 0 <= p.lo < p.hi or (dim is not None and p.hi >= dim):
        raise DomainError(f"invalid level pair {tuple(p)} for dimension {dim}")
    return p


def all_pairs(dim):
    return [PairIndex(i, j) for i, j in itertools.combinations(range(dim), 2)]


@dataclass(frozen=True, eq=False)
class LocalBasisPair:
    """Orthonormal bases of ``H_A`` and ``H_B`` stored as matrix columns."""

    basisA: np.ndarray
    basisB: np.ndarray
    tag: str = "computational"

    def __post_init__(self):
        for name in ("basisA", "basisB"):
            u = np.asarray(getattr(self, name), dtype=np.complex128)
            if u.ndim != 2 or u.shape[0] != u.shape[1]:
                raise DimensionError(f"{name} must be a square matrix of column vectors")
            if np.abs(u.conj().T @ u - np.eye(u.shape[0])).max() > 1e-10:
                raise DomainError(f"{name} is not orthonormal")
            object.__setattr__(self, name, u)

    @property
    def dims(self):
        return (self.basisA.shape[0], self.basisB.shape[0])

    @classmethod
    def computational(cls, dimA, dimB):
        return cls(np.eye(dimA), np.eye(dimB), "computational")

    @classmethod
    def from_schmidt(cls, schmidt):
        return cls(schmidt.unitaryA, schmidt.unitaryB, "schmidt")


@dataclass(frozen=True)
class BoundValue:
    raw: float
    bound: float
    pairA: PairIndex
    pairB: PairIndex
    basis_tag: str


def _resolve_basis(basis, dims):
    if basis is None:
        return LocalBasisPair.computational(*dims)
    if basis.dims != tuple(dims):
        raise DimensionError(f"basis dims {basis.dims} do not match state dims {tuple(dims)}")
    return basis


# -- pure-state concurrence -------------------------------------------------

def concurrence_pure(psi):
    """``sqrt(2 [<psi|psi>^2 - tr rho_r^2])`` with the unnormalized reduction."""
    X = psi.as_matrix()
    reduced = X @ X.conj().T
    c2 = 2 * (psi.norm2**2 - np.trace(reduced @ reduced).real)
    return float(np.sqrt(max(c2, 0.0)))


# -- two-copy machinery -----------------------------------------------------

@lru_cache(maxsize=None)
def regroup_permutation(dimA, dimB):
    """Permutation ``P`` taking ``AA'BB'`` ordering to ``ABA'B'`` ordering."""
    n = (dimA * dimB) ** 2
    linalg.check_side(n)
    grouped = np.arange(n).reshape(dimA, dimA, dimB, dimB)  # a, a', b, b'
    canonical = grouped.transpose(0, 2, 1, 3).reshape(-1)   # a, b, a', b'
    P = np.zeros((n, n))
    P[np.arange(n), canonical] = 1.0
    P.setflags(write=False)
    return P


def _to_canonical_vector(v, dims):
    return regroup_permutation(*dims) @ v


def _to_canonical_operator(op, dims):
    P = regroup_permutation(*dims)
    return P @ op @ P.T


def swap_copies_permutation(dimA, dimB):
    """Permutation exchanging the two copies ``AB <-> A'B'``."""
    n = dimA * dimB
    idx = np.arange(n * n).reshape(n, n).T.reshape(-1)
    P = np.zeros((n * n, n * n))
    P[np.arange(n * n), idx] = 1.0
    return P


def _antisym(u, i, j):
    return np.kron(u[:, i], u[:, j]) - np.kron(u[:, j], u[:, i])


def _sym(u, i, j):
    return np.kron(u[:, i], u[:, j]) + np.kron(u[:, j], u[:, i])


def chi_vector(pairA, pairB, basis):
    """``(|ij> - |ji>)_{AA'} (|mn> - |nm>)_{BB'}`` in two-copy order."""
    dA, dB = basis.dims
    pairA = make_pair(pairA, dim=dA)
    pairB = make_pair(pairB, dim=dB)
    grouped = np.kron(_antisym(basis.basisA, *pairA), _antisym(basis.basisB, *pairB))
    return _to_canonical_vector(grouped, (dA, dB))


def two_copy_overlap(chi, psi):
    """``<chi| psi> |psi>``."""
    return complex(np.vdot(chi, np.kron(psi.amplitudes, psi.amplitudes)))


def a_operator(dims):
    """``4 P_-^{AA'} (x) P_-^{BB'}`` built from swap operators."""
    dA, dB = dims
    linalg.check_side((dA * dB) ** 2)

    def antisym_projector(d):
        swap = np.eye(d * d).reshape(d, d, d, d).transpose(0, 1, 3, 2).reshape(d * d, d * d)
        return (np.eye(d * d) - swap) / 2

    grouped = 4 * linalg.kron(antisym_projector(dA), antisym_projector(dB))
    return _to_canonical_operator(grouped, (dA, dB))


def _p_minus2(u, i, j):
    """``2 P_-`` for the pair ``(i, j)``."""
    v = _antisym(u, i, j)
    return np.outer(v, v.conj())


def _p_plus2(u, i, j):
    """``2 P_+`` for the pair ``(i, j)``, including the ``2|ii><ii| + 2|jj><jj|`` terms."""
    v = _sym(u, i, j)
    ii = np.kron(u[:, i], u[:, i])
    jj = np.kron(u[:, j], u[:, j])
    return np.outer(v, v.conj()) + 2 * np.outer(ii, ii.conj()) + 2 * np.outer(jj, jj.conj())


def v_operator(k, pairA, pairB, basis):
    """Two-copy witness ``V_(k)`` for the pairs, in two-copy order.

    ``k = 1``: ``4 P_-^{AA'} (x) (P_-^{BB'} - P_+^{BB'})``;
    ``k = 2``: ``4 (P_-^{AA'} - P_+^{AA'}) (x) P_-^{BB'}``.
    """
    dA, dB = basis.dims
    pairA = make_pair(pairA, dim=dA)
    pairB = make_pair(pairB, dim=dB)
    linalg.check_side((dA * dB) ** 2)
    minusA = _p_minus2(basis.basisA, *pairA) / 2
    minusB = _p_minus2(basis.basisB, *pairB) / 2
    if k == 1:
        other = minusB - _p_plus2(basis.basisB, *pairB) / 2
        grouped = 4 * np.kron(minusA, other)
    elif k == 2:
        other = minusA - _p_plus2(basis.basisA, *pairA) / 2
        grouped = 4 * np.kron(other, minusB)
    else:
        raise DomainError(f"k must be 1 or 2, got {k}")
    return _to_canonical_operator(grouped, (dA, dB))


# -- ALB --------------------------------------------------------------------

def t_matrix(vectors, chi, dims):
    """``T_rs = <chi| v_r> |v_s>`` for unnormalized ensemble vectors ``v_r`` (columns)."""
    n = dims[0] * dims[1]
    X = np.conj(chi).reshape(n, n)
    return vectors.T @ X @ vectors


def alb_from_ensemble(vectors, chi, dims):
    """``max(0, s_1 - sum_{l>1} s_l)`` over the singular values of the T matrix."""
    if vectors.shape[1] == 0:
        return 0.0
    s = linalg.singular_values(t_matrix(vectors, chi, dims))
    return float(max(0.0, s[0] - s[1:].sum()))


def eigen_ensemble(rho, cutoff=ALB_EIG_CUTOFF):
    """Columns ``sqrt(lambda_r) Phi_r`` over eigenvalues above ``cutoff``."""
    values, vectors = linalg.herm_eig(rho.matrix)
    keep = values > cutoff
    return vectors[:, keep] * np.sqrt(values[keep])


def alb(rho, pairA, pairB, basis=None):
    rho = as_density(rho)
    basis = _resolve_basis(basis, rho.dims)
    pairA = make_pair(pairA, dim=rho.dimA)
    pairB = make_pair(pairB, dim=rho.dimB)
    chi = chi_vector(pairA, pairB, basis)
    value = alb_from_ensemble(eigen_ensemble(rho), chi, rho.dims)
    return BoundValue(value, value, pairA, pairB, basis.tag)


def ensemble_average(vectors, chi, dims):
    """``sum_k |<chi| v_k> |v_k>|`` for an unnormalized decomposition ``{v_k}``."""
    dA, dB = dims
    total = 0.0
    for v in vectors.T:
        total += abs(two_copy_overlap(chi, PureBipartiteState(dA, dB, v)))
    return total


# -- MLB --------------------------------------------------------------------

def mlb_squared(sigma, k, pairA, pairB, basis=None):
    """``tr(sigma (x) sigma V_(k))``; ``bound`` is the value clamped at zero."""
    sigma = as_density(sigma)
    basis = _resolve_basis(basis, sigma.dims)
    pairA = make_pair(pairA, dim=sigma.dimA)
    pairB = make_pair(pairB, dim=sigma.dimB)
    raw = two_copy_expectation(sigma, v_operator(k, pairA, pairB, basis))
    return BoundValue(raw, max(0.0, raw), pairA, pairB, basis.tag)


def two_copy_expectation(sigma, op):
    """``tr(sigma (x) sigma op)``."""
    two_copy = linalg.kron(sigma.matrix, sigma.matrix)
    # tr(X V) = sum_ij X_ij V_ji
    return float(np.sum(two_copy * op.T).real)


# -- tau --------------------------------------------------------------------

def so_generator(pair, dim):
    """``|i><j| - |j><i|`` in the computational basis."""
    i, j = make_pair(pair, dim=dim)
    L = np.zeros((dim, dim), dtype=np.complex128)
    L[i, j] = 1
    L[j, i] = -1
    return L


def tau(rho, basis=None):
    """Sum of squared ALB over all level pairs on both sides."""
    rho = as_density(rho)
    basis = _resolve_basis(basis, rho.dims)
    ensemble = eigen_ensemble(rho)
    total = 0.0
    for pa in all_pairs(rho.dimA):
        for pb in all_pairs(rho.dimB):
            total += alb_from_ensemble(ensemble, chi_vector(pa, pb, basis), rho.dims) ** 2
    return total


# -- two-qubit oracle -------------------------------------------------------

_SPIN_FLIP = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


def wootters_concurrence(rho):
    """Closed-form two-qubit concurrence ``max(0, mu_1 - mu_2 - mu_3 - mu_4)``.

    Written without the chi-vector machinery so it can check ALB. The
    ``mu_k`` (square roots of the eigenvalues of ``rho (Y(x)Y) rho* (Y(x)Y)``)
    are taken as the singular values of ``W^T (Y(x)Y) W`` with
    ``W W^dagger = rho``, which avoids square roots of round-off-sized
    eigenvalues. Homogeneous of degree one, so unnormalized inputs are fine.
    """
    if not isinstance(rho, DensityOperator):
        rho = as_density(rho)
    if rho.dims != (2, 2):
        raise DomainError(f"Wootters concurrence needs a 2x2 system, got {rho.dims}")
    m = (rho.matrix + rho.matrix.conj().T) / 2
    w, U = np.linalg.eigh(m)
    keep = w > WOOTTERS_EIG_CUTOFF * max(1.0, w[-1])
    W = U[:, keep] * np.sqrt(w[keep])
    if W.shape[1] == 0:
        return 0.0
    mu = np.linalg.svd(W.T @ _SPIN_FLIP @ W, compute_uv=False)
    return float(max(0.0, mu[0] - mu[1:].sum()))
