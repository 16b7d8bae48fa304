"""Bipartite pure states, density operators and Schmidt decompositions.

Amplitudes of a state on ``H_A (x) H_B`` are stored flat with index
``a*dimB + b`` for ``|a>_A |b>_B``; every module relies on this ordering.
States are allowed to be sub-normalized, because the factorization laws are
evaluated on unnormalized post-channel operators.
"""

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DimensionError, DomainError

NORM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class PureBipartiteState:
    dimA: int
    dimB: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != self.dimA * self.dimB:
            raise DimensionError(
                f"{amps.size} amplitudes do not fit a {self.dimA}x{self.dimB} space")
        if not np.all(np.isfinite(amps)):
            raise DomainError("amplitudes must be finite")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm2(self):
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    @property
    def dims(self):
        return (self.dimA, self.dimB)

    def as_matrix(self):
        """Amplitudes reshaped to a ``dimA x dimB`` coefficient matrix."""
        return self.amplitudes.reshape(self.dimA, self.dimB)

    def scaled(self, c):
        return PureBipartiteState(self.dimA, self.dimB, c * self.amplitudes)

    def normalized(self):
        n2 = self.norm2
        if n2 < 1e-24:
            raise DomainError("cannot normalize the zero vector")
        return self.scaled(1 / np.sqrt(n2))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian PSD operator on ``H_A (x) H_B``; trace may be below one.

    Single-system operators use ``dimB = 1``.
    """

    dimA: int
    dimB: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        n = self.dimA * self.dimB
        if m.shape != (n, n):
            raise DimensionError(f"matrix of shape {m.shape} does not act on a {self.dimA}x{self.dimB} space")
        if not np.all(np.isfinite(m)):
            raise DomainError("matrix entries must be finite")
        object.__setattr__(self, "matrix", m)

    @property
    def weight(self):
        return float(np.trace(self.matrix).real)

    @property
    def dims(self):
        return (self.dimA, self.dimB)

    def scaled(self, c):
        return DensityOperator(self.dimA, self.dimB, c * self.matrix)

    def purity(self):
        return float(np.trace(self.matrix @ self.matrix).real)

    def min_eigenvalue(self):
        return float(np.linalg.eigvalsh((self.matrix + self.matrix.conj().T) / 2)[0])

    def validate(self, psd_tol=1e-9, herm_tol=linalg.HERMITIAN_TOL):
        """Raise ``DomainError`` unless the operator is a valid (sub-)state."""
        if not linalg.is_hermitian(self.matrix, herm_tol):
            raise DomainError("density matrix is not Hermitian")
        if self.min_eigenvalue() < -psd_tol:
            raise DomainError("density matrix is not positive semidefinite")
        w = self.weight
        if not 0 < w <= 1 + NORM_TOL:
            raise DomainError(f"density matrix trace {w} outside (0, 1]")
        return self


def normalize(rho, tol=1e-12):
    """Divide a density operator by its trace."""
    w = rho.weight
    if w < tol:
        raise DomainError(f"cannot normalize an operator of trace {w}")
    return rho.scaled(1 / w)


def as_density(obj):
    if isinstance(obj, DensityOperator):
        return obj
    if isinstance(obj, PureBipartiteState):
        return density_from_pure(obj)
    raise TypeError(f"expected a state or density operator, got {type(obj).__name__}")


def density_from_pure(psi):
    v = psi.amplitudes
    return DensityOperator(psi.dimA, psi.dimB, np.outer(v, v.conj()))


def product_state(a, b):
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    return PureBipartiteState(a.size, b.size, np.kron(a, b))


def basis_vector(dim, k):
    e = np.zeros(dim, dtype=np.complex128)
    e[k] = 1
    return e


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """Schmidt form ``sum_i sqrt(w_i) |alpha_i> |beta_i>``.

    ``unitaryA`` and ``unitaryB`` hold complete orthonormal bases as columns;
    the first ``d = min(dimA, dimB)`` columns are the Schmidt vectors.
    """

    weights: np.ndarray
    unitaryA: np.ndarray
    unitaryB: np.ndarray

    @property
    def d(self):
        return len(self.weights)

    @property
    def dims(self):
        return (self.unitaryA.shape[0], self.unitaryB.shape[0])

    @property
    def basisA(self):
        return [self.unitaryA[:, i] for i in range(self.d)]

    @property
    def basisB(self):
        return [self.unitaryB[:, i] for i in range(self.d)]

    def weight(self, i):
        """Weight of level ``i``; levels beyond the Schmidt rank weigh zero."""
        return float(self.weights[i]) if i < self.d else 0.0

    def reconstruct(self):
        dA, dB = self.dims
        amps = np.zeros(dA * dB, dtype=np.complex128)
        for w, a, b in zip(self.weights, self.basisA, self.basisB):
            amps += np.sqrt(w) * np.kron(a, b)
        return PureBipartiteState(dA, dB, amps)


def schmidt_decompose(psi):
    if psi.norm2 <= 1e-24:
        raise DomainError("the zero vector has no Schmidt decomposition")
    u, s, vh = np.linalg.svd(psi.as_matrix(), full_matrices=True)
    # psi[a, b] = sum_k s_k u[a, k] vh[k, b], so beta_k is the k-th row of vh
    return SchmidtDecomposition(weights=s**2, unitaryA=u, unitaryB=vh.T.copy())


def maximally_entangled(schmidt):
    """``sum_i |alpha_i beta_i> / sqrt(d)`` in the supplied Schmidt bases."""
    d = schmidt.d
    if d < 2:
        raise DomainError("a maximally entangled state needs d >= 2")
    dA, dB = schmidt.dims
    amps = sum(np.kron(a, b) for a, b in zip(schmidt.basisA, schmidt.basisB)) / np.sqrt(d)
    return PureBipartiteState(dA, dB, amps)


def computational_schmidt(dimA, dimB):
    """Schmidt data of the computational-basis maximally entangled state."""
    d = min(dimA, dimB)
    return SchmidtDecomposition(np.full(d, 1 / d), np.eye(dimA, dtype=np.complex128),
                                np.eye(dimB, dtype=np.complex128))


def phi_plus(d):
    """``(|00> + |11> + ... ) / sqrt(d)`` on ``d x d``."""
    return maximally_entangled(computational_schmidt(d, d))


def filter_operator(schmidt):
    """Local operator ``M`` on ``H_A`` with ``(M (x) I)|phi+> = |psi>``."""
    d = schmidt.d
    U = schmidt.unitaryA[:, :d]
    return np.sqrt(d) * (U * np.sqrt(schmidt.weights)) @ U.conj().T


def _rng(seed):
    return np.random.default_rng(seed)


def complex_gaussian(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unitary(dim, seed):
    """Haar-random unitary from the QR decomposition of a complex Gaussian."""
    rng = _rng(seed)
    q, r = np.linalg.qr(complex_gaussian(rng, (dim, dim)))
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_pure(dimA, dimB, seed):
    rng = _rng(seed)
    v = complex_gaussian(rng, dimA * dimB)
    return PureBipartiteState(dimA, dimB, v / np.linalg.norm(v))


def random_density(dim, rank, seed, dimB=1):
    """``G G^dagger / tr(G G^dagger)`` for a ``dim x rank`` complex Gaussian ``G``.

    ``dim`` is the full side; pass ``dimB`` to label it as ``dim/dimB x dimB``.
    """
    if not 1 <= rank <= dim:
        raise DomainError(f"rank {rank} not in [1, {dim}]")
    if dim % dimB:
        raise DimensionError(f"dimB={dimB} does not divide {dim}")
    rng = _rng(seed)
    g = complex_gaussian(rng, (dim, rank))
    m = g @ g.conj().T
    return DensityOperator(dim // dimB, dimB, m / np.trace(m).real)


def random_schmidt_weights(d, seed, min_weight=0.0):
    """Uniform sample of the probability simplex with every entry >= ``min_weight``.

    The constrained region is a shrunken copy of the simplex, so a uniform
    sample (normalized exponential spacings) is rescaled into it. Sorted
    descending.
    """
    if min_weight < 0 or min_weight * d > 1 + 1e-15:
        raise DomainError(f"min_weight={min_weight} is infeasible for d={d}")
    rng = _rng(seed)
    e = rng.exponential(size=d)
    u = e / e.sum()
    w = min_weight + (1 - d * min_weight) * u
    return np.sort(w)[::-1]


def state_from_schmidt(weights, dimA, dimB, seed):
    """Pure state with the given Schmidt weights in Haar-random local bases."""
    rng = _rng(seed)
    weights = np.asarray(weights, dtype=float)
    d = min(dimA, dimB)
    if weights.size != d:
        raise DimensionError(f"need {d} weights, got {weights.size}")
    U = random_unitary(dimA, rng)
    V = random_unitary(dimB, rng)
    amps = sum(np.sqrt(w) * np.kron(U[:, i], V[:, i]) for i, w in enumerate(weights))
    return PureBipartiteState(dimA, dimB, amps)
