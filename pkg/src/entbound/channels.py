"""Kraus channels acting on one side of a bipartite system.

Channel outputs are never renormalized. ``apply`` returns the operator
``sum_k (I (x) K) sigma (I (x) K)^dagger`` together with the ratio of output
to input trace; call :func:`entbound.states.normalize` when a unit-trace
state is wanted.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError
from .states import (DensityOperator, as_density, complex_gaussian, density_from_pure,
                     filter_operator, maximally_entangled, schmidt_decompose)

COMPLETENESS_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class KrausChannel:
    kraus: tuple
    cptp: bool

    def __init__(self, kraus, cptp=None):
        ops = tuple(np.asarray(k, dtype=np.complex128) for k in kraus)
        if not ops:
            raise DomainError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if len(shape) != 2 or any(k.shape != shape for k in ops):
            raise DimensionError("Kraus operators must be matrices of a common shape")
        if not all(np.all(np.isfinite(k)) for k in ops):
            raise DomainError("Kraus operators must be finite")
        object.__setattr__(self, "kraus", ops)
        completeness = self.completeness()
        top = np.linalg.eigvalsh(completeness)[-1]
        if top > 1 + COMPLETENESS_TOL:
            raise DomainError(f"sum K^dagger K has eigenvalue {top} > 1")
        is_tp = np.linalg.norm(completeness - np.eye(self.dim_in)) < COMPLETENESS_TOL
        if cptp is None:
            cptp = bool(is_tp)
        elif cptp and not is_tp:
            raise DomainError("channel flagged trace-preserving but sum K^dagger K != I")
        object.__setattr__(self, "cptp", bool(cptp))

    @property
    def dim_in(self):
        return self.kraus[0].shape[1]

    @property
    def dim_out(self):
        return self.kraus[0].shape[0]

    def completeness(self):
        return sum(k.conj().T @ k for k in self.kraus)

    def compose(self, first):
        """Channel applying ``first`` and then ``self``."""
        return KrausChannel([k2 @ k1 for k2 in self.kraus for k1 in first.kraus])


@dataclass(frozen=True, eq=False)
class ChannelApplication:
    output: DensityOperator
    p: float


def _lift(k, side, dims):
    dA, dB = dims
    if side == "B":
        return np.kron(np.eye(dA), k)
    if side == "A":
        return np.kron(k, np.eye(dB))
    raise ValueError(f"side must be 'A' or 'B', got {side!r}")


def apply(sigma, ch, side="B"):
    sigma = as_density(sigma)
    target = sigma.dimB if side == "B" else sigma.dimA
    if ch.dim_in != target:
        raise DimensionError(f"channel takes dimension {ch.dim_in}, side {side} has {target}")
    lifted = [_lift(k, side, sigma.dims) for k in ch.kraus]
    out = sum(K @ sigma.matrix @ K.conj().T for K in lifted)
    dims = (sigma.dimA, ch.dim_out) if side == "B" else (ch.dim_out, sigma.dimB)
    output = DensityOperator(*dims, (out + out.conj().T) / 2)
    w = sigma.weight
    return ChannelApplication(output, output.weight / w if w > 0 else 0.0)


def choi_state(ch, schmidt, side="B"):
    """``(1 (x) S)|phi+><phi+|`` with ``phi+`` built in the given Schmidt bases.

    ``p`` of the result is the ``p''`` of the construction since ``phi+`` has
    unit norm.
    """
    dA, dB = schmidt.dims
    target = dB if side == "B" else dA
    if ch.dim_in != target:
        raise DimensionError(f"channel takes dimension {ch.dim_in}, side {side} has {target}")
    return apply(density_from_pure(maximally_entangled(schmidt)), ch, side)


@dataclass(frozen=True)
class FilterConsistency:
    max_entry_error: float
    p_prime: float
    p: float
    p_double_prime: float

    @property
    def p_error(self):
        return abs(self.p_prime - self.p * self.p_double_prime)

    def ok(self, tol=1e-9):
        return self.max_entry_error < tol and self.p_error < tol


def filter_consistency(psi, ch):
    """Compare ``(1 (x) S)|psi><psi|`` with ``(M (x) I) rho_S (M^dagger (x) I)``."""
    schmidt = schmidt_decompose(psi)
    direct = apply(psi, ch)
    choi = choi_state(ch, schmidt)
    M = np.kron(filter_operator(schmidt), np.eye(ch.dim_out))
    via_filter = M @ choi.output.matrix @ M.conj().T
    err = float(np.abs(direct.output.matrix - via_filter).max())
    p2 = choi.p
    p = float(np.trace(via_filter).real) / p2 if p2 > 1e-15 else 0.0
    return FilterConsistency(err, direct.output.weight, p, p2)


# -- stock channels ---------------------------------------------------------

def identity(d):
    return KrausChannel([np.eye(d)], cptp=True)


def depolarizing(d, lam):
    """``rho -> (1 - lam) rho + lam tr(rho) I/d`` as a Kraus family."""
    if not 0 <= lam <= 1:
        raise DomainError(f"depolarizing strength {lam} not in [0, 1]")
    ops = [np.sqrt(1 - lam) * np.eye(d)]
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d))
            e[i, j] = 1
            ops.append(np.sqrt(lam / d) * e)
    return KrausChannel(ops, cptp=True)


def amplitude_damping(eta):
    if not 0 <= eta <= 1:
        raise DomainError(f"damping {eta} not in [0, 1]")
    k0 = np.array([[1, 0], [0, np.sqrt(1 - eta)]])
    k1 = np.array([[0, np.sqrt(eta)], [0, 0]])
    return KrausChannel([k0, k1], cptp=True)


def single_filter(K):
    return KrausChannel([K])


def random_channel(dim, n_kraus, seed):
    """CPTP channel from a Haar-random isometry ``dim -> dim * n_kraus``."""
    if n_kraus < 1:
        raise DomainError("n_kraus must be >= 1")
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(complex_gaussian(rng, (dim * n_kraus, dim)))
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return KrausChannel([q[k * dim:(k + 1) * dim] for k in range(n_kraus)], cptp=True)


def random_filter(dim, seed, min_scale=0.5):
    """Single-Kraus trace-nonincreasing channel with operator norm in ``[min_scale, 1]``."""
    rng = np.random.default_rng(seed)
    g = complex_gaussian(rng, (dim, dim))
    top = np.linalg.svd(g, compute_uv=False)[0]
    return single_filter(g / top * rng.uniform(min_scale, 1.0))
