"""One-sided Lindblad dynamics and bound trajectories.

The generator acts on one factor of a bipartite operator:
``L rho = (Gamma/2) (2 g rho g^dagger - rho g^dagger g - g^dagger g rho)``
with ``g`` lifted to ``I (x) gamma`` (side B) or ``gamma (x) I`` (side A).
Time is measured in units of ``1/Gamma``.
"""

from dataclasses import dataclass, field

import numpy as np

from . import bounds
from .errors import DimensionError, DomainError, NumericalError
from .states import DensityOperator, as_density

POSITIVITY_TOL = 1e-7


def spontaneous_decay_gamma():
    """Coupling operator for the spontaneous-decay model.

    Maps ``|0> -> sqrt(2)|1>`` and ``|1> -> |2>`` and annihilates ``|2>``.
    """
    return np.array([[0, 0, 0], [np.sqrt(2), 0, 0], [0, 1, 0]], dtype=np.complex128)


def decoherence_gamma():
    return np.diag([2.0, 1.0, 0.0]).astype(np.complex128)


@dataclass(frozen=True, eq=False)
class LindbladModel:
    gamma: np.ndarray
    Gamma: float = 1.0
    side: str = "B"

    def __post_init__(self):
        g = np.asarray(self.gamma, dtype=np.complex128)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise DimensionError(f"coupling operator must be square, got shape {g.shape}")
        if self.Gamma < 0:
            raise DomainError("decay constant must be nonnegative")
        if self.side not in ("A", "B"):
            raise DomainError(f"side must be 'A' or 'B', got {self.side!r}")
        object.__setattr__(self, "gamma", g)

    def lifted(self, dims):
        dA, dB = dims
        target = dB if self.side == "B" else dA
        if self.gamma.shape[0] != target:
            raise DimensionError(f"coupling acts on dimension {self.gamma.shape[0]}, side {self.side} has {target}")
        if self.side == "B":
            return np.kron(np.eye(dA), self.gamma)
        return np.kron(self.gamma, np.eye(dB))


def _generator(model, dims):
    g = model.lifted(dims)
    gdg = g.conj().T @ g
    half = model.Gamma / 2

    def rhs(m):
        return half * (2 * g @ m @ g.conj().T - m @ gdg - gdg @ m)

    return rhs


def liouvillian_apply(rho, model):
    rho = as_density(rho)
    return _generator(model, rho.dims)(rho.matrix)


@dataclass
class Trajectory:
    times: np.ndarray
    states: list
    series: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.times)


def evolve(rho0, model, t_max, dt, every=1, check_positivity=True):
    """Fixed-step RK4 from ``t = 0`` to ``t_max``; stores every ``every``-th step.

    The final time is always stored. Each step is re-symmetrized to keep the
    state Hermitian; a stored state whose smallest eigenvalue drops below
    ``-1e-7`` raises :class:`NumericalError`.
    """
    if dt <= 0:
        raise DomainError("dt must be positive")
    if t_max < 0:
        raise DomainError("t_max must be nonnegative")
    if every < 1:
        raise DomainError("every must be >= 1")
    rho0 = as_density(rho0)
    dims = rho0.dims
    f = _generator(model, dims)
    n_steps = int(round(t_max / dt))
    if n_steps and abs(n_steps * dt - t_max) > 1e-9 * max(1.0, t_max):
        raise DomainError(f"t_max={t_max} is not a whole number of steps dt={dt}")

    m = rho0.matrix.copy()
    times = [0.0]
    states = [rho0]
    for step in range(1, n_steps + 1):
        k1 = f(m)
        k2 = f(m + dt / 2 * k1)
        k3 = f(m + dt / 2 * k2)
        k4 = f(m + dt * k3)
        m = m + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        m = (m + m.conj().T) / 2
        if step % every == 0 or step == n_steps:
            t = step * dt
            state = DensityOperator(*dims, m)
            if check_positivity:
                lowest = state.min_eigenvalue()
                if lowest < -POSITIVITY_TOL:
                    raise NumericalError(f"state lost positivity (eigenvalue {lowest:.3e}) at t={t:g}", t)
            times.append(t)
            states.append(state)
    return Trajectory(np.array(times), states)


def bound_trajectory(traj, pairA, pairB, k=1, basis=None):
    """Fill ``raw``, ``clamped``, ``trace`` and ``purity`` series (in place; returns ``traj``)."""
    raw, clamped, tr, purity = [], [], [], []
    if not traj.states:
        return traj
    dims = traj.states[0].dims
    basis = basis if basis is not None else bounds.LocalBasisPair.computational(*dims)
    V = bounds.v_operator(k, pairA, pairB, basis)
    for rho in traj.states:
        value = bounds.two_copy_expectation(rho, V)
        raw.append(value)
        clamped.append(max(0.0, value))
        tr.append(rho.weight)
        purity.append(rho.purity())
    traj.series.update(raw=np.array(raw), clamped=np.array(clamped),
                       trace=np.array(tr), purity=np.array(purity))
    return traj
