import numpy as np
import pytest

from entbound import bounds as B
from entbound import channels as C
from entbound import states as S
from entbound.errors import DimensionError, DomainError


def test_identity_channel_leaves_state():
    rho = S.random_density(6, 2, seed=1, dimB=3)
    res = C.apply(rho, C.identity(3))
    assert np.abs(res.output.matrix - rho.matrix).max() < 1e-15
    assert abs(res.p - 1) < 1e-15


def test_projector_filter_example():
    # diag(1, 0) on B keeps only the |b=0> branch of phi+
    res = C.apply(S.phi_plus(2), C.single_filter(np.diag([1.0, 0.0])))
    expected = np.zeros((4, 4))
    expected[0, 0] = 0.5
    assert np.abs(res.output.matrix - expected).max() < 1e-15
    assert abs(res.p - 0.5) < 1e-15


def test_depolarizing_closed_form():
    rho = S.random_density(4, 4, seed=3, dimB=2)
    lam = 0.3
    out = C.apply(rho, C.depolarizing(2, lam), side="B").output.matrix
    rA = np.einsum("ijkj->ik", rho.matrix.reshape(2, 2, 2, 2))
    expected = (1 - lam) * rho.matrix + lam * np.kron(rA, np.eye(2) / 2)
    assert np.abs(out - expected).max() < 1e-14
    with pytest.raises(DomainError):
        C.depolarizing(2, 1.5)


def test_full_depolarizing_kills_entanglement():
    out = C.apply(S.phi_plus(2), C.depolarizing(2, 1.0)).output
    assert np.abs(out.matrix - np.eye(4) / 4).max() < 1e-15
    assert B.wootters_concurrence(out) < 1e-12


def test_amplitude_damping_limits():
    full = C.apply(S.phi_plus(2), C.amplitude_damping(1.0)).output
    assert B.wootters_concurrence(full) < 1e-12
    assert abs(np.trace(full.matrix) - 1) < 1e-15
    none = C.apply(S.phi_plus(2), C.amplitude_damping(0.0)).output
    assert abs(B.wootters_concurrence(none) - 1) < 1e-12


@pytest.mark.parametrize("eta", [0.1, 0.35, 0.8])
def test_amplitude_damping_choi_concurrence(eta):
    choi = C.choi_state(C.amplitude_damping(eta), S.computational_schmidt(2, 2))
    assert abs(B.wootters_concurrence(choi.output) - np.sqrt(1 - eta)) < 1e-12
    assert abs(choi.p - 1) < 1e-15


def test_kraus_validation():
    with pytest.raises(DomainError):
        C.KrausChannel([2 * np.eye(2)])
    with pytest.raises(DimensionError):
        C.KrausChannel([np.eye(2), np.eye(3)])
    assert C.KrausChannel([np.eye(2)]).cptp
    assert not C.single_filter(np.diag([1.0, 0.5])).cptp
    with pytest.raises(DimensionError):
        C.apply(S.phi_plus(2), C.identity(3))


@pytest.mark.parametrize("t", [0.0, 0.4, 0.9])
def test_filter_success_probability(t):
    choi = C.choi_state(C.single_filter(np.diag([1.0, t])), S.computational_schmidt(2, 2))
    assert abs(choi.p - (1 + t**2) / 2) < 1e-15


@pytest.mark.parametrize("dim,n", [(2, 1), (3, 2), (4, 3)])
def test_random_channel_trace_preserving(dim, n):
    ch = C.random_channel(dim, n, seed=dim * 10 + n)
    assert np.abs(ch.completeness() - np.eye(dim)).max() < 1e-12
    assert ch.cptp and len(ch.kraus) == n
    rho = S.random_density(2 * dim, 2, seed=4, dimB=dim)
    assert abs(C.apply(rho, ch).p - 1) < 1e-12


def test_random_channel_deterministic():
    a = C.random_channel(3, 2, seed=11)
    b = C.random_channel(3, 2, seed=11)
    assert all(np.array_equal(x, y) for x, y in zip(a.kraus, b.kraus))


def test_random_filter_norm_range():
    for seed in range(20):
        (K,) = C.random_filter(3, seed).kraus
        top = np.linalg.norm(K, 2)
        assert 0.5 - 1e-12 <= top <= 1 + 1e-12


def test_linearity():
    ch = C.random_channel(3, 2, seed=5)
    r1 = S.random_density(9, 2, seed=1, dimB=3)
    r2 = S.random_density(9, 3, seed=2, dimB=3)
    mix = S.DensityOperator(3, 3, 0.3 * r1.matrix + 0.7 * r2.matrix)
    lhs = C.apply(mix, ch).output.matrix
    rhs = 0.3 * C.apply(r1, ch).output.matrix + 0.7 * C.apply(r2, ch).output.matrix
    assert np.abs(lhs - rhs).max() < 1e-14


def test_composition():
    first = C.random_channel(3, 2, seed=1)
    second = C.single_filter(np.diag([1.0, 0.7, 0.2]))
    rho = S.random_density(9, 2, seed=6, dimB=3)
    step = C.apply(C.apply(rho, first).output, second).output.matrix
    once = C.apply(rho, second.compose(first)).output.matrix
    assert np.abs(step - once).max() < 1e-14


def test_side_a_application():
    K = np.diag([1.0, 0.5])
    ch = C.single_filter(K)
    psi = S.random_pure(2, 3, seed=8)
    v = np.kron(K, np.eye(3)) @ psi.amplitudes
    out = C.apply(psi, ch, side="A").output.matrix
    assert np.abs(out - np.outer(v, v.conj())).max() < 1e-15


def test_choi_state_in_schmidt_basis():
    psi = S.random_pure(3, 3, seed=12)
    sd = S.schmidt_decompose(psi)
    ch = C.random_channel(3, 2, seed=2)
    phi = S.maximally_entangled(sd).amplitudes
    expected = sum(np.outer(v, v.conj()) for v in (np.kron(np.eye(3), K) @ phi for K in ch.kraus))
    assert np.abs(C.choi_state(ch, sd).output.matrix - expected).max() < 1e-14


@pytest.mark.parametrize("seed", range(10))
def test_filter_consistency_random(seed):
    psi = S.random_pure(3, 3, seed=seed)
    ch = C.random_filter(3, seed + 100)
    check = C.filter_consistency(psi, ch)
    assert check.ok()
    assert check.p_prime < 1


def test_filter_consistency_cptp():
    check = C.filter_consistency(S.random_pure(3, 3, seed=3), C.random_channel(3, 3, seed=4))
    assert check.ok()
    assert abs(check.p_double_prime - 1) < 1e-12
