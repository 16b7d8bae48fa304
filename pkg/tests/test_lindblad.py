import numpy as np
import pytest
from scipy.linalg import expm

from entbound import bounds as B
from entbound import lindblad as L
from entbound import states as S
from entbound.errors import DimensionError, DomainError, NumericalError

MODELS = {"decay": L.spontaneous_decay_gamma, "decoherence": L.decoherence_gamma}


def phi3():
    return S.density_from_pure(S.phi_plus(3))


def superoperator(model, dims):
    """Row-major vectorized Lindblad generator, an independent oracle."""
    g = model.lifted(dims)
    n = g.shape[0]
    gdg = g.conj().T @ g
    eye = np.eye(n)
    return model.Gamma / 2 * (2 * np.kron(g, g.conj()) - np.kron(gdg, eye) - np.kron(eye, gdg.T))


def test_coupling_operators():
    g = L.spontaneous_decay_gamma()
    assert np.allclose(g @ [1, 0, 0], [0, np.sqrt(2), 0])
    assert np.allclose(g @ [0, 1, 0], [0, 0, 1])
    assert np.allclose(g @ [0, 0, 1], 0)
    d = L.decoherence_gamma()
    assert np.array_equal(d, d.conj().T)


@pytest.mark.parametrize("name", MODELS)
def test_generator_traceless_and_hermitian(name):
    model = L.LindbladModel(MODELS[name]())
    rho = S.random_density(9, 4, seed=2, dimB=3)
    out = L.liouvillian_apply(rho, model)
    assert abs(np.trace(out)) < 1e-14
    assert np.abs(out - out.conj().T).max() < 1e-14


def test_stationary_states():
    mixed = S.DensityOperator(3, 3, np.eye(9) / 9)
    assert np.abs(L.liouvillian_apply(mixed, L.LindbladModel(L.decoherence_gamma()))).max() < 1e-15
    dark = S.density_from_pure(S.product_state(S.random_pure(3, 1, seed=1).amplitudes, [0, 0, 1]))
    assert np.abs(L.liouvillian_apply(dark, L.LindbladModel(L.spontaneous_decay_gamma()))).max() < 1e-15


def test_side_a_lifting():
    g = L.decoherence_gamma()
    assert np.array_equal(L.LindbladModel(g, side="A").lifted((3, 2)), np.kron(g, np.eye(2)))
    with pytest.raises(DimensionError):
        L.LindbladModel(g).lifted((3, 2))
    with pytest.raises(DomainError):
        L.LindbladModel(g, side="C")


def test_dephasing_closed_form():
    traj = L.evolve(phi3(), L.LindbladModel(L.decoherence_gamma()), 1.0, 1e-3, every=1000)
    m = traj.states[-1].matrix.reshape(3, 3, 3, 3)
    rates = {(0, 1): 0.5, (0, 2): 2.0, (1, 2): 0.5}
    for (b, c), r in rates.items():
        assert abs(m[b, b, c, c] - np.exp(-r) / 3) < 1e-6
    for b in range(3):
        assert abs(m[b, b, b, b] - 1 / 3) < 1e-12


@pytest.mark.parametrize("name", MODELS)
def test_matches_matrix_exponential(name):
    model = L.LindbladModel(MODELS[name]())
    rho = S.random_density(9, 3, seed=5, dimB=3)
    traj = L.evolve(rho, model, 1.5, 1e-2)
    exact = (expm(1.5 * superoperator(model, (3, 3))) @ rho.matrix.reshape(-1)).reshape(9, 9)
    assert np.abs(traj.states[-1].matrix - exact).max() < 1e-8


def test_decay_fills_lowest_level_monotonically():
    traj = L.evolve(phi3(), L.LindbladModel(L.spontaneous_decay_gamma()), 5.0, 1e-2, every=10)
    pop = [np.einsum("ajaj->j", r.matrix.reshape(3, 3, 3, 3))[2].real for r in traj.states]
    assert np.all(np.diff(pop) >= -1e-12)
    assert pop[-1] > 0.9


def test_long_time_decay_loses_bound():
    traj = L.evolve(phi3(), L.LindbladModel(L.spontaneous_decay_gamma()), 30.0, 1e-2, every=3000)
    L.bound_trajectory(traj, (1, 2), (1, 2))
    assert abs(traj.series["raw"][-1] + 4 / 9) < 1e-6
    assert traj.series["clamped"][-1] == 0.0


@pytest.mark.parametrize("name", MODELS)
def test_trace_and_positivity(name):
    traj = L.evolve(phi3(), L.LindbladModel(MODELS[name]()), 2.0, 1e-2)
    L.bound_trajectory(traj, (1, 2), (1, 2))
    assert np.abs(traj.series["trace"] - 1).max() < 1e-12
    assert min(r.min_eigenvalue() for r in traj.states) > -1e-10
    assert np.all(traj.series["purity"] <= 1 + 1e-12)


def test_initial_bound_value():
    traj = L.evolve(phi3(), L.LindbladModel(L.decoherence_gamma()), 0.0, 1e-3)
    L.bound_trajectory(traj, (1, 2), (1, 2))
    assert len(traj) == 1
    assert abs(traj.series["raw"][0] - 4 / 9) < 1e-12


def test_storage_stride_keeps_final_time():
    traj = L.evolve(phi3(), L.LindbladModel(L.decoherence_gamma()), 0.1, 1e-2, every=3)
    assert np.allclose(traj.times, [0, 0.03, 0.06, 0.09, 0.1])


def test_invalid_steps():
    model = L.LindbladModel(L.decoherence_gamma())
    with pytest.raises(DomainError):
        L.evolve(phi3(), model, 0.105, 1e-2)
    with pytest.raises(DomainError):
        L.evolve(phi3(), model, 1.0, 0.0)


def test_unstable_step_raises():
    with pytest.raises(NumericalError) as info:
        L.evolve(phi3(), L.LindbladModel(L.spontaneous_decay_gamma(), Gamma=5.0), 10.0, 1.0)
    assert info.value.time > 0


def rk4_ratio(model, dt=0.05, t=2.0):
    rho = phi3()
    exact = (expm(t * superoperator(model, (3, 3))) @ rho.matrix.reshape(-1)).reshape(9, 9)
    e1 = np.abs(L.evolve(rho, model, t, dt).states[-1].matrix - exact).max()
    e2 = np.abs(L.evolve(rho, model, t, dt / 2).states[-1].matrix - exact).max()
    return e1 / e2


@pytest.mark.parametrize("name", MODELS)
def test_fourth_order_convergence(name):
    assert 12 <= rk4_ratio(L.LindbladModel(MODELS[name]())) <= 20


@pytest.mark.parametrize("name", MODELS)
def test_bound_factorizes_along_flow(name):
    w = [0.5, 0.3, 0.2]
    psi = S.PureBipartiteState(3, 3, np.diag(np.sqrt(w)).reshape(-1))
    model = L.LindbladModel(MODELS[name]())
    a = L.bound_trajectory(L.evolve(psi, model, 3.0, 1e-2, every=10), (1, 2), (1, 2))
    b = L.bound_trajectory(L.evolve(phi3(), model, 3.0, 1e-2, every=10), (1, 2), (1, 2))
    assert np.abs(a.series["raw"] - 9 * w[1] * w[2] * b.series["raw"]).max() < 1e-10


def test_bound_trajectory_matches_direct_evaluation():
    traj = L.evolve(phi3(), L.LindbladModel(L.spontaneous_decay_gamma()), 0.5, 1e-2, every=10)
    L.bound_trajectory(traj, (0, 1), (1, 2), k=2)
    for rho, raw in zip(traj.states, traj.series["raw"]):
        assert abs(B.mlb_squared(rho, 2, (0, 1), (1, 2)).raw - raw) < 1e-14
