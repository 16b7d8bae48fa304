import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entbound import linalg
from entbound.errors import ContractError, DimensionError

from conftest import random_complex, random_hermitian


def brute_kron(a, b):
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb), dtype=complex)
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k, j * cb + l] = a[i, j] * b[k, l]
    return out


def brute_partial_trace_B(rho, dA, dB):
    out = np.zeros((dA, dA), dtype=complex)
    for i in range(dA):
        for j in range(dA):
            for b in range(dB):
                out[i, j] += rho[i * dB + b, j * dB + b]
    return out


def test_kron_small_cases(rng):
    assert np.array_equal(linalg.kron(np.eye(2), np.eye(2)), np.eye(4))
    assert np.allclose(linalg.kron(np.diag([1, 2]), np.diag([3, 4])), np.diag([3, 4, 6, 8]), atol=0)
    a, b = random_complex(rng, (2, 3)), random_complex(rng, (3, 2))
    assert np.abs(linalg.kron(a, b) - brute_kron(a, b)).max() < 1e-14


def test_kron_mixed_product(rng):
    a, b, c, d = (random_complex(rng, (3, 3)) for _ in range(4))
    lhs = linalg.kron(a, b) @ linalg.kron(c, d)
    assert np.abs(lhs - linalg.kron(a @ c, b @ d)).max() < 1e-12


def test_kron_associative(rng):
    a, b, c = (random_complex(rng, (2, 3)) for _ in range(3))
    lhs = linalg.kron(linalg.kron(a, b), c)
    assert np.abs(lhs - linalg.kron(a, linalg.kron(b, c))).max() < 1e-12


def test_kron_guard(monkeypatch):
    monkeypatch.setenv("ENTBOUND_MAX_DIM", "8")
    linalg.kron(np.eye(2), np.eye(4))
    with pytest.raises(DimensionError):
        linalg.kron(np.eye(3), np.eye(3))


def test_partial_trace_examples(rng):
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert np.abs(linalg.partial_trace(np.outer(phi, phi), 2, 2, "A") - np.eye(2) / 2).max() < 1e-15
    e00 = np.zeros((4, 4))
    e00[0, 0] = 1
    assert np.array_equal(linalg.partial_trace(e00, 2, 2, "B"), np.diag([1, 0]))

    ra, rb = random_hermitian(rng, 3), random_hermitian(rng, 4)
    reduced = linalg.partial_trace(np.kron(ra, rb), 3, 4, "A")
    assert np.abs(reduced - ra * np.trace(rb)).max() < 1e-12


def test_partial_trace_matches_index_contraction(rng):
    rho = random_complex(rng, (12, 12))
    assert np.abs(linalg.partial_trace(rho, 3, 4, "A") - brute_partial_trace_B(rho, 3, 4)).max() < 1e-12
    for keep in ("A", "B"):
        assert abs(np.trace(linalg.partial_trace(rho, 3, 4, keep)) - np.trace(rho)) < 1e-12


def test_partial_trace_linear(rng):
    x, y = random_complex(rng, (6, 6)), random_complex(rng, (6, 6))
    lhs = linalg.partial_trace(2 * x - 3j * y, 2, 3, "B")
    rhs = 2 * linalg.partial_trace(x, 2, 3, "B") - 3j * linalg.partial_trace(y, 2, 3, "B")
    assert np.abs(lhs - rhs).max() < 1e-12


def test_partial_trace_shape_error():
    with pytest.raises(DimensionError):
        linalg.partial_trace(np.eye(5), 2, 2)


def test_herm_eig_examples(rng):
    values, _ = linalg.herm_eig(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(values, [3, 2, 1], atol=1e-15)
    values, _ = linalg.herm_eig(np.array([[0, 1], [1, 0]]))
    assert np.allclose(values, [1, -1], atol=1e-15)

    h = random_hermitian(rng, 9)
    values, vectors = linalg.herm_eig(h)
    assert np.all(np.diff(values) <= 0)
    assert np.abs(h @ vectors - vectors * values).max() < 1e-9
    assert np.abs(vectors.conj().T @ vectors - np.eye(9)).max() < 1e-10
    assert np.linalg.norm((vectors * values) @ vectors.conj().T - h) < 1e-9
    assert abs(values.sum() - np.trace(h).real) < 1e-10


def test_herm_eig_rejects_non_hermitian():
    with pytest.raises(ContractError):
        linalg.herm_eig(np.array([[0, 1], [0, 0]]))


def test_singular_values(rng):
    assert np.allclose(linalg.singular_values(np.diag([2, -3])), [3, 2])
    assert np.array_equal(linalg.singular_values(np.zeros((3, 3))), np.zeros(3))
    a = random_complex(rng, (4, 4))
    s = linalg.singular_values(a)
    assert abs((s**2).sum() - linalg.frobenius_norm(a) ** 2) < 1e-10
    assert np.abs(np.sort(s**2) - np.linalg.eigvalsh(a.conj().T @ a)).max() < 1e-10
    assert np.abs(s - linalg.singular_values(linalg.dagger(a))).max() < 1e-10


def test_plumbing(rng):
    a, b = random_complex(rng, (5, 5)), random_complex(rng, (5, 5))
    assert np.array_equal(linalg.dagger(linalg.dagger(a)), a)
    assert abs(linalg.trace(linalg.matmul(a, b)) - linalg.trace(linalg.matmul(b, a))) < 1e-12
    assert linalg.trace(np.eye(9)) == 9
    with pytest.raises(DimensionError):
        linalg.trace(np.ones((2, 3)))
    with pytest.raises(DimensionError):
        linalg.matmul(np.ones((2, 3)), np.ones((2, 3)))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_partial_trace_preserves_trace(dA, dB, seed):
    rho = random_complex(np.random.default_rng(seed), (dA * dB, dA * dB))
    for keep in ("A", "B"):
        assert abs(np.trace(linalg.partial_trace(rho, dA, dB, keep)) - np.trace(rho)) < 1e-10
