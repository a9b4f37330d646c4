import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import eig_power

from gfvfa.graph import Graph, cycle_graph, sensor_graph
from gfvfa.spectral import (EigenBasis, UnitaryPowerPlan, cycle_dft_basis, dfrft_reference,
                            eig_decompose, gfrft, gfrft_matrix, gft, graph_basis,
                            graph_from_signal, igfrft, igft, shift_from_basis, unitary_power)


def test_two_node_basis():
    b = graph_basis(Graph(np.array([[0, 1.0], [1.0, 0]])))
    s = np.sqrt(0.5)
    assert np.allclose(b.lam, [0, 2])
    assert np.allclose(b.u, [[s, s], [s, -s]], atol=1e-15)


def test_eig_decompose_conventions(basis16):
    assert np.all(np.diff(basis16.lam) >= 0)
    lead = np.argmax(np.abs(basis16.u), axis=0)
    assert np.all(basis16.u[lead, np.arange(16)] > 0)
    with pytest.raises(ValueError, match="symmetric"):
        eig_decompose(np.array([[0, 1.0], [0, 0]]))


def test_basis_validation():
    with pytest.raises(ValueError, match="orthonormal"):
        EigenBasis(np.ones((2, 2)), np.zeros(2))
    with pytest.raises(ValueError):
        EigenBasis(np.eye(2), np.zeros(3))


def test_gft_round_trip(basis8, rng):
    x = rng.standard_normal(8)
    assert np.allclose(igft(gft(x, basis8), basis8), x)
    with pytest.raises(ValueError):
        gft(np.ones(3), basis8)


def test_order_zero_and_one_are_exact(basis8):
    assert np.array_equal(gfrft_matrix(basis8, 0).matrix, np.eye(8))
    assert np.array_equal(gfrft_matrix(basis8, 1).matrix, basis8.gft_matrix)


def test_operator_is_cached_and_frozen(basis8):
    m1 = gfrft_matrix(basis8, 0.3).matrix
    assert gfrft_matrix(basis8, 0.3).matrix is m1
    with pytest.raises(ValueError):
        m1[0, 0] = 0


def test_schur_power_matches_eig_oracle(basis16):
    for a in (0.25, 0.7, -1.3, 2.5):
        assert np.allclose(gfrft_matrix(basis16, a).matrix, eig_power(basis16.gft_matrix, a),
                           atol=1e-10)


def test_reflection_eigenvalue_minus_one():
    # diag(1, -1): -1 sits on the branch cut and maps to exp(i pi a)
    m = np.diag([1.0, -1.0])
    assert np.allclose(unitary_power(m, 0.5), np.diag([1, 1j]))
    # -I in 2D shows up as a rotation block by pi
    r = np.array([[-1.0, 1e-13], [-1e-13, -1.0]])
    assert np.allclose(unitary_power(r, 0.5), 1j * np.eye(2), atol=1e-12)


def test_complex_unitary_power():
    w = dfrft_reference(5, 1.0)
    plan = UnitaryPowerPlan(w)
    assert not plan.real
    assert np.allclose(plan.power(0.5) @ plan.power(0.5), w, atol=1e-12)
    assert np.all(plan.angles > -np.pi)


def test_non_unitary_rejected():
    with pytest.raises(Exception):
        unitary_power(np.array([[2.0, 0], [0, 1]]), 0.5)


def test_dfrft_reference_is_dft_at_order_one():
    n = 6
    idx = np.arange(n)
    w = np.exp(-2j * np.pi * np.outer(idx, idx) / n) / np.sqrt(n)
    assert np.allclose(dfrft_reference(n, 1), w)
    assert np.allclose(dfrft_reference(n, 0), np.eye(n))


def test_cycle_dft_basis_diagonalizes_laplacian():
    for kind in ("laplacian", "adjacency"):
        from gfvfa.graph import shift_operator
        b = cycle_dft_basis(8, kind)
        z = shift_operator(cycle_graph(8, kind))
        assert np.allclose(shift_from_basis(b.u, b.lam), z)


def test_gfrft_round_trip(basis8, rng):
    x = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    op = gfrft_matrix(basis8, 0.42)
    assert np.allclose(igfrft(gfrft(x, op), op), x)


@settings(max_examples=25, deadline=None)
@given(st.integers(4, 20), st.integers(0, 10_000),
       st.floats(-3, 3, allow_nan=False), st.floats(-3, 3, allow_nan=False))
def test_additivity_and_unitarity(n, seed, a, b):
    basis = graph_basis(sensor_graph(n, k=min(3, n - 1), seed=seed))
    fa, fb = gfrft_matrix(basis, a).matrix, gfrft_matrix(basis, b).matrix
    assert np.linalg.norm(fa @ fb - gfrft_matrix(basis, a + b).matrix) < 1e-8
    assert np.linalg.norm(fa.conj().T @ fa - np.eye(n)) < 1e-10


@settings(max_examples=20, deadline=None)
@given(st.integers(4, 12), st.integers(0, 10_000), st.floats(0.2, 3.0))
def test_inverse_order(n, seed, a):
    basis = graph_basis(sensor_graph(n, k=min(3, n - 1), seed=seed))
    fa = gfrft_matrix(basis, a)
    assert np.allclose(gfrft_matrix(basis, -a).matrix, fa.inverse, atol=1e-10)


def test_graph_from_signal_round_trip():
    rng = np.random.default_rng(7)
    x = rng.standard_normal(10)
    a, k = 1.5, 4
    u = graph_from_signal(x, a, k, seed=3)
    basis = EigenBasis(u, np.arange(10.0))
    chirp = gfrft_matrix(basis, a).inverse[:, k - 1]
    assert np.allclose(chirp, x / np.linalg.norm(x), atol=1e-9)
    with pytest.raises(ValueError):
        graph_from_signal(np.zeros(4), a, 1)
    with pytest.raises(ValueError):
        graph_from_signal(x, 0, 1)
