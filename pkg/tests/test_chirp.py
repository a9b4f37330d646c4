import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gfvfa.chirp import EXAMPLE_LAYOUTS, chirp, chirp_matrix, chirp_rate_shift, compose_multichirp
from gfvfa.spectral import gfrft_matrix


def test_chirp_is_inverse_transform_of_spike(basis8):
    c = chirp(basis8, 3, 0.6)
    e = np.zeros(8)
    e[2] = 1
    assert np.allclose(c.values, gfrft_matrix(basis8, 0.6).inverse @ e)
    assert c.rate == 0.6 and c.initial_frequency == 3 and c.basis_id == basis8.basis_id


def test_order_one_chirp_is_eigenvector(basis8):
    assert np.allclose(chirp(basis8, 5, 1.0).values, basis8.u[:, 4])


def test_chirp_argument_errors(basis8):
    with pytest.raises(ValueError, match="a must be nonzero"):
        chirp(basis8, 1, 0)
    for k in (0, 9, 1.5):
        with pytest.raises(ValueError):
            chirp(basis8, k, 0.5)


def test_rate_shift_to_spike_is_flagged(basis8):
    c = chirp_rate_shift(chirp(basis8, 4, 0.7), 0.7)
    assert c.degenerate and c.rate == 0
    assert np.allclose(c.values, np.eye(8)[3], atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 8), st.floats(-2, 2).filter(lambda a: abs(a) > 1e-3),
       st.floats(-2, 2).filter(lambda b: abs(b) > 1e-3))
def test_rate_shift_identity(basis8, k, a, b):
    shifted = chirp_rate_shift(chirp(basis8, k, a), b)
    assert np.allclose(shifted.values, chirp_matrix(basis8, a - b)[:, k - 1], atol=1e-8)


@settings(max_examples=30, deadline=None)
@given(st.floats(-2, 2).filter(lambda a: abs(a) > 1e-3))
def test_chirps_form_orthonormal_family(basis8, a):
    ua = chirp_matrix(basis8, a)
    assert np.allclose(np.linalg.norm(ua, axis=0), 1, atol=1e-10)
    assert np.allclose(ua.conj().T @ ua, np.eye(8), atol=1e-9)


def test_compose_multichirp(basis8):
    ua = chirp_matrix(basis8, 0.5)
    x = compose_multichirp(basis8, 0.5, segments=(((1, 3), 2), ((4, 8), 6)), extras=(1,))
    want = np.concatenate([ua[:3, 1], ua[3:, 5]]) + ua[:, 0]
    assert np.allclose(x, want)
    with pytest.raises(ValueError, match="overlaps"):
        compose_multichirp(basis8, 0.5, segments=(((1, 4), 2), ((4, 8), 6)))
    with pytest.raises(ValueError, match="range"):
        compose_multichirp(basis8, 0.5, segments=(((0, 4), 2),))
    with pytest.raises(ValueError):
        compose_multichirp(basis8, 0.5, extras=(9,))


def test_example_layouts_fit_64_vertices():
    for lay in EXAMPLE_LAYOUTS.values():
        spans = [r for r, _ in lay["segments"]]
        assert spans[0][0] == 1 and spans[-1][1] == 64
        assert all(b[0] == a[1] + 1 for a, b in zip(spans, spans[1:]))
