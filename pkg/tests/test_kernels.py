import numpy as np
import pytest
from conftest import complex_signal

from gfvfa import _kernels_py, kernels

BACKENDS = kernels.available_backends()


def test_python_backend_always_available():
    assert "python" in BACKENDS
    assert kernels.get_backend() in BACKENDS


def test_use_backend_restores_previous():
    before = kernels.get_backend()
    with kernels.use_backend("python"):
        assert kernels.get_backend() == "python"
    assert kernels.get_backend() == before
    with pytest.raises(ValueError):
        with kernels.use_backend("fortran"):
            pass


@pytest.mark.parametrize("backend", BACKENDS)
def test_bilinear_contract_matches_definition(backend, rng):
    c = complex_signal(rng, 15).reshape(3, 5)
    phi = rng.random((5, 4, 5))
    want = np.einsum("np,nq,pkq->nk", c, c.conj(), phi)
    with kernels.use_backend(backend):
        assert np.allclose(kernels.bilinear_contract(c, phi), want, atol=1e-13)


@pytest.mark.parametrize("backend", BACKENDS)
def test_choi_williams_table(backend):
    lam = np.array([0.0, 0.5, 0.5, 2.0, 3.5])
    with kernels.use_backend(backend):
        t = kernels.choi_williams_table(lam, 1.5, 1e-10)
    assert np.allclose(t, _kernels_py.choi_williams_table(lam, 1.5, 1e-10), atol=1e-15)
    assert np.allclose(t.sum(axis=1), 1)


@pytest.mark.parametrize("backend", BACKENDS)
def test_moment_accumulator_matches_direct_loop(backend, basis8, rng):
    x = complex_signal(rng, 8)
    noise = 0.3 * complex_signal(rng, 40).reshape(5, 8)
    from gfvfa.spectral import gfrft_matrix
    op = gfrft_matrix(basis8, 0.6)
    fa, ua_conj, uh = op.matrix, op.inverse.conj(), basis8.gft_matrix.astype(complex)
    hats = []
    for w in noise:
        y = x + w
        e = y[:, None] * np.conj(fa @ y)[None, :] * ua_conj
        hats.append(uh @ e)
    hats = np.array(hats)
    with kernels.use_backend(backend):
        s1, s2, s4 = kernels.gfed_hat_moments(x, noise, fa, ua_conj, uh)
    assert np.allclose(s1, hats.sum(0), atol=1e-12)
    assert np.allclose(s2, (np.abs(hats) ** 2).sum(0), atol=1e-12)
    assert np.allclose(s4, (np.abs(hats) ** 4).sum(0), atol=1e-12)


@pytest.mark.skipif("compiled" not in BACKENDS, reason="extension not built")
def test_backends_agree_on_full_pipeline(basis16, rng):
    from gfvfa.distributions import choi_williams_kernel, gfgd
    x = complex_signal(rng, 16)
    with kernels.use_backend("python"):
        a = gfgd(x, basis16, 0.7, choi_williams_kernel()).matrix
    with kernels.use_backend("compiled"):
        b = gfgd(x, basis16, 0.7, choi_williams_kernel()).matrix
        c = gfgd(x, basis16, 0.7, choi_williams_kernel()).matrix
    assert np.allclose(a, b, atol=1e-13)
    assert np.array_equal(b, c)
