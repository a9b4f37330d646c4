"""MSE-optimal filtering of the GFED in the frequency / fractional-frequency domain.

Observation model ``y = x + w`` with ``w`` zero-mean circular complex
Gaussian, ``E|w(n)|**2 = sigma**2``. The noisy GFED ``E_y`` is moved to the
frequency / fractional-frequency domain by ``Ehat = U^H E``, multiplied
entrywise by a transfer matrix ``Hhat`` and moved back::

    E_est = U (Ehat_y * Hhat)

The ``Hhat`` that minimises ``E||E_x - E_est||_F**2`` for a known clean
signal is ``Ehat_x conj(E{Ehat_y}) / E{|Ehat_y|**2}``; both moments have
closed forms in ``x``, the bases and ``sigma``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np

from . import kernels
from .distributions import EnergyDistribution, gfed
from .spectral import EigenBasis, gfrft_matrix

__all__ = [
    "NoiseModel",
    "FilterTransfer",
    "Reconstruction",
    "Metrics",
    "MonteCarloMoments",
    "trial_rng",
    "gfed_gft",
    "gfed_igft",
    "closed_form_mean",
    "closed_form_second_moment",
    "transfer_from_moments",
    "optimal_transfer",
    "apply_filter",
    "reconstruct_from_marginal",
    "wiener_baseline",
    "metrics",
    "gfed_mse",
    "monte_carlo_moments",
    "SNR_CAP_DB",
]

SNR_CAP_DB = 300.0


def trial_rng(seed: int, trial: int = 0) -> np.random.Generator:
    """Independent generator for one trial, derived from ``(seed, trial)``."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(trial),)))


@dataclass(frozen=True)
class NoiseModel:
    """Additive white Gaussian noise.

    ``complex`` draws real and imaginary parts each with variance
    ``sigma**2 / 2``; ``real`` draws real noise with variance ``sigma**2``.
    The closed-form moments below assume the complex model.
    """

    sigma: float
    kind: Literal["complex", "real"] = "complex"
    seed: int = 0

    def __post_init__(self):
        if not self.sigma >= 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if self.kind not in ("complex", "real"):
            raise ValueError(f"unknown noise kind {self.kind!r}")

    def draw(self, n: int, size: int | None = None, rng=None) -> np.ndarray:
        rng = trial_rng(self.seed) if rng is None else rng
        shape = (n,) if size is None else (size, n)
        if self.kind == "real":
            return self.sigma * rng.standard_normal(shape) + 0j
        z = rng.standard_normal(shape + (2,))
        return (self.sigma / math.sqrt(2)) * (z[..., 0] + 1j * z[..., 1])


@dataclass(frozen=True, eq=False)
class FilterTransfer:
    h_hat: np.ndarray
    h_vertex: np.ndarray
    order: float
    epsilon: float
    basis_id: str = ""


class Reconstruction(NamedTuple):
    signal: np.ndarray
    clamped: int


class Metrics(NamedTuple):
    mse: float
    snr_db: float


class MonteCarloMoments(NamedTuple):
    mean: np.ndarray
    second: np.ndarray
    mean_se: np.ndarray
    second_se: np.ndarray
    draws: int


def _mat(e) -> np.ndarray:
    return e.matrix if isinstance(e, EnergyDistribution) else np.asarray(e)


def gfed_gft(e, basis: EigenBasis) -> np.ndarray:
    """Column-wise GFT of a distribution: ``U^H E``."""
    m = _mat(e)
    if m.shape != (basis.n, basis.n):
        raise ValueError(f"distribution shape {m.shape} does not match N={basis.n}")
    return basis.gft_matrix @ m


def gfed_igft(e_hat, basis: EigenBasis) -> np.ndarray:
    m = np.asarray(e_hat)
    if m.shape != (basis.n, basis.n):
        raise ValueError(f"distribution shape {m.shape} does not match N={basis.n}")
    return basis.u @ m


def _noise_profile(basis: EigenBasis, a: float):
    """``U_a``, ``|U_a|**2`` and ``m[l, k] = sum_i |U_a(i, k)|**2 conj(U(i, l))``."""
    ua = gfrft_matrix(basis, a).inverse
    pa = np.abs(ua) ** 2
    return ua, pa, basis.gft_matrix @ pa


def closed_form_mean(e_x_hat, basis: EigenBasis, a: float, sigma: float) -> np.ndarray:
    """``E{Ehat_y} = Ehat_x + sigma**2 sum_i |U_a(i, k)|**2 conj(U(i, l))``."""
    _, _, m = _noise_profile(basis, a)
    return np.asarray(e_x_hat) + sigma**2 * m


def closed_form_second_moment(x, basis: EigenBasis, a: float, sigma: float,
                              double_count_diagonal: bool = False) -> np.ndarray:
    """``E{|Ehat_y(l, k)|**2}`` for circular complex Gaussian noise.

    Sum of ``|Ehat_x|**2``, four ``sigma**2`` cross terms and the ``sigma**4``
    noise-noise terms obtained by pairing the fourth moment
    ``E{w_i conj(w_j) conj(w_p) w_q}`` (Isserlis). The pairing already
    contains ``E|w|**4 = 2 sigma**4``; ``double_count_diagonal=True`` adds
    ``2 sigma**4 sum_i |U_a(i,k)|**4 |U(i,l)|**2`` on top, a variant that
    overstates the moment (kept to compare against that form).
    """
    x = np.asarray(x, dtype=complex)
    u = basis.u
    ua, pa, m = _noise_profile(basis, a)
    xa = ua.conj().T @ x
    e_x_hat = basis.gft_matrix @ (x[:, None] * xa.conj()[None, :] * ua.conj())
    # alpha[l, k] = sum_i x(i) conj(U_a(i, k)) conj(U(i, l))
    alpha = basis.gft_matrix @ (x[:, None] * ua.conj())
    # g2[l, k] = sum_i |U_a(i, k)|**2 |U(i, l)|**2
    g2 = (np.abs(u) ** 2).T @ pa
    s2, s4 = sigma**2, sigma**4

    signal = np.abs(e_x_hat) ** 2
    cross_spread = s2 * np.abs(alpha) ** 2
    cross_bias = s2 * e_x_hat * m.conj()
    cross_bias_conj = s2 * e_x_hat.conj() * m
    cross_energy = s2 * (np.abs(xa) ** 2)[None, :] * g2
    noise_bias = s4 * np.abs(m) ** 2
    noise_spread = s4 * g2
    total = (signal + cross_spread + cross_energy + noise_bias + noise_spread
             + (cross_bias + cross_bias_conj).real)
    if double_count_diagonal:
        total = total + 2 * s4 * ((np.abs(u) ** 2).T @ pa**2)
    return total


def _default_epsilon(den) -> float:
    peak = float(np.max(den)) if np.size(den) else 0.0
    return 1e-12 * peak if peak > 0 else np.finfo(float).tiny


def transfer_from_moments(e_x_hat, mean, second, basis: EigenBasis, a: float,
                          epsilon: float | None = None) -> FilterTransfer:
    """``Hhat = Ehat_x conj(mean) / max(second, epsilon)`` and ``H = U Hhat``."""
    den = np.real(np.asarray(second))
    if epsilon is None:
        epsilon = _default_epsilon(den)
    elif not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    h_hat = np.asarray(e_x_hat) * np.conj(mean) / np.maximum(den, epsilon)
    return FilterTransfer(h_hat, basis.u @ h_hat, float(a), float(epsilon), basis.basis_id)


def optimal_transfer(x, basis: EigenBasis, a: float, sigma: float,
                     epsilon: float | None = None,
                     double_count_diagonal: bool = False) -> FilterTransfer:
    """MSE-optimal transfer matrix using the clean signal ``x`` as prior.

    ``epsilon`` floors the denominator (default ``1e-12`` times its largest
    entry), so entries where signal and noise terms both vanish map to 0.
    """
    if not sigma >= 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    e_x_hat = gfed_gft(gfed(x, basis, a), basis)
    mean = closed_form_mean(e_x_hat, basis, a, sigma)
    second = closed_form_second_moment(x, basis, a, sigma, double_count_diagonal)
    return transfer_from_moments(e_x_hat, mean, second, basis, a, epsilon)


def apply_filter(e_y: EnergyDistribution, t: FilterTransfer, basis: EigenBasis) -> EnergyDistribution:
    """``U (U^H E_y * Hhat)``."""
    if not math.isclose(e_y.order, t.order, rel_tol=0, abs_tol=1e-12):
        raise ValueError(f"distribution order {e_y.order} does not match filter order {t.order}")
    est = basis.u @ (gfed_gft(e_y, basis) * t.h_hat)
    return EnergyDistribution(est, e_y.order, e_y.kernel_tag + "+filtered", e_y.basis_id)


def reconstruct_from_marginal(e) -> Reconstruction:
    """Real non-negative signal from the vertex marginal: ``sqrt(max(Re sum_k E, 0))``.

    ``clamped`` counts vertices whose marginal was negative.
    """
    marg = np.real(_mat(e).sum(axis=1))
    neg = marg < 0
    return Reconstruction(np.sqrt(np.where(neg, 0.0, marg)), int(neg.sum()))


def wiener_baseline(x, y, sigma: float) -> np.ndarray:
    """Ideal vertex-domain Wiener estimate ``x x^H y / (sigma**2 + ||x||**2)``."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    den = sigma**2 + np.vdot(x, x).real
    if den == 0:
        return np.zeros_like(x)
    return x * (np.vdot(x, y) / den)


def metrics(x, x_est, raw: bool = False) -> Metrics:
    """Per-vertex MSE (``raw=True``: summed) and SNR ``20 log10(||x|| / ||x - x_est||)``.

    The SNR is capped at :data:`SNR_CAP_DB`.
    """
    x = np.asarray(x)
    x_est = np.asarray(x_est)
    if x.size == 0:
        raise ValueError("metrics need at least one sample")
    if x.shape != x_est.shape:
        raise ValueError(f"shape mismatch {x.shape} vs {x_est.shape}")
    err = float(np.sum(np.abs(x - x_est) ** 2))
    mse = err if raw else err / x.size
    ref = float(np.linalg.norm(x))
    if err == 0:
        snr = SNR_CAP_DB
    elif ref == 0:
        snr = -SNR_CAP_DB
    else:
        snr = min(SNR_CAP_DB, 20 * math.log10(ref / math.sqrt(err)))
    return Metrics(mse, snr)


def gfed_mse(e_ref, e_est) -> float:
    """``||E_ref - E_est||_F**2``."""
    return float(np.sum(np.abs(_mat(e_ref) - _mat(e_est)) ** 2))


def monte_carlo_moments(x, basis: EigenBasis, a: float, noise: NoiseModel,
                        draws: int, chunk: int = 10_000) -> MonteCarloMoments:
    """Sample mean and second moment of ``Ehat_y`` over seeded noise draws."""
    x = np.asarray(x, dtype=complex)
    n = basis.n
    op = gfrft_matrix(basis, a)
    fa = np.ascontiguousarray(op.matrix)
    ua_conj = np.ascontiguousarray(op.inverse.conj())
    uh = np.ascontiguousarray(basis.gft_matrix, dtype=complex)
    rng = trial_rng(noise.seed)
    s1 = np.zeros((n, n), dtype=complex)
    s2 = np.zeros((n, n))
    s4 = np.zeros((n, n))
    done = 0
    while done < draws:
        size = min(chunk, draws - done)
        w = noise.draw(n, size, rng)
        c1, c2, c4 = kernels.gfed_hat_moments(x, w, fa, ua_conj, uh)
        s1 += c1
        s2 += c2
        s4 += c4
        done += size
    mean = s1 / draws
    second = s2 / draws
    var = np.maximum(second - np.abs(mean) ** 2, 0.0)
    var_sq = np.maximum(s4 / draws - second**2, 0.0)
    return MonteCarloMoments(mean, second, np.sqrt(var / draws), np.sqrt(var_sq / draws), draws)
