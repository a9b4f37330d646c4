"""Vertex / fractional-frequency energy distributions.

Rows of every distribution matrix are vertices ``n``, columns are spectral
indices ``k``. ``gfed`` is the Rihaczek-type distribution
``E(n, k) = x(n) conj(xhat_a(k)) conj(u_k^a(n))``; ``gfgd`` smooths it with a
kernel ``phi(p, k, q)`` over pairs of spectral components.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels
from .spectral import EigenBasis, gfrft_matrix

__all__ = [
    "EnergyDistribution",
    "SpectralKernel",
    "DualKernel",
    "KernelError",
    "MarginalResidueWarning",
    "delta_kernel",
    "choi_williams_kernel",
    "custom_kernel",
    "dual_delta_kernel",
    "dual_uniform_kernel",
    "gfed",
    "gfgd",
    "gfgd_dual",
    "vertex_marginal",
    "frequency_marginal",
    "vertex_moment",
    "frequency_moment",
    "shannon_entropy",
]


class KernelError(RuntimeError):
    pass


class MarginalResidueWarning(UserWarning):
    """A marginal that should be real carries a noticeable imaginary part."""


@dataclass(frozen=True, eq=False)
class EnergyDistribution:
    matrix: np.ndarray
    order: float
    kernel_tag: str = "delta"
    basis_id: str = ""

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def total(self) -> complex:
        return complex(self.matrix.sum())


@dataclass(frozen=True)
class SpectralKernel:
    """Kernel ``phi(p, k, q)`` over spectral indices (0-based).

    ``build`` maps the eigenvalue vector to the full ``[p, k, q]`` table.
    ``claims`` lists the conditions the kernel is meant to satisfy; use
    :meth:`conditions` to check them on actual eigenvalues.
    """

    name: str
    build: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    params: dict = field(default_factory=dict)
    claims: frozenset = frozenset()

    @property
    def tag(self) -> str:
        if not self.params:
            return self.name
        inner = ",".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.name}({inner})"

    def table(self, lam) -> np.ndarray:
        lam = np.asarray(lam, dtype=float)
        n = lam.size
        try:
            t = np.asarray(self.build(lam), dtype=float)
        except Exception as exc:
            raise KernelError(f"kernel {self.tag} failed: {exc}") from exc
        if t.shape != (n, n, n) or not np.all(np.isfinite(t)):
            raise KernelError(f"kernel {self.tag} produced an invalid table")
        return t

    def evaluate(self, p: int, k: int, q: int, lam) -> float:
        return float(self.table(lam)[p, k, q])

    def conditions(self, lam, tol: float = 1e-12) -> dict:
        """Which marginal conditions hold for these eigenvalues.

        ``unbiased``: ``sum_k phi(p, k, q) = 1`` for all ``p, q`` (gives the
        vertex marginal and energy conservation). ``frequency_marginal``:
        ``phi(p, k, p) = delta(p - k)``.
        """
        t = self.table(lam)
        n = t.shape[0]
        diag = t[np.arange(n), :, np.arange(n)]  # [p, k] = phi(p, k, p)
        return {
            "unbiased": bool(np.max(np.abs(t.sum(axis=1) - 1)) <= tol),
            "frequency_marginal": bool(np.max(np.abs(diag - np.eye(n))) <= tol),
        }


def delta_kernel() -> SpectralKernel:
    """``phi(p, k, q) = delta(q - k)``; turns the GFGD back into the GFED."""

    def build(lam):
        n = lam.size
        t = np.zeros((n, n, n))
        idx = np.arange(n)
        t[:, idx, idx] = 1.0
        return t

    return SpectralKernel("delta", build, claims=frozenset({"unbiased", "frequency_marginal"}))


def choi_williams_kernel(gamma: float = 1.0, rtol: float = 1e-10) -> SpectralKernel:
    """Normalised Choi-Williams kernel on the graph spectrum.

    For ``lam_p != lam_q``::

        phi(p, k, q) = exp(-gamma |lam_k - lam_q| / |lam_p - lam_q|) / s(p, q)

    with ``s(p, q)`` the sum over ``k`` of the numerator. When
    ``|lam_p - lam_q| <= rtol * max|lam|`` (always for ``p == q``, and for
    repeated eigenvalues) the kernel is ``delta(k - q)``.
    """
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")

    def build(lam):
        tol = rtol * max(1.0, float(np.max(np.abs(lam))) if lam.size else 1.0)
        return kernels.choi_williams_table(lam, gamma, tol)

    return SpectralKernel("choi-williams", build, {"gamma": float(gamma)},
                          claims=frozenset({"unbiased", "frequency_marginal"}))


def custom_kernel(func, name: str = "custom", claims=()) -> SpectralKernel:
    """Wrap ``func(p, k, q, lam)``; it is called with broadcast index arrays."""

    def build(lam):
        n = lam.size
        p, k, q = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
        return np.broadcast_to(func(p, k, q, lam), (n, n, n))

    return SpectralKernel(name, build, claims=frozenset(claims))


@dataclass(frozen=True)
class DualKernel:
    """Vertex-vertex kernel ``varphi(m, n, t)``; ``build(N)`` returns the table."""

    name: str
    build: Callable[[int], np.ndarray] = field(repr=False)

    def table(self, n: int) -> np.ndarray:
        try:
            t = np.asarray(self.build(n), dtype=float)
        except Exception as exc:
            raise KernelError(f"dual kernel {self.name} failed: {exc}") from exc
        if t.shape != (n, n, n):
            raise KernelError(f"dual kernel {self.name} produced shape {t.shape}")
        return t


def dual_delta_kernel() -> DualKernel:
    """``varphi(m, n, t) = delta(m - n)``: keeps the vertex marginal."""

    def build(n):
        t = np.zeros((n, n, n))
        idx = np.arange(n)
        t[idx, idx, :] = 1.0
        return t

    return DualKernel("dual-delta", build)


def dual_uniform_kernel() -> DualKernel:
    """``varphi = 1/N``: sums to one over ``n``, so keeps the frequency marginal."""
    return DualKernel("dual-uniform", lambda n: np.full((n, n, n), 1.0 / n))


def _prepare(x, basis: EigenBasis, a: float):
    x = np.asarray(x)
    if x.shape != (basis.n,):
        raise ValueError(f"signal has shape {x.shape}, expected ({basis.n},)")
    op = gfrft_matrix(basis, a)
    return x.astype(complex), op.matrix @ x, op.inverse


def gfed(x, basis: EigenBasis, a: float) -> EnergyDistribution:
    """Fractional vertex-frequency energy distribution of order ``a``."""
    x, xa, ua = _prepare(x, basis, a)
    e = x[:, None] * xa.conj()[None, :] * ua.conj()
    return EnergyDistribution(e, float(a), "delta", basis.basis_id)


def gfgd(x, basis: EigenBasis, a: float, kernel: SpectralKernel) -> EnergyDistribution:
    """Kernel-generalised distribution

    ``G(n, k) = sum_{p,q} xhat_a(p) conj(xhat_a(q)) u_p^a(n) conj(u_q^a(n)) phi(p, k, q)``.
    """
    x, xa, ua = _prepare(x, basis, a)
    table = kernel.table(basis.lam)
    g = kernels.bilinear_contract(ua * xa[None, :], table)
    return EnergyDistribution(g, float(a), kernel.tag, basis.basis_id)


def gfgd_dual(x, basis: EigenBasis, a: float, dual_kernel: DualKernel) -> EnergyDistribution:
    """Vertex-vertex form

    ``G(n, k) = sum_{m,t} x(m) conj(x(t)) conj(u_k^a(m)) u_k^a(t) varphi(m, n, t)``.

    The chirp factors are conjugated as in the GFED itself, so
    ``varphi = delta(m - n)`` reproduces the GFED exactly and any kernel
    summing to one over ``n`` keeps the frequency marginal.
    """
    x, _, ua = _prepare(x, basis, a)
    d = x[:, None] * ua.conj()  # d[m, k]
    table = dual_kernel.table(basis.n)
    g = kernels.bilinear_contract(d.T, table).T
    return EnergyDistribution(np.ascontiguousarray(g), float(a), dual_kernel.name, basis.basis_id)


def _matrix(d) -> np.ndarray:
    return d.matrix if isinstance(d, EnergyDistribution) else np.asarray(d)


def _real_part(v, what: str, tol: float) -> np.ndarray:
    scale = max(1.0, float(np.max(np.abs(v))) if v.size else 1.0)
    resid = float(np.max(np.abs(v.imag))) if np.iscomplexobj(v) and v.size else 0.0
    if resid > tol * scale:
        warnings.warn(f"{what} marginal has imaginary residue {resid:.2e}",
                      MarginalResidueWarning, stacklevel=3)
    return np.real(v).astype(float)


def vertex_marginal(d, tol: float = 1e-9) -> np.ndarray:
    """Row sums ``sum_k E(n, k)`` (equal to ``|x(n)|**2`` for the GFED)."""
    return _real_part(_matrix(d).sum(axis=1), "vertex", tol)


def frequency_marginal(d, tol: float = 1e-9) -> np.ndarray:
    """Column sums ``sum_n E(n, k)`` (equal to ``|xhat_a(k)|**2`` for the GFED)."""
    return _real_part(_matrix(d).sum(axis=0), "frequency", tol)


def vertex_moment(d, m: int) -> complex:
    """``sum_n sum_k n**m E(n, k)`` with 1-based ``n``."""
    mat = _matrix(d)
    w = np.arange(1, mat.shape[0] + 1, dtype=float) ** m
    return complex(w @ mat.sum(axis=1))


def frequency_moment(d, m: int) -> complex:
    """``sum_n sum_k k**m E(n, k)`` with 1-based ``k``."""
    mat = _matrix(d)
    w = np.arange(1, mat.shape[1] + 1, dtype=float) ** m
    return complex(mat.sum(axis=0) @ w)


def shannon_entropy(d, quadratic: bool = False) -> float:
    """Concentration measure of a distribution (lower is more concentrated).

    The magnitudes are scaled so that ``sum |D|**2 == 1`` and the entropy is
    ``-sum |D| log2 |D|`` (``0 log 0 = 0``). ``quadratic=True`` evaluates
    ``-sum |D|**2 log2 |D|**2`` on the same scaling instead.
    """
    mag = np.abs(_matrix(d)).ravel()
    total = np.sqrt(np.sum(mag**2))
    if total == 0:
        raise ValueError("entropy of an all-zero distribution is undefined")
    mag = mag / total
    if quadratic:
        mag = mag**2
    nz = mag[mag > 0]
    return float(-np.sum(nz * np.log2(nz)))
