"""Graph Fourier transform and its fractional powers.

The fractional transform of order ``a`` is the principal-branch power of the
unitary GFT matrix ``F = U^H``: every eigenvalue ``exp(i*theta)`` with
``theta`` in ``(-pi, pi]`` is mapped to ``exp(i*a*theta)``. For a real
orthogonal ``F`` the eigen-structure is read off a real Schur form (``+-1``
entries and 2x2 rotation blocks), so no general non-symmetric eigensolver is
involved. Because every power of one basis shares the same Schur vectors,
``F^a F^b == F^(a+b)`` up to rounding.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg

__all__ = [
    "NumericalError",
    "EigenBasis",
    "FrftOperator",
    "UnitaryPowerPlan",
    "eig_decompose",
    "graph_basis",
    "cycle_dft_basis",
    "gft",
    "igft",
    "gfrft_matrix",
    "gfrft",
    "igfrft",
    "unitary_power",
    "dfrft_reference",
    "graph_from_signal",
    "shift_from_basis",
]

# Schur residue allowed outside the diagonal blocks of a unitary matrix.
_SCHUR_TOL = 1e-8
# Angles this close to -pi (or 2x2 blocks this close to -I) sit on the branch cut.
_BRANCH_TOL = 1e-10


class NumericalError(RuntimeError):
    """A decomposition did not meet its accuracy contract."""


def _fingerprint(a: np.ndarray) -> str:
    return hashlib.sha1(np.ascontiguousarray(a).tobytes()).hexdigest()[:12]


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class EigenBasis:
    """Orthonormal eigenvectors (columns of ``u``) and eigenvalues ``lam``.

    ``u`` is usually real; a complex unitary ``u`` is accepted for explicit
    overrides such as the DFT basis of a cycle.
    """

    u: np.ndarray
    lam: np.ndarray
    basis_id: str = field(init=False)

    def __post_init__(self):
        u = np.asarray(self.u)
        if not np.iscomplexobj(u):
            u = u.astype(float)
        lam = np.asarray(self.lam, dtype=float)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise ValueError(f"u must be square, got {u.shape}")
        if lam.shape != (u.shape[0],):
            raise ValueError("lam must have one eigenvalue per column of u")
        err = np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0]))
        if err > 1e-10:
            raise ValueError(f"u is not orthonormal (||U^H U - I||_F = {err:.2e})")
        object.__setattr__(self, "u", _frozen(u))
        object.__setattr__(self, "lam", _frozen(lam))
        object.__setattr__(self, "basis_id", _fingerprint(u))

    @property
    def n(self) -> int:
        return self.u.shape[0]

    @property
    def gft_matrix(self) -> np.ndarray:
        return self.u.conj().T

    @cached_property
    def power_plan(self) -> "UnitaryPowerPlan":
        return UnitaryPowerPlan(self.gft_matrix)


@dataclass(frozen=True, eq=False)
class FrftOperator:
    """The matrix ``F^a`` for one basis and order."""

    order: float
    matrix: np.ndarray
    basis_id: str

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def inverse(self) -> np.ndarray:
        """``(F^a)^-1 = (F^a)^H``; its columns are the graph chirps of rate ``order``."""
        return self.matrix.conj().T


def eig_decompose(z, tol: float = 1e-10) -> EigenBasis:
    """Eigendecomposition of a real symmetric shift operator.

    Eigenvalues ascend. Each eigenvector is signed so that its entry of
    largest magnitude is positive; near-ties (within 1e-12) go to the lowest
    row index.
    """
    z = np.asarray(z, dtype=float)
    if z.ndim != 2 or z.shape[0] != z.shape[1]:
        raise ValueError(f"shift operator must be square, got {z.shape}")
    asym = np.max(np.abs(z - z.T)) if z.size else 0.0
    if asym > tol:
        raise ValueError(f"shift operator is not symmetric (max |Z - Z^T| = {asym:.2e})")
    lam, u = np.linalg.eigh((z + z.T) / 2)
    mag = np.abs(u)
    lead = np.argmax(mag >= mag.max(axis=0) - 1e-12, axis=0)
    signs = np.sign(u[lead, np.arange(u.shape[1])])
    signs[signs == 0] = 1.0
    return EigenBasis(u * signs, lam)


def graph_basis(g) -> EigenBasis:
    """Eigenbasis of a graph's shift operator (Laplacian or adjacency)."""
    from .graph import shift_operator

    return eig_decompose(shift_operator(g))


def cycle_dft_basis(n: int, shift_kind: str = "laplacian") -> EigenBasis:
    """DFT eigenbasis of the ``n``-cycle: ``u_k(m) = exp(2j*pi*m*k/n)/sqrt(n)``.

    With this basis ``F = U^H`` is exactly the unitary DFT matrix. Eigenvalues
    follow the DFT index order, not ascending order.
    """
    if n < 3:
        raise ValueError(f"cycle needs n >= 3, got {n}")
    idx = np.arange(n)
    u = np.exp(2j * np.pi * np.outer(idx, idx) / n) / np.sqrt(n)
    c = 2 * np.cos(2 * np.pi * idx / n)
    lam = 2 - c if shift_kind == "laplacian" else c
    return EigenBasis(u, lam)


def _check_vector(x, n: int, what: str = "signal") -> np.ndarray:
    x = np.asarray(x)
    if x.shape != (n,):
        raise ValueError(f"{what} has shape {x.shape}, expected ({n},)")
    return x


def gft(x, basis: EigenBasis) -> np.ndarray:
    """``U^H x``."""
    x = _check_vector(x, basis.n)
    return basis.gft_matrix @ x


def igft(xh, basis: EigenBasis) -> np.ndarray:
    xh = _check_vector(xh, basis.n, "spectrum")
    return basis.u @ xh


class UnitaryPowerPlan:
    """Cached Schur factorisation of a unitary matrix for repeated powers.

    Real orthogonal input uses the real Schur form: 1x1 blocks are ``+-1``
    and 2x2 blocks are plane rotations. Complex input uses the complex Schur
    form, which is diagonal for a normal matrix.
    """

    def __init__(self, m):
        m = np.asarray(m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got {m.shape}")
        self.n = m.shape[0]
        self._source = m
        self._cache = {}
        self.real = not np.iscomplexobj(m) or not np.any(m.imag)
        if self.real:
            self._init_real(np.real(m).astype(float))
        else:
            self._init_complex(m.astype(complex))

    def _init_real(self, m):
        t, z = scipy.linalg.schur(m, output="real")
        n = self.n
        blocks = []  # (start, size, radius, angle, raw 2x2 block or None)
        mask = np.zeros((n, n), dtype=bool)
        i = 0
        while i < n:
            if i + 1 < n and t[i + 1, i] != 0.0:
                b = t[i:i + 2, i:i + 2]
                mask[i:i + 2, i:i + 2] = True
                c = 0.5 * (b[0, 0] + b[1, 1])
                disc = -b[0, 1] * b[1, 0] - 0.25 * (b[0, 0] - b[1, 1]) ** 2
                if disc <= 0:
                    raise NumericalError("2x2 Schur block has real eigenvalues")
                s = np.copysign(np.sqrt(disc), b[1, 0])
                blocks.append((i, 2, float(np.hypot(c, s)), float(np.arctan2(s, c)), b.copy()))
                i += 2
            else:
                mask[i, i] = True
                val = t[i, i]
                blocks.append((i, 1, abs(float(val)), 0.0 if val >= 0 else np.pi, None))
                i += 1
        self._check(t, mask, blocks)
        self._z = z
        self._blocks = blocks

    def _init_complex(self, m):
        t, z = scipy.linalg.schur(m, output="complex")
        d = np.diag(t)
        mask = np.eye(self.n, dtype=bool)
        theta = np.angle(d)
        theta[theta <= -np.pi + _BRANCH_TOL] = np.pi
        blocks = [(i, 1, float(abs(d[i])), float(theta[i]), None) for i in range(self.n)]
        self._check(t, mask, blocks)
        self._z = z
        self._blocks = blocks

    def _check(self, t, mask, blocks):
        resid = np.max(np.abs(t[~mask])) if (~mask).any() else 0.0
        if resid > _SCHUR_TOL:
            raise NumericalError(f"matrix is not normal: off-block Schur residue {resid:.2e}")
        radii = np.array([b[2] for b in blocks])
        if radii.size and np.max(np.abs(radii - 1)) > _SCHUR_TOL:
            raise NumericalError("matrix is not unitary: eigenvalue modulus differs from 1")

    @property
    def angles(self) -> np.ndarray:
        """Principal eigen-angles, one per eigenvalue (pairs for rotations)."""
        out = []
        for _, size, _, theta, _ in self._blocks:
            out.extend([theta, -theta] if size == 2 else [theta])
        return np.array(out)

    def power(self, a: float) -> np.ndarray:
        a = float(a)
        if not np.isfinite(a):
            raise ValueError(f"order must be finite, got {a}")
        if a == 0.0:
            return np.eye(self.n, dtype=complex)
        if a == 1.0:
            return np.array(self._source, dtype=complex)
        ta = np.zeros((self.n, self.n), dtype=complex)
        for i, size, r, theta, b in self._blocks:
            if size == 1:
                ta[i, i] = r**a * np.exp(1j * a * theta)
            elif np.pi - abs(theta) < _BRANCH_TOL:
                # numerically a double eigenvalue -1: both take exp(i*pi*a)
                ta[i:i + 2, i:i + 2] = np.exp(1j * np.pi * a) * np.eye(2)
            else:
                c = 0.5 * (b[0, 0] + b[1, 1])
                j = (b - c * np.eye(2)) / (r * np.sin(theta))  # squares to -I
                ta[i:i + 2, i:i + 2] = r**a * (np.cos(a * theta) * np.eye(2) + np.sin(a * theta) * j)
        z = self._z
        return z @ ta @ z.conj().T

    def cached_power(self, a: float) -> np.ndarray:
        """Read-only ``power(a)``, memoised for the most recent orders."""
        a = float(a)
        hit = self._cache.get(a)
        if hit is None:
            if len(self._cache) >= 64:
                self._cache.pop(next(iter(self._cache)))
            hit = self._cache[a] = _frozen(self.power(a))
        return hit


def unitary_power(m, a: float) -> np.ndarray:
    """Principal-branch power of a unitary (or real orthogonal) matrix."""
    return UnitaryPowerPlan(m).power(a)


def gfrft_matrix(basis: EigenBasis, a: float) -> FrftOperator:
    """``F^a`` for the GFT matrix of ``basis`` (order 0 is I, order 1 is ``U^H``)."""
    mat = basis.power_plan.cached_power(a)
    return FrftOperator(float(a), mat, basis.basis_id)


def gfrft(x, op: FrftOperator) -> np.ndarray:
    x = _check_vector(x, op.n)
    return op.matrix @ x


def igfrft(xa, op: FrftOperator) -> np.ndarray:
    xa = _check_vector(xa, op.n, "fractional spectrum")
    return op.inverse @ xa


def dfrft_reference(n: int, a: float) -> np.ndarray:
    """Principal-branch fractional power of the unitary ``n``-point DFT matrix.

    Built from the DFT's spectral projectors ``P_mu = (1/4) sum_j (conj(mu) W)^j``
    for ``mu`` in ``{1, -1j, -1, 1j}`` (``W^4 = I``), so it shares no code
    with the Schur route.
    """
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    idx = np.arange(n)
    w = np.exp(-2j * np.pi * np.outer(idx, idx) / n) / np.sqrt(n)
    out = np.zeros((n, n), dtype=complex)
    for mu, theta in ((1, 0.0), (-1j, -np.pi / 2), (-1, np.pi), (1j, np.pi / 2)):
        step = np.conj(mu) * w
        term = np.eye(n, dtype=complex)
        proj = term.copy()
        for _ in range(3):
            term = term @ step
            proj += term
        out += np.exp(1j * a * theta) * proj / 4
    return out


def graph_from_signal(x, a: float, k: int, seed: int = 0) -> np.ndarray:
    """Eigenvector matrix of a graph on which ``x`` is the chirp ``u_k^a``.

    ``x`` is normalised and completed to an orthonormal basis by modified
    Gram-Schmidt on seeded Gaussian vectors. That basis, with ``x`` as column
    ``k`` (1-based), is taken as ``(F^a)^-1`` and raised to the power ``1/a``.

    Experimental: for ``|a| < 1`` the principal branch of the ``1/a`` power
    can wrap, and then the chirp property only holds modulo that branch.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    norm = np.linalg.norm(x)
    if norm == 0:
        raise ValueError("signal must be nonzero")
    if a == 0:
        raise ValueError("a must be nonzero")
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}, got {k}")
    rng = np.random.default_rng(seed)
    q = [x / norm]
    while len(q) < n:
        v = rng.standard_normal(n)
        for _ in range(2):  # second pass restores orthogonality lost to rounding
            for b in q:
                v -= (b @ v) * b
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            q.append(v / nv)
    cols = q[1:]
    cols.insert(k - 1, q[0])
    inv_frft = np.column_stack(cols)
    u = unitary_power(inv_frft, 1.0 / a)
    err = np.linalg.norm(u.conj().T @ u - np.eye(n))
    if err > 1e-8:
        raise NumericalError(f"constructed basis is not unitary (error {err:.2e})")
    return u


def shift_from_basis(u, lam) -> np.ndarray:
    """``U diag(lam) U^H``."""
    u = np.asarray(u)
    return (u * np.asarray(lam)) @ u.conj().T
