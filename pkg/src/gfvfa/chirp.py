"""Graph chirp signals.

The chirp of rate ``a`` and initial frequency ``k`` is the inverse
fractional transform of the unit spike ``e_k``: ``u_k^a = (F^a)^-1 e_k``,
i.e. column ``k`` of ``(F^a)^H``. Indices ``k`` are 1-based throughout this
module, matching vertex and frequency labels in files and on the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .spectral import EigenBasis, gfrft_matrix

__all__ = [
    "ChirpSignal",
    "chirp",
    "chirp_matrix",
    "chirp_rate_shift",
    "compose_multichirp",
    "EXAMPLE_LAYOUTS",
]


@dataclass(frozen=True, eq=False)
class ChirpSignal:
    values: np.ndarray
    rate: float
    initial_frequency: int
    basis: EigenBasis = field(repr=False)
    # set when a rate shift lands exactly on the spike e_k
    degenerate: bool = False

    @property
    def basis_id(self) -> str:
        return self.basis.basis_id


def _check_index(k: int, n: int) -> int:
    if int(k) != k or not 1 <= k <= n:
        raise ValueError(f"initial frequency k must be in 1..{n}, got {k}")
    return int(k)


def chirp_matrix(basis: EigenBasis, a: float) -> np.ndarray:
    """``U_a = (u_1^a, ..., u_N^a) = (F^a)^H``."""
    return gfrft_matrix(basis, a).inverse


def chirp(basis: EigenBasis, k: int, a: float) -> ChirpSignal:
    if a == 0:
        raise ValueError("a must be nonzero")
    k = _check_index(k, basis.n)
    values = np.array(chirp_matrix(basis, a)[:, k - 1])
    return ChirpSignal(values, float(a), k, basis)


def chirp_rate_shift(c: ChirpSignal, b: float) -> ChirpSignal:
    """Fractional transform of order ``b`` applied to a chirp.

    The result is the chirp of rate ``c.rate - b`` with the same initial
    frequency; for ``b == c.rate`` it is the spike ``e_k`` and is flagged
    ``degenerate``.
    """
    values = gfrft_matrix(c.basis, b).matrix @ c.values
    rate = c.rate - float(b)
    return ChirpSignal(values, rate, c.initial_frequency, c.basis,
                       degenerate=rate == 0)


def compose_multichirp(basis: EigenBasis, a: float, segments=(), extras=()) -> np.ndarray:
    """Piecewise chirp mixture.

    ``segments`` holds ``((first, last), k)`` pairs: on vertices
    ``first..last`` (1-based, inclusive) the signal follows ``u_k^a`` and is
    zero elsewhere. Each ``k`` in ``extras`` adds the full, unmasked
    ``u_k^a``. Restricted pieces are not renormalised.
    """
    n = basis.n
    ua = chirp_matrix(basis, a)
    x = np.zeros(n, dtype=complex)
    covered = np.zeros(n, dtype=bool)
    for (first, last), k in segments:
        k = _check_index(k, n)
        if not 1 <= first <= last <= n:
            raise ValueError(f"bad vertex range {first}..{last} for n={n}")
        sl = slice(first - 1, last)
        if covered[sl].any():
            raise ValueError(f"vertex range {first}..{last} overlaps another segment")
        covered[sl] = True
        x[sl] += ua[sl, k - 1]
    for k in extras:
        x += ua[:, _check_index(k, n) - 1]
    return x


# Multichirp layouts of the sensor-network (rate 0.7) and community-network
# (rate 0.6) demonstrations, on 64 vertices.
EXAMPLE_LAYOUTS = {
    "sensor": {
        "graph": "sensor",
        "rate": 0.7,
        "segments": (((1, 24), 22), ((25, 34), 7), ((35, 64), 42)),
        "extras": (33,),
        "sigma": 0.3,
    },
    "community": {
        "graph": "community",
        "rate": 0.6,
        "segments": (((1, 27), 8), ((28, 64), 37)),
        "extras": (29,),
        "sigma": 0.4,
    },
}
