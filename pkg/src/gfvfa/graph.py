"""Undirected weighted graphs, shift operators and graph generators.

Vertices are 0-based in memory and 1-based in every text format.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np

__all__ = [
    "Graph",
    "GraphError",
    "laplacian",
    "shift_operator",
    "cycle_graph",
    "knn_graph",
    "sensor_graph",
    "community_graph",
    "from_edge_list",
    "to_edge_list",
    "read_edge_list",
    "write_edge_list",
    "read_points_csv",
]

ShiftKind = Literal["laplacian", "adjacency"]


class GraphError(ValueError):
    """Raised for invalid graph data or malformed graph files."""


@dataclass(frozen=True)
class Graph:
    """Undirected graph with a dense, symmetric, zero-diagonal weight matrix.

    The weight matrix is copied and made read-only on construction.
    """

    weights: np.ndarray
    shift_kind: ShiftKind = "laplacian"
    n: int = field(init=False)

    def __post_init__(self):
        w = np.array(self.weights, dtype=float, copy=True)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise GraphError(f"weights must be square, got shape {w.shape}")
        if w.shape[0] < 1:
            raise GraphError("graph needs at least one vertex")
        if not np.all(np.isfinite(w)):
            raise GraphError("weights must be finite")
        if not np.array_equal(w, w.T):
            raise GraphError("weights must be symmetric")
        if np.any(np.diag(w) != 0):
            raise GraphError("diagonal weights must be zero (no self-loops)")
        if np.any(w < 0):
            raise GraphError("weights must be non-negative")
        if self.shift_kind not in ("laplacian", "adjacency"):
            raise GraphError(f"unknown shift kind {self.shift_kind!r}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "n", w.shape[0])

    @property
    def degrees(self) -> np.ndarray:
        return self.weights.sum(axis=1)

    def edges(self):
        """Yield ``(u, v, w)`` for each edge with ``u < v`` (0-based)."""
        rows, cols = np.nonzero(np.triu(self.weights, k=1))
        for u, v in zip(rows.tolist(), cols.tolist()):
            yield u, v, float(self.weights[u, v])

    def with_shift(self, shift_kind: ShiftKind) -> "Graph":
        return Graph(self.weights, shift_kind=shift_kind)

    def permuted(self, perm) -> "Graph":
        """Relabel vertices so that new vertex ``i`` is old vertex ``perm[i]``."""
        perm = np.asarray(perm)
        return Graph(self.weights[np.ix_(perm, perm)], shift_kind=self.shift_kind)


def laplacian(g: Graph) -> np.ndarray:
    """Combinatorial Laplacian ``D - W``."""
    w = g.weights
    lap = -w.copy()
    lap[np.diag_indices_from(lap)] = w.sum(axis=1)
    return lap


def shift_operator(g: Graph) -> np.ndarray:
    if g.shift_kind == "laplacian":
        return laplacian(g)
    return np.array(g.weights)


def cycle_graph(n: int, shift_kind: ShiftKind = "laplacian") -> Graph:
    """Unit-weight undirected cycle on ``n >= 3`` vertices."""
    if int(n) != n or n < 3:
        raise GraphError(f"cycle graph needs n >= 3, got {n}")
    n = int(n)
    w = np.zeros((n, n))
    idx = np.arange(n)
    w[idx, (idx + 1) % n] = 1.0
    w[(idx + 1) % n, idx] = 1.0
    return Graph(w, shift_kind=shift_kind)


def knn_graph(points, k: int, scale: float | str = "auto",
              shift_kind: ShiftKind = "laplacian") -> Graph:
    """Gaussian-weighted k-nearest-neighbour graph, symmetrized by union.

    Each point is joined to its ``k`` nearest Euclidean neighbours (distance
    ties go to the lower index). An edge exists if either endpoint selected
    the other, with weight ``exp(-d**2 / scale**2)``. ``scale="auto"`` uses
    the mean length of the distinct edges.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2:
        raise GraphError("points must be an M x d array")
    if not np.all(np.isfinite(pts)):
        raise GraphError("point coordinates must be finite")
    m = pts.shape[0]
    if int(k) != k or k <= 0 or k >= m:
        raise GraphError(f"k must satisfy 0 < k < {m}, got {k}")
    k = int(k)

    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt(np.einsum("ijd,ijd->ij", diff, diff))
    adj = np.zeros((m, m), dtype=bool)
    for i in range(m):
        d = dist[i].copy()
        d[i] = np.inf
        # stable sort: equal distances keep index order
        nearest = np.argsort(d, kind="stable")[:k]
        adj[i, nearest] = True
    adj |= adj.T

    iu = np.nonzero(np.triu(adj, k=1))
    if scale == "auto":
        scale = float(np.mean(dist[iu]))
        if scale <= 0:
            raise GraphError("all selected neighbours coincide; cannot infer scale")
    else:
        scale = float(scale)
        if not scale > 0:
            raise GraphError(f"scale must be positive, got {scale}")
    w = np.zeros((m, m))
    w[adj] = np.exp(-dist[adj] ** 2 / scale**2)
    return Graph(w, shift_kind=shift_kind)


def sensor_graph(n: int = 64, k: int = 6, seed: int = 0,
                 shift_kind: ShiftKind = "laplacian") -> Graph:
    """Random geometric sensor network: uniform points in the unit square."""
    rng = np.random.default_rng(seed)
    return knn_graph(rng.random((n, 2)), k, shift_kind=shift_kind)


def community_graph(n: int = 64, communities: int | None = None, k: int = 5,
                    seed: int = 0, spread: float = 0.3,
                    shift_kind: ShiftKind = "laplacian") -> Graph:
    """Clustered network: Gaussian blobs around centres on the unit circle.

    ``communities`` defaults to ``round(sqrt(n) / 2)``. Vertices are assigned
    to communities in contiguous index blocks, so community membership lines
    up with vertex ranges.
    """
    if communities is None:
        communities = max(1, round(math.sqrt(n) / 2))
    rng = np.random.default_rng(seed)
    sizes = np.full(communities, n // communities)
    sizes[: n % communities] += 1
    angles = 2 * np.pi * np.arange(communities) / communities
    centres = np.column_stack([np.cos(angles), np.sin(angles)])
    pts = np.concatenate([
        c + spread * rng.standard_normal((s, 2)) for c, s in zip(centres, sizes)
    ])
    return knn_graph(pts, k, shift_kind=shift_kind)


def from_edge_list(text: str, n: int | None = None,
                   shift_kind: ShiftKind = "laplacian") -> Graph:
    """Parse ``u v w`` lines (1-based vertices, ``#`` comments).

    The vertex count comes from ``n``, else from a ``# vertices N`` header,
    else from the largest index seen.
    """
    header_n = None
    edges = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "vertices":
                try:
                    header_n = int(parts[1])
                except ValueError:
                    raise GraphError(f"line {lineno}: bad vertex count {parts[1]!r}") from None
            continue
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise GraphError(f"line {lineno}: expected 'u v w', got {raw!r}")
        try:
            u, v, w = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise GraphError(f"line {lineno}: cannot parse {raw!r}") from None
        if u == v:
            raise GraphError(f"line {lineno}: self-loop at vertex {u}")
        if u < 1 or v < 1:
            raise GraphError(f"line {lineno}: vertex indices are 1-based")
        if not (w > 0 and math.isfinite(w)):
            raise GraphError(f"line {lineno}: weight must be positive and finite")
        key = (min(u, v), max(u, v))
        if key in edges:
            kind = "duplicate" if edges[key] == w else "asymmetric duplicate"
            raise GraphError(f"line {lineno}: {kind} edge {key[0]}-{key[1]}")
        edges[key] = w

    if n is None:
        n = header_n
    if n is None:
        n = max((v for _, v in edges), default=0)
    if n < 1:
        raise GraphError("edge list defines no vertices")
    w = np.zeros((n, n))
    for (u, v), weight in edges.items():
        if v > n:
            raise GraphError(f"vertex {v} out of range for n={n}")
        w[u - 1, v - 1] = w[v - 1, u - 1] = weight
    return Graph(w, shift_kind=shift_kind)


def to_edge_list(g: Graph) -> str:
    """Inverse of :func:`from_edge_list`; weights use ``repr`` so they round-trip."""
    lines = [f"# vertices {g.n}"]
    lines += [f"{u + 1} {v + 1} {w!r}" for u, v, w in g.edges()]
    return "\n".join(lines) + "\n"


def read_edge_list(path, n=None, shift_kind: ShiftKind = "laplacian") -> Graph:
    return from_edge_list(Path(path).read_text(), n=n, shift_kind=shift_kind)


def write_edge_list(g: Graph, path) -> None:
    Path(path).write_text(to_edge_list(g))


def read_points_csv(path) -> np.ndarray:
    """Coordinates file: one point per row, comma separated, optional header."""
    rows = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([float(c) for c in line.split(",")])
        except ValueError:
            if not rows:
                continue  # header
            raise GraphError(f"{path}:{lineno}: non-numeric coordinate") from None
    if not rows or len({len(r) for r in rows}) != 1:
        raise GraphError(f"{path}: empty or ragged coordinate file")
    return np.array(rows)
