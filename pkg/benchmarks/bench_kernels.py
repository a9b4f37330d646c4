"""Time the pure-Python and compiled kernel backends on the same inputs.

Usage: python3 benchmarks/bench_kernels.py [--sizes 8 16 32 64] [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from gfvfa import kernels
from gfvfa.graph import sensor_graph
from gfvfa.spectral import gfrft_matrix, graph_basis


def cases(n: int, rng):
    basis = graph_basis(sensor_graph(n, k=min(6, n - 1), seed=0))
    op = gfrft_matrix(basis, 0.6)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    c = (x * op.matrix @ x.conj())[None, :] * op.inverse
    table = kernels.choi_williams_table(basis.lam, 1.0, 1e-10)
    noise = 0.3 * (rng.standard_normal((200, n)) + 1j * rng.standard_normal((200, n)))
    fa = np.ascontiguousarray(op.matrix)
    ua_conj = np.ascontiguousarray(op.inverse.conj())
    uh = np.ascontiguousarray(basis.gft_matrix, dtype=complex)
    return {
        "choi_williams_table": lambda: kernels.choi_williams_table(basis.lam, 1.0, 1e-10),
        "bilinear_contract": lambda: kernels.bilinear_contract(c, table),
        "gfed_hat_moments(200)": lambda: kernels.gfed_hat_moments(x, noise, fa, ua_conj, uh),
    }


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[8, 16, 32, 64])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)}")
    print(f"{'kernel':24s} {'N':>4s} " + " ".join(f"{b:>12s}" for b in backends) + "   speedup")
    rng = np.random.default_rng(0)
    for n in args.sizes:
        for name, fn in cases(n, rng).items():
            best = {}
            for b in backends:
                with kernels.use_backend(b):
                    loops = max(1, int(0.2 / max(timeit.timeit(fn, number=1), 1e-6)))
                    best[b] = min(timeit.repeat(fn, number=loops, repeat=args.repeat)) / loops
            row = " ".join(f"{1e3 * best[b]:10.3f}ms" for b in backends)
            ratio = best["python"] / best["compiled"] if "compiled" in best else float("nan")
            print(f"{name:24s} {n:4d} {row}   {ratio:6.2f}x")


if __name__ == "__main__":
    main()
