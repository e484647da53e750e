"""Compare the numba and numpy row-reduction kernels over F_p.

Run ``python benchmarks/bench_rref.py``.  Each size is reduced by both
kernels; the outputs must agree exactly and the best of several repeats is
reported.  A second section times a whole homology computation over F_2
in subprocesses with and without ``PATHHOM_DISABLE_NUMBA``.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from pathhom import _modp


def best_time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_table(sizes, p, repeats, seed):
    rng = np.random.default_rng(seed)
    print(f"{'shape':>12} {'numpy [s]':>11} {'numba [s]':>11} {'speedup':>8}")
    for n in sizes:
        a = rng.integers(0, p, size=(n, n + n // 2))
        r_np, piv_np = _modp.rref_mod_p(a, p, use_numba=False)
        if _modp.HAVE_NUMBA:
            r_nb, piv_nb = _modp.rref_mod_p(a, p, use_numba=True)  # also warms up the JIT
            assert piv_np == piv_nb and np.array_equal(r_np, r_nb), "kernels disagree"
            t_nb = best_time(lambda: _modp.rref_mod_p(a, p, use_numba=True), repeats)
        else:
            t_nb = float("nan")
        t_np = best_time(lambda: _modp.rref_mod_p(a, p, use_numba=False), repeats)
        print(f"{str(a.shape):>12} {t_np:11.4f} {t_nb:11.4f} {t_np / t_nb:8.2f}")


END_TO_END = (
    "import time; from pathhom.exactalg import Ring; from pathhom.quiverhom import Digraph, box, sc;"
    "G = Digraph([0, 1, 2], [(0, 1), (1, 2), (0, 2)]); B = box(box(G, G), G);"
    "t = time.perf_counter(); om = sc(B, Ring.prime_field(2), 4);"
    "print(f'{time.perf_counter() - t:.3f}', om.complex.betti())"
)


def end_to_end():
    for label, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, PATHHOM_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True,
                             check=True).stdout.split(maxsplit=1)
        print(f"triangle box cube over F_2, {label:>5} path: {out[0]} s, betti {out[1].strip()}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200, 400])
    ap.add_argument("--prime", type=int, default=10007)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print(f"backend available: {_modp.backend()}")
    kernel_table(args.sizes, args.prime, args.repeats, args.seed)
    end_to_end()


if __name__ == "__main__":
    main()
