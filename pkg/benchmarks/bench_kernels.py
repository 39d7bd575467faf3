"""Compiled vs pure-numpy kernels on the full dim-3 sweep workload.

    python benchmarks/bench_kernels.py [--repeat N] [--dim 3]

Both backends get the same inputs. The script checks that their outputs are
bit-identical before reporting timings.
"""
import argparse
import time

import numpy as np

from chshgen import _kernels_py
from chshgen.funcs import enumerate_f2
from chshgen.sweep import TIE_TOL, cell_distributions, g_universe

try:
    from chshgen import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None


def workload(mod, cells, gbits, fbits):
    mass = mod.scoring_mass(cells, gbits)
    out = []
    for fb in fbits:
        out.append(mod.max_ties(mod.win_surfaces(mass, fb), TIE_TOL))
    return mass, out


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t)
    return min(times), result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--dim", type=int, choices=(2, 3), default=3)
    args = ap.parse_args()

    cells = np.ascontiguousarray(cell_distributions(args.dim))
    gbits = np.array([g.bits for g in g_universe(args.dim)], dtype=np.uint8)
    fbits = [np.array(f.bits, dtype=np.uint8) for f in enumerate_f2()]
    print(f"dim {args.dim}: {cells.shape[1]} grid points x {len(gbits)} g x {len(fbits)} f")

    t_py, ref = best_of(lambda: workload(_kernels_py, cells, gbits, fbits), args.repeat)
    print(f"python   {t_py:8.3f} s")
    if _compiled is None:
        print("compiled  (extension not built)")
        return
    t_c, got = best_of(lambda: workload(_compiled, cells, gbits, fbits), args.repeat)
    same = np.array_equal(ref[0], got[0]) and all(
        all(np.array_equal(a, b) for a, b in zip(r, g)) for r, g in zip(ref[1], got[1])
    )
    print(f"compiled {t_c:8.3f} s   speedup x{t_py / t_c:.1f}   identical={same}")


if __name__ == "__main__":
    main()
