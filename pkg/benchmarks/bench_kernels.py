"""Compare the numba and numpy versions of the group kernels.

    python benchmarks/bench_kernels.py [--family 36ss] [--s 3] [--repeat 5]

Each kernel runs on inputs taken from a real map group; both versions must
return identical arrays before any timing is reported.
"""

import argparse
import time

import numpy as np

from toromaps import _kernels
from toromaps.stabilizers import resolve
from toromaps.toroidal_groups import build_group


def best_of(fn, args, repeat):
    fn(*args)  # warm-up (and JIT compilation)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def same(a, b):
    if isinstance(a, tuple):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--family", default="36ss")
    ap.add_argument("--s", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    G = build_group(args.family, args.s)
    table, inv = G.table, G.inv
    H = resolve("u;r0", G)
    gens = np.array(G.gen_ids, dtype=np.int64)
    members = H.members.astype(np.int64)
    images = G.regular_perms()
    img = np.array([p.array() for p in images], dtype=np.int64)

    cases = {
        "close": (table, np.array(H.gens, dtype=np.int64)),
        "conjugates": (table, inv, members, np.arange(G.order, dtype=np.int64)),
        "cosets": (table, members, gens),
        "orbits": (img,),
    }
    print(f"{args.family} s={args.s}: |G| = {G.order}, |H| = {H.order}")
    print(f"{'kernel':<12}{'numba [ms]':>12}{'numpy [ms]':>12}{'ratio':>8}")
    for name, inputs in cases.items():
        nb = _kernels.numba_impl.get(name)
        npf = _kernels.numpy_impl[name]
        if nb is None:
            print(f"{name:<12}{'n/a':>12}{best_of(npf, inputs, args.repeat) * 1e3:12.3f}")
            continue
        if not same(nb(*inputs), npf(*inputs)):
            raise SystemExit(f"{name}: numba and numpy results differ")
        t_nb = best_of(nb, inputs, args.repeat)
        t_np = best_of(npf, inputs, args.repeat)
        print(f"{name:<12}{t_nb * 1e3:12.3f}{t_np * 1e3:12.3f}{t_np / t_nb:8.1f}")


if __name__ == "__main__":
    main()
