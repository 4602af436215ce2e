import os
import subprocess
import sys

import numpy as np
import pytest

from toromaps import _kernels
from toromaps.family import MapFamily
from toromaps.stabilizers import resolve
from toromaps.toroidal_groups import build_group

needs_numba = pytest.mark.skipif(not _kernels.numba_impl, reason="numba not installed")


def inputs(family, s, spec):
    G = build_group(family, s)
    H = resolve(spec, G)
    img = np.array([p.array() for p in G.regular_perms()], dtype=np.int64)
    return {
        "close": (G.table, np.array(H.gens, dtype=np.int64)),
        "conjugates": (G.table, G.inv, H.members.astype(np.int64), np.arange(G.order, dtype=np.int64)),
        "cosets": (G.table, H.members.astype(np.int64), np.array(G.gen_ids, dtype=np.int64)),
        "orbits": (img,),
    }


def same(a, b):
    if isinstance(a, tuple):
        return len(a) == len(b) and all(np.array_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


@needs_numba
@pytest.mark.parametrize(
    "family,s,spec",
    [(MapFamily.T44S0, 3, "u;r0;r2"), (MapFamily.T36SS, 2, "gh;r0"), (MapFamily.T44SS, 2, "1"), (MapFamily.T36S0, 3, "r1;r2")],
)
def test_numba_matches_numpy(family, s, spec):
    for name, args in inputs(family, s, spec).items():
        assert same(_kernels.numba_impl[name](*args), _kernels.numpy_impl[name](*args)), name


@needs_numba
def test_orbits_random():
    rng = np.random.default_rng(7)
    for _ in range(20):
        n = int(rng.integers(1, 30))
        imgs = np.array([rng.permutation(n) for _ in range(int(rng.integers(1, 4)))], dtype=np.int64)
        assert np.array_equal(_kernels.numba_impl["orbits"](imgs), _kernels.numpy_impl["orbits"](imgs))


def test_disable_flag():
    code = (
        "from toromaps import _kernels; from toromaps.toroidal_groups import build_group;"
        "from toromaps.subgroups import degree_oracle;"
        "print(_kernels.USE_NUMBA, degree_oracle(build_group('44s0', 3)).degrees)"
    )
    env = dict(os.environ, TOROMAPS_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False (6, 9, 12, 18, 24, 36, 72)"
