import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toromaps.family import MapFamily
from toromaps.lattice import (
    DegenerateLatticeError,
    IntMat2,
    Sublattice,
    canonical_rep,
    lattice_for,
    smith_form,
)
from toromaps.toroidal_groups import point_group


def brute_smith(m):
    # d1 = gcd of entries, d1*d2 = |det|
    a, b, c, d = m
    g = np.gcd.reduce([abs(a), abs(b), abs(c), abs(d)])
    return int(g), abs(a * d - b * c) // int(g)


def test_smith_examples():
    assert smith_form(IntMat2.identity()) == (1, 1)
    assert smith_form(IntMat2(3, 0, 0, 3)) == (3, 3)
    assert smith_form(IntMat2(2, 2, -2, 2)) == (2, 4)


def test_smith_singular():
    with pytest.raises(DegenerateLatticeError, match="degenerate lattice"):
        smith_form(IntMat2(1, 2, 2, 4))


entries = st.integers(-20, 20)
matrices = st.tuples(entries, entries, entries, entries).filter(lambda m: m[0] * m[3] != m[1] * m[2])


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_smith_invariants(m):
    d1, d2 = smith_form(IntMat2(*m))
    assert d1 >= 1 and d2 % d1 == 0
    assert d1 * d2 == abs(m[0] * m[3] - m[1] * m[2])
    assert (d1, d2) == brute_smith(m)


def test_canonical_rep_examples():
    L = Sublattice.from_rows((3, 3), (-3, 3))
    assert tuple(canonical_rep((0, 0), L)) == (0, 0)
    assert tuple(canonical_rep((3, 3), L)) == (0, 0)
    L2 = Sublattice.from_rows((2, 2), (-2, 2))
    reps = {canonical_rep(v, L2) for v in itertools.product(range(4), repeat=2)}
    assert len(reps) == 8


def in_lattice(v, basis):
    # solve v = x r0 + y r1 over the rationals
    (a, b), (c, d) = basis
    det = a * d - b * c
    x = v[0] * d - v[1] * c
    y = -v[0] * b + v[1] * a
    return x % det == 0 and y % det == 0


@settings(max_examples=100, deadline=None)
@given(matrices, st.tuples(entries, entries), st.tuples(entries, entries))
def test_canonical_rep_is_retraction(m, v, w):
    L = Sublattice(IntMat2(*m))
    cv = canonical_rep(v, L)
    assert canonical_rep(tuple(cv), L) == cv
    same = canonical_rep(v, L) == canonical_rep(w, L)
    diff = (v[0] - w[0], v[1] - w[1])
    assert same == in_lattice(diff, L.basis.rows())
    assert in_lattice((v[0] - cv.x, v[1] - cv.y), L.basis.rows())


@settings(max_examples=30, deadline=None)
@given(matrices.filter(lambda m: abs(m[0] * m[3] - m[1] * m[2]) <= 60))
def test_rep_count_equals_index(m):
    L = Sublattice(IntMat2(*m))
    assert len({tuple(r) for r in L.rep_array()}) == L.index
    assert len({L.code(tuple(r)) for r in L.rep_array()}) == L.index


@pytest.mark.parametrize(
    "family,s,index",
    [
        (MapFamily.T44SS, 2, 8),
        (MapFamily.T36SS, 1, 3),
        (MapFamily.T44S0, 5, 25),
        (MapFamily.T36S0, 4, 16),
        (MapFamily.T36SS, 3, 27),
    ],
)
def test_lattice_for_index(family, s, index):
    assert lattice_for(family, s).index == index


@pytest.mark.parametrize("family", list(MapFamily))
@pytest.mark.parametrize("s", range(1, 9))
def test_lattice_invariant_under_point_group(family, s):
    L = lattice_for(family, s)
    for M in point_group(family.kind):
        assert L.is_invariant(M)


def test_lattice_for_rejects_nonpositive():
    with pytest.raises(ValueError):
        lattice_for(MapFamily.T44S0, 0)


def test_intmat_algebra():
    M = IntMat2(0, 1, -1, 0)
    assert M.order() == 4
    assert (M @ M.inverse()) == IntMat2.identity()
    assert M.apply((1, 0)) == (0, 1)
