import pytest
from helpers import TRANSLATION_WORDS, is_faithful

from toromaps.degrees import (
    SMALL_CASES,
    clause_checks,
    clause_specs,
    degrees_formula,
    divisors,
    lcm_pairs,
    rotation_checks,
    scaled,
    verify_degrees,
    witness_checks,
)
from toromaps.family import MapFamily
from toromaps.permgroup import coset_action
from toromaps.subgroups import degree_oracle
from toromaps.toroidal_groups import build_group
from toromaps.verify import KNOWN_DISCREPANCIES


def test_lcm_pairs_examples():
    assert lcm_pairs(3) == [(1, 3), (3, 3)]
    assert lcm_pairs(4) == [(1, 4), (2, 4), (4, 4)]
    assert sorted(lcm_pairs(6)) == [(1, 6), (2, 3), (2, 6), (3, 6), (6, 6)]
    with pytest.raises(ValueError):
        lcm_pairs(0)


@pytest.mark.parametrize("s", range(1, 31))
def test_lcm_pairs_complete(s):
    from math import lcm

    brute = {(a, b) for a in range(1, s + 1) for b in range(a, s + 1) if lcm(a, b) == s}
    got = lcm_pairs(s)
    assert len(got) == len(set(got)) and set(got) == brute


def test_formula_examples():
    assert degrees_formula(MapFamily.T44S0, 2).degrees == (8, 16, 32)
    assert degrees_formula(MapFamily.T44S0, 4).degrees == (8, 16, 32, 64, 128)
    assert degrees_formula(MapFamily.T36S0, 1).degrees == (6, 12)
    assert degrees_formula(MapFamily.T44SS, 2).degrees == (8, 16, 32, 64)
    assert degrees_formula(MapFamily.T36SS, 2).degrees == (12, 18, 24, 36, 48, 72, 144)
    assert degrees_formula(MapFamily.T44S0, 3).degrees == (6, 9, 12, 18, 24, 36, 72)
    # the {3,6}_(2,0) set drops the vertex degree 4
    assert 4 not in degrees_formula(MapFamily.T36S0, 2).degrees


@pytest.mark.parametrize("key,expected", sorted(SMALL_CASES.items(), key=lambda kv: (kv[0][0].value, kv[0][1])))
def test_small_cases_table(key, expected):
    assert degrees_formula(*key).degrees == expected


@pytest.mark.parametrize("family", list(MapFamily))
@pytest.mark.parametrize("s", range(1, 9))
def test_formula_divides_order(family, s):
    f = degrees_formula(family, s)
    order = family.flag_count(s)
    assert f.degrees[-1] == order
    assert all(order % n == 0 for n in f.degrees)
    assert list(f.degrees) == sorted(set(f.degrees))
    assert set(f.provenance) == set(f.degrees)


@pytest.mark.parametrize("s", range(3, 9))
def test_scaling(s):
    for kind in ("44", "36"):
        axial, diag = MapFamily.parse(kind + "s0"), MapFamily.parse(kind + "ss")
        assert degrees_formula(diag, s).degrees == scaled(degrees_formula(axial, s).degrees, diag.scale)


@pytest.mark.parametrize("s", range(3, 7))
def test_square_witness_clauses(s):
    G = build_group(MapFamily.T44S0, s)
    specs = clause_specs(MapFamily.T44S0, s)
    pairs = lcm_pairs(s)
    assert len(specs) == 2 * len(pairs) + sum(a * b != s for a, b in pairs) + 1
    for w in clause_checks(G):
        assert w.core_free, w.describe()
        assert w.index == w.expected_index, w.describe()


@pytest.mark.parametrize("s", range(3, 7))
def test_triangle_witness_clauses(s):
    G = build_group(MapFamily.T36S0, s)
    specs = clause_specs(MapFamily.T36S0, s)
    pairs = lcm_pairs(s)
    assert len(specs) == len(pairs) + sum(a * b != s for a, b in pairs) + 2 * len(divisors(s))
    for w in clause_checks(G):
        assert w.core_free, w.describe()
        assert w.index == w.expected_index, w.describe()


def test_witness_index_cross_check():
    G = build_group(MapFamily.T44S0, 4)
    for w in clause_checks(G):
        act = coset_action(G, w.subgroup)
        assert act.degree == w.index
        assert act.is_faithful()


@pytest.mark.parametrize(
    "family,s",
    [(MapFamily.T44S0, 3), (MapFamily.T44SS, 2), (MapFamily.T36SS, 2), (MapFamily.T36S0, 3)],
)
def test_verify_degrees_match(family, s):
    rep = verify_degrees(family, s, use_oracle=True)
    assert rep.match is True and rep.ok
    assert rep.oracle == rep.formula.degrees
    assert set(rep.witnesses) >= set(rep.formula.degrees)


def test_verify_without_oracle_above_guard():
    rep = verify_degrees(MapFamily.T44S0, 9)
    assert rep.oracle is None and rep.match is None
    assert not rep.failures


def test_oracle_reuse():
    G = build_group(MapFamily.T44S0, 3)
    res = degree_oracle(G)
    rep = verify_degrees(MapFamily.T44S0, 3, oracle_result=res)
    assert rep.oracle == res.degrees


# --- frozen discrepancies, each confirmed by coset enumeration on the presentation


def test_triangle_s1_diagonal_oracle():
    rep = verify_degrees(MapFamily.T36SS, 1, use_oracle=True)
    frozen = KNOWN_DISCREPANCIES["oracle 36ss s=1"][0]
    assert rep.oracle == frozen
    assert rep.diff() == ((), (9, 12))
    # the edge stabilizer <r0, r2> and the rotation <r0 r1> give faithful actions
    assert is_faithful(MapFamily.T36SS, 1, [(0,), (2,)]) == (True, 9)
    assert is_faithful(MapFamily.T36SS, 1, [(0, 1)]) == (True, 12)


def test_triangle_s2_witness_failures():
    rep = verify_degrees(MapFamily.T36S0, 2, use_oracle=True)
    assert rep.match
    assert len(rep.failures) == KNOWN_DISCREPANCIES["witnesses 36s0 s=2"][0]
    u = TRANSLATION_WORDS["36"]["u"]
    assert is_faithful(MapFamily.T36S0, 2, [u, (0,), (2,)])[0] is False
    assert is_faithful(MapFamily.T36S0, 2, [u, (0, 2)])[0] is False


@pytest.mark.slow
def test_triangle_s7_extra_degrees():
    rep = verify_degrees(MapFamily.T36S0, 7, use_oracle=True)
    assert rep.oracle == KNOWN_DISCREPANCIES["oracle 36s0 s=7"][0]
    assert rep.diff() == ((), (14, 28))
    w = TRANSLATION_WORDS["36"]
    uv2 = w["u"] + w["v"] + w["v"]
    assert is_faithful(MapFamily.T36S0, 7, [uv2, (1, 2)]) == (True, 14)
    assert is_faithful(MapFamily.T36S0, 7, [uv2, (1, 2, 1, 2)]) == (True, 28)


def test_rotation_witnesses_found_without_oracle():
    G = build_group(MapFamily.T36S0, 7)
    found = {w.index for w in rotation_checks(G) if w.core_free}
    assert {14, 28} <= found
    rep = verify_degrees(MapFamily.T36SS, 7)
    assert len(rep.failures) == KNOWN_DISCREPANCIES["witnesses 36ss s=7"][0]


@pytest.mark.parametrize("family,s", [(MapFamily.T44SS, 3), (MapFamily.T36SS, 2)])
def test_all_witnesses_core_free_and_in_formula(family, s):
    G = build_group(family, s)
    f = degrees_formula(family, s)
    for w in witness_checks(G):
        if w.core_free:
            assert w.index in f.degrees
