import json
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toromaps.cpr import (
    FAMILIES,
    CprGraph,
    FamilyId,
    InvalidGraphError,
    NonFaithfulError,
    ParameterError,
    canonical_graph,
    cross_check,
    expected_degree,
    explicit_graph,
    export,
    family_graph,
    from_coset_action,
    graph_from_perms,
    graph_to_perms,
    is_connected,
    parse_json,
    to_dot,
    to_json,
    validate,
)
from toromaps.family import MapFamily
from toromaps.permgroup import Perm, actions_equivalent, coset_action, group_order, is_transitive
from toromaps.stabilizers import resolve
from toromaps.toroidal_groups import build_group


def params(fid, max_s=5):
    info = FAMILIES[fid]
    if fid is FamilyId.F44_8AB_OCTO:
        return [(None, a, b) for a in range(1, 4) for b in range(1, 4) if max(a, b) > 1]
    return [(s, None, None) for s in range(info.min_s, max_s + 1) if not (info.even_only and s % 2)]


ALL_CASES = [(fid, *p) for fid in FamilyId for p in params(fid)]


def test_f44_2s_s3_json():
    g = family_graph(FamilyId.F44_2S, 3)
    assert to_json(g) == '{"degree":6,"rank":3,"edges":[[0,1,1],[1,2,0],[2,3,1],[3,4,2],[4,5,1]]}'
    r0, r1, r2 = graph_to_perms(g)
    assert r1 == Perm.from_cycles(6, (0, 1), (2, 3), (4, 5))
    assert r0 == Perm.from_cycles(6, (1, 2))
    assert r2 == Perm.from_cycles(6, (3, 4))
    assert group_order(graph_to_perms(g)) == 72


def test_f44_2s_s4_path():
    g = family_graph(FamilyId.F44_2S, 4)
    assert [lab for _, _, lab in g.edges] == [1, 2, 1, 0, 1, 2, 1]
    assert validate(g) == []


def test_validate_examples():
    assert validate(CprGraph.from_edges(1, [])) == []
    bad = CprGraph.from_edges(3, [(0, 1, 1), (1, 2, 1)])
    problems = validate(bad)
    assert any(p.startswith("label 1 not a matching") for p in problems)
    with pytest.raises(InvalidGraphError):
        graph_to_perms(bad)


def test_validate_02_components():
    square = CprGraph.from_edges(4, [(0, 1, 0), (1, 2, 2), (2, 3, 0), (3, 0, 2)])
    assert validate(square) == []
    double = CprGraph.from_edges(2, [(0, 1, 0), (0, 1, 2)])
    assert validate(double) == []
    path = CprGraph.from_edges(3, [(0, 1, 0), (1, 2, 2)])
    assert any("component" in p for p in validate(path))
    assert validate(CprGraph.from_edges(2, [(0, 0, 1)]))
    assert validate(CprGraph.from_edges(2, [(0, 5, 1)]))
    assert validate(CprGraph.from_edges(2, [(0, 1, 3)]))
    assert validate(CprGraph.from_edges(2, [(0, 1, 1), (1, 0, 1)]))


def test_single_edge_perms():
    r0, r1, r2 = graph_to_perms(CprGraph.from_edges(2, [(0, 1, 1)]))
    assert r1 == Perm([1, 0]) and r0.is_identity() and r2.is_identity()


@pytest.mark.parametrize("fid,s,a,b", ALL_CASES, ids=lambda x: getattr(x, "value", str(x)))
def test_family_graphs(fid, s, a, b):
    g = family_graph(fid, s, a, b)
    s_eff = s if s is not None else a * b // gcd(a, b)
    assert g.degree == expected_degree(fid, s_eff, a, b)
    assert validate(g) == []
    assert is_connected(g)
    perms = graph_to_perms(g)
    assert is_transitive(perms)
    assert group_order(perms) == FAMILIES[fid].map_family.flag_count(s_eff)


def test_degree_identities():
    for s in range(3, 7):
        assert len(explicit_graph(FamilyId.F44_2S, s).edges) == 2 * s - 1
        assert explicit_graph(FamilyId.F44_2S, s).degree == 2 * s
        assert expected_degree(FamilyId.F36SS_9S, s) == 9 * s
        assert expected_degree(FamilyId.F36SS_18S, s) == 18 * s
    assert explicit_graph(FamilyId.F44_8AB_OCTO, a=3, b=2).degree == 48


def test_octagon_example():
    g = family_graph(FamilyId.F44_8AB_OCTO, a=3, b=2)
    assert g.degree == 48
    assert group_order(graph_to_perms(g)) == 288


def test_f44ss_4s_s2():
    g = family_graph(FamilyId.F44SS_4S, 2)
    assert g.degree == 8
    assert group_order(graph_to_perms(g)) == 64


@pytest.mark.parametrize(
    "fid,s,a,b",
    [(f, s, None, None) for f in (FamilyId.F44_2S, FamilyId.F44_4S_A, FamilyId.F44SS_4S, FamilyId.F36_3S) for s in range(3, 7)]
    + [(FamilyId.F44_8AB_OCTO, None, a, b) for a, b in [(1, 2), (2, 3), (3, 2), (2, 4)]],
)
def test_explicit_matches_canonical(fid, s, a, b):
    assert cross_check(fid, s, a, b)


@pytest.mark.parametrize("s", [2, 3, 4])
def test_degree_8s_family_has_other_stabilizer(s):
    # the drawn degree-8s graph fixes a point under <h, r1>, not the stated <g, r1>
    ex = graph_to_perms(explicit_graph(FamilyId.F44SS_8S, s))
    G = build_group(MapFamily.T44SS, s)
    stated = coset_action(G, resolve("g;r1", G))
    other = coset_action(G, resolve("h;r1", G))
    assert not actions_equivalent(ex, stated)
    assert actions_equivalent(ex, other)
    assert not cross_check(FamilyId.F44SS_8S, s)


def test_parameter_errors():
    with pytest.raises(ParameterError):
        family_graph(FamilyId.F44_2S, 2)
    with pytest.raises(ParameterError):
        family_graph(FamilyId.F44_4S_B, 3)
    with pytest.raises(ParameterError):
        family_graph(FamilyId.F44_8AB_OCTO, a=0, b=2)
    with pytest.raises(ParameterError):
        family_graph(FamilyId.F44_8AB_OCTO, 5, a=2, b=3)
    with pytest.raises(ParameterError):
        explicit_graph(FamilyId.F36SS_9S, 3)


def test_coset_examples():
    G = build_group(MapFamily.T44S0, 1)
    g = from_coset_action(G, G.trivial())
    assert g.degree == 8 and validate(g) == []
    G = build_group(MapFamily.T44S0, 3)
    g = from_coset_action(G, resolve("u;r0;r2", G))
    assert g.degree == 6 and validate(g) == []
    G = build_group(MapFamily.T36SS, 3)
    g = from_coset_action(G, resolve("gh;r0;r2", G))
    assert g.degree == 27 and validate(g) == []


@pytest.mark.parametrize("s", range(3, 7))
def test_vertex_edge_face_degrees(s):
    G = build_group(MapFamily.T44S0, s)
    degrees = [from_coset_action(G, resolve(spec, G)).degree for spec in ("r1;r2", "r0;r2", "r0;r1")]
    assert degrees == [s * s, 2 * s * s, s * s]


def test_non_faithful():
    G = build_group(MapFamily.T44S0, 2)
    with pytest.raises(NonFaithfulError, match="non-faithful"):
        from_coset_action(G, resolve("r1;r2", G))


@pytest.mark.parametrize("spec", ["1", "r0", "r1;r2", "u;r0;r2", "u;r0", "r0r2"])
def test_graph_round_trip_through_perms(spec):
    G = build_group(MapFamily.T44S0, 4)
    H = resolve(spec, G)
    act = coset_action(G, H)
    assert act.is_faithful()
    assert graph_to_perms(from_coset_action(G, H)) == act.generators


def test_json_and_dot():
    g = CprGraph.from_edges(1, [])
    assert export(g, "json") == '{"degree":1,"rank":3,"edges":[]}'
    g = family_graph(FamilyId.F44_2S, 3)
    dot = to_dot(g)
    assert dot.startswith("graph cpr {") and dot.count('[label="1"]') == 3
    assert export(g, "dot") == dot
    with pytest.raises(ValueError):
        export(g, "png")


@pytest.mark.parametrize(
    "text",
    ["", "[]", "{}", '{"degree": 2}', '{"degree": "2", "edges": []}', '{"degree": 2, "edges": [[0, 1]]}',
     '{"degree": 2, "edges": [[0, 1, true]]}'],
)
def test_parse_json_rejects(text):
    with pytest.raises(ValueError):
        parse_json(text)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 8).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.integers(0, 2)), max_size=12))))
def test_json_round_trip_arbitrary(case):
    n, edges = case
    g = CprGraph.from_edges(n, edges)
    text = to_json(g)
    assert parse_json(text) == g
    assert to_json(parse_json(text)) == text
    assert json.loads(text)["edges"] == sorted(json.loads(text)["edges"])


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 7).flatmap(lambda n: st.tuples(*[st.permutations(range(n))] * 3)))
def test_graph_from_perms_of_involutions(images):
    # square each permutation's cycle structure down to an involution
    perms = []
    for img in images:
        p = Perm(img)
        inv = list(range(p.degree))
        for c in p.cycles():
            if len(c) >= 2:
                inv[c[0]], inv[c[1]] = c[1], c[0]
        perms.append(Perm(inv))
    g = graph_from_perms(perms)
    assert tuple(graph_to_perms(g)) == tuple(perms)
