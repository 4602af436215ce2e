"""CPR graphs: edge-labelled graphs encoding faithful transitive representations.

A CPR graph of degree ``n`` has an edge ``{a, b}`` with label ``i`` whenever
the generator ``rho_i`` swaps ``a`` and ``b``; fixed points carry no edge.
Graphs come either from a coset action on a core-free subgroup (the
canonical construction) or from explicit encodings of the known families.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .family import MapFamily
from .permgroup import Perm, SubgroupHandle, actions_equivalent, coset_action, is_core_free
from .stabilizers import StabilizerSpec
from .toroidal_groups import ToroidalGroup, build_group


class NonFaithfulError(ValueError):
    pass


class InvalidGraphError(ValueError):
    pass


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class CprGraph:
    degree: int
    edges: tuple[tuple[int, int, int], ...]
    rank: int = 3
    family: str | None = field(default=None, compare=False)

    @classmethod
    def from_edges(cls, degree: int, edges, family: str | None = None) -> "CprGraph":
        """Normalise each edge to ``a <= b`` and sort; duplicates are kept for validation."""
        norm = sorted((min(a, b), max(a, b), int(i)) for a, b, i in edges)
        return cls(int(degree), tuple((int(a), int(b), i) for a, b, i in norm), 3, family)

    def label_edges(self, i: int) -> list[tuple[int, int]]:
        return [(a, b) for a, b, lab in self.edges if lab == i]


def graph_from_perms(perms, family: str | None = None) -> CprGraph:
    perms = [p if isinstance(p, Perm) else Perm(p) for p in perms]
    n = perms[0].degree
    edges = [(a, p(a), i) for i, p in enumerate(perms) for a in range(n) if a < p(a)]
    return CprGraph.from_edges(n, edges, family)


def from_coset_action(G: ToroidalGroup, H: SubgroupHandle, family: str | None = None) -> CprGraph:
    if not is_core_free(G, H):
        raise NonFaithfulError("non-faithful: the stabilizer has a nontrivial core")
    return graph_from_perms(coset_action(G, H).generators, family)


# ---------------------------------------------------------------------------
# validation


def _components(n: int, pairs) -> list[list[int]]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    comps: dict[int, list[int]] = {}
    for x in range(n):
        comps.setdefault(find(x), []).append(x)
    return list(comps.values())


def validate(g: CprGraph) -> list[str]:
    """Violations of the CPR axioms; empty when the graph is valid."""
    out = []
    n = g.degree
    if g.rank != 3:
        out.append(f"rank {g.rank} is not 3")
    if n < 1:
        out.append("degree must be positive")
        return out
    bad = False
    for a, b, i in g.edges:
        if i not in (0, 1, 2):
            out.append(f"edge ({a},{b}) has label {i} outside 0,1,2")
            bad = True
        if not (0 <= a < n and 0 <= b < n):
            out.append(f"edge ({a},{b}) has a vertex out of range")
            bad = True
        elif a == b:
            out.append(f"loop at vertex {a} with label {i}")
            bad = True
    seen = set()
    for e in g.edges:
        if e in seen:
            out.append(f"repeated edge ({e[0]},{e[1]}) with label {e[2]}")
        seen.add(e)
    if bad:
        return out
    for i in (0, 1, 2):
        deg = np.zeros(n, dtype=np.int64)
        for a, b in set(g.label_edges(i)):
            deg[a] += 1
            deg[b] += 1
        if (deg > 1).any():
            out.append(f"label {i} not a matching (vertex {int(np.argmax(deg > 1))})")
    if any(v.startswith("label") for v in out):
        return out
    # components of the {0,2}-subgraph: vertex, edge, double edge or alternating square
    e02 = sorted({(a, b, i) for a, b, i in g.edges if i in (0, 2)})
    for comp in _components(n, [(a, b) for a, b, _ in e02]):
        if len(comp) == 1:
            continue
        members = set(comp)
        edges = [e for e in e02 if e[0] in members]
        if len(comp) == 2 and len(edges) in (1, 2):
            continue
        if len(comp) == 4 and len(edges) == 4:
            continue
        out.append(f"component of labels 0,2 on vertices {comp} is not an edge, double edge or square")
    return out


def is_connected(g: CprGraph) -> bool:
    return len(_components(g.degree, [(a, b) for a, b, _ in g.edges])) == 1


def graph_to_perms(g: CprGraph) -> tuple[Perm, Perm, Perm]:
    """The three involutions encoded by the graph."""
    problems = [v for v in validate(g) if not v.startswith("component")]
    if problems:
        raise InvalidGraphError("; ".join(problems))
    out = []
    for i in (0, 1, 2):
        images = list(range(g.degree))
        for a, b in set(g.label_edges(i)):
            images[a], images[b] = b, a
        out.append(Perm(images))
    return tuple(out)


# ---------------------------------------------------------------------------
# serialisation


def to_json(g: CprGraph) -> str:
    return json.dumps(
        {"degree": g.degree, "rank": g.rank, "edges": [list(e) for e in g.edges]},
        separators=(",", ":"),
    )


def to_dot(g: CprGraph, name: str = "cpr") -> str:
    lines = [f"graph {name} {{"]
    lines += [f"  {v};" for v in range(g.degree)]
    lines += [f'  {a} -- {b} [label="{i}"];' for a, b, i in g.edges]
    lines.append("}")
    return "\n".join(lines) + "\n"


def export(g: CprGraph, format: str = "json") -> str:
    fmt = format.lower()
    if fmt == "json":
        return to_json(g)
    if fmt == "dot":
        return to_dot(g)
    raise ValueError(f"unknown format {format!r}")


def parse_json(text: str) -> CprGraph:
    """Inverse of :func:`to_json`; raises ``ValueError`` on malformed input."""
    data = json.loads(text)
    if not isinstance(data, dict) or not {"degree", "edges"} <= data.keys():
        raise ValueError("expected an object with 'degree' and 'edges'")
    degree, edges = data["degree"], data["edges"]
    rank = data.get("rank", 3)
    if not isinstance(degree, int) or isinstance(degree, bool) or not isinstance(rank, int):
        raise ValueError("'degree' and 'rank' must be integers")
    if not isinstance(edges, list) or not all(
        isinstance(e, list) and len(e) == 3 and all(isinstance(x, int) and not isinstance(x, bool) for x in e)
        for e in edges
    ):
        raise ValueError("'edges' must be a list of [a, b, label] integer triples")
    g = CprGraph.from_edges(degree, edges)
    return CprGraph(g.degree, g.edges, rank, None)


# ---------------------------------------------------------------------------
# the graph families


class FamilyId(enum.Enum):
    F44_2S = "f44_2s"
    F44_4S_A = "f44_4s_a"
    F44_4S_B = "f44_4s_b"
    F44_8AB_OCTO = "f44_8ab_octo"
    F44SS_4S = "f44ss_4s"
    F44SS_8S = "f44ss_8s"
    F36_3S = "f36_3s"
    F36_6S_A = "f36_6s_a"
    F36_6S_B = "f36_6s_b"
    F36_6S_C = "f36_6s_c"
    F36SS_9S = "f36ss_9s"
    F36SS_18S = "f36ss_18s"

    @classmethod
    def parse(cls, text: str) -> "FamilyId":
        key = text.strip().lower()
        for f in cls:
            if key in (f.value, f.name.lower()):
                return f
        raise ValueError(f"unknown graph family {text!r}")


@dataclass(frozen=True)
class FamilyInfo:
    map_family: MapFamily
    min_s: int
    even_only: bool
    explicit: bool
    degree: str  # in terms of s (or a, b)


FAMILIES: dict[FamilyId, FamilyInfo] = {
    FamilyId.F44_2S: FamilyInfo(MapFamily.T44S0, 3, False, True, "2s"),
    FamilyId.F44_4S_A: FamilyInfo(MapFamily.T44S0, 2, False, True, "4s"),
    FamilyId.F44_4S_B: FamilyInfo(MapFamily.T44S0, 2, True, False, "4s"),
    FamilyId.F44_8AB_OCTO: FamilyInfo(MapFamily.T44S0, 2, False, True, "8ab"),
    FamilyId.F44SS_4S: FamilyInfo(MapFamily.T44SS, 2, False, True, "4s"),
    FamilyId.F44SS_8S: FamilyInfo(MapFamily.T44SS, 2, False, True, "8s"),
    FamilyId.F36_3S: FamilyInfo(MapFamily.T36S0, 3, False, True, "3s"),
    FamilyId.F36_6S_A: FamilyInfo(MapFamily.T36S0, 2, True, False, "6s"),
    FamilyId.F36_6S_B: FamilyInfo(MapFamily.T36S0, 3, False, False, "6s"),
    FamilyId.F36_6S_C: FamilyInfo(MapFamily.T36S0, 3, False, False, "6s"),
    FamilyId.F36SS_9S: FamilyInfo(MapFamily.T36SS, 3, False, False, "9s"),
    FamilyId.F36SS_18S: FamilyInfo(MapFamily.T36SS, 2, True, False, "18s"),
}

STABILIZER_WORDS = {
    FamilyId.F44_2S: "u;r0;r2",
    FamilyId.F44_4S_A: "u;r0",
    FamilyId.F44_4S_B: "r0r2;r1r2r1",
    FamilyId.F44_8AB_OCTO: "u^{a};v^{b}",
    FamilyId.F44SS_4S: "r0r2;r0r1r2",
    FamilyId.F44SS_8S: "g;r1",
    FamilyId.F36_3S: "u;r0;r2",
    FamilyId.F36_6S_A: "u^2;r0;r2",
    FamilyId.F36_6S_B: "u;r0r2",
    FamilyId.F36_6S_C: "v;r0r2",
    FamilyId.F36SS_9S: "gh;r0;r2",
    FamilyId.F36SS_18S: "(gh)^2;r0;r2",
}


def stabilizer_words(fid: FamilyId, s: int, a: int | None = None, b: int | None = None) -> str:
    """Point stabilizer of the family, as generator words."""
    if fid is FamilyId.F44_2S and s % 2 == 0:
        # for even s the end vertex of the path is fixed by rho0, rho2 and v
        return "v;r0;r2"
    words = STABILIZER_WORDS[fid]
    if fid is FamilyId.F44_8AB_OCTO:
        words = words.format(a=a, b=b)
    return words


def family_parameters(fid: FamilyId, s: int | None = None, a: int | None = None, b: int | None = None) -> int:
    """Check the parameter constraints of ``fid`` and return the map parameter ``s``."""
    info = FAMILIES[fid]
    if fid is FamilyId.F44_8AB_OCTO:
        if a is None or b is None or a < 1 or b < 1:
            raise ParameterError("the octagon family needs positive a and b")
        lcm = a * b // gcd(a, b)
        if s is not None and s != lcm:
            raise ParameterError(f"s must equal lcm(a, b) = {lcm}")
        s = lcm
    if s is None or s < info.min_s:
        raise ParameterError(f"{fid.value} requires s >= {info.min_s}")
    if info.even_only and s % 2:
        raise ParameterError(f"{fid.value} requires even s")
    return s


def expected_degree(fid: FamilyId, s: int, a: int | None = None, b: int | None = None) -> int:
    if fid is FamilyId.F44_8AB_OCTO:
        return 8 * a * b
    return int(FAMILIES[fid].degree[:-1]) * s


def canonical_graph(fid: FamilyId, s: int | None = None, a: int | None = None, b: int | None = None) -> CprGraph:
    """Coset action of the map group on the family's stated stabilizer."""
    s = family_parameters(fid, s, a, b)
    G = build_group(FAMILIES[fid].map_family, s)
    H = StabilizerSpec.parse(stabilizer_words(fid, s, a, b)).resolve(G)
    return from_coset_action(G, H, fid.value)


def _path(labels, start: int = 0) -> list[tuple[int, int, int]]:
    return [(start + k, start + k + 1, lab) for k, lab in enumerate(labels)]


def _f44_2s(s: int) -> list:
    pattern = [1, 0, 1, 2] if s % 2 else [1, 2, 1, 0]
    return _path([pattern[k % 4] for k in range(2 * s - 1)])


def _f44_4s_a(s: int) -> list:
    # two paths on 2s vertices each, labels 1,2,1,0 repeating, a label-0 rung
    # between the left ends and a rung between the right ends that continues
    # the periodic labelling (2 for odd s, 0 for even s)
    m = 2 * s
    pattern = [1, 2, 1, 0]
    labels = [pattern[k % 4] for k in range(m - 1)]
    right = pattern[(m - 1) % 4]
    return _path(labels, 0) + _path(labels, m) + [(0, m, 0), (m - 1, 2 * m - 1, right)]


def _f44_8ab_octo(a: int, b: int) -> list:
    """Torus tiling by octagons and squares with ``b`` rows and ``a`` columns of square pairs.

    Cell ``(i, j)`` holds an "A" square (0 horizontally, 2 vertically) and a
    "B" square (2 horizontally, 0 vertically); label-1 edges join corners of
    neighbouring squares diagonally, bounding the octagons.
    """
    def A(i, j, corner):
        return 8 * ((i % b) * a + (j % a)) + corner

    def B(i, j, corner):
        return A(i, j, 4 + corner)

    TL, TR, BL, BR = range(4)
    edges = []
    for i in range(b):
        for j in range(a):
            edges += [
                (A(i, j, TL), A(i, j, TR), 0),
                (A(i, j, BL), A(i, j, BR), 0),
                (A(i, j, TL), A(i, j, BL), 2),
                (A(i, j, TR), A(i, j, BR), 2),
                (B(i, j, TL), B(i, j, TR), 2),
                (B(i, j, BL), B(i, j, BR), 2),
                (B(i, j, TL), B(i, j, BL), 0),
                (B(i, j, TR), B(i, j, BR), 0),
                (A(i, j, BL), B(i, j - 1, TR), 1),
                (A(i, j, BR), B(i, j, TL), 1),
                (B(i, j, BL), A(i + 1, j, TR), 1),
                (B(i, j, BR), A(i + 1, j + 1, TL), 1),
            ]
    return edges


def _square(first: int, left_label: int = 0) -> tuple[list, int, int]:
    """Alternating square L -x- T -y- R -x- B -y- L on four new vertices; returns (edges, L, R)."""
    L, T, R, Bo = first, first + 1, first + 2, first + 3
    other = 2 - left_label
    edges = [(L, T, left_label), (T, R, other), (R, Bo, left_label), (Bo, L, other)]
    return edges, L, R


def _f44ss_4s(s: int) -> list:
    edges = [(0, 1, 0), (0, 1, 2)]
    prev, nxt = 1, 2
    for _ in range(s - 1):
        sq, L, R = _square(nxt)
        edges += sq + [(prev, L, 1)]
        prev, nxt = R, nxt + 4
    edges += [(prev, nxt, 1), (nxt, nxt + 1, 0), (nxt, nxt + 1, 2)]
    return edges


def _f44ss_8s(s: int) -> list:
    edges = []
    ends = []
    for k in range(2 * s):
        sq, L, R = _square(4 * k)
        edges += sq
        ends.append((L, R))
    for k in range(2 * s):
        edges.append((ends[k][1], ends[(k + 1) % (2 * s)][0], 1))
    return edges


def _f36_3s(s: int) -> list:
    edges = []
    k = s // 2
    prev, nxt = 0, 1
    for q in range(k):
        sq, L, R = _square(nxt)
        edges += sq + [(prev, L, 1)]
        nxt += 4
        if q < k - 1 or s % 2:
            # R -1- a -2- b, then b continues the chain
            edges += [(R, nxt, 1), (nxt, nxt + 1, 2)]
            prev, nxt = nxt + 1, nxt + 2
        else:
            prev = R
    if s % 2:
        edges += [(prev, nxt, 1), (nxt, nxt + 1, 0), (nxt, nxt + 1, 2)]
    else:
        edges.append((prev, nxt, 1))
    return edges


def explicit_graph(fid: FamilyId, s: int | None = None, a: int | None = None, b: int | None = None) -> CprGraph:
    """Direct encoding of a family drawn as an explicit graph."""
    s = family_parameters(fid, s, a, b)
    if fid is FamilyId.F44_2S:
        edges = _f44_2s(s)
    elif fid is FamilyId.F44_4S_A:
        edges = _f44_4s_a(s)
    elif fid is FamilyId.F44_8AB_OCTO:
        edges = _f44_8ab_octo(a, b)
    elif fid is FamilyId.F44SS_4S:
        edges = _f44ss_4s(s)
    elif fid is FamilyId.F44SS_8S:
        edges = _f44ss_8s(s)
    elif fid is FamilyId.F36_3S:
        edges = _f36_3s(s)
    else:
        raise ParameterError(f"{fid.value} has no explicit encoding; use the canonical construction")
    n = expected_degree(fid, s, a, b)
    return CprGraph.from_edges(n, edges, fid.value)


def family_graph(
    fid: FamilyId | str, s: int | None = None, a: int | None = None, b: int | None = None,
    canonical: bool = False,
) -> CprGraph:
    """Explicit encoding when one exists (unless ``canonical``), else the coset construction."""
    if isinstance(fid, str):
        fid = FamilyId.parse(fid)
    if FAMILIES[fid].explicit and not canonical:
        return explicit_graph(fid, s, a, b)
    return canonical_graph(fid, s, a, b)


def cross_check(fid: FamilyId | str, s: int | None = None, a: int | None = None, b: int | None = None) -> bool:
    """Whether the explicit encoding is equivalent to the canonical coset action."""
    if isinstance(fid, str):
        fid = FamilyId.parse(fid)
    ex = graph_to_perms(explicit_graph(fid, s, a, b))
    ca = graph_to_perms(canonical_graph(fid, s, a, b))
    return actions_equivalent(ex, ca)
