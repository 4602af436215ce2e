"""Closed-form degree sets of faithful transitive representations, and their checks.

For each family the degree set is the instantiation of a closed formula over
the pairs ``(a, b)`` with ``lcm(a, b) = s`` and the divisors ``d`` of ``s``:

    {4,4}_(s,0), s > 2:   s^2, 2ab, 4ab, 8ab
    {4,4}_(s,s), s > 1:   2s^2, 4ab, 8ab, 16ab
    {3,6}_(s,0), s > 2:   s^2, 2s^2, 3ds, 4s^2, 6ab, 12ab
    {3,6}_(s,s), s >= 2:  3s^2, 6s^2, 9ds, 12s^2, 18ab, 36ab

Smaller parameters use a table of individually determined sets.  Every
degree is checked constructively by exhibiting a core-free subgroup of that
index, and optionally against the exhaustive subgroup oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import gcd

from .family import MapFamily
from .permgroup import SubgroupHandle, all_conjugate_masks
from .stabilizers import StabilizerSpec
from .subgroups import OracleGuardError, OracleResult, degree_oracle, oracle_guard
from .toroidal_groups import ToroidalGroup, build_group, lattice_embedding

SMALL_CASES = {
    (MapFamily.T44S0, 1): (4, 8),
    (MapFamily.T44S0, 2): (8, 16, 32),
    (MapFamily.T44SS, 1): (8, 16),
    (MapFamily.T36S0, 1): (6, 12),
    (MapFamily.T36SS, 1): (6, 18, 36),
}

# {3,6}_(2,0): the general formula without the vertex degree s^2 = 4
REMOVED = {(MapFamily.T36S0, 2): (4,)}

# smallest s for which the explicit core-free subgroup families are claimed
CLAIMED_FROM = {MapFamily.T44S0: 3, MapFamily.T36S0: 2}


def divisors(n: int) -> list[int]:
    if n <= 0:
        raise ValueError("n must be positive")
    return [d for d in range(1, n + 1) if n % d == 0]


def lcm_pairs(s: int) -> list[tuple[int, int]]:
    """Unordered pairs ``a <= b`` of positive integers with ``lcm(a, b) = s``."""
    if s <= 0:
        raise ValueError("s must be positive")
    ds = divisors(s)
    return [(a, b) for a in ds for b in ds if a <= b and a * b // gcd(a, b) == s]


@dataclass(frozen=True)
class DegreeFormulaSet:
    family: MapFamily
    s: int
    degrees: tuple[int, ...]
    provenance: dict = field(compare=False)
    rule: str = "formula"

    def __contains__(self, n: int) -> bool:
        return n in self.degrees


def _formula_terms(family: MapFamily, s: int) -> list[tuple[int, str]]:
    pairs = lcm_pairs(s)
    ds = divisors(s)
    ab_terms = lambda k: [(k * a * b, f"{k}ab[a={a},b={b}]") for a, b in pairs]
    ds_terms = lambda k: [(k * d * s, f"{k}ds[d={d}]") for d in ds]
    sq = s * s
    if family is MapFamily.T44S0:
        return [(sq, "s^2")] + ab_terms(2) + ab_terms(4) + ab_terms(8)
    if family is MapFamily.T44SS:
        return [(2 * sq, "2s^2")] + ab_terms(4) + ab_terms(8) + ab_terms(16)
    if family is MapFamily.T36S0:
        return (
            [(sq, "s^2"), (2 * sq, "2s^2"), (4 * sq, "4s^2")]
            + ds_terms(3)
            + ab_terms(6)
            + ab_terms(12)
        )
    return (
        [(3 * sq, "3s^2"), (6 * sq, "6s^2"), (12 * sq, "12s^2")]
        + ds_terms(9)
        + ab_terms(18)
        + ab_terms(36)
    )


def degrees_formula(family: MapFamily | str, s: int) -> DegreeFormulaSet:
    if isinstance(family, str):
        family = MapFamily.parse(family)
    if s <= 0:
        raise ValueError("s must be a positive integer")
    if (family, s) in SMALL_CASES:
        degs = SMALL_CASES[(family, s)]
        return DegreeFormulaSet(family, s, degs, {n: ("small-s table",) for n in degs}, "small-s table")
    prov: dict[int, list[str]] = {}
    for n, clause in _formula_terms(family, s):
        prov.setdefault(n, []).append(clause)
    rule = "formula"
    for n in REMOVED.get((family, s), ()):
        prov.pop(n, None)
        rule = f"formula without {n}"
    degs = tuple(sorted(prov))
    return DegreeFormulaSet(family, s, degs, {n: tuple(prov[n]) for n in degs}, rule)


# ---------------------------------------------------------------------------
# constructive witnesses


@dataclass(frozen=True, eq=False)
class WitnessCheck:
    clause: str
    stabilizer: str
    expected_index: int | None
    index: int
    core_free: bool
    subgroup: SubgroupHandle = field(repr=False)

    @property
    def ok(self) -> bool:
        return self.core_free and (self.expected_index is None or self.index == self.expected_index)

    def describe(self) -> str:
        return f"{self.clause}: <{self.stabilizer}> index {self.index}"


def is_core_free(H: SubgroupHandle) -> bool:
    return int(all_conjugate_masks(H).all(axis=0).sum()) == 1


def _check(G: ToroidalGroup, clause: str, spec: str, expected: int | None, H=None) -> WitnessCheck:
    if H is None:
        H = StabilizerSpec.parse(spec).resolve(G)
    return WitnessCheck(clause, spec, expected, H.index, is_core_free(H), H)


def clause_specs(family: MapFamily, s: int) -> list[tuple[str, str, int]]:
    """(clause, stabilizer words, claimed index) for the (s,0) core-free families.

    Only parameters inside each family's claimed range are produced:
    ``s > 2`` for {4,4}_(s,0) and ``s >= 2`` for {3,6}_(s,0).
    """
    out = []
    if s < CLAIMED_FROM.get(family, s + 1):
        return out
    if family is MapFamily.T44S0:
        for a, b in lcm_pairs(s):
            out.append((f"8ab[a={a},b={b}]", f"u^{a};v^{b}", 8 * a * b))
            out.append((f"4ab[a={a},b={b}]", f"u^{a};v^{b};r0", 4 * a * b))
            if a * b != s:
                out.append((f"2ab[a={a},b={b}]", f"u^{a};v^{b};r0;r2", 2 * a * b))
        out.append(("2s", "u;r0;r2", 2 * s))
    elif family is MapFamily.T36S0:
        for a, b in lcm_pairs(s):
            out.append((f"12ab[a={a},b={b}]", f"u^{a};v^{b}", 12 * a * b))
            if a * b != s:
                out.append((f"6ab[a={a},b={b}]", f"u^{a};v^{b};r0r2", 6 * a * b))
        for d in divisors(s):
            out.append((f"3ds[d={d}]", f"u^{d};r0;r2", 3 * d * s))
            out.append((f"6ds[d={d}]", f"u^{d};r0r2", 6 * d * s))
    return out


def clause_checks(G: ToroidalGroup) -> list[WitnessCheck]:
    return [_check(G, c, spec, n) for c, spec, n in clause_specs(G.family, G.s)]


def _dihedral_specs(G: ToroidalGroup) -> list[tuple[str, SubgroupHandle]]:
    """Every subgroup of each <r_i, r_j> generated by at most two of its elements."""
    out = []
    seen = set()
    for i, j in ((0, 1), (0, 2), (1, 2)):
        # shortest words for the elements of <r_i, r_j>
        words = {0: ""}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for k in (i, j):
                    y = G.mul(x, G.gen_ids[k])
                    if y not in words:
                        words[y] = words[x] + f"r{k}"
                        nxt.append(y)
            frontier = nxt
        elems = sorted(words, key=lambda x: (len(words[x]), words[x]))
        for size in (0, 1, 2):
            for gens in combinations(elems[1:], size):
                H = G.subgroup(gens)
                if H.key in seen:
                    continue
                seen.add(H.key)
                out.append((";".join(words[g] for g in gens) or "1", H))
    return out


def dihedral_checks(G: ToroidalGroup) -> list[WitnessCheck]:
    return [_check(G, "dihedral", spec, None, H) for spec, H in _dihedral_specs(G)]


def rotation_checks(G: ToroidalGroup) -> list[WitnessCheck]:
    """Subgroups ``<u^a v^b, R>`` for the rotations ``R`` about a vertex.

    Exploratory witnesses with no claimed index: when the cyclic group
    ``<u^a v^b>`` is invariant under a rotation, the subgroup can be core-free
    even though it contains no reflection.
    """
    if G.family.diagonal:
        return []
    rots = ("r1r2", "(r1r2)^2") if G.family.kind == "36" else ("r1r2",)
    out = []
    seen = set()
    for a in range(G.s):
        for b in range(G.s):
            if (a, b) == (0, 0):
                continue
            for r in rots:
                spec = f"u^{a}v^{b};{r}"
                H = StabilizerSpec.parse(spec).resolve(G)
                if H.key in seen:
                    continue
                seen.add(H.key)
                out.append(_check(G, "rotation", spec, None, H))
    return out


def embedded_checks(G: ToroidalGroup) -> list[WitnessCheck]:
    """Images in an (s,s) group of the witnesses of the (s,0) group of the same kind.

    The (s,0) group embeds with index ``alpha`` (2 or 3); a core-free subgroup
    of it stays core-free in the larger group, with index multiplied by alpha.
    """
    small = build_group(G.family.axial, G.s)
    phi = lattice_embedding(small, G)
    alpha = G.family.scale
    out = []
    base = clause_checks(small) + dihedral_checks(small) + rotation_checks(small)
    for w in base + [_check(small, "regular", "1", small.order)]:
        if not w.core_free:
            continue
        H = G.subgroup(phi[w.subgroup.members])
        out.append(
            _check(G, f"{alpha}x {w.clause}", f"embedded[{w.stabilizer}]", alpha * w.index, H)
        )
    return out


def witness_checks(G: ToroidalGroup) -> list[WitnessCheck]:
    checks = [_check(G, "regular", "1", G.order)]
    checks += clause_checks(G)
    checks += dihedral_checks(G)
    checks += rotation_checks(G)
    if G.family.diagonal:
        checks += embedded_checks(G)
    return checks


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class DegreeReport:
    family: MapFamily
    s: int
    formula: DegreeFormulaSet
    oracle: tuple[int, ...] | None
    match: bool | None
    witnesses: dict
    checks: tuple = field(repr=False)
    failures: tuple[str, ...] = ()
    oracle_note: str | None = None

    @property
    def ok(self) -> bool:
        return not self.failures and self.match is not False

    def diff(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """(formula-only degrees, oracle-only degrees)."""
        if self.oracle is None:
            return (), ()
        f, o = set(self.formula.degrees), set(self.oracle)
        return tuple(sorted(f - o)), tuple(sorted(o - f))


def verify_degrees(
    family: MapFamily | str, s: int, use_oracle: bool = False, guard: int | None = None,
    oracle_result: OracleResult | None = None,
) -> DegreeReport:
    """Formula set, constructive witnesses and (optionally) the subgroup oracle.

    ``oracle_result`` reuses an oracle run for the same group instead of
    recomputing it; it implies ``use_oracle``.
    """
    if isinstance(family, str):
        family = MapFamily.parse(family)
    formula = degrees_formula(family, s)
    G = build_group(family, s)
    checks = witness_checks(G)
    failures = []
    for w in checks:
        if w.expected_index is not None and not w.ok:
            why = "not core-free" if not w.core_free else f"index {w.index}"
            failures.append(f"witness {w.clause} <{w.stabilizer}>: {why}")
    witnesses = {}
    for w in checks:
        if w.ok and w.index not in witnesses:
            witnesses[w.index] = w.describe()
    for n in sorted(witnesses):
        if n not in formula:
            failures.append(f"core-free witness of degree {n} outside the formula set ({witnesses[n]})")
    oracle = match = note = None
    if use_oracle or oracle_result is not None:
        limit = oracle_guard(guard)
        try:
            res = oracle_result if oracle_result is not None else degree_oracle(G, limit)
        except OracleGuardError:
            note = f"oracle skipped: |G| = {G.order} exceeds guard {limit}"
        else:
            oracle = res.degrees
            match = set(oracle) == set(formula.degrees)
            for n, cls in res.witnesses.items():
                witnesses.setdefault(n, f"oracle: core-free subgroup of order {cls.order}")
    for n in formula.degrees:
        if n not in witnesses:
            failures.append(f"no witness for degree {n}")
    return DegreeReport(
        family, s, formula, oracle, match, dict(sorted(witnesses.items())), tuple(checks),
        tuple(failures), note,
    )


def scaled(degrees, factor: int) -> tuple[int, ...]:
    return tuple(sorted(factor * n for n in degrees))
