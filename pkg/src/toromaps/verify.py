"""Verification sweep over map families and parameters.

Each check compares a computed value with the value the theory predicts.
A handful of predictions are contradicted by exact computation; for those the
computed value has been confirmed independently and is frozen in
``KNOWN_DISCREPANCIES``.  A check whose result equals its frozen value is
reported as ``DIFF`` rather than ``FAIL``; anything else that disagrees with
the prediction is a failure.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Callable, Iterable, Iterator

from .cpr import (
    FAMILIES,
    FamilyId,
    cross_check,
    expected_degree,
    family_graph,
    graph_to_perms,
    validate,
)
from .degrees import degrees_formula, scaled, verify_degrees
from .family import MapFamily
from .permgroup import actions_equivalent, coset_action, group_order, is_transitive
from .strcg import check_string_cgroup
from .structure import translation_structure
from .subgroups import degree_oracle, oracle_guard
from .toroidal_groups import build_group, verify_relations

KNOWN_DISCREPANCIES: dict[str, tuple[object, str]] = {
    "oracle 36ss s=1": (
        (6, 9, 12, 18, 36),
        "edges (index 9) and <r0 r1> (index 12) are faithful; confirmed by coset enumeration",
    ),
    "witnesses 36s0 s=2": (
        2,
        "<u,r0,r2> and <u,r0r2> contain the central half-turn (r1 r2)^3 when s = 2",
    ),
    "witnesses 36ss s=1": (2, "the faithful degrees 9 and 12 lie outside the stated set"),
    "string-c 44ss s=1": (False, "<r0,r1> and <r1,r2> have index 2 in a group of order 16"),
    "string-c 36s0 s=1": (False, "<r1,r2> is the whole group of order 12"),
    "structure 36s0 s=4": (
        16,
        "T-orbits of size 8 on which u and v both have order 4, e.g. stabilizer <u^2 v^2, r1>",
    ),
    "structure 36ss s=4": (16, "T-orbits of size 8 on which g and h both have order 4"),
    "structure 36s0 s=6": (19, "T-orbits of size 12 or 18 on which u and v both have order 6"),
    "structure 44s0 s=6": (8, "T-orbits of size 12 on which u and v both have order 6, e.g. stabilizer <u^4 v^4>"),
    "structure 44s0 s=8": (13, "T-orbits of size 16 on which u and v have orders 4 and 8"),
    "structure 44ss s=6": (13, "T-orbits of size 12 on which g and h both have order 6"),
    "oracle 36s0 s=7": (
        (14, 21, 28, 42, 49, 84, 98, 147, 196, 294, 588),
        "<u v^2, r1r2> (index 14) and <u v^2, (r1r2)^2> (index 28) are core-free",
    ),
    "witnesses 36s0 s=7": (2, "degrees 14 and 28 from <u v^2, r1r2> and <u v^2, (r1r2)^2>"),
    "witnesses 36ss s=7": (2, "degrees 42 and 84, the (7,0) witnesses of degree 14 and 28 embedded"),
}
for _s in range(2, 10):
    KNOWN_DISCREPANCIES[f"cpr f44ss_8s s={_s} cross-check"] = (
        False,
        "the drawn graph has stabilizer <h> x| <r1>, not <g> x| <r1>",
    )


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # PASS, FAIL, DIFF, SKIP or INFO
    detail: str = ""

    @property
    def counts_as_failure(self) -> bool:
        return self.status == "FAIL"

    def line(self) -> str:
        return f"{self.status:<4} {self.name}" + (f": {self.detail}" if self.detail else "")


def _judge(name: str, value, expected, detail: str = "") -> CheckResult:
    if value == expected:
        return CheckResult(name, "PASS", detail)
    known = KNOWN_DISCREPANCIES.get(name)
    if known is not None and known[0] == value:
        return CheckResult(name, "DIFF", f"got {value}, predicted {expected}; {known[1]}")
    return CheckResult(name, "FAIL", f"got {value}, expected {expected}" + (f"; {detail}" if detail else ""))


def _guarded(name: str, fn: Callable[[], CheckResult]) -> CheckResult:
    try:
        return fn()
    except Exception as exc:  # a crash is a failed check, not a crashed sweep
        return CheckResult(name, "FAIL", f"{type(exc).__name__}: {exc}")


def group_checks(family: MapFamily, s: int, guard: int) -> Iterator[CheckResult]:
    tag = f"{family.value} s={s}"
    G = build_group(family, s)
    yield _judge(f"order {tag}", G.order, family.flag_count(s))

    def relations():
        rel = verify_relations(G)
        bad = sorted(k for k, ok in rel.items() if not ok)
        return _judge(f"relations {tag}", bad, [], f"{len(rel)} relations")

    yield _guarded(f"relations {tag}", relations)

    def string_c():
        verdict = check_string_cgroup(G.regular_perms())
        expected = not (family is MapFamily.T44S0 and s == 1)
        return _judge(f"string-c {tag}", verdict.ok, expected, verdict.reason)

    yield _guarded(f"string-c {tag}", string_c)

    res = degree_oracle(G, guard) if G.order <= guard else None

    def witnesses():
        rep = verify_degrees(family, s, oracle_result=res)
        detail = "; ".join(rep.failures)
        return _judge(f"witnesses {tag}", len(rep.failures), 0, detail)

    yield _guarded(f"witnesses {tag}", witnesses)

    if res is None:
        yield CheckResult(f"oracle {tag}", "SKIP", f"|G| = {G.order} exceeds oracle guard {guard}")
        yield CheckResult(f"structure {tag}", "SKIP", f"|G| = {G.order} exceeds oracle guard {guard}")
        return
    formula = degrees_formula(family, s)
    yield _judge(f"oracle {tag}", res.degrees, formula.degrees, f"{len(res.degrees)} degrees")

    def structure():
        bad = 0
        faithful = [c for c in res.classes if c.core_free]
        for cls in faithful:
            if translation_structure(G, coset_action(G, cls.representative)).violations():
                bad += 1
        return _judge(f"structure {tag}", bad, 0, f"{len(faithful)} faithful actions")

    yield _guarded(f"structure {tag}", structure)


def scaling_checks(kinds: Iterable[str], max_s: int) -> Iterator[CheckResult]:
    for kind in kinds:
        axial = MapFamily.parse(kind + "s0")
        diag = MapFamily.parse(kind + "ss")
        for s in range(3, max_s + 1):
            yield _judge(
                f"scaling {kind} s={s}",
                degrees_formula(diag, s).degrees,
                scaled(degrees_formula(axial, s).degrees, diag.scale),
            )


def _cpr_params(fid: FamilyId, max_s: int) -> list[tuple[int | None, int | None, int | None]]:
    info = FAMILIES[fid]
    if fid is FamilyId.F44_8AB_OCTO:
        out = []
        for a in range(1, max_s + 1):
            for b in range(1, max_s + 1):
                lcm = a * b // gcd(a, b)
                if info.min_s <= lcm <= max_s:
                    out.append((None, a, b))
        return out
    return [
        (s, None, None)
        for s in range(info.min_s, max_s + 1)
        if not (info.even_only and s % 2)
    ]


def cpr_checks(fid: FamilyId, max_s: int) -> Iterator[CheckResult]:
    info = FAMILIES[fid]
    for s, a, b in _cpr_params(fid, max_s):
        tag = f"cpr {fid.value} " + (f"a={a} b={b}" if s is None else f"s={s}")

        def graph_check():
            g = family_graph(fid, s, a, b)
            g_s = s if s is not None else a * b // gcd(a, b)
            perms = graph_to_perms(g)
            found = (
                g.degree == expected_degree(fid, g_s, a, b),
                validate(g) == [],
                is_transitive(perms),
                group_order(perms) == info.map_family.flag_count(g_s),
            )
            return _judge(tag, found, (True,) * 4, "degree, axioms, transitivity, group order")

        yield _guarded(tag, graph_check)
        if info.explicit:
            name = f"{tag} cross-check"
            yield _guarded(name, lambda: _judge(name, cross_check(fid, s, a, b), True))


def open_question_lines(max_s: int) -> Iterator[CheckResult]:
    """Equivalence of the two degree-4s families of {4,4}_(s,0); reported only."""
    for s in range(2, max_s + 1, 2):
        pa = graph_to_perms(family_graph(FamilyId.F44_4S_A, s, canonical=True))
        pb = graph_to_perms(family_graph(FamilyId.F44_4S_B, s))
        eq = actions_equivalent(pa, pb)
        yield CheckResult(f"f44_4s_a vs f44_4s_b s={s}", "INFO", "equivalent" if eq else "not equivalent")


def run_sweep(
    families: Iterable[MapFamily | str] | None = None,
    max_s: int = 3,
    guard: int | None = None,
) -> list[CheckResult]:
    limit = oracle_guard(guard)
    fams = [MapFamily.parse(f) if isinstance(f, str) else f for f in (families or list(MapFamily))]
    results: list[CheckResult] = []
    for fam in fams:
        for s in range(1, max_s + 1):
            results.extend(group_checks(fam, s, limit))
    kinds = [k for k in ("44", "36") if any(f.kind == k for f in fams)]
    results.extend(scaling_checks(kinds, max_s))
    for fid in FamilyId:
        if FAMILIES[fid].map_family in fams:
            results.extend(cpr_checks(fid, max_s))
    if MapFamily.T44S0 in fams:
        results.extend(open_question_lines(max_s))
    return results


def summarize(results: list[CheckResult], strict: bool = False) -> tuple[str, bool]:
    counts = {k: sum(r.status == k for r in results) for k in ("PASS", "DIFF", "SKIP", "FAIL")}
    checks = sum(r.status != "INFO" for r in results)
    ok = counts["FAIL"] == 0 and (not strict or counts["DIFF"] == 0)
    text = (
        f"{checks} checks: {counts['PASS']} passed, {counts['DIFF']} known discrepancies, "
        f"{counts['SKIP']} skipped, {counts['FAIL']} failed"
    )
    return text, ok


__all__ = [
    "CheckResult",
    "KNOWN_DISCREPANCIES",
    "run_sweep",
    "summarize",
    "group_checks",
    "cpr_checks",
    "scaling_checks",
]
