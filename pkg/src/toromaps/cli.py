"""Command-line driver.

Exit codes: 0 success, 1 verification mismatch, 2 usage or precondition error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import cpr
from .degrees import DegreeReport, verify_degrees
from .family import MapFamily
from .stabilizers import StabilizerSpec, StabilizerSyntaxError
from .subgroups import HARD_GUARD, oracle_guard
from .toroidal_groups import build_group, verify_relations
from .verify import run_sweep, summarize

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    family: str | None = None
    s: int | None = None
    a: int | None = None
    b: int | None = None
    fmt: str = "text"
    guard: int | None = None
    output: str | None = None

    def __post_init__(self):
        if self.guard is not None and not 1 <= self.guard <= HARD_GUARD:
            raise UsageError(f"--guard must lie in [1, {HARD_GUARD}]")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        fam = getattr(args, "family", None)
        if isinstance(fam, list):
            fam = ",".join(fam)
        return cls(
            args.command,
            fam,
            getattr(args, "s", None),
            getattr(args, "a", None),
            getattr(args, "b", None),
            getattr(args, "format", "text") or "text",
            getattr(args, "guard", None),
            getattr(args, "output", None),
        )


def _family(text: str) -> MapFamily:
    try:
        return MapFamily.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _positive_s(s: int | None) -> int:
    if s is None or s < 1:
        raise UsageError("--s must be a positive integer")
    return s


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_order(cfg: RunConfig) -> int:
    fam = _family(cfg.family)
    s = _positive_s(cfg.s)
    G = build_group(fam, s)
    rel = verify_relations(G)
    held = sum(rel.values())
    print(G.order)
    print(f"{fam.label(s)}: |G| = {G.order} (expected {fam.flag_count(s)})")
    print(f"relations: {held}/{len(rel)} hold")
    for name, ok in rel.items():
        if not ok:
            print(f"  failed: {name}")
    return EXIT_OK if held == len(rel) and G.order == fam.flag_count(s) else EXIT_MISMATCH


def _degrees_csv(rep: DegreeReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["family", "s", "degree", "source-clause"]
    if rep.oracle is not None:
        header.append("oracle")
    w.writerow(header)
    rows = sorted(set(rep.formula.degrees) | set(rep.oracle or ()))
    for n in rows:
        src = " ".join(rep.formula.provenance.get(n, ("-",)))
        row = [rep.family.value, rep.s, n, src]
        if rep.oracle is not None:
            row.append("yes" if n in rep.oracle else "no")
        w.writerow(row)
    return buf.getvalue()


def _degrees_json(rep: DegreeReport) -> str:
    doc = {
        "family": rep.family.value,
        "s": rep.s,
        "rule": rep.formula.rule,
        "formula": list(rep.formula.degrees),
        "provenance": {str(n): list(v) for n, v in rep.formula.provenance.items()},
        "oracle": list(rep.oracle) if rep.oracle is not None else None,
        "match": rep.match,
        "witness_failures": list(rep.failures),
    }
    if rep.oracle_note:
        doc["note"] = rep.oracle_note
    return json.dumps(doc, indent=2) + "\n"


def _degrees_text(rep: DegreeReport) -> str:
    lines = [f"formula  {' '.join(map(str, rep.formula.degrees))}"]
    if rep.oracle is not None:
        lines.append(f"oracle   {' '.join(map(str, rep.oracle))}")
        lines.append(f"match    {'yes' if rep.match else 'no'}")
        only_f, only_o = rep.diff()
        if only_f:
            lines.append(f"formula only: {' '.join(map(str, only_f))}")
        if only_o:
            lines.append(f"oracle only:  {' '.join(map(str, only_o))}")
    if rep.oracle_note:
        lines.append(rep.oracle_note)
    return "\n".join(lines) + "\n"


def cmd_degrees(cfg: RunConfig, use_oracle: bool) -> int:
    fam = _family(cfg.family)
    s = _positive_s(cfg.s)
    guard = oracle_guard(cfg.guard)
    rep = verify_degrees(fam, s, use_oracle=use_oracle, guard=guard)
    render = {"text": _degrees_text, "json": _degrees_json, "csv": _degrees_csv}[cfg.fmt]
    _emit(render(rep), cfg.output)
    return EXIT_MISMATCH if rep.match is False else EXIT_OK


def cmd_cpr(cfg: RunConfig, graph_id: str | None, stab: str | None, canonical: bool) -> int:
    if (graph_id is None) == (stab is None):
        raise UsageError("give either --id, or --family with --stab")
    try:
        if graph_id is not None:
            fid = cpr.FamilyId.parse(graph_id)
            g = cpr.family_graph(fid, cfg.s, cfg.a, cfg.b, canonical=canonical)
        else:
            if cfg.family is None:
                raise UsageError("--stab needs --family")
            G = build_group(_family(cfg.family), _positive_s(cfg.s))
            H = StabilizerSpec.parse(stab).resolve(G)
            g = cpr.from_coset_action(G, H, cfg.family)
    except (cpr.ParameterError, cpr.NonFaithfulError, StabilizerSyntaxError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    fmt = "json" if cfg.fmt == "text" else cfg.fmt
    text = cpr.export(g, fmt)
    _emit(text if text.endswith("\n") else text + "\n", cfg.output)
    return EXIT_OK


def cmd_verify(families: list[str] | None, max_s: int, guard: int | None, strict: bool, quiet: bool) -> int:
    if max_s < 1:
        raise UsageError("--max-s must be positive")
    fams = [_family(f) for f in families] if families else None
    results = run_sweep(fams, max_s, guard)
    for r in results:
        if not quiet or r.status != "PASS":
            print(r.line())
    text, ok = summarize(results, strict)
    print(text)
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_validate(path: str) -> int:
    try:
        g = cpr.parse_json(Path(path).read_text())
    except (OSError, ValueError) as exc:
        print(f"cannot read graph: {exc}", file=sys.stderr)
        return EXIT_USAGE
    problems = cpr.validate(g)
    if problems:
        for p in problems:
            print(p)
        return EXIT_MISMATCH
    print(f"valid CPR graph: {g.degree} vertices, {len(g.edges)} edges")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toromaps", description="Faithful transitive representations of toroidal regular maps.")
    sub = p.add_subparsers(dest="command", required=True)

    o = sub.add_parser("order", help="group order and relation check")
    o.add_argument("--family", required=True, help="44s0, 44ss, 36s0 or 36ss")
    o.add_argument("--s", type=int, required=True)

    d = sub.add_parser("degrees", help="degree set from the closed formula, optionally against the oracle")
    d.add_argument("--family", required=True)
    d.add_argument("--s", type=int, required=True)
    d.add_argument("--oracle", action="store_true", help="also run the exhaustive subgroup oracle")
    d.add_argument("--format", choices=("text", "json", "csv"), default="text")
    d.add_argument("--guard", type=int, help=f"oracle group-order guard (max {HARD_GUARD})")
    d.add_argument("--output")

    c = sub.add_parser("cpr", help="write a CPR graph")
    c.add_argument("--id", dest="graph_id", help="graph family id, e.g. f44_2s")
    c.add_argument("--family", help="map family, used with --stab")
    c.add_argument("--stab", help='stabilizer words, e.g. "u;r0;r2"')
    c.add_argument("--s", type=int)
    c.add_argument("--a", type=int)
    c.add_argument("--b", type=int)
    c.add_argument("--format", choices=("json", "dot"), default="json")
    c.add_argument("--canonical", action="store_true", help="use the coset construction even if an explicit encoding exists")
    c.add_argument("--output")

    v = sub.add_parser("verify", help="run the verification sweep")
    g = v.add_mutually_exclusive_group(required=True)
    g.add_argument("--all", action="store_true")
    g.add_argument("--family", action="append")
    v.add_argument("--max-s", type=int, default=3)
    v.add_argument("--guard", type=int)
    v.add_argument("--strict", action="store_true", help="count known discrepancies as failures")
    v.add_argument("--quiet", action="store_true", help="print only lines that are not PASS")

    val = sub.add_parser("validate", help="check a CPR graph JSON file")
    val.add_argument("path")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = RunConfig.from_args(args)
        if args.command == "order":
            return cmd_order(cfg)
        if args.command == "degrees":
            return cmd_degrees(cfg, args.oracle)
        if args.command == "cpr":
            return cmd_cpr(cfg, args.graph_id, args.stab, args.canonical)
        if args.command == "verify":
            fams = None if args.all else args.family
            return cmd_verify(fams, args.max_s, cfg.guard, args.strict, args.quiet)
        return cmd_validate(args.path)
    except UsageError as exc:
        print(f"toromaps {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
