"""Subgroups described by generator words, e.g. ``"u^2;r0;r2"`` or ``"(gh)^2;r0;r2"``.

Grammar (whitespace ignored)::

    spec   := word (';' word)*
    word   := factor+
    factor := atom ('^' integer)?
    atom   := 'r0' | 'r1' | 'r2' | 'u' | 'v' | 't' | 'g' | 'h' | 'j' | '1' | '(' word ')'

``r0, r1, r2`` are the distinguished generators, the letters are the named
translations, and ``1`` is the identity.  A spec stands for the subgroup
generated by all of its words.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .permgroup import SubgroupHandle
from .toroidal_groups import ToroidalGroup, named_translation_ids

TOKEN_RE = re.compile(r"\s*(rho[012]|r[012]|[uvtghj1]|\(|\)|\^|;|\*|[-+]?\d+)")
LETTERS = ("r0", "r1", "r2", "u", "v", "t", "g", "h", "j", "1")


class StabilizerSyntaxError(ValueError):
    pass


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = TOKEN_RE.match(text, pos)
        if not m:
            raise StabilizerSyntaxError(f"unexpected character at {pos} in {text!r}")
        tok = m.group(1)
        if tok.startswith("rho"):
            tok = "r" + tok[3]
        out.append(tok)
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def word(self):
        factors = []
        while self.peek() not in (None, ";", ")"):
            if self.peek() == "*":
                self.take()
                continue
            factors.append(self.factor())
        if not factors:
            raise StabilizerSyntaxError("empty word")
        return tuple(factors)

    def factor(self):
        tok = self.take()
        if tok == "(":
            atom = self.word()
            if self.take() != ")":
                raise StabilizerSyntaxError("unbalanced parenthesis")
        elif tok in LETTERS:
            atom = tok
        else:
            raise StabilizerSyntaxError(f"unexpected token {tok!r}")
        exp = 1
        if self.peek() == "^":
            self.take()
            num = self.take()
            if num is None or not re.fullmatch(r"[-+]?\d+", num):
                raise StabilizerSyntaxError("exponent must be an integer")
            exp = int(num)
        return (atom, exp)


def _render(word) -> str:
    parts = []
    for atom, exp in word:
        body = atom if isinstance(atom, str) else "(" + _render(atom) + ")"
        parts.append(body if exp == 1 else f"{body}^{exp}")
    return "".join(parts)


@dataclass(frozen=True)
class StabilizerSpec:
    """Parsed generator words of a subgroup."""

    words: tuple

    @classmethod
    def parse(cls, text: str) -> "StabilizerSpec":
        tokens = _tokenize(text)
        words = []
        p = _Parser(tokens)
        if not tokens:
            return cls(())
        while True:
            words.append(p.word())
            tok = p.take()
            if tok is None:
                break
            if tok != ";":
                raise StabilizerSyntaxError(f"unexpected token {tok!r}")
        return cls(tuple(words))

    def __str__(self):
        return ";".join(_render(w) for w in self.words)

    def element_ids(self, G: ToroidalGroup) -> tuple[int, ...]:
        letters = dict(named_translation_ids(G))
        letters.update({"r0": G.gen_ids[0], "r1": G.gen_ids[1], "r2": G.gen_ids[2], "1": 0})

        def ev(word) -> int:
            out = 0
            for atom, exp in word:
                x = letters[atom] if isinstance(atom, str) else ev(atom)
                out = G.mul(out, G.power(x, exp))
            return out

        return tuple(ev(w) for w in self.words)

    def resolve(self, G: ToroidalGroup) -> SubgroupHandle:
        return G.subgroup(self.element_ids(G))


def resolve(spec: str | StabilizerSpec, G: ToroidalGroup) -> SubgroupHandle:
    if isinstance(spec, str):
        spec = StabilizerSpec.parse(spec)
    return spec.resolve(G)
