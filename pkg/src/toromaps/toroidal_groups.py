"""Symmetry groups of the toroidal regular maps as affine groups modulo a lattice.

An element is a pair ``(M, t)`` acting on row vectors by ``p -> p @ M + t``
with ``t`` reduced modulo the identification lattice.  Words are read left
to right, so ``a * b = (M_a M_b, t_a M_b + t_b)``.

The square tessellation uses the generators

    rho0: (x, y) -> (1 - x, y),  rho1: (x, y) -> (y, x),  rho2: (x, y) -> (x, -y).

For the triangular tessellation (coordinates along two unit vectors at 60
degrees) the generators are found by a search over reflections with small
translation parts, keeping the first triple that satisfies the Coxeter
relators of [3,6], the family relator and the conjugation relations of the
named translations.  The search runs once per family in the infinite affine
group, so the result does not depend on ``s``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Callable, Iterable, Sequence

import numpy as np

from .family import MapFamily
from .lattice import CosetVec, IntMat2, Sublattice, canonical_rep, lattice_for
from .permgroup import MAX_ORDER, FiniteGroup, SubgroupHandle

log = logging.getLogger(__name__)

IDENTITY = IntMat2.identity()

# similarity carrying the (s,0) lattice onto the (s,s) lattice of the same kind
SKEW_MAP = {"44": IntMat2(1, 1, -1, 1), "36": IntMat2(1, 1, -1, 2)}

COXETER = {"44": (4, 4), "36": (3, 6)}


class GroupConstructionError(RuntimeError):
    pass


class LatticeMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class AffineElem:
    linear: IntMat2
    trans: CosetVec

    def __repr__(self):
        m = self.linear
        return f"AffineElem([[{m.a},{m.b}],[{m.c},{m.d}]], t=({self.trans.x},{self.trans.y}))"


def _check_on(a: AffineElem, L: Sublattice) -> None:
    if canonical_rep(tuple(a.trans), L) != a.trans:
        raise LatticeMismatchError(f"{a} is not reduced modulo {L.basis}")


def multiply(a: AffineElem, b: AffineElem, L: Sublattice) -> AffineElem:
    """``a`` then ``b``."""
    _check_on(a, L)
    _check_on(b, L)
    tx, ty = b.linear.apply(tuple(a.trans))
    return AffineElem(a.linear @ b.linear, canonical_rep((tx + b.trans.x, ty + b.trans.y), L))


def invert(a: AffineElem, L: Sublattice) -> AffineElem:
    _check_on(a, L)
    minv = a.linear.inverse()
    x, y = minv.apply(tuple(a.trans))
    return AffineElem(minv, canonical_rep((-x, -y), L))


def identity_elem() -> AffineElem:
    return AffineElem(IDENTITY, CosetVec(0, 0))


def element_order(a: AffineElem, L: Sublattice, limit: int = MAX_ORDER) -> int:
    e = identity_elem()
    x, k = a, 1
    while x != e:
        x = multiply(x, a, L)
        k += 1
        if k > limit:
            raise OverflowError("element order exceeds limit")
    return k


# ---------------------------------------------------------------------------
# point groups


@lru_cache(maxsize=None)
def point_group(kind: str) -> tuple[IntMat2, ...]:
    """All linear parts of the symmetries, identity first, in BFS order."""
    if kind == "44":
        gens = (IntMat2(-1, 0, 0, 1), IntMat2(0, 1, 1, 0))
    elif kind == "36":
        # rotation by 60 degrees (e1 -> e2, e2 -> e2 - e1) and the swap e1 <-> e2
        gens = (IntMat2(0, 1, -1, 1), IntMat2(0, 1, 1, 0))
    else:
        raise ValueError(f"unknown kind {kind!r}")
    out = [IDENTITY]
    head = 0
    while head < len(out):
        m = out[head]
        head += 1
        for g in gens:
            p = m @ g
            if p not in out:
                out.append(p)
    return tuple(out)


# ---------------------------------------------------------------------------
# words shared by the finite groups and the generator search


class _Ops:
    """Multiplication, inversion and identity test for some concrete group."""

    def __init__(self, mul, inv, is_identity, gens):
        self.mul2 = mul
        self.inv = inv
        self.is_identity = is_identity
        self.r = tuple(gens)

    def mul(self, *xs):
        out = xs[0]
        for x in xs[1:]:
            out = self.mul2(out, x)
        return out

    def word(self, letters):
        return self.mul(*(self.r[i] for i in letters))

    def pow(self, x, k):
        if k < 0:
            x, k = self.inv(x), -k
        if k == 0:
            return self.mul2(x, self.inv(x))
        return self.mul(*([x] * k))

    def conj(self, x, y):
        return self.mul(self.inv(y), x, y)

    def eq(self, x, y):
        return self.is_identity(self.mul2(x, self.inv(y)))

    def order_is(self, x, n):
        """Exact order test."""
        y = x
        for k in range(1, n):
            if self.is_identity(y):
                return False
            y = self.mul2(y, x)
        return self.is_identity(y)


def translation_words(ops: _Ops, kind: str) -> dict:
    """The named translations u, v, t, g, h, j evaluated in ``ops``."""
    if kind == "44":
        u = ops.word((0, 1, 2, 1))
    else:
        u = ops.word((0, 1, 2, 1, 2, 1))
    v = ops.conj(u, ops.r[1])
    ui = ops.inv(u)
    t = ops.mul(ui, v)
    g = ops.mul(u, v)
    h = ops.mul(ui, v) if kind == "44" else ops.mul(ui, ui, v)
    j = ops.mul(h, g)
    return {"u": u, "v": v, "t": t, "g": g, "h": h, "j": j}


def relation_checks(ops: _Ops, family: MapFamily) -> dict[str, bool]:
    """Coxeter relators and the conjugation relations of the named translations."""
    r0, r1, r2 = ops.r
    p, q = COXETER[family.kind]
    checks = {
        "rho0^2": ops.order_is(r0, 2),
        "rho1^2": ops.order_is(r1, 2),
        "rho2^2": ops.order_is(r2, 2),
        "(rho0 rho2)^2": ops.is_identity(ops.pow(ops.mul(r0, r2), 2)),
        f"(rho0 rho1)^{p}": ops.is_identity(ops.pow(ops.mul(r0, r1), p)),
        f"(rho1 rho2)^{q}": ops.is_identity(ops.pow(ops.mul(r1, r2), q)),
    }
    w = translation_words(ops, family.kind)
    u, v, t, g, h, j = (w[k] for k in "uvtghj")
    inv, conj, eq = ops.inv, ops.conj, ops.eq
    if family is MapFamily.T44S0:
        checks.update(
            {
                "u^rho0 = u^-1": eq(conj(u, r0), inv(u)),
                "u^rho2 = u": eq(conj(u, r2), u),
                "v^rho0 = v": eq(conj(v, r0), v),
                "v^rho2 = v^-1": eq(conj(v, r2), inv(v)),
            }
        )
    elif family is MapFamily.T36S0:
        checks.update(
            {
                "u^rho0 = u^-1": eq(conj(u, r0), inv(u)),
                "u^rho2 = u": eq(conj(u, r2), u),
                "v^rho0 = t": eq(conj(v, r0), t),
                "v^rho2 = t^-1": eq(conj(v, r2), inv(t)),
            }
        )
    elif family is MapFamily.T44SS:
        checks.update(
            {
                "g^rho1 = g": eq(conj(g, r1), g),
                "g^rho2 = h^-1": eq(conj(g, r2), inv(h)),
                "h^rho1 = h^-1": eq(conj(h, r1), inv(h)),
            }
        )
    else:
        checks.update(
            {
                "g^rho1 = g": eq(conj(g, r1), g),
                "g^rho2 = h^-1": eq(conj(g, r2), inv(h)),
                "h^rho1 = j^-1": eq(conj(h, r1), inv(j)),
            }
        )
    checks["u v = v u"] = eq(ops.mul(u, v), ops.mul(v, u))
    return checks


def identity_checks(ops: _Ops, kind: str) -> dict[str, bool]:
    """Alternative expressions of the translations as words in the generators."""
    r0 = ops.r[0]
    w = translation_words(ops, kind)
    if kind == "44":
        return {
            "g = (rho0 rho1 rho2)^2": ops.eq(w["g"], ops.word((0, 1, 2) * 2)),
            "h = g^rho0": ops.eq(w["h"], ops.conj(w["g"], r0)),
        }
    return {
        "v = (rho0 rho1 rho2)^2": ops.eq(w["v"], ops.word((0, 1, 2) * 2)),
        "g = (rho0 (rho1 rho2)^2)^2": ops.eq(w["g"], ops.word((0, 1, 2, 1, 2) * 2)),
        "h = g^rho0": ops.eq(w["h"], ops.conj(w["g"], r0)),
    }


def family_relator(family: MapFamily, s: int) -> tuple[int, ...]:
    """The extra relator that cuts the Coxeter group down to the map group."""
    if family is MapFamily.T44S0:
        return (0, 1, 2, 1) * s
    if family is MapFamily.T44SS or family is MapFamily.T36S0:
        return (0, 1, 2) * (2 * s)
    return (2, 1, 2, 1, 0) * (2 * s)


# ---------------------------------------------------------------------------
# the infinite affine group, used by the generator search


def _amul(a, b):
    (ma, ta), (mb, tb) = a, b
    x, y = mb.apply(ta)
    return (ma @ mb, (x + tb[0], y + tb[1]))


def _ainv(a):
    m, t = a
    mi = m.inverse()
    x, y = mi.apply(t)
    return (mi, (-x, -y))


def _aid(a):
    return a[0] == IDENTITY and a[1] == (0, 0)


def _infinite_ops(gens, reverse: bool) -> _Ops:
    mul = (lambda a, b: _amul(b, a)) if reverse else _amul
    return _Ops(mul, _ainv, _aid, gens)


def _generators_ok(ops: _Ops, family: MapFamily) -> bool:
    p, q = COXETER[family.kind]
    r0, r1, r2 = ops.r
    if not all(ops.order_is(x, 2) for x in ops.r):
        return False
    if not ops.is_identity(ops.pow(ops.mul(r0, r2), 2)):
        return False
    if not (ops.order_is(ops.mul(r0, r1), p) and ops.order_is(ops.mul(r1, r2), q)):
        return False
    w = translation_words(ops, family.kind)
    (mu, tu), (mv, tv) = w["u"], w["v"]
    if mu != IDENTITY or mv != IDENTITY or abs(tu[0] * tv[1] - tu[1] * tv[0]) != 1:
        return False
    if not all(relation_checks(ops, family).values()):
        return False
    # family relator: its square root word must be a translation by a vector of the s=1 lattice
    root = ops.word(family_relator(family, 1))
    m, t = root
    return m == IDENTITY and lattice_for(family, 1).contains(t)


@lru_cache(maxsize=None)
def synthesize_generators(family: MapFamily) -> tuple[tuple, ...]:
    """First generator triple (in lexicographic order) meeting every relation.

    Candidates are reflections of the point group with translation parts in
    ``{-1,0,1}^2``.  Returns a triple of ``(IntMat2, (x, y))`` pairs.
    """
    reflections = sorted(
        (m for m in point_group(family.kind) if m.det() == -1),
        key=lambda m: (m.a, m.b, m.c, m.d),
    )
    cands = sorted(
        ((m, t) for m in reflections for t in product((-1, 0, 1), repeat=2)),
        key=lambda c: (c[0].a, c[0].b, c[0].c, c[0].d, c[1]),
    )
    cands = [c for c in cands if _aid(_amul(c, c))]
    for triple in product(cands, repeat=3):
        if _generators_ok(_infinite_ops(triple, reverse=False), family):
            log.info("%s: generators %s (left-to-right composition)", family.value, triple)
            return triple
    # Diagnostic only: for involutory generators a relation holds under one
    # composition order iff it holds under the other, so this cannot succeed
    # where the first pass failed.
    for triple in product(cands, repeat=3):
        if _generators_ok(_infinite_ops(triple, reverse=True), family):
            log.warning("%s: generators found only under right-to-left composition", family.value)
            raise GroupConstructionError("generators exist only under right-to-left composition")
    raise GroupConstructionError(f"no generator triple found for {family.value}")


def base_generators(family: MapFamily) -> tuple[tuple, ...]:
    if family.kind == "44":
        return (
            (IntMat2(-1, 0, 0, 1), (1, 0)),
            (IntMat2(0, 1, 1, 0), (0, 0)),
            (IntMat2(1, 0, 0, -1), (0, 0)),
        )
    return synthesize_generators(family)


# ---------------------------------------------------------------------------
# the finite groups


class ToroidalGroup(FiniteGroup):
    """Map group of ``family`` at parameter ``s``; element 0 is the identity.

    Elements are numbered breadth first from the identity through rho0, rho1,
    rho2.  Products are computed arithmetically; the Cayley table is built on
    first access to :attr:`table`.
    """

    def __init__(self, family: MapFamily, s: int, guard: int = MAX_ORDER):
        if not isinstance(s, (int, np.integer)) or isinstance(s, bool) or s <= 0:
            raise ValueError("s must be a positive integer")
        expected = family.flag_count(int(s))
        if expected > guard:
            raise OverflowError(f"group order {expected} exceeds guard {guard}")
        self.family = family
        self.s = int(s)
        self.lattice = lattice_for(family, self.s)
        self._pg = point_group(family.kind)
        self._pg_index = {m: i for i, m in enumerate(self._pg)}
        self._pg_arr = np.array([m.to_array() for m in self._pg], dtype=np.int64)
        self._pg_mul = np.array(
            [[self._pg_index[a @ b] for b in self._pg] for a in self._pg], dtype=np.int64
        )
        self._pg_inv = np.array([self._pg_index[m.inverse()] for m in self._pg], dtype=np.int64)
        self._reps = self.lattice.rep_array().astype(np.int64)
        self._nt = self.lattice.index
        raw = base_generators(family)
        self._gen_pairs = [
            (self._pg_index[m], int(self.lattice.code(t))) for m, t in raw
        ]
        self._enumerate(guard)
        if self.order != expected:
            raise GroupConstructionError(
                f"{family.value} s={s}: generated {self.order} elements, expected {expected}"
            )
        self.gen_ids = tuple(self._id_of(*p) for p in self._gen_pairs)

    # -- construction ---------------------------------------------------

    def _enumerate(self, guard: int) -> None:
        nt = self._nt
        lookup = np.full(len(self._pg) * nt, -1, dtype=np.int64)
        lookup[0] = 0
        pg_idx = [np.zeros(1, dtype=np.int64)]
        codes = [np.zeros(1, dtype=np.int64)]
        count = 1
        frontier = (pg_idx[0], codes[0])
        while frontier[0].size:
            new_pg, new_code = [], []
            for gp, gc in self._gen_pairs:
                npg, ncode = self._product_arrays(frontier[0], frontier[1], gp, gc)
                new_pg.append(npg)
                new_code.append(ncode)
            cand_pg = np.stack(new_pg, axis=1).ravel()
            cand_code = np.stack(new_code, axis=1).ravel()
            keys = cand_pg * nt + cand_code
            fresh = lookup[keys] < 0
            keys, cand_pg, cand_code = keys[fresh], cand_pg[fresh], cand_code[fresh]
            _, first = np.unique(keys, return_index=True)
            first.sort()
            keys, cand_pg, cand_code = keys[first], cand_pg[first], cand_code[first]
            if count + keys.size > guard:
                raise OverflowError(f"group order exceeds guard {guard}")
            lookup[keys] = np.arange(count, count + keys.size)
            count += keys.size
            pg_idx.append(cand_pg)
            codes.append(cand_code)
            frontier = (cand_pg, cand_code)
        self._lookup = lookup
        self._el_pg = np.concatenate(pg_idx)
        self._el_code = np.concatenate(codes)
        self._order = count

    def _product_arrays(self, pa, ca, pb, cb):
        """Products of arrays of elements (pa, ca) with arrays or scalars (pb, cb)."""
        M = self._pg_arr[pb]
        t = np.einsum("...k,...kl->...l", self._reps[ca], M) + self._reps[cb]
        return self._pg_mul[pa, pb], self.lattice.codes(t)

    def _id_of(self, pg: int, code: int) -> int:
        return int(self._lookup[pg * self._nt + code])

    # -- FiniteGroup interface -----------------------------------------------

    @property
    def order(self) -> int:
        return self._order

    @cached_property
    def table(self) -> np.ndarray:
        n = self.order
        if n > 20000:
            raise OverflowError(f"Cayley table of order {n} is too large")
        table = np.empty((n, n), dtype=np.int64)
        cols_pg = self._el_pg[None, :]
        cols_code = self._el_code[None, :]
        step = max(1, 2**20 // n)
        for lo in range(0, n, step):
            rows = slice(lo, min(n, lo + step))
            pg, code = self._product_arrays(
                self._el_pg[rows, None], self._el_code[rows, None], cols_pg, cols_code
            )
            table[rows] = self._lookup[pg * self._nt + code]
        return table

    @cached_property
    def inv(self) -> np.ndarray:
        pinv = self._pg_inv[self._el_pg]
        t = -np.einsum("nk,nkl->nl", self._reps[self._el_code], self._pg_arr[pinv])
        return self._lookup[pinv * self._nt + self.lattice.codes(t)]

    def _mul2(self, x: int, y: int) -> int:
        pg, code = self._product_arrays(self._el_pg[x], self._el_code[x], self._el_pg[y], self._el_code[y])
        return self._id_of(int(pg), int(code))

    def inverse(self, x: int) -> int:
        return int(self.inv[x])

    # -- elements ---------------------------------------------------------------

    def element(self, i: int) -> AffineElem:
        code = int(self._el_code[i])
        return AffineElem(self._pg[self._el_pg[i]], self.lattice.rep_of_code(code))

    @cached_property
    def elements(self) -> tuple[AffineElem, ...]:
        return tuple(self.element(i) for i in range(self.order))

    def index_of(self, a: AffineElem) -> int:
        pg = self._pg_index.get(a.linear)
        if pg is None:
            raise KeyError(f"{a} has a linear part outside the point group")
        i = self._id_of(pg, self.lattice.code(tuple(a.trans)))
        if i < 0:
            raise KeyError(f"{a} is not in the group")
        return i

    @property
    def gens(self) -> tuple[AffineElem, AffineElem, AffineElem]:
        return tuple(self.element(g) for g in self.gen_ids)

    def linear_index(self, i: int) -> int:
        return int(self._el_pg[i])

    def is_translation(self, i: int) -> bool:
        return self._el_pg[i] == 0

    def ops(self) -> _Ops:
        return _Ops(self._mul2, self.inverse, lambda x: x == 0, self.gen_ids)

    def __repr__(self):
        return f"ToroidalGroup({self.family.value}, s={self.s}, order={self.order})"


@lru_cache(maxsize=64)
def _cached_group(family: MapFamily, s: int) -> ToroidalGroup:
    return ToroidalGroup(family, s)


def build_group(family: MapFamily | str, s: int, guard: int = MAX_ORDER) -> ToroidalGroup:
    """Build and verify the map group; results for the default guard are cached."""
    if isinstance(family, str):
        family = MapFamily.parse(family)
    if not isinstance(s, (int, np.integer)) or isinstance(s, bool) or s <= 0:
        raise ValueError("s must be a positive integer")
    if guard == MAX_ORDER:
        G = _cached_group(family, int(s))
    else:
        G = ToroidalGroup(family, int(s), guard)
    if not G.__dict__.get("_verified"):
        bad = [k for k, ok in verify_relations(G).items() if not ok]
        if bad:
            raise GroupConstructionError(f"{family.value} s={s}: relations fail: {bad}")
        G._verified = True
    return G


def verify_relations(G: ToroidalGroup) -> dict[str, bool]:
    """Every relator and relation, evaluated exactly in ``G``."""
    ops = G.ops()
    checks = relation_checks(ops, G.family)
    checks.update(identity_checks(ops, G.family.kind))
    checks["family relator"] = G.word(family_relator(G.family, G.s)) == 0
    return checks


def evaluate_word(G: ToroidalGroup, word: Iterable[int]) -> AffineElem:
    return G.element(G.word(tuple(word)))


@dataclass(frozen=True)
class NamedTranslations:
    """The named translations of a map group, as elements and as element ids.

    ``u, v, t`` belong to the (s,0) families and ``g, h, j`` to the (s,s)
    families, but all six words make sense in every group and are recorded.
    ``T`` is the translation subgroup ``<u, v>`` resp. ``<g, h>``.
    """

    u: AffineElem
    v: AffineElem
    t: AffineElem
    g: AffineElem
    h: AffineElem
    j: AffineElem
    ids: dict
    T: tuple[AffineElem, ...]
    T_ids: np.ndarray

    def __getitem__(self, name: str) -> AffineElem:
        return getattr(self, name)


def named_translation_ids(G: ToroidalGroup) -> dict[str, int]:
    return translation_words(G.ops(), G.family.kind)


def translation_subgroup(G: ToroidalGroup) -> SubgroupHandle:
    ids = named_translation_ids(G)
    gens = (ids["g"], ids["h"]) if G.family.diagonal else (ids["u"], ids["v"])
    return G.subgroup(gens)


def named_translations(G: ToroidalGroup) -> NamedTranslations:
    ids = named_translation_ids(G)
    T = translation_subgroup(G)
    return NamedTranslations(
        **{k: G.element(i) for k, i in ids.items()},
        ids=dict(ids),
        T=tuple(G.element(i) for i in T.members),
        T_ids=T.members,
    )


def lattice_embedding(src: ToroidalGroup, dst: ToroidalGroup) -> np.ndarray:
    """Injective homomorphism ``(M, t) -> (A^-1 M A, t A)`` as an index map.

    ``A`` is the similarity carrying the (s,0) lattice of ``src`` onto the
    lattice of ``dst``; it exists from (s,0) at ``s`` to (s,s) at ``s``, and
    from (s,s) at ``s`` to (s,0) at ``2s`` (square) or ``3s`` (triangular).
    """
    if src.family.kind != dst.family.kind:
        raise ValueError("groups of different kinds")
    A = SKEW_MAP[src.family.kind]
    image_basis = [A.apply(r) for r in src.lattice.basis.rows()]
    if abs(src.lattice.basis.det() * A.det()) != dst.lattice.index or not all(
        dst.lattice.contains(r) for r in image_basis
    ):
        raise ValueError(f"no lattice embedding {src!r} -> {dst!r}")
    det = A.det()
    adj = IntMat2(A.d, -A.b, -A.c, A.a)
    pg_map = []
    for M in src._pg:
        P = adj @ M @ A
        if any(x % det for x in (P.a, P.b, P.c, P.d)):
            raise ValueError("similarity does not normalize the point group")
        pg_map.append(dst._pg_index[IntMat2(P.a // det, P.b // det, P.c // det, P.d // det)])
    pg_map = np.array(pg_map, dtype=np.int64)
    t = src._reps[src._el_code] @ A.to_array()
    out = dst._lookup[pg_map[src._el_pg] * dst._nt + dst.lattice.codes(t)]
    if (out < 0).any():
        raise ValueError("image leaves the target group")
    return out
