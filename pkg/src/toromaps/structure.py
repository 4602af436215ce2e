"""Translation-subgroup structure of faithful transitive actions.

In any transitive action of a map group the orbits of the normal translation
subgroup ``T`` form a block system with ``m`` blocks of size ``k``.  The
checks below compare those numbers with the general constraints:

* on a ``T``-orbit of size ``d`` the two generators of ``T`` act with orders
  ``a, b`` such that ``d = ab``, or ``d = max(a, b)`` with ``min | max``;
* if ``T`` is transitive, the degree is ``s^2``;
* in the (s,s) families ``T`` is never transitive;
* ``m`` divides ``|G| / s^2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .permgroup import CosetActionResult, block_systems
from .toroidal_groups import ToroidalGroup, named_translation_ids


@dataclass(frozen=True)
class OrbitOrders:
    size: int
    a: int
    b: int

    @property
    def dichotomy_ok(self) -> bool:
        lo, hi = sorted((self.a, self.b))
        return self.size == self.a * self.b or (self.size == hi and hi % lo == 0)


@dataclass(frozen=True)
class TranslationStructure:
    degree: int
    k: int
    m: int
    orbits: tuple[OrbitOrders, ...]
    group_order: int
    s: int
    diagonal: bool

    @property
    def transitive(self) -> bool:
        return self.m == 1

    def violations(self) -> list[str]:
        out = []
        if len({o.size for o in self.orbits}) != 1:
            out.append("T-orbits of unequal size")
        for o in self.orbits:
            if not o.dichotomy_ok:
                out.append(f"orbit of size {o.size} with generator orders ({o.a}, {o.b})")
        if self.transitive and self.degree != self.s**2:
            out.append(f"T transitive on {self.degree} points, expected s^2 = {self.s ** 2}")
        if self.transitive and self.diagonal:
            out.append("T transitive in an (s,s) group")
        if (self.group_order // self.s**2) % self.m:
            out.append(f"block count {self.m} does not divide |G|/s^2")
        return out


def _cycle_order_on(perm: np.ndarray, points: np.ndarray) -> int:
    """Order of ``perm`` restricted to the invariant set ``points``."""
    x = points.copy()
    k = 1
    while not np.array_equal(perm[x], points):
        x = perm[x]
        k += 1
    return k


def translation_structure(G: ToroidalGroup, action: CosetActionResult) -> TranslationStructure:
    ids = named_translation_ids(G)
    names = ("g", "h") if G.family.diagonal else ("u", "v")
    imgs = action.images([ids[n] for n in names])
    info = block_systems(action, [action.image(ids[n]) for n in names])
    label = np.asarray(info.blocks)
    orbits = []
    for blk in range(info.m):
        pts = np.flatnonzero(label == blk)
        a = _cycle_order_on(imgs[0], pts)
        b = _cycle_order_on(imgs[1], pts)
        orbits.append(OrbitOrders(len(pts), a, b))
    return TranslationStructure(
        action.degree, info.k, info.m, tuple(orbits), G.order, G.s, G.family.diagonal
    )
