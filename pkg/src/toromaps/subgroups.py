"""All subgroups up to conjugacy, and the set of faithful transitive degrees.

Subgroups are found by cyclic extension: starting from the trivial group,
each class representative ``H`` is extended by every element ``x`` of its
normalizer whose image in ``N(H)/H`` has prime order.  Every subgroup of a
solvable group has a subnormal series with cyclic factors of prime order,
so this reaches every subgroup; all map groups here are solvable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .family import MapFamily
from .permgroup import FiniteGroup, SubgroupHandle

DEFAULT_GUARD = 600
HARD_GUARD = 2000
GUARD_ENV = "TOROMAPS_ORACLE_GUARD"


class OracleGuardError(OverflowError):
    pass


def oracle_guard(override: int | None = None) -> int:
    """Effective guard: explicit override, else the environment, else the default."""
    if override is None:
        env = os.environ.get(GUARD_ENV)
        override = int(env) if env else DEFAULT_GUARD
    if override < 1 or override > HARD_GUARD:
        raise ValueError(f"oracle guard must lie in [1, {HARD_GUARD}]")
    return override


def _is_prime(k: int) -> bool:
    return k > 1 and all(k % p for p in range(2, int(k**0.5) + 1))


@dataclass(frozen=True, eq=False)
class SubgroupClass:
    representative: SubgroupHandle
    core_free: bool
    class_size: int

    @property
    def order(self) -> int:
        return self.representative.order

    @property
    def index(self) -> int:
        return self.representative.index

    @property
    def normalizer_order(self) -> int:
        return self.representative.parent.order // self.class_size

    def __repr__(self):
        return (
            f"SubgroupClass(order={self.order}, index={self.index}, "
            f"core_free={self.core_free}, conjugates={self.class_size})"
        )


def _conjugate_masks(G: FiniteGroup, members: np.ndarray) -> np.ndarray:
    return _kernels.conjugates(G.table, G.inv, members, np.arange(G.order))


def _orders_mod(table: np.ndarray, mask: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Smallest ``k >= 1`` with ``x^k`` in the subgroup ``mask``, for each ``x``."""
    orders = np.zeros(xs.size, dtype=np.int64)
    y = xs.copy()
    k = 1
    while (orders == 0).any():
        hit = (orders == 0) & mask[y]
        orders[hit] = k
        y = table[y, xs]
        k += 1
    return orders


def all_subgroups(G: FiniteGroup, guard: int | None = None) -> list[SubgroupClass]:
    """One representative per conjugacy class of subgroups, ordered by BFS layer."""
    guard = oracle_guard(guard)
    if G.order > guard:
        raise OracleGuardError(f"group order {G.order} exceeds oracle guard {guard}")
    table = G.table
    n = G.order
    seen: set[bytes] = set()
    classes: list[SubgroupClass] = []

    def register(members: np.ndarray, gens: tuple[int, ...]) -> SubgroupClass | None:
        own = np.zeros(n, dtype=bool)
        own[members] = True
        if np.packbits(own).tobytes() in seen:
            return None
        masks = _conjugate_masks(G, members)
        distinct = np.unique(masks, axis=0)
        keys = [np.packbits(row).tobytes() for row in distinct]
        seen.update(keys)
        core_free = int(masks.all(axis=0).sum()) == 1
        cls = SubgroupClass(SubgroupHandle(G, members, gens), core_free, len(keys))
        classes.append(cls)
        return cls

    layer = [register(np.zeros(1, dtype=np.int64), ())]
    while layer:
        nxt = []
        for cls in layer:
            H = cls.representative
            masks = _conjugate_masks(G, H.members)
            normalizer = np.flatnonzero((masks == H.mask).all(axis=1))
            cand = normalizer[~H.mask[normalizer]]
            if cand.size == 0:
                continue
            orders = _orders_mod(table, H.mask, cand)
            covered = H.mask.copy()
            for x, k in zip(cand.tolist(), orders.tolist()):
                if covered[x] or not _is_prime(k):
                    continue
                # K = H <x> is the union of the cosets H x^i, i < k
                powers = [0]
                for _ in range(k - 1):
                    powers.append(int(table[powers[-1], x]))
                members = table[H.members[:, None], np.array(powers)[None, :]].ravel()
                members.sort()
                covered[members] = True
                new = register(members, H.gens + (x,))
                if new is not None:
                    nxt.append(new)
        layer = nxt
    if sum(c.class_size for c in classes) == 0 or classes[0].order != 1:
        raise AssertionError("enumeration lost the trivial subgroup")
    return classes


@dataclass(frozen=True)
class OracleResult:
    family: MapFamily | None
    s: int | None
    degrees: tuple[int, ...]
    witnesses: dict = field(repr=False)
    classes: tuple = field(repr=False, default=())


def degree_oracle(G: FiniteGroup, guard: int | None = None) -> OracleResult:
    """Indexes of all core-free subgroups, each with one witness class."""
    classes = all_subgroups(G, guard)
    witnesses: dict[int, SubgroupClass] = {}
    for cls in classes:
        if cls.core_free and cls.index not in witnesses:
            witnesses[cls.index] = cls
    degrees = tuple(sorted(witnesses))
    if degrees[-1] != G.order or any(G.order % d for d in degrees):
        raise AssertionError("oracle degrees inconsistent with the group order")
    return OracleResult(
        getattr(G, "family", None),
        getattr(G, "s", None),
        degrees,
        {d: witnesses[d] for d in degrees},
        tuple(classes),
    )
