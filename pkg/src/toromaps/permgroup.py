"""Small finite groups: permutations, Cayley-table groups, subgroups and coset actions.

Products are read left to right: ``a * b`` means "apply ``a``, then ``b``",
and points are acted on from the right.  A :class:`FiniteGroup` is a Cayley
table whose index 0 is the identity; a subgroup is a sorted array of element
indices of its parent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _kernels

MAX_ORDER = 10**6


class NotASubgroupError(ValueError):
    pass


class BlockSystemError(ValueError):
    pass


class Perm:
    """Permutation of ``{0, ..., n-1}`` stored as its image sequence."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        self.images = images

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(range(n))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> "Perm":
        images = list(range(n))
        for cyc in cycles:
            for i, x in enumerate(cyc):
                images[x] = cyc[(i + 1) % len(cyc)]
        return cls(images)

    @classmethod
    def _trusted(cls, images) -> "Perm":
        p = cls.__new__(cls)
        p.images = tuple(int(i) for i in images)
        return p

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Perm") -> "Perm":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        o = other.images
        return Perm._trusted(o[x] for x in self.images)

    def __pow__(self, k: int) -> "Perm":
        base = self if k >= 0 else self.inverse()
        result = Perm.identity(self.degree)
        for _ in range(abs(k)):
            result = result * base
        return result

    def inverse(self) -> "Perm":
        inv = [0] * self.degree
        for x, y in enumerate(self.images):
            inv[y] = x
        return Perm._trusted(inv)

    def is_identity(self) -> bool:
        return all(x == y for x, y in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(self.degree):
            if start in seen or self.images[start] == start:
                continue
            cyc = [start]
            seen.add(start)
            x = self.images[start]
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self.images[x]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        from math import lcm

        return lcm(1, *(len(c) for c in self.cycles()))

    def array(self) -> np.ndarray:
        return np.array(self.images, dtype=np.int64)

    def __eq__(self, other):
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        cyc = "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles())
        return f"Perm({cyc or '()'}, n={self.degree})"


def _perm_arrays(gens: Sequence[Perm]) -> np.ndarray:
    degrees = {g.degree for g in gens}
    if len(degrees) > 1:
        raise ValueError("degree mismatch")
    n = degrees.pop() if degrees else 0
    return np.array([g.images for g in gens], dtype=np.int64).reshape(len(gens), n)


def _closure_arrays(gens: np.ndarray, n: int, limit: int) -> np.ndarray:
    """All products of the generator rows, identity first, breadth first."""
    ident = np.arange(n, dtype=np.int64)
    elements = [ident]
    seen = {ident.tobytes()}
    head = 0
    while head < len(elements):
        x = elements[head]
        head += 1
        for g in gens:
            y = g[x]
            key = y.tobytes()
            if key not in seen:
                if len(elements) >= limit:
                    raise OverflowError(f"group order exceeds {limit}")
                seen.add(key)
                elements.append(y)
    return np.array(elements, dtype=np.int64).reshape(len(elements), n)


def closure(gens: Sequence[Perm], n: int | None = None, limit: int = MAX_ORDER) -> list[Perm]:
    """Every element of the group generated by ``gens`` (identity first)."""
    arr = _perm_arrays(gens)
    if n is None:
        n = arr.shape[1] if len(gens) else 1
    elif len(gens) and arr.shape[1] != n:
        raise ValueError("degree mismatch")
    return [Perm._trusted(row) for row in _closure_arrays(arr, n, limit)]


def group_order(gens: Sequence[Perm], limit: int = MAX_ORDER) -> int:
    """Order of ``<gens>`` by enumeration; ``OverflowError`` past ``limit``."""
    arr = _perm_arrays(gens)
    n = arr.shape[1] if len(gens) else 1
    return len(_closure_arrays(arr, n, limit))


def orbits(gens: Sequence[Perm], n: int) -> list[list[int]]:
    """Orbits of ``<gens>`` on ``range(n)``, each sorted, ordered by smallest point."""
    arr = _perm_arrays(gens) if gens else np.empty((0, n), dtype=np.int64)
    if arr.shape[1] != n:
        raise ValueError("degree mismatch")
    label = _kernels.orbits(arr)
    out: dict[int, list[int]] = {}
    for x, lab in enumerate(label):
        out.setdefault(int(lab), []).append(x)
    return [out[k] for k in sorted(out)]


class FiniteGroup:
    """A finite group presented by its Cayley table.

    ``gen_ids`` are the element indices of the distinguished generators
    (for the map groups: rho0, rho1, rho2).
    """

    def __init__(self, table: np.ndarray, gen_ids: Sequence[int]):
        table = np.ascontiguousarray(table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise ValueError("Cayley table must be square")
        if not np.array_equal(table[0], np.arange(table.shape[0])):
            raise ValueError("index 0 must be the identity")
        self._table = table
        self.gen_ids = tuple(int(g) for g in gen_ids)

    @property
    def table(self) -> np.ndarray:
        return self._table

    @property
    def order(self) -> int:
        return self.table.shape[0]

    @cached_property
    def inv(self) -> np.ndarray:
        return np.argmax(self.table == 0, axis=1).astype(np.int64)

    def _mul2(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def mul(self, *xs: int) -> int:
        out = 0
        for x in xs:
            out = self._mul2(out, int(x))
        return out

    def inverse(self, x: int) -> int:
        return int(self.inv[x])

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inverse(x), -k
        out, base = 0, int(x)
        while k:
            if k & 1:
                out = self._mul2(out, base)
            base = self._mul2(base, base)
            k >>= 1
        return out

    def conj(self, x: int, y: int) -> int:
        """``x^y = y^-1 x y``."""
        return self.mul(self.inverse(y), x, y)

    def element_order(self, x: int) -> int:
        k, y = 1, int(x)
        while y != 0:
            y = self._mul2(y, x)
            k += 1
        return k

    def word(self, letters: Iterable[int]) -> int:
        out = 0
        for letter in letters:
            if letter not in range(len(self.gen_ids)) or isinstance(letter, bool):
                raise ValueError(f"bad letter {letter!r}")
            out = self._mul2(out, self.gen_ids[letter])
        return out

    def subgroup(self, gens: Iterable[int]) -> "SubgroupHandle":
        gens = tuple(int(g) for g in gens)
        mask = _kernels.close(self.table, np.array(gens, dtype=np.int64))
        return SubgroupHandle(self, np.flatnonzero(mask), gens)

    def whole(self) -> "SubgroupHandle":
        return SubgroupHandle(self, np.arange(self.order), self.gen_ids)

    def trivial(self) -> "SubgroupHandle":
        return SubgroupHandle(self, np.zeros(1, dtype=np.int64), ())

    def regular_perms(self) -> tuple[Perm, ...]:
        """Right regular representation of the distinguished generators."""
        return tuple(Perm._trusted(self.table[:, g]) for g in self.gen_ids)


class PermGroup(FiniteGroup):
    """Group generated by permutations, with its elements enumerated.

    Elements are indexed breadth first from the identity; the Cayley table
    is built on first access.
    """

    def __init__(self, gens: Sequence[Perm], n: int | None = None, limit: int = MAX_ORDER):
        arr = _perm_arrays(gens)
        if n is None:
            n = arr.shape[1] if len(gens) else 1
        self.degree = n
        self.elements = _closure_arrays(arr, n, limit)
        self._keys, self._base = _base_keys(self.elements)
        self._sorter = np.argsort(self._keys)
        self.gen_ids = tuple(self.index(g) for g in gens)

    @property
    def order(self) -> int:
        return self.elements.shape[0]

    @cached_property
    def table(self) -> np.ndarray:
        E = self.elements
        table = np.empty((len(E), len(E)), dtype=np.int64)
        for i, x in enumerate(E):
            table[i] = self._lookup_keys(_keys_of(E[:, x[self._base]], self.degree))
        return table

    @cached_property
    def inv(self) -> np.ndarray:
        inverses = np.argsort(self.elements, axis=1)
        return self._lookup_keys(_keys_of(inverses[:, self._base], self.degree))

    def _mul2(self, x: int, y: int) -> int:
        prod = self.elements[y][self.elements[x][self._base]]
        return int(self._lookup_keys(_keys_of(prod[None, :], self.degree))[0])

    def _lookup_keys(self, keys: np.ndarray) -> np.ndarray:
        pos = np.searchsorted(self._keys, keys, sorter=self._sorter)
        return self._sorter[pos]

    def index(self, p: Perm) -> int:
        arr = np.array(p.images, dtype=np.int64)
        i = int(self._lookup_keys(_keys_of(arr[None, self._base], self.degree))[0])
        if not np.array_equal(self.elements[i], arr):
            raise KeyError(f"{p} is not in the group")
        return i

    def perm(self, i: int) -> Perm:
        return Perm._trusted(self.elements[i])


def _keys_of(base_images: np.ndarray, n: int) -> np.ndarray:
    keys = np.zeros(base_images.shape[0], dtype=np.int64)
    for col in base_images.T:
        keys = keys * n + col
    return keys


def _base_keys(elements: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Pick base points whose images separate all elements; return packed keys."""
    k, n = elements.shape
    base: list[int] = []
    keys = np.zeros(k, dtype=np.int64)
    limit = 2**62
    span = 1
    for p in range(n):
        if np.unique(keys).size == k:
            break
        col = elements[:, p]
        if np.all(col == col[0]):
            continue
        if span * n >= limit:
            raise OverflowError("base too long for packed keys")
        base.append(p)
        keys = keys * n + col
        span *= n
    return keys, base


@dataclass(frozen=True, eq=False)
class SubgroupHandle:
    parent: FiniteGroup
    members: np.ndarray
    gens: tuple[int, ...] = ()

    def __post_init__(self):
        m = np.unique(np.asarray(self.members, dtype=np.int64))
        m.flags.writeable = False
        object.__setattr__(self, "members", m)

    @property
    def order(self) -> int:
        return int(self.members.size)

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    @cached_property
    def mask(self) -> np.ndarray:
        mask = np.zeros(self.parent.order, dtype=bool)
        mask[self.members] = True
        return mask

    @cached_property
    def key(self) -> bytes:
        return np.packbits(self.mask).tobytes()

    def __contains__(self, x: int) -> bool:
        return bool(self.mask[x])

    def is_trivial(self) -> bool:
        return self.order == 1

    def __eq__(self, other):
        return (
            isinstance(other, SubgroupHandle)
            and other.parent is self.parent
            and np.array_equal(other.members, self.members)
        )

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"SubgroupHandle(order={self.order}, index={self.index})"


def subgroup_from_members(G: FiniteGroup, members: Iterable[int]) -> SubgroupHandle:
    H = SubgroupHandle(G, np.fromiter(members, dtype=np.int64))
    check_subgroup(H)
    return H


def check_subgroup(H: SubgroupHandle) -> None:
    G = H.parent
    m = H.members
    if m.size == 0 or m[0] != 0:
        raise NotASubgroupError("subset does not contain the identity")
    if not H.mask[G.table[np.ix_(m, m)]].all():
        raise NotASubgroupError("subset is not closed under multiplication")


def conjugate(H: SubgroupHandle, g: int) -> SubgroupHandle:
    """``H^g = g^-1 H g``."""
    G = H.parent
    row = _kernels.conjugates(G.table, G.inv, H.members, np.array([g]))[0]
    gens = tuple(G.conj(x, g) for x in H.gens)
    return SubgroupHandle(G, np.flatnonzero(row), gens)


def all_conjugate_masks(H: SubgroupHandle) -> np.ndarray:
    G = H.parent
    return _kernels.conjugates(G.table, G.inv, H.members, np.arange(G.order))


def are_conjugate(H: SubgroupHandle, K: SubgroupHandle) -> bool:
    """Exhaustive test over every element of the parent group."""
    if H.parent is not K.parent or H.order != K.order:
        return False
    return bool((all_conjugate_masks(H) == K.mask).all(axis=1).any())


def subgroup_core(G: FiniteGroup, H: SubgroupHandle) -> SubgroupHandle:
    """Largest normal subgroup of ``G`` inside ``H``: the intersection of all conjugates."""
    if H.parent is not G:
        raise NotASubgroupError("subgroup belongs to a different group")
    check_subgroup(H)
    core = all_conjugate_masks(H).all(axis=0)
    return SubgroupHandle(G, np.flatnonzero(core))


def is_core_free(G: FiniteGroup, H: SubgroupHandle) -> bool:
    return subgroup_core(G, H).is_trivial()


def subgroup_intersection(A: SubgroupHandle, B: SubgroupHandle) -> SubgroupHandle:
    if A.parent is not B.parent:
        raise ValueError("subgroups of different groups")
    return SubgroupHandle(A.parent, np.intersect1d(A.members, B.members))


@dataclass(frozen=True, eq=False)
class CosetActionResult:
    """Transitive action of ``group`` on the right cosets of ``stabilizer``.

    Point 0 is the subgroup itself; further cosets are numbered breadth first
    through the distinguished generators in order.
    """

    group: FiniteGroup
    stabilizer: SubgroupHandle
    generators: tuple[Perm, ...]
    labels: np.ndarray = field(repr=False)
    reps: np.ndarray = field(repr=False)

    @property
    def degree(self) -> int:
        return len(self.reps)

    def image(self, x: int) -> Perm:
        """Permutation by which element ``x`` acts on the cosets."""
        return Perm._trusted(self.labels[self.group.table[self.reps, x]])

    def images(self, xs: Sequence[int]) -> np.ndarray:
        tab = self.group.table
        return np.array([self.labels[tab[self.reps, x]] for x in xs], dtype=np.int64).reshape(
            len(xs), self.degree
        )

    def kernel(self) -> SubgroupHandle:
        act = self.labels[self.group.table[self.reps, :]]
        fixed = (act == np.arange(self.degree)[:, None]).all(axis=0)
        return SubgroupHandle(self.group, np.flatnonzero(fixed))

    def is_faithful(self) -> bool:
        return self.kernel().is_trivial()

    def point_stabilizer(self, point: int = 0) -> SubgroupHandle:
        act = self.labels[self.group.table[self.reps[point], :]]
        return SubgroupHandle(self.group, np.flatnonzero(act == point))


def coset_action(G: FiniteGroup, H: SubgroupHandle) -> CosetActionResult:
    if H.parent is not G:
        raise NotASubgroupError("subgroup belongs to a different group")
    check_subgroup(H)
    labels, reps, perms = _kernels.cosets(G.table, H.members, np.array(G.gen_ids))
    if len(reps) * H.order != G.order:
        raise ValueError("distinguished generators do not generate the group")
    gens = tuple(Perm._trusted(row) for row in perms)
    return CosetActionResult(G, H, gens, labels, reps)


@dataclass(frozen=True)
class BlockSystemInfo:
    k: int
    m: int
    blocks: tuple[int, ...]


def _generator_arrays(action) -> np.ndarray:
    gens = action.generators if hasattr(action, "generators") else action
    return _perm_arrays(list(gens))


def block_systems(action, subgroup_images: Sequence[Perm]) -> BlockSystemInfo:
    """Check that the orbits of ``subgroup_images`` form a block system of ``action``."""
    gens = _generator_arrays(action)
    n = gens.shape[1]
    sub = _perm_arrays(list(subgroup_images)) if subgroup_images else np.empty((0, n), np.int64)
    if sub.shape[1] != n:
        raise ValueError("degree mismatch")
    label = _kernels.orbits(sub)
    m = int(label.max()) + 1
    sizes = np.bincount(label, minlength=m)
    if not np.all(sizes == sizes[0]):
        raise BlockSystemError(f"orbits of unequal sizes {sorted(set(sizes.tolist()))}")
    for g in gens:
        image_label = label[g]
        # every block must land inside a single block
        first = np.full(m, -1, dtype=np.int64)
        first[label[::-1]] = image_label[::-1]
        if not np.array_equal(first[label], image_label):
            raise BlockSystemError("orbit partition is not preserved by the group")
    return BlockSystemInfo(int(sizes[0]), m, tuple(int(x) for x in label))


def is_transitive(action) -> bool:
    gens = _generator_arrays(action)
    return bool(_kernels.orbits(gens).max() == 0) if gens.shape[1] else True


def _extend(A: np.ndarray, B: np.ndarray, phi: np.ndarray, used: np.ndarray, start: int, target: int):
    """Propagate ``start -> target`` along the generators; None on conflict."""
    phi = phi.copy()
    used = used.copy()
    if used[target]:
        return None
    phi[start] = target
    used[target] = True
    stack = [start]
    while stack:
        x = stack.pop()
        fx = phi[x]
        for a, b in zip(A, B):
            y, fy = a[x], b[fx]
            if phi[y] < 0:
                if used[fy]:
                    return None
                phi[y] = fy
                used[fy] = True
                stack.append(y)
            elif phi[y] != fy:
                return None
    return phi, used


def equivalence_map(a, b) -> np.ndarray | None:
    """A point bijection intertwining two actions generator by generator, or None."""
    A = _generator_arrays(a)
    B = _generator_arrays(b)
    if A.shape != B.shape:
        return None
    n = A.shape[1]

    def search(phi, used):
        unmapped = np.flatnonzero(phi < 0)
        if unmapped.size == 0:
            return phi
        start = int(unmapped[0])
        for target in np.flatnonzero(~used):
            step = _extend(A, B, phi, used, start, int(target))
            if step is not None:
                found = search(*step)
                if found is not None:
                    return found
        return None

    return search(np.full(n, -1, dtype=np.int64), np.zeros(n, dtype=bool))


def actions_equivalent(a, b, use_stabilizers: bool = False) -> bool:
    """True iff some bijection carries generator ``i`` of ``a`` onto generator ``i`` of ``b``.

    ``a`` and ``b`` are coset actions or sequences of permutations.  With
    ``use_stabilizers`` and two coset actions of the same group, the answer is
    read off from conjugacy of the point stabilizers instead.
    """
    if (
        use_stabilizers
        and isinstance(a, CosetActionResult)
        and isinstance(b, CosetActionResult)
        and a.group is b.group
    ):
        return are_conjugate(a.stabilizer, b.stabilizer)
    return equivalence_map(a, b) is not None
