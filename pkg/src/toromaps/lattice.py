"""Integer 2x2 linear algebra and quotients of Z^2 by rank-2 sublattices.

Vectors are rows and matrices act on the right, ``v -> v @ M``.  A
:class:`Sublattice` is spanned by the rows of its basis matrix.  Coset
representatives are computed through the Smith decomposition
``U @ B @ V = diag(d1, d2)``: the map ``v -> v @ V`` sends the sublattice onto
``d1 Z x d2 Z``, so ``(v @ V) mod (d1, d2)`` is a complete invariant of the
coset of ``v``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .family import MapFamily


class DegenerateLatticeError(ValueError):
    pass


@dataclass(frozen=True)
class IntMat2:
    """Row-major integer 2x2 matrix ``[[a, b], [c, d]]``."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def from_rows(cls, r0, r1) -> "IntMat2":
        return cls(int(r0[0]), int(r0[1]), int(r1[0]), int(r1[1]))

    @classmethod
    def identity(cls) -> "IntMat2":
        return cls(1, 0, 0, 1)

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.a, self.b), (self.c, self.d)

    def to_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=np.int64)

    def __matmul__(self, other: "IntMat2") -> "IntMat2":
        return IntMat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def apply(self, v) -> tuple[int, int]:
        """Row vector times matrix."""
        x, y = v
        return (x * self.a + y * self.c, x * self.b + y * self.d)

    def inverse(self) -> "IntMat2":
        """Inverse of a unimodular matrix."""
        det = self.det()
        if det not in (1, -1):
            raise ValueError(f"matrix {self} is not unimodular")
        return IntMat2(self.d * det, -self.b * det, -self.c * det, self.a * det)

    def order(self, limit: int = 24) -> int:
        """Multiplicative order, or 0 when it exceeds ``limit``."""
        ident = IntMat2.identity()
        m = self
        for k in range(1, limit + 1):
            if m == ident:
                return k
            m = m @ self
        return 0


def _smith(basis: IntMat2):
    """Return ``(d1, d2, U, V)`` with ``U @ B @ V = diag(d1, d2)``."""
    if basis.det() == 0:
        raise DegenerateLatticeError("degenerate lattice")
    A = [[basis.a, basis.b], [basis.c, basis.d]]
    U = [[1, 0], [0, 1]]
    V = [[1, 0], [0, 1]]

    def swap_rows(M):
        M[0], M[1] = M[1], M[0]

    def swap_cols(M):
        for row in M:
            row[0], row[1] = row[1], row[0]

    while True:
        # move the smallest nonzero entry to the pivot position
        _, i, j = min((abs(A[i][j]), i, j) for i in range(2) for j in range(2) if A[i][j])
        if i:
            swap_rows(A)
            swap_rows(U)
        if j:
            swap_cols(A)
            swap_cols(V)
        p = A[0][0]
        q = A[1][0] // p
        if q:
            A[1] = [A[1][k] - q * A[0][k] for k in range(2)]
            U[1] = [U[1][k] - q * U[0][k] for k in range(2)]
        q = A[0][1] // p
        if q:
            for M in (A, V):
                for row in M:
                    row[1] -= q * row[0]
        if A[1][0] or A[0][1]:
            continue
        if A[1][1] % p:
            A[0] = [A[0][k] + A[1][k] for k in range(2)]
            U[0] = [U[0][k] + U[1][k] for k in range(2)]
            continue
        break
    for r in range(2):
        if A[r][r] < 0:
            A[r] = [-x for x in A[r]]
            U[r] = [-x for x in U[r]]
    return A[0][0], A[1][1], IntMat2.from_rows(*U), IntMat2.from_rows(*V)


def smith_form(basis: IntMat2) -> tuple[int, int]:
    """Invariant factors ``(d1, d2)`` with ``d1 | d2`` of a nonsingular matrix."""
    d1, d2, _, _ = _smith(basis)
    return d1, d2


@dataclass(frozen=True)
class CosetVec:
    x: int
    y: int

    def __iter__(self):
        yield self.x
        yield self.y


@dataclass(frozen=True)
class Sublattice:
    """Full-rank sublattice of Z^2 spanned by the rows of ``basis``."""

    basis: IntMat2
    d1: int = field(init=False, repr=False, compare=False)
    d2: int = field(init=False, repr=False, compare=False)
    _V: IntMat2 = field(init=False, repr=False, compare=False)
    _Vinv: IntMat2 = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        d1, d2, _, V = _smith(self.basis)
        object.__setattr__(self, "d1", d1)
        object.__setattr__(self, "d2", d2)
        object.__setattr__(self, "_V", V)
        object.__setattr__(self, "_Vinv", V.inverse())

    @classmethod
    def from_rows(cls, r0, r1) -> "Sublattice":
        return cls(IntMat2.from_rows(r0, r1))

    @property
    def index(self) -> int:
        return abs(self.basis.det())

    def coords(self, v) -> tuple[int, int]:
        """Smith coordinates of the coset of ``v`` in ``[0,d1) x [0,d2)``."""
        w = self._V.apply(v)
        return w[0] % self.d1, w[1] % self.d2

    def code(self, v) -> int:
        c0, c1 = self.coords(v)
        return c0 * self.d2 + c1

    def codes(self, vs: np.ndarray) -> np.ndarray:
        """Vectorised :meth:`code` over an array of shape ``(..., 2)``."""
        w = vs @ self._V.to_array()
        return (w[..., 0] % self.d1) * self.d2 + (w[..., 1] % self.d2)

    def rep_of_code(self, code: int) -> CosetVec:
        c = divmod(int(code), self.d2)
        return CosetVec(*self._Vinv.apply(c))

    def rep_array(self) -> np.ndarray:
        """Canonical representatives of all cosets, ordered by code."""
        codes = np.arange(self.index)
        c = np.stack([codes // self.d2, codes % self.d2], axis=1)
        return c @ self._Vinv.to_array()

    def contains(self, v) -> bool:
        return self.code(v) == 0

    def is_invariant(self, M: IntMat2) -> bool:
        """True when ``Lambda @ M == Lambda`` for unimodular ``M``."""
        return all(self.contains(M.apply(r)) for r in self.basis.rows())


def canonical_rep(v, lattice: Sublattice) -> CosetVec:
    return lattice.rep_of_code(lattice.code(v))


def lattice_for(family: MapFamily, s: int) -> Sublattice:
    """Identification lattice of the map of the given family and parameter."""
    if s <= 0:
        raise ValueError("s must be a positive integer")
    if not family.diagonal:
        return Sublattice.from_rows((s, 0), (0, s))
    if family.kind == "44":
        return Sublattice.from_rows((s, s), (-s, s))
    return Sublattice.from_rows((s, s), (-s, 2 * s))
