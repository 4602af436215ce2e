"""Hot inner loops over Cayley tables and permutation arrays.

Every kernel exists twice: a loop version compiled with ``numba.njit`` and a
vectorised pure-numpy version.  The numba path is used when numba imports and
the environment variable ``TOROMAPS_DISABLE_NUMBA`` is unset (or ``0``).
Both paths return identical arrays; ``tests/test_kernels.py`` checks this.

Conventions: group elements are row indices of ``table`` with the identity at
index 0 and ``table[x, y]`` the product "x then y".
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

NUMBA_DISABLED = os.environ.get("TOROMAPS_DISABLE_NUMBA", "0") not in ("", "0")
USE_NUMBA = numba is not None and not NUMBA_DISABLED


# ---------------------------------------------------------------------------
# subgroup closure


def _close_loop(table, gens):
    n = table.shape[0]
    mask = np.zeros(n, dtype=np.bool_)
    queue = np.empty(n, dtype=np.int64)
    mask[0] = True
    queue[0] = 0
    head = 0
    tail = 1
    while head < tail:
        x = queue[head]
        head += 1
        for k in range(gens.shape[0]):
            y = table[x, gens[k]]
            if not mask[y]:
                mask[y] = True
                queue[tail] = y
                tail += 1
    return mask


def _close_np(table, gens):
    n = table.shape[0]
    mask = np.zeros(n, dtype=np.bool_)
    mask[0] = True
    frontier = np.zeros(1, dtype=np.int64)
    while frontier.size and gens.size:
        nxt = table[frontier[:, None], gens[None, :]].ravel()
        nxt = np.unique(nxt[~mask[nxt]])
        mask[nxt] = True
        frontier = nxt
    return mask


# ---------------------------------------------------------------------------
# conjugates of a subgroup


def _conjugates_loop(table, inv, members, conjugators):
    n = table.shape[0]
    out = np.zeros((conjugators.shape[0], n), dtype=np.bool_)
    for r in range(conjugators.shape[0]):
        g = conjugators[r]
        gi = inv[g]
        for k in range(members.shape[0]):
            out[r, table[table[gi, members[k]], g]] = True
    return out


def _conjugates_np(table, inv, members, conjugators):
    n = table.shape[0]
    out = np.zeros((conjugators.shape[0], n), dtype=np.bool_)
    left = table[inv[conjugators][:, None], members[None, :]]
    images = table[left, conjugators[:, None]]
    out[np.arange(conjugators.shape[0])[:, None], images] = True
    return out


# ---------------------------------------------------------------------------
# right-coset action, breadth first from the subgroup itself


def _cosets_loop(table, members, gens):
    n = table.shape[0]
    label = np.full(n, -1, dtype=np.int64)
    for k in range(members.shape[0]):
        label[members[k]] = 0
    ncos = n // members.shape[0]
    reps = np.zeros(ncos, dtype=np.int64)
    perms = np.full((gens.shape[0], ncos), -1, dtype=np.int64)
    count = 1
    c = 0
    while c < count:
        r = reps[c]
        for i in range(gens.shape[0]):
            y = table[r, gens[i]]
            if label[y] < 0:
                for k in range(members.shape[0]):
                    label[table[members[k], y]] = count
                reps[count] = y
                count += 1
            perms[i, c] = label[y]
        c += 1
    return label, reps[:count], perms[:, :count]


def _cosets_np(table, members, gens):
    n = table.shape[0]
    label = np.full(n, -1, dtype=np.int64)
    label[members] = 0
    ncos = n // members.shape[0]
    reps = np.zeros(ncos, dtype=np.int64)
    perms = np.full((gens.shape[0], ncos), -1, dtype=np.int64)
    count = 1
    c = 0
    while c < count:
        ys = table[reps[c], gens]
        for i in range(gens.shape[0]):
            y = ys[i]
            if label[y] < 0:
                label[table[members, y]] = count
                reps[count] = y
                count += 1
            perms[i, c] = label[y]
        c += 1
    return label, reps[:count], perms[:, :count]


# ---------------------------------------------------------------------------
# orbits of a set of permutations, labelled by first occurrence


def _orbits_loop(images):
    n = images.shape[1]
    label = np.full(n, -1, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    count = 0
    for start in range(n):
        if label[start] >= 0:
            continue
        label[start] = count
        stack[0] = start
        top = 1
        while top:
            top -= 1
            x = stack[top]
            for k in range(images.shape[0]):
                y = images[k, x]
                if label[y] < 0:
                    label[y] = count
                    stack[top] = y
                    top += 1
        count += 1
    return label


def _orbits_np(images):
    n = images.shape[1]
    label = np.arange(n, dtype=np.int64)
    if images.shape[0]:
        inverses = np.argsort(images, axis=1)
        both = np.concatenate([images, inverses])
        while True:
            new = np.minimum(label, label[both].min(axis=0))
            new = new[new]
            if np.array_equal(new, label):
                break
            label = new
    _, first, inverse = np.unique(label, return_index=True, return_inverse=True)
    rank = np.empty(first.size, dtype=np.int64)
    rank[np.argsort(first)] = np.arange(first.size)
    return rank[inverse.ravel()]


# ---------------------------------------------------------------------------
# dispatch

KERNELS = {
    "close": (_close_loop, _close_np),
    "conjugates": (_conjugates_loop, _conjugates_np),
    "cosets": (_cosets_loop, _cosets_np),
    "orbits": (_orbits_loop, _orbits_np),
}

if numba is not None:
    _jitted = {name: numba.njit(cache=True)(loop) for name, (loop, _) in KERNELS.items()}
else:  # pragma: no cover
    _jitted = {}

numba_impl = dict(_jitted)
numpy_impl = {name: fn for name, (_, fn) in KERNELS.items()}
_active = numba_impl if USE_NUMBA else numpy_impl


def _as_index(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.int64)


def close(table: np.ndarray, gens) -> np.ndarray:
    """Boolean mask of the subgroup generated by element indices ``gens``."""
    return _active["close"](table, _as_index(gens))


def conjugates(table: np.ndarray, inv: np.ndarray, members, conjugators) -> np.ndarray:
    """Row ``r`` is the mask of ``members`` conjugated by ``conjugators[r]``."""
    return _active["conjugates"](table, inv, _as_index(members), _as_index(conjugators))


def cosets(table: np.ndarray, members, gens):
    """Label elements by right coset of ``members``; return (labels, reps, perms)."""
    return _active["cosets"](table, _as_index(members), _as_index(gens))


def orbits(images: np.ndarray) -> np.ndarray:
    """Orbit label of every point under the permutations in the rows of ``images``."""
    images = _as_index(images)
    if images.ndim == 1:
        images = images[None, :]
    return _active["orbits"](images)
