"""Hot integer kernels over multiplication tables.

Every kernel exists twice: a numba ``@njit`` loop version and a vectorised
pure-numpy version.  The backend is picked once at import time from the
``NORMCAT_BACKEND`` environment variable (``numba`` or ``numpy``); when it is
unset numba is used if it imports.  Both versions return identical arrays,
which ``tests/test_kernels.py`` and ``benchmarks/bench_kernels.py`` rely on.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

_requested = os.environ.get("NORMCAT_BACKEND", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise RuntimeError(f"NORMCAT_BACKEND must be 'numba' or 'numpy', got {_requested!r}")
BACKEND = "numpy" if (_requested == "numpy" or not HAVE_NUMBA) else "numba"

# rows of candidate tuples materialised at once by the numpy hom search
_CHUNK = 1 << 15


# --------------------------------------------------------------------------
# numpy implementations
# --------------------------------------------------------------------------


def _assoc_numpy(table: np.ndarray) -> bool:
    left = table[table, :]  # left[a, b, c] = (a*b)*c
    right = table[:, table]  # right[a, b, c] = a*(b*c)
    return bool(np.array_equal(left, right))


def _hom_search_numpy(src, gens, child, parent, slot, tgt, cand, ncand):
    g = len(gens)
    n = src.shape[0]
    total = 1
    for j in range(g):
        total *= int(ncand[j])
    if total == 0:
        return np.empty((0, n), dtype=np.int32)
    out = []
    radices = ncand[:g].astype(np.int64)
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        imgs = np.empty((len(idx), g), dtype=np.int32)
        rem = idx
        for j in range(g - 1, -1, -1):
            imgs[:, j] = cand[j][rem % radices[j]]
            rem = rem // radices[j]
        maps = np.zeros((len(idx), n), dtype=np.int32)
        for c, p, s in zip(child, parent, slot):
            maps[:, c] = tgt[maps[:, p], imgs[:, s]]
        ok = np.ones(len(idx), dtype=bool)
        for j in range(g):
            lhs = maps[:, src[:, gens[j]]]
            rhs = tgt[maps, imgs[:, j : j + 1]]
            ok &= np.all(lhs == rhs, axis=1)
        out.append(maps[ok])
    return np.concatenate(out, axis=0) if out else np.empty((0, n), dtype=np.int32)


def _hom_check_numpy(src, gens, tgt, maps):
    ok = np.ones(maps.shape[0], dtype=bool)
    for g in gens:
        lhs = maps[:, src[:, g]]
        rhs = tgt[maps, maps[:, g : g + 1]]
        ok &= np.all(lhs == rhs, axis=1)
    return ok


def _normalizer_scan_numpy(table, inv, members, elems):
    # conj[t, i] = t * u_i * t^-1
    conj = table[table[:, elems], inv[:, None]]
    return np.all(members[conj], axis=1)


def _centralizer_scan_numpy(table, elems):
    return np.all(table[:, elems] == table[elems, :].T, axis=1)


# --------------------------------------------------------------------------
# numba implementations
# --------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _assoc_numba(table):
        n = table.shape[0]
        for a in range(n):
            for b in range(n):
                ab = table[a, b]
                for c in range(n):
                    if table[ab, c] != table[a, table[b, c]]:
                        return False
        return True

    @njit(cache=True)
    def _hom_search_pass(src, gens, child, parent, slot, tgt, cand, ncand, out, fill):
        g = gens.shape[0]
        n = src.shape[0]
        counter = np.zeros(g, dtype=np.int64)
        imgs = np.empty(g, dtype=np.int32)
        m = np.zeros(n, dtype=np.int32)
        found = 0
        while True:
            for j in range(g):
                imgs[j] = cand[j, counter[j]]
            m[0] = 0
            for e in range(child.shape[0]):
                m[child[e]] = tgt[m[parent[e]], imgs[slot[e]]]
            ok = True
            for j in range(g):
                gj = gens[j]
                ij = imgs[j]
                for x in range(n):
                    if m[src[x, gj]] != tgt[m[x], ij]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                if fill:
                    out[found, :] = m
                found += 1
            # mixed-radix increment, last generator fastest
            j = g - 1
            while j >= 0:
                counter[j] += 1
                if counter[j] < ncand[j]:
                    break
                counter[j] = 0
                j -= 1
            if j < 0:
                break
        return found

    def _hom_search_numba(src, gens, child, parent, slot, tgt, cand, ncand):
        n = src.shape[0]
        if np.any(ncand == 0):
            return np.empty((0, n), dtype=np.int32)
        dummy = np.empty((0, n), dtype=np.int32)
        count = _hom_search_pass(src, gens, child, parent, slot, tgt, cand, ncand, dummy, False)
        out = np.empty((count, n), dtype=np.int32)
        _hom_search_pass(src, gens, child, parent, slot, tgt, cand, ncand, out, True)
        return out

    @njit(cache=True)
    def _hom_check_numba(src, gens, tgt, maps):
        p, n = maps.shape
        ok = np.ones(p, dtype=np.bool_)
        for r in range(p):
            for gj in gens:
                ij = maps[r, gj]
                for x in range(n):
                    if maps[r, src[x, gj]] != tgt[maps[r, x], ij]:
                        ok[r] = False
                        break
                if not ok[r]:
                    break
        return ok

    @njit(cache=True)
    def _normalizer_scan_numba(table, inv, members, elems):
        n = table.shape[0]
        res = np.ones(n, dtype=np.bool_)
        for t in range(n):
            ti = inv[t]
            for u in elems:
                if not members[table[table[t, u], ti]]:
                    res[t] = False
                    break
        return res

    @njit(cache=True)
    def _centralizer_scan_numba(table, elems):
        n = table.shape[0]
        res = np.ones(n, dtype=np.bool_)
        for t in range(n):
            for u in elems:
                if table[t, u] != table[u, t]:
                    res[t] = False
                    break
        return res


IMPLEMENTATIONS = {
    "numpy": {
        "is_associative": _assoc_numpy,
        "hom_search": _hom_search_numpy,
        "hom_check": _hom_check_numpy,
        "normalizer_scan": _normalizer_scan_numpy,
        "centralizer_scan": _centralizer_scan_numpy,
    }
}
if HAVE_NUMBA:
    IMPLEMENTATIONS["numba"] = {
        "is_associative": _assoc_numba,
        "hom_search": _hom_search_numba,
        "hom_check": _hom_check_numba,
        "normalizer_scan": _normalizer_scan_numba,
        "centralizer_scan": _centralizer_scan_numba,
    }

_active = IMPLEMENTATIONS[BACKEND]


def is_associative(table: np.ndarray) -> bool:
    return bool(_active["is_associative"](table))


def hom_search(src, gens, child, parent, slot, tgt, cand, ncand) -> np.ndarray:
    """All maps sending ``gens[j]`` to some ``cand[j, :ncand[j]]`` that are homs.

    ``(child, parent, slot)`` is a spanning tree of the Cayley graph of the
    source rooted at the identity: ``map[child] = map[parent] * img[slot]``.
    """
    return _active["hom_search"](src, gens, child, parent, slot, tgt, cand, ncand)


def hom_check(src, gens, tgt, maps) -> np.ndarray:
    """Row mask of ``maps`` that respect products with every generator."""
    if maps.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    return _active["hom_check"](src, gens, tgt, np.ascontiguousarray(maps, dtype=np.int32))


def normalizer_scan(table, inv, members, elems) -> np.ndarray:
    return _active["normalizer_scan"](table, inv, members, elems)


def centralizer_scan(table, elems) -> np.ndarray:
    return _active["centralizer_scan"](table, elems)
