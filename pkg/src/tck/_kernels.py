"""Hot loop of displayed-tree enumeration.

For every choice bitmask the kernel propagates leaf bitsets bottom-up through
the arcs the embedding keeps and returns the sorted distinct bitsets, which
is the cluster system (plus root and singletons) of the displayed tree.

Two interchangeable backends: a numba ``@njit`` loop and a vectorised numpy
version. Set ``TCK_DISABLE_NUMBA=1`` to force numpy, or call
:func:`set_backend`.
"""

from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - exercised implicitly
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

_ONE = np.uint64(1)


def _default_backend() -> str:
    if not HAVE_NUMBA or os.environ.get("TCK_DISABLE_NUMBA", "") not in ("", "0"):
        return "numpy"
    return "numba"


BACKEND = _default_backend()


def set_backend(name: str) -> None:
    global BACKEND
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    BACKEND = name


def clusters_numpy(masks, child, cond, want, leafbit, width):
    masks = np.asarray(masks, dtype=np.uint64)
    nv = child.shape[0]
    reach = np.empty((nv, masks.shape[0]), dtype=np.uint64)
    for i in range(nv):
        acc = np.full(masks.shape[0], leafbit[i], dtype=np.uint64)
        for j in range(2):
            c = child[i, j]
            if c < 0:
                continue
            r = cond[i, j]
            if r < 0:
                acc |= reach[c]
            else:
                on = ((masks >> np.uint64(r)) & _ONE) == np.uint64(want[i, j])
                acc |= np.where(on, reach[c], np.uint64(0))
        reach[i] = acc
    rows = np.sort(reach.T, axis=1)
    keep = np.ones(rows.shape, dtype=bool)
    keep[:, 1:] = rows[:, 1:] != rows[:, :-1]
    if not np.all(keep.sum(axis=1) == width):
        raise AssertionError("embedding did not yield a binary tree")
    return rows[keep].reshape(masks.shape[0], width)


if HAVE_NUMBA:

    @njit(cache=True)
    def _clusters_numba(masks, child, cond, want, leafbit, width):  # pragma: no cover
        m_count = masks.shape[0]
        nv = child.shape[0]
        out = np.zeros((m_count, width), dtype=np.uint64)
        reach = np.empty(nv, dtype=np.uint64)
        s = np.empty(nv, dtype=np.uint64)
        one = np.uint64(1)
        for m in range(m_count):
            mask = masks[m]
            for i in range(nv):
                acc = leafbit[i]
                for j in range(2):
                    c = child[i, j]
                    if c >= 0:
                        r = cond[i, j]
                        if r < 0:
                            acc |= reach[c]
                        elif ((mask >> np.uint64(r)) & one) == np.uint64(want[i, j]):
                            acc |= reach[c]
                reach[i] = acc
            # insertion sort with duplicates dropped; rows are short
            k = 0
            for i in range(nv):
                x = reach[i]
                pos = k
                while pos > 0 and s[pos - 1] > x:
                    pos -= 1
                if pos > 0 and s[pos - 1] == x:
                    continue
                for q in range(k, pos, -1):
                    s[q] = s[q - 1]
                s[pos] = x
                k += 1
            if k == width:
                out[m, :] = s[:width]
            # otherwise the row stays zero, which flags the error
        return out


def cluster_rows(masks, child, cond, want, leafbit, width):
    """Return a (len(masks), width) uint64 array of sorted cluster bitsets."""
    if BACKEND == "numba":
        out = _clusters_numba(
            np.asarray(masks, dtype=np.uint64), child, cond, want, leafbit, width
        )
        if out.shape[0] and not np.all(out[:, 0]):
            raise AssertionError("embedding did not yield a binary tree")
        return out
    return clusters_numpy(masks, child, cond, want, leafbit, width)
