"""Exact minimum-shadow enumeration kernels.

For one level with n elements and per-element shadow bitmasks, compute
for every cardinality q the minimum popcount of the OR over all
q-subsets, plus the first subset (in ascending binary order) achieving
it.  This is the hot loop of the whole package: 2^n subsets per level.

Backend is chosen by the MACPOSET_BACKEND environment variable:
"numba" (default when importable), or "numpy" for the pure-numpy
fallback.  Both return identical results.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

_FORCED = None

# meet-in-the-middle: subsets split into low/high halves so each OR is
# one table lookup per half instead of a walk over members


def backend() -> str:
    if _FORCED is not None:
        return _FORCED
    env = os.environ.get("MACPOSET_BACKEND", "").strip().lower()
    if env in ("numba", "numpy"):
        if env == "numba" and not HAVE_NUMBA:
            raise RuntimeError("MACPOSET_BACKEND=numba but numba is not importable")
        return env
    return "numba" if HAVE_NUMBA else "numpy"


def set_backend(name: str | None):
    """Force a backend (tests/benchmarks); None restores env selection."""
    global _FORCED
    if name not in (None, "numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    _FORCED = name


def _half_tables_np(masks: np.ndarray, lo_bits: int, hi_bits: int):
    n, w = masks.shape
    lo = np.zeros((1 << lo_bits, w), dtype=np.uint64)
    for s in range(1, 1 << lo_bits):
        low = s & -s
        lo[s] = lo[s ^ low] | masks[low.bit_length() - 1]
    hi = np.zeros((1 << hi_bits, w), dtype=np.uint64)
    for s in range(1, 1 << hi_bits):
        low = s & -s
        hi[s] = hi[s ^ low] | masks[lo_bits + low.bit_length() - 1]
    return lo, hi


def _min_shadows_numpy(masks: np.ndarray):
    n, w = masks.shape
    mins = np.full(n + 1, np.iinfo(np.int64).max, dtype=np.int64)
    argm = np.zeros(n + 1, dtype=np.int64)
    mins[0] = 0
    if n == 0:
        return mins, argm
    lo_bits = (n + 1) // 2
    hi_bits = n - lo_bits
    lo, hi = _half_tables_np(masks, lo_bits, hi_bits)
    lo_pc = np.bitwise_count(np.arange(1 << lo_bits, dtype=np.uint64)).astype(np.int64)
    lo_sz = np.bitwise_count(lo).sum(axis=1).astype(np.int64)
    for s_hi in range(1 << hi_bits):
        if w == 1:
            ors = lo[:, 0] | hi[s_hi, 0]
            sizes = np.bitwise_count(ors).astype(np.int64)
        else:
            ors = lo | hi[s_hi]
            sizes = np.bitwise_count(ors).sum(axis=1).astype(np.int64)
        cards = lo_pc + int(s_hi).bit_count()
        for c in np.unique(cards):
            sel = cards == c
            m = sizes[sel].min()
            if m < mins[c]:
                mins[c] = m
                first = np.flatnonzero(sel & (sizes == m))[0]
                argm[c] = (s_hi << lo_bits) | int(first)
    return mins, argm


if HAVE_NUMBA:

    @numba.njit(cache=True, nogil=True)
    def _popcount64(x):
        x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
        x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
        x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
        return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)

    @numba.njit(cache=True, nogil=True)
    def _min_shadows_numba(masks):
        n, w = masks.shape
        mins = np.full(n + 1, np.int64(2**62), dtype=np.int64)
        argm = np.zeros(n + 1, dtype=np.int64)
        mins[0] = 0
        if n == 0:
            return mins, argm
        lo_bits = (n + 1) // 2
        hi_bits = n - lo_bits
        lo = np.zeros(((1 << lo_bits), w), dtype=np.uint64)
        for s in range(1, 1 << lo_bits):
            low = s & -s
            idx = 0
            t = low
            while t > 1:
                t >>= 1
                idx += 1
            for k in range(w):
                lo[s, k] = lo[s ^ low, k] | masks[idx, k]
        hi = np.zeros(((1 << hi_bits), w), dtype=np.uint64)
        for s in range(1, 1 << hi_bits):
            low = s & -s
            idx = 0
            t = low
            while t > 1:
                t >>= 1
                idx += 1
            for k in range(w):
                hi[s, k] = hi[s ^ low, k] | masks[lo_bits + idx, k]
        lo_pc = np.zeros(1 << lo_bits, dtype=np.int64)
        for s in range(1 << lo_bits):
            lo_pc[s] = np.int64(_popcount64(np.uint64(s)))
        for s_hi in range(1 << hi_bits):
            c_hi = np.int64(_popcount64(np.uint64(s_hi)))
            for s_lo in range(1 << lo_bits):
                sz = np.int64(0)
                for k in range(w):
                    sz += np.int64(_popcount64(lo[s_lo, k] | hi[s_hi, k]))
                c = c_hi + lo_pc[s_lo]
                if sz < mins[c]:
                    mins[c] = sz
                    argm[c] = (s_hi << lo_bits) | s_lo
        return mins, argm


def level_min_shadows(masks: np.ndarray):
    """Per-cardinality minimum shadow sizes for one level.

    ``masks`` is a (n, w) uint64 array of shadow bitmasks over the next
    level.  Returns (mins, argmins) as int64 arrays of length n+1; the
    argmin is the first subset in ascending binary order achieving the
    minimum, encoded as a bitmask over level positions.
    """
    masks = np.ascontiguousarray(masks, dtype=np.uint64)
    if masks.ndim != 2:
        raise ValueError("masks must be 2-D (n, words)")
    if backend() == "numba":
        return _min_shadows_numba(masks)
    return _min_shadows_numpy(masks)
