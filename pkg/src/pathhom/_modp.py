"""Row reduction over F_p on int64 arrays.

The elimination loop is compiled with numba when it is importable.  Setting
``PATHHOM_DISABLE_NUMBA=1`` forces the vectorised numpy path instead; both
paths return the identical reduced row echelon form.  ``PATHHOM_NUM_THREADS``
caps the numba thread pool.
"""

from __future__ import annotations

import os
import warnings

import numpy as np

# int64 products of two residues must not overflow
MAX_NATIVE_PRIME = 3_037_000_493


def _flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() not in ("", "0", "false", "no")


try:
    if _flag("PATHHOM_DISABLE_NUMBA"):
        raise ImportError("numba disabled by environment")
    warnings.filterwarnings("ignore", message="The TBB threading layer")
    import numba
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


if HAVE_NUMBA:
    _threads = os.environ.get("PATHHOM_NUM_THREADS")
    if _threads:
        numba.set_num_threads(max(1, min(int(_threads), numba.config.NUMBA_NUM_THREADS)))

    @njit(cache=True)
    def _inv_mod(a, p):
        t, new_t = 0, 1
        r, new_r = p, a
        while new_r != 0:
            q = r // new_r
            t, new_t = new_t, t - q * new_t
            r, new_r = new_r, r - q * new_r
        if t < 0:
            t += p
        return t

    @njit(cache=True, parallel=True)
    def _rref_numba(a, p):
        nrows, ncols = a.shape
        pivots = np.empty(min(nrows, ncols), np.int64)
        r = 0
        for c in range(ncols):
            if r == nrows:
                break
            piv = -1
            for i in range(r, nrows):
                if a[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(ncols):
                    tmp = a[r, j]
                    a[r, j] = a[piv, j]
                    a[piv, j] = tmp
            inv = _inv_mod(a[r, c], p)
            for j in range(ncols):
                a[r, j] = (a[r, j] * inv) % p
            for i in prange(nrows):
                f = a[i, c]
                if i != r and f != 0:
                    for j in range(ncols):
                        x = (a[i, j] - f * a[r, j]) % p
                        if x < 0:
                            x += p
                        a[i, j] = x
            pivots[r] = c
            r += 1
        return r, pivots


def _rref_numpy(a: np.ndarray, p: int):
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            a[mask] = (a[mask] - np.outer(col[mask], a[r])) % p
        pivots.append(c)
        r += 1
    return r, np.asarray(pivots, dtype=np.int64)


def rref_mod_p(matrix, p: int, use_numba: bool | None = None):
    """Reduced row echelon form of ``matrix`` over F_p.

    Returns ``(R, pivots)`` where ``R`` is a fresh int64 array and ``pivots``
    lists the pivot column of each nonzero row.
    """
    if p >= MAX_NATIVE_PRIME:
        raise ValueError("prime too large for the native kernel")
    a = np.array(matrix, dtype=np.int64, copy=True)
    if a.ndim != 2:
        a = a.reshape(len(matrix), -1)
    a %= p
    if a.size == 0:
        return a, []
    if use_numba is None:
        use_numba = HAVE_NUMBA
    if use_numba:
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but unavailable")
        rank, piv = _rref_numba(a, p)
    else:
        rank, piv = _rref_numpy(a, p)
    return a, [int(c) for c in piv[:rank]]
