"""Counter-based random numbers (Philox4x32-10).

Every exponential waiting time is a pure function of ``(seed, grid_id, i, j)``,
so grids can be generated in any order, in parallel, or streamed row by row
and still come out bit-identical.
"""

import numpy as np
from numba import njit

_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = np.uint64(0x9E3779B9)
_W1 = np.uint64(0xBB67AE85)
_MASK32 = np.uint64(0xFFFFFFFF)
_SH32 = np.uint64(32)
_SH11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0


@njit(cache=True, nogil=True)
def philox4x32(c0, c1, c2, c3, k0, k1):
    """Ten Philox rounds on a 4x32 counter with a 2x32 key (all passed as uint64)."""
    for _ in range(10):
        p0 = _M0 * c0
        p1 = _M1 * c2
        hi0 = p0 >> _SH32
        lo0 = p0 & _MASK32
        hi1 = p1 >> _SH32
        lo1 = p1 & _MASK32
        c0 = (hi1 ^ c1 ^ k0) & _MASK32
        c1 = lo1
        c2 = (hi0 ^ c3 ^ k1) & _MASK32
        c3 = lo0
        k0 = (k0 + _W0) & _MASK32
        k1 = (k1 + _W1) & _MASK32
    return c0, c1, c2, c3


@njit(cache=True, nogil=True)
def uniform(seed, grid_id, i, j):
    """U in [0, 1) with 53 random bits, keyed by seed, counter (i, j, grid_id)."""
    s = np.uint64(seed)
    g = np.uint64(grid_id)
    r0, r1, _, _ = philox4x32(
        np.uint64(i) & _MASK32,
        np.uint64(j) & _MASK32,
        g & _MASK32,
        g >> _SH32,
        s & _MASK32,
        s >> _SH32,
    )
    bits = (r0 << _SH32) | r1
    return float(bits >> _SH11) * _INV53


@njit(cache=True, nogil=True)
def std_exp(seed, grid_id, i, j):
    """Unit-rate exponential by inversion, -log(1 - U)."""
    return -np.log1p(-uniform(seed, grid_id, i, j))


@njit(cache=True, nogil=True)
def std_exp_block(seed, grid_id, i0, i1, j0, j1):
    out = np.empty((i1 - i0, j1 - j0))
    for i in range(i0, i1):
        for j in range(j0, j1):
            out[i - i0, j - j0] = std_exp(seed, grid_id, i, j)
    return out
