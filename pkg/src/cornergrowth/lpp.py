"""Weight sampling and last-passage dynamic programming.

Grids are indexed so that ``G[i - 1, j - 1] = G(i, j)``: axis 0 runs over the
a-index i (horizontal), axis 1 over the b-index j (vertical). Weights are
``w(i, j) = E(i, j) / (a_m(i) + b_n(j))`` where ``E`` is a unit exponential
drawn from a counter-based generator keyed on ``(seed, grid_id, i, j)``.

The recursion G(i, j) = w(i, j) + max(G(i-1, j), G(i, j-1)) is evaluated in
square tiles. Tiles on one anti-diagonal are independent and run on a thread
pool; every cell is written exactly once from the same operands, so any
thread count gives bit-identical grids.
"""

from __future__ import annotations

import hashlib
import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from ._rng import std_exp
from .exceptions import DomainError, InsufficientExtentError, InvalidParametersError, ResourceError
from .params import ParamPair

DEFAULT_TILE = 256
#: bytes a single grid may occupy before callers are pointed to rolling mode
MEMORY_BUDGET = 2 * 1024**3
#: cells of DP work allowed for a cluster in the per-(m, n) modes
WORK_BUDGET = 4 * 10**9


def checksum(arr: np.ndarray) -> str:
    """64-bit blake2b digest of the array bytes, hex encoded."""
    return hashlib.blake2b(np.ascontiguousarray(arr).tobytes(), digest_size=8).hexdigest()


def point_grid_id(m: int, n: int, base: int = 0) -> int:
    """Grid id for the (m, n)-th weight collection, derived from (base, m, n)."""
    raw = hashlib.blake2b(struct.pack("<QQQ", base, m, n), digest_size=8).digest()
    return int.from_bytes(raw, "little")


def _u64(x: int) -> np.uint64:
    if not 0 <= int(x) < 2**64:
        raise InvalidParametersError(f"{x} does not fit in 64 bits")
    return np.uint64(int(x))


def _check_budget(m: int, n: int, budget: int | None, what: str = "grid") -> None:
    need = 8 * m * n
    limit = MEMORY_BUDGET if budget is None else budget
    if need > limit:
        raise ResourceError(f"{what} of {m}x{n} needs {need} bytes > budget {limit}; use rolling mode")


# ---------------------------------------------------------------------------
# kernels

@njit(cache=True, nogil=True)
def _fill_weights(W, seed, gid, a, b, i0, i1):
    for i in range(i0, i1):
        ai = a[i]
        for j in range(W.shape[1]):
            W[i, j] = std_exp(seed, gid, i + 1, j + 1) / (ai + b[j])


@njit(cache=True, nogil=True)
def _tile_w(G, W, i0, i1, j0, j1):
    for i in range(i0, i1):
        for j in range(j0, j1):
            if i > 0 and j > 0:
                p = G[i - 1, j]
                q = G[i, j - 1]
                best = p if p > q else q
            elif i > 0:
                best = G[i - 1, j]
            elif j > 0:
                best = G[i, j - 1]
            else:
                best = 0.0
            G[i, j] = W[i, j] + best


@njit(cache=True, nogil=True)
def _tile_fused(G, seed, gid, a, b, i0, i1, j0, j1):
    for i in range(i0, i1):
        ai = a[i]
        for j in range(j0, j1):
            w = std_exp(seed, gid, i + 1, j + 1) / (ai + b[j])
            if i > 0 and j > 0:
                p = G[i - 1, j]
                q = G[i, j - 1]
                best = p if p > q else q
            elif i > 0:
                best = G[i - 1, j]
            elif j > 0:
                best = G[i, j - 1]
            else:
                best = 0.0
            G[i, j] = w + best


@njit(cache=True, nogil=True)
def _rolling_w(W, last_col):
    m, n = W.shape
    row = np.zeros(n)
    for i in range(m):
        left = 0.0
        for j in range(n):
            p = row[j]
            best = p if p > left else left
            left = W[i, j] + best
            row[j] = left
        last_col[i] = left
    return row


@njit(cache=True, nogil=True)
def _rolling_fused(seed, gid, a, b, last_col):
    m = a.shape[0]
    n = b.shape[0]
    row = np.zeros(n)
    for i in range(m):
        ai = a[i]
        left = 0.0
        for j in range(n):
            p = row[j]
            best = p if p > left else left
            left = std_exp(seed, gid, i + 1, j + 1) / (ai + b[j]) + best
            row[j] = left
        last_col[i] = left
    return row


@njit(cache=True, nogil=True)
def _lpp_batch_kernel(seed, gids, a, b, r0, r1, out):
    m = a.shape[0]
    n = b.shape[0]
    row = np.empty(n)
    for r in range(r0, r1):
        gid = gids[r]
        row[:] = 0.0
        for i in range(m):
            ai = a[i]
            left = 0.0
            for j in range(n):
                p = row[j]
                best = p if p > left else left
                left = std_exp(seed, gid, i + 1, j + 1) / (ai + b[j]) + best
                row[j] = left
        out[r] = row[n - 1]


@njit(cache=True, nogil=True)
def _stationary_fill(H, row0, col0, W):
    m, n = W.shape
    H[0, 0] = 0.0
    for i in range(1, m + 1):
        H[i, 0] = H[i - 1, 0] + row0[i - 1]
    for j in range(1, n + 1):
        H[0, j] = H[0, j - 1] + col0[j - 1]
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            p = H[i - 1, j]
            q = H[i, j - 1]
            H[i, j] = W[i - 1, j - 1] + (p if p > q else q)


@njit(cache=True, nogil=True)
def _exits(H, m, n):
    # lowest geodesic (ties go down) gives the largest horizontal exit,
    # highest geodesic (ties go left) the largest vertical exit
    i = m
    j = n
    while i > 0 and j > 0:
        if H[i, j - 1] >= H[i - 1, j]:
            j -= 1
        else:
            i -= 1
    zh = i if j == 0 else 0
    i = m
    j = n
    while i > 0 and j > 0:
        if H[i - 1, j] >= H[i, j - 1]:
            i -= 1
        else:
            j -= 1
    zv = j if i == 0 else 0
    return zh, zv


@njit(cache=True, nogil=True)
def _stationary_batch_kernel(seed, gids, a, b, z, r0, r1, Gh, Gb, I, J, Z):
    m = a.shape[0]
    n = b.shape[0]
    H = np.empty((m + 1, n + 1))
    row = np.empty(n)
    for r in range(r0, r1):
        gid = gids[r]
        H[0, 0] = 0.0
        for i in range(1, m + 1):
            H[i, 0] = H[i - 1, 0] + std_exp(seed, gid, i, 0) / (a[i - 1] + z)
        for j in range(1, n + 1):
            H[0, j] = H[0, j - 1] + std_exp(seed, gid, 0, j) / (b[j - 1] - z)
        row[:] = 0.0
        for i in range(1, m + 1):
            ai = a[i - 1]
            left = 0.0
            for j in range(1, n + 1):
                w = std_exp(seed, gid, i, j) / (ai + b[j - 1])
                p = H[i - 1, j]
                q = H[i, j - 1]
                H[i, j] = w + (p if p > q else q)
                p = row[j - 1]
                left = w + (p if p > left else left)
                row[j - 1] = left
        Gh[r] = H[m, n]
        Gb[r] = row[n - 1]
        for i in range(1, m + 1):
            I[r, i - 1] = H[i, n] - H[i - 1, n]
        for j in range(1, n + 1):
            J[r, j - 1] = H[m, j] - H[m, j - 1]
        zh, zv = _exits(H, m, n)
        Z[r, 0] = zh
        Z[r, 1] = zv


def _split(total: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, total)) if total else 1
    edges = np.linspace(0, total, parts + 1).round().astype(int)
    return [(int(lo), int(hi)) for lo, hi in zip(edges[:-1], edges[1:]) if hi > lo]


def _run_chunks(fn, chunks, threads: int) -> None:
    if threads <= 1 or len(chunks) <= 1:
        for lo, hi in chunks:
            fn(lo, hi)
        return
    with ThreadPoolExecutor(max_workers=threads) as ex:
        for f in [ex.submit(fn, lo, hi) for lo, hi in chunks]:
            f.result()


def _wavefront(G: np.ndarray, tile_fn, tile: int, threads: int) -> None:
    m, n = G.shape
    if threads <= 1:
        tile_fn(0, m, 0, n)
        return
    ti = -(-m // tile)
    tj = -(-n // tile)
    with ThreadPoolExecutor(max_workers=threads) as ex:
        for d in range(ti + tj - 1):
            futs = []
            for bi in range(max(0, d - tj + 1), min(ti, d + 1)):
                bj = d - bi
                futs.append(ex.submit(tile_fn, bi * tile, min(m, (bi + 1) * tile),
                                      bj * tile, min(n, (bj + 1) * tile)))
            for f in futs:
                f.result()


# ---------------------------------------------------------------------------
# weight grids

@dataclass(frozen=True, eq=False)
class WeightGrid:
    w: np.ndarray
    seed: int
    grid_id: int

    @property
    def m(self) -> int:
        return self.w.shape[0]

    @property
    def n(self) -> int:
        return self.w.shape[1]

    def checksum(self) -> str:
        return checksum(self.w)


def _vectors(pp: ParamPair, m: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    if m < 1 or n < 1:
        raise DomainError(f"grid dimensions ({m}, {n}) must be positive")
    return (np.ascontiguousarray(pp.a.row(m), dtype=float),
            np.ascontiguousarray(pp.b.row(n), dtype=float))


def weights_from_vectors(a: np.ndarray, b: np.ndarray, seed: int, grid_id: int = 0,
                         threads: int = 1, budget: int | None = None) -> WeightGrid:
    a = np.ascontiguousarray(a, dtype=float)
    b = np.ascontiguousarray(b, dtype=float)
    m, n = a.size, b.size
    _check_budget(m, n, budget, "weight grid")
    W = np.empty((m, n))
    s, g = _u64(seed), _u64(grid_id)
    _run_chunks(lambda lo, hi: _fill_weights(W, s, g, a, b, lo, hi), _split(m, threads), threads)
    W.setflags(write=False)
    return WeightGrid(W, int(seed), int(grid_id))


def sample_weights(pp: ParamPair, m: int, n: int, seed: int, grid_id: int = 0,
                   threads: int = 1, budget: int | None = None) -> WeightGrid:
    """Weights of the (m, n)-th collection: w(i, j) = E(i, j) / (a_m(i) + b_n(j))."""
    a, b = _vectors(pp, m, n)
    return weights_from_vectors(a, b, seed, grid_id, threads, budget)


# ---------------------------------------------------------------------------
# last-passage grids

@dataclass(frozen=True, eq=False)
class LppGrid:
    """Last-passage values; ``G`` in full mode, only the last row/column in rolling mode."""

    m: int
    n: int
    mode: str
    G: np.ndarray | None = None
    last_row: np.ndarray | None = field(default=None)   # G(m, j), j = 1..n
    last_col: np.ndarray | None = field(default=None)   # G(i, n), i = 1..m

    def __post_init__(self):
        if self.mode == "full":
            object.__setattr__(self, "last_row", self.G[-1, :])
            object.__setattr__(self, "last_col", self.G[:, -1])

    def value(self, i: int, j: int) -> float:
        """G(i, j), 1-indexed; G = 0 when i = 0 or j = 0."""
        if i == 0 or j == 0:
            return 0.0
        if not (1 <= i <= self.m and 1 <= j <= self.n):
            raise DomainError(f"({i}, {j}) outside the {self.m}x{self.n} grid")
        if self.mode == "full":
            return float(self.G[i - 1, j - 1])
        if i == self.m:
            return float(self.last_row[j - 1])
        if j == self.n:
            return float(self.last_col[i - 1])
        raise DomainError("rolling grid stores only its last row and column")

    @property
    def corner(self) -> float:
        return float(self.last_row[-1])

    def checksum(self) -> str:
        if self.mode == "full":
            return checksum(self.G)
        return checksum(np.concatenate([self.last_row, self.last_col]))


def _check_mode(mode: str) -> None:
    if mode not in ("full", "rolling"):
        raise InvalidParametersError(f"mode must be 'full' or 'rolling', got {mode!r}")


def lpp_forward(wg: WeightGrid, mode: str = "full", threads: int = 1, tile: int = DEFAULT_TILE) -> LppGrid:
    """Run the last-passage recursion over an explicit weight grid."""
    _check_mode(mode)
    W = wg.w
    m, n = W.shape
    if mode == "rolling":
        col = np.empty(m)
        row = _rolling_w(W, col)
        return LppGrid(m, n, mode, None, row, col)
    G = np.empty((m, n))
    _wavefront(G, lambda i0, i1, j0, j1: _tile_w(G, W, i0, i1, j0, j1), tile, threads)
    G.setflags(write=False)
    return LppGrid(m, n, mode, G)


def lpp_from_vectors(a: np.ndarray, b: np.ndarray, seed: int, grid_id: int = 0, mode: str = "full",
                     threads: int = 1, tile: int = DEFAULT_TILE, budget: int | None = None) -> LppGrid:
    """Sample and solve in one pass without storing the weights."""
    _check_mode(mode)
    a = np.ascontiguousarray(a, dtype=float)
    b = np.ascontiguousarray(b, dtype=float)
    m, n = a.size, b.size
    s, g = _u64(seed), _u64(grid_id)
    if mode == "rolling":
        col = np.empty(m)
        row = _rolling_fused(s, g, a, b, col)
        return LppGrid(m, n, mode, None, row, col)
    _check_budget(m, n, budget)
    G = np.empty((m, n))
    _wavefront(G, lambda i0, i1, j0, j1: _tile_fused(G, s, g, a, b, i0, i1, j0, j1), tile, threads)
    G.setflags(write=False)
    return LppGrid(m, n, mode, G)


def lpp_sample(pp: ParamPair, m: int, n: int, seed: int, grid_id: int = 0, mode: str = "full",
               threads: int = 1, tile: int = DEFAULT_TILE, budget: int | None = None) -> LppGrid:
    """LPP grid of the (m, n)-th weight collection; bit-identical to lpp_forward(sample_weights(...))."""
    a, b = _vectors(pp, m, n)
    return lpp_from_vectors(a, b, seed, grid_id, mode, threads, tile, budget)


def lpp_point(pp: ParamPair, m: int, n: int, seed: int, base_grid_id: int = 0) -> float:
    """G(m, n) from its own weight collection (grid id derived from (m, n))."""
    a, b = _vectors(pp, m, n)
    return lpp_from_vectors(a, b, seed, point_grid_id(m, n, base_grid_id), mode="rolling").corner


def lpp_batch(a: np.ndarray, b: np.ndarray, seed: int, replicas: int, grid_id0: int = 0,
              threads: int = 1) -> np.ndarray:
    """G(m, n) over independent replicas with grid ids grid_id0, grid_id0 + 1, ..."""
    a = np.ascontiguousarray(a, dtype=float)
    b = np.ascontiguousarray(b, dtype=float)
    gids = np.arange(replicas, dtype=np.uint64) + _u64(grid_id0)
    out = np.empty(replicas)
    s = _u64(seed)
    _run_chunks(lambda lo, hi: _lpp_batch_kernel(s, gids, a, b, lo, hi, out),
                _split(replicas, threads), threads)
    return out


# ---------------------------------------------------------------------------
# increment-stationary grids

@dataclass(frozen=True, eq=False)
class StationaryGrid:
    """Ĝ on [0..m] x [0..n] with boundary weights on the axes; ``H[i, j] = Ĝ(i, j)``."""

    z: float
    H: np.ndarray
    row0: np.ndarray   # ŵ(i, 0), i = 1..m
    col0: np.ndarray   # ŵ(0, j), j = 1..n
    W: np.ndarray      # bulk weights

    @property
    def m(self) -> int:
        return self.H.shape[0] - 1

    @property
    def n(self) -> int:
        return self.H.shape[1] - 1

    def I(self, j: int) -> np.ndarray:
        """Horizontal increments Ĝ(i, j) - Ĝ(i-1, j) for i = 1..m along row j."""
        return np.diff(self.H[:, j])

    def J(self, i: int) -> np.ndarray:
        """Vertical increments Ĝ(i, j) - Ĝ(i, j-1) for j = 1..n along column i."""
        return np.diff(self.H[i, :])

    def checksum(self) -> str:
        return checksum(self.H)


def stationary_from_weights(row0, col0, W, z: float = 0.0) -> StationaryGrid:
    row0 = np.ascontiguousarray(row0, dtype=float)
    col0 = np.ascontiguousarray(col0, dtype=float)
    W = np.ascontiguousarray(np.atleast_2d(W), dtype=float)
    if W.shape != (row0.size, col0.size):
        raise InvalidParametersError(f"bulk shape {W.shape} does not match boundary ({row0.size}, {col0.size})")
    H = np.empty((row0.size + 1, col0.size + 1))
    _stationary_fill(H, row0, col0, W)
    H.setflags(write=False)
    return StationaryGrid(float(z), H, row0, col0, W)


def _check_z(a: np.ndarray, b: np.ndarray, z: float) -> None:
    lo, hi = -float(a.min()), float(b.min())
    if not lo < z < hi:
        raise DomainError(f"z = {z!r} outside ({lo}, {hi})")


@njit(cache=True, nogil=True)
def _boundary_weights(seed, gid, a, b, z, row0, col0):
    for i in range(a.shape[0]):
        row0[i] = std_exp(seed, gid, i + 1, 0) / (a[i] + z)
    for j in range(b.shape[0]):
        col0[j] = std_exp(seed, gid, 0, j + 1) / (b[j] - z)


def stationary_grid(pp: ParamPair, m: int, n: int, z: float, seed: int, grid_id: int = 0,
                    budget: int | None = None) -> StationaryGrid:
    """Increment-stationary grid: ŵ(i, 0) ~ Exp(a_m(i) + z), ŵ(0, j) ~ Exp(b_n(j) - z).

    The bulk weights coincide with ``sample_weights(pp, m, n, seed, grid_id)``.
    """
    a, b = _vectors(pp, m, n)
    _check_z(a, b, z)
    wg = weights_from_vectors(a, b, seed, grid_id, budget=budget)
    row0, col0 = np.empty(m), np.empty(n)
    _boundary_weights(_u64(seed), _u64(grid_id), a, b, float(z), row0, col0)
    return stationary_from_weights(row0, col0, wg.w, z)


def exit_points(sg: StationaryGrid, m: int | None = None, n: int | None = None) -> tuple[int, int]:
    """(Z_hor, Z_ver) at (m, n): the largest boundary indices through which a geodesic leaves the axes."""
    m = sg.m if m is None else m
    n = sg.n if n is None else n
    if not (1 <= m <= sg.m and 1 <= n <= sg.n):
        raise DomainError(f"({m}, {n}) outside the stationary grid")
    zh, zv = _exits(sg.H, m, n)
    return int(zh), int(zv)


@dataclass(frozen=True, eq=False)
class StationaryBatch:
    z: float
    G: np.ndarray        # Ĝ(m, n) per replica
    G_bulk: np.ndarray   # coupled bulk G(m, n)
    I: np.ndarray        # (replicas, m) increments along the top row j = n
    J: np.ndarray        # (replicas, n) increments along the right column i = m
    exits: np.ndarray    # (replicas, 2) int, (Z_hor, Z_ver)


def stationary_batch(pp: ParamPair, m: int, n: int, z: float, seed: int, replicas: int,
                     grid_id0: int = 0, threads: int = 1) -> StationaryBatch:
    """Independent stationary replicas; replica r uses grid id grid_id0 + r."""
    a, b = _vectors(pp, m, n)
    _check_z(a, b, z)
    gids = np.arange(replicas, dtype=np.uint64) + _u64(grid_id0)
    Gh, Gb = np.empty(replicas), np.empty(replicas)
    I, J = np.empty((replicas, m)), np.empty((replicas, n))
    Z = np.empty((replicas, 2), dtype=np.int64)
    s = _u64(seed)
    _run_chunks(lambda lo, hi: _stationary_batch_kernel(s, gids, a, b, float(z), lo, hi, Gh, Gb, I, J, Z),
                _split(replicas, threads), threads)
    return StationaryBatch(float(z), Gh, Gb, I, J, Z)


# ---------------------------------------------------------------------------
# clusters

@dataclass(frozen=True, eq=False)
class ClusterRaster:
    """cells[i - 1, j - 1] = [G(i, j) <= t]."""

    t: float
    cells: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.cells.shape

    @property
    def size(self) -> int:
        return int(self.cells.sum())

    def checksum(self) -> str:
        return checksum(self.cells.astype(np.uint8))

    def is_staircase(self) -> bool:
        """Down-left closed: every in-cluster cell has its left and lower neighbours in the cluster."""
        c = self.cells
        return bool(np.all(c[1:, :] <= c[:-1, :]) and np.all(c[:, 1:] <= c[:, :-1]))

    def write_pgm(self, path) -> None:
        """Binary PGM, maxval 1; image rows run from j = n (top) down to j = 1, columns over i."""
        img = np.ascontiguousarray(self.cells.T[::-1].astype(np.uint8))
        with open(path, "wb") as fh:
            fh.write(f"P5\n{img.shape[1]} {img.shape[0]}\n1\n".encode("ascii"))
            fh.write(img.tobytes())

    def rle_rows(self):
        """Runs of in-cluster cells as (j, i_start, i_end), 1-indexed and inclusive."""
        for j in range(self.cells.shape[1]):
            col = self.cells[:, j].astype(np.int8)
            d = np.diff(np.concatenate([[0], col, [0]]))
            starts = np.flatnonzero(d == 1)
            ends = np.flatnonzero(d == -1)
            for s, e in zip(starts, ends):
                yield j + 1, int(s) + 1, int(e)

    def write_rle_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("j,i_start,i_end\n")
            for j, s, e in self.rle_rows():
                fh.write(f"{j},{s},{e}\n")


def read_pgm(path) -> np.ndarray:
    """Inverse of ClusterRaster.write_pgm; returns cells indexed [i - 1, j - 1]."""
    with open(path, "rb") as fh:
        data = fh.read()
    parts = data.split(maxsplit=4)
    if parts[0] != b"P5":
        raise ValueError("not a binary PGM")
    w, h = int(parts[1]), int(parts[2])
    img = np.frombuffer(parts[4][: w * h], dtype=np.uint8).reshape(h, w)
    return img[::-1].T.astype(bool)


def cluster_from_grid(g: LppGrid, t: float) -> ClusterRaster:
    if t < 0:
        raise DomainError("t must be nonnegative")
    if g.mode != "full":
        raise InvalidParametersError("cluster needs a full-mode grid")
    return ClusterRaster(float(t), g.G <= t)


def is_collection_free(pp: ParamPair) -> bool:
    """True when every (m, n) uses the same parameter vectors, so one grid serves all endpoints."""
    return len(pp.a.regimes()) == 1 and len(pp.b.regimes()) == 1


def collection_values(pp: ParamPair, m: int, n: int, seed: int, grid_id: int = 0, threads: int = 1,
                      budget: int | None = None, work_budget: int = WORK_BUDGET) -> np.ndarray:
    """Array whose (i - 1, j - 1) entry is G(i, j) computed from the (i, j)-th weight collection.

    All collections share one sample E(i, j); rows (columns) whose parameter
    vectors agree are read off a single grid, one grid per pair of regimes.
    """
    if m > pp.cap_m or n > pp.cap_n or m < 1 or n < 1:
        raise DomainError(f"extent ({m}, {n}) outside caps ({pp.cap_m}, {pp.cap_n})")
    _check_budget(m, n, budget)
    ra = [(v, r[r <= m]) for v, r in pp.a.regimes()]
    rb = [(v, r[r <= n]) for v, r in pp.b.regimes()]
    ra = [(v, r) for v, r in ra if r.size]
    rb = [(v, r) for v, r in rb if r.size]
    work = sum(int(r.max()) * int(c.max()) for _, r in ra for _, c in rb)
    if work > work_budget:
        raise ResourceError(f"{len(ra) * len(rb)} grids with {work} cell updates exceed {work_budget}")
    if len(ra) == 1 and len(rb) == 1:
        return lpp_from_vectors(ra[0][0][:m], rb[0][0][:n], seed, grid_id, "full", threads, budget=budget).G
    out = np.empty((m, n))
    for va, rows in ra:
        for vb, cols in rb:
            mm, nn = int(rows.max()), int(cols.max())
            g = lpp_from_vectors(va[:mm], vb[:nn], seed, grid_id, "full", threads, budget=budget)
            out[np.ix_(rows - 1, cols - 1)] = g.G[np.ix_(rows - 1, cols - 1)]
    out.setflags(write=False)
    return out


def cluster(pp: ParamPair, t: float, m: int, n: int, seed: int, grid_id: int = 0, mode: str = "common",
            threads: int = 1, budget: int | None = None, work_budget: int = WORK_BUDGET) -> ClusterRaster:
    """Raster of {(i, j) <= (m, n): G(i, j) <= t}, each G(i, j) from the (i, j)-th weight collection.

    ``mode="common"`` couples all collections through one sample E(i, j) (the
    standard way of drawing pictures of the cluster), see :func:`collection_values`.
    ``mode="independent"`` gives every cell its own grid id via :func:`lpp_point`
    and is limited by ``work_budget``.
    """
    if t < 0:
        raise DomainError("t must be nonnegative")
    if mode == "common":
        G = collection_values(pp, m, n, seed, grid_id, threads, budget, work_budget)
        return ClusterRaster(float(t), G <= t)
    if mode != "independent":
        raise InvalidParametersError(f"cluster mode must be 'common' or 'independent', got {mode!r}")
    if m > pp.cap_m or n > pp.cap_n or m < 1 or n < 1:
        raise DomainError(f"extent ({m}, {n}) outside caps ({pp.cap_m}, {pp.cap_n})")
    work = (m * (m + 1) // 2) * (n * (n + 1) // 2)
    if work > work_budget:
        raise ResourceError(f"independent cluster of {m}x{n} needs {work} cell updates > {work_budget}")
    cells = np.zeros((m, n), dtype=bool)
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            cells[i - 1, j - 1] = lpp_point(pp, i, j, seed, grid_id) <= t
    return ClusterRaster(float(t), cells)


def scaled_nodes(raster: ClusterRaster, extent: float, h: float) -> np.ndarray:
    """Boolean node raster of the closure of cluster / t on the grid (k h, l h), k, l = 0..round(extent / h).

    Node (x, y) is in the closure iff G(max(ceil(t x), 1), max(ceil(t y), 1)) <= t.
    Raises if the node grid reaches beyond the simulated extent.
    """
    t = raster.t
    k = np.arange(int(round(extent / h)) + 1)
    x = k * h
    idx = np.maximum(np.ceil(np.round(t * x, 9)).astype(np.int64), 1)
    m, n = raster.shape
    if idx[-1] > min(m, n):
        raise InsufficientExtentError(f"raster {m}x{n} cannot cover {extent} at t = {t}")
    if t == 0:
        return np.zeros((k.size, k.size), dtype=bool)
    return raster.cells[np.ix_(idx - 1, idx - 1)]
