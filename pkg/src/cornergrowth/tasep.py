"""Disordered TASEP observables read off last-passage grids.

With step initial condition particle n starts at 1 - n. Its number of jumps
by time t is the interface height H(n, t) = max{m : G(m, n) <= t}; its
position is sigma(n, t) = H(n, t) - n + 1. The flux through site i is
F(i, t) = max{j : G(i + j - 1, j) <= t}.

The ``*_auto`` helpers grow the grid (same seed and grid id, so the common
cells are unchanged) until the defining maximum is interior.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import DomainError, InsufficientExtentError, InvalidParametersError
from .lpp import LppGrid, is_collection_free, lpp_from_vectors
from .params import ParamPair


def _count_le(values: np.ndarray, t: float) -> int:
    # values are nondecreasing along the index for nonnegative weights
    return int(np.searchsorted(values, t, side="right"))


def height(g: LppGrid, n: int, t: float) -> int:
    """H(n, t) = max{m : G(m, n) <= t}, 0 if none."""
    if t < 0:
        raise DomainError("t must be nonnegative")
    if not 1 <= n <= g.n:
        raise DomainError(f"column n = {n} outside 1..{g.n}")
    if g.mode == "full":
        col = g.G[:, n - 1]
    elif n == g.n:
        col = g.last_col
    else:
        raise DomainError("rolling grid only carries its last column")
    h = _count_le(col, t)
    if h == g.m:
        raise InsufficientExtentError(f"G({g.m}, {n}) <= t = {t}; extend the grid")
    return h


def flux(g: LppGrid, m: int, t: float) -> int:
    """F(m, t) = max{j : G(m + j - 1, j) <= t}, 0 if none."""
    if t < 0:
        raise DomainError("t must be nonnegative")
    if g.mode != "full":
        raise DomainError("flux needs a full grid")
    if not 1 <= m <= g.m:
        raise DomainError(f"site m = {m} outside 1..{g.m}")
    jmax = min(g.n, g.m - m + 1)
    j = np.arange(1, jmax + 1)
    diag = g.G[m + j - 2, j - 1]
    f = _count_le(diag, t)
    if f == jmax:
        raise InsufficientExtentError(f"diagonal from site {m} leaves the grid before exceeding t = {t}")
    return f


@dataclass(frozen=True, eq=False)
class TasepFrame:
    t: float
    H: np.ndarray      # H(n, t), n = 1..len(H)
    sigma: np.ndarray  # particle positions H(n, t) - n + 1
    F: np.ndarray      # F(m, t), m = 1..len(F)


def frame(g: LppGrid, t: float, n_max: int, m_max: int) -> TasepFrame:
    H = np.array([height(g, n, t) for n in range(1, n_max + 1)], dtype=np.int64)
    F = np.array([flux(g, m, t) for m in range(1, m_max + 1)], dtype=np.int64)
    return TasepFrame(float(t), H, H - np.arange(n_max), F)


def _need_collection_free(pp: ParamPair) -> None:
    if not is_collection_free(pp):
        raise InvalidParametersError(
            "particle observables need parameters that do not depend on (m, n)")


class TasepSampler:
    """One weight realization of an (m, n)-independent family, grown on demand."""

    def __init__(self, pp: ParamPair, seed: int, grid_id: int = 0, threads: int = 1):
        _need_collection_free(pp)
        self.pp = pp
        self.seed = seed
        self.grid_id = grid_id
        self.threads = threads
        self._a = pp.a.regimes()[0][0]
        self._b = pp.b.regimes()[0][0]

    def grid(self, m: int, n: int, mode: str = "full") -> LppGrid:
        if m > self.pp.cap_m or n > self.pp.cap_n:
            raise InsufficientExtentError(
                f"extent ({m}, {n}) exceeds parameter caps ({self.pp.cap_m}, {self.pp.cap_n})")
        return lpp_from_vectors(self._a[:m], self._b[:n], self.seed, self.grid_id, mode, self.threads)

    def height(self, n: int, t: float, start: int = 64) -> int:
        m = max(start, 2 * n)
        while True:
            g = self.grid(min(m, self.pp.cap_m), n, mode="rolling")
            try:
                return height(g, n, t)
            except InsufficientExtentError:
                if g.m >= self.pp.cap_m:
                    raise
                m *= 2

    def flux(self, m: int, t: float, start: int = 64) -> int:
        J = start
        while True:
            rows = min(m + J - 1, self.pp.cap_m)
            cols = min(J, self.pp.cap_n)
            g = self.grid(rows, cols)
            try:
                return flux(g, m, t)
            except InsufficientExtentError:
                if rows >= self.pp.cap_m or cols >= self.pp.cap_n:
                    raise
                J *= 2

    def heights(self, n: int, t_grid: Sequence[float], start: int = 64) -> np.ndarray:
        """H(n, t) for every t in t_grid from one column of one grid."""
        ts = np.asarray(t_grid, dtype=float)
        if np.any(ts < 0):
            raise DomainError("times must be nonnegative")
        tmax = float(ts.max()) if ts.size else 0.0
        m = max(start, 2 * n)
        while True:
            g = self.grid(min(m, self.pp.cap_m), n, mode="rolling")
            if g.last_col[-1] > tmax:
                return np.searchsorted(g.last_col, ts, side="right").astype(np.int64)
            if g.m >= self.pp.cap_m:
                raise InsufficientExtentError(f"G({g.m}, {n}) <= t = {tmax} at the parameter cap")
            m *= 2


def trajectory(pp: ParamPair, n: int, t_grid: Sequence[float], seed: int, grid_id: int = 0) -> list[tuple[float, int, int]]:
    """(t, H(n, t), sigma(n, t)) along t_grid from one weight realization."""
    hs = TasepSampler(pp, seed, grid_id).heights(n, t_grid)
    return [(float(t), int(h), int(h) - n + 1) for t, h in zip(t_grid, hs)]


def flux_from_heights(H: np.ndarray, i: int) -> int:
    """#{j : H(j, t) >= j + i - 1}, the particle count behind the flux through site i."""
    j = np.arange(1, len(H) + 1)
    return int(np.count_nonzero(H >= j + i - 1))
