"""Monte Carlo checks of distributional identities and limit theorems.

Every check is a pure function of its arguments (seed included) and returns
plain dataclasses that can be written as CSV tables and JSON verdicts.
KS statistics come from scipy; pass thresholds use the asymptotic
Kolmogorov critical value at level ``alpha``.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import ndimage, stats

from .centering import RainsLimit, rains_limit, solve_centering
from .exceptions import DataError, DomainError, InvalidParametersError
from .lpp import (ClusterRaster, collection_values, lpp_batch, lpp_from_vectors, scaled_nodes,
                  stationary_batch)
from .params import ParamPair
from .shape import ShapeSpec, in_limit_shape

ALPHA = 0.001


def ks_critical(alpha: float = ALPHA) -> float:
    """Asymptotic Kolmogorov critical value c with P{sqrt(n) D_n > c} ~ alpha."""
    return math.sqrt(-0.5 * math.log(alpha / 2.0))


@dataclass(frozen=True, eq=False)
class EmpiricalCdf:
    sample: np.ndarray

    def __init__(self, sample):
        object.__setattr__(self, "sample", np.sort(np.asarray(sample, dtype=float)))

    @property
    def n(self) -> int:
        return self.sample.size

    def __call__(self, x):
        return np.searchsorted(self.sample, x, side="right") / self.n


@dataclass(frozen=True)
class KsReport:
    check: str
    statistic: float
    n: int
    reference: str
    threshold: float
    passed: bool


@dataclass(frozen=True)
class Verdict:
    check: str
    statistic: float
    threshold: float
    passed: bool


def ks_exponential(sample, rate: float, alpha: float = ALPHA, check: str = "ks-exp",
                   tol: float = 0.0) -> KsReport:
    """One-sample KS distance to Exp(rate)."""
    x = np.asarray(sample, dtype=float).ravel()
    if not rate > 0:
        raise DomainError("rate must be positive")
    if x.size < 100:
        raise DataError(f"need at least 100 observations, got {x.size}")
    if np.any(~np.isfinite(x)) or np.any(x < -tol):
        raise DataError("sample has negative or non-finite values")
    d = float(stats.kstest(np.maximum(x, 0.0), "expon", args=(0.0, 1.0 / rate)).statistic)
    thr = ks_critical(alpha) / math.sqrt(x.size)
    return KsReport(check, d, x.size, f"Exp({rate:.12g})", thr, d < thr)


def ks_two_sample(x, y, alpha: float = ALPHA, check: str = "ks-2") -> KsReport:
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.size == 0 or y.size == 0:
        raise DataError("empty sample")
    d = float(stats.ks_2samp(x, y).statistic)
    thr = ks_critical(alpha) * math.sqrt((x.size + y.size) / (x.size * y.size))
    return KsReport(check, d, min(x.size, y.size), "two-sample", thr, d < thr)


def wilson(k: int, n: int, level: float = 0.99) -> tuple[float, float]:
    ci = stats.binomtest(int(k), int(n)).proportion_ci(confidence_level=level, method="wilson")
    return float(ci.low), float(ci.high)


# ---------------------------------------------------------------------------
# stationary increments

@dataclass(frozen=True)
class BurkeResult:
    z: float
    reports: list[KsReport]
    correlations: list[Verdict]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports) and all(c.passed for c in self.correlations)


def burke_check(pp: ParamPair, m: int, n: int, z: float, seed: int, rows: Sequence[int] = (1,),
                cols: Sequence[int] = (1,), replicas: int = 10_000, alpha: float = ALPHA,
                reference_z: float | None = None, grid_id0: int = 0, threads: int = 1) -> BurkeResult:
    """KS of top-row increments I(i, n) against Exp(a_m(i) + z) and right-column
    increments J(m, j) against Exp(b_n(j) - z), over independent replicas."""
    batch = stationary_batch(pp, m, n, z, seed, replicas, grid_id0, threads)
    a, b = pp.a.row(m), pp.b.row(n)
    zr = z if reference_z is None else reference_z
    reports, corr = [], []
    lim = 4.0 / math.sqrt(replicas)
    for i in rows:
        if not 1 <= i <= m:
            raise DomainError(f"row index {i} outside 1..{m}")
        reports.append(ks_exponential(batch.I[:, i - 1], a[i - 1] + zr, alpha, f"I({i},{n})"))
        if i < m:
            r = float(np.corrcoef(batch.I[:, i - 1], batch.I[:, i])[0, 1])
            corr.append(Verdict(f"corr I({i},{n}),I({i + 1},{n})", r, lim, abs(r) <= lim))
    for j in cols:
        if not 1 <= j <= n:
            raise DomainError(f"column index {j} outside 1..{n}")
        reports.append(ks_exponential(batch.J[:, j - 1], b[j - 1] - zr, alpha, f"J({m},{j})"))
        if j < n:
            r = float(np.corrcoef(batch.J[:, j - 1], batch.J[:, j])[0, 1])
            corr.append(Verdict(f"corr J({m},{j}),J({m},{j + 1})", r, lim, abs(r) <= lim))
    return BurkeResult(float(z), reports, corr)


# ---------------------------------------------------------------------------
# permutation invariance

def _is_permutation(u: np.ndarray, v: np.ndarray) -> bool:
    return u.shape == v.shape and np.array_equal(np.sort(u), np.sort(v))


def permutation_check(pp: ParamPair, permuted: ParamPair, m: int, n: int, seed: int,
                      replicas: int = 20_000, alpha: float = ALPHA, independent: bool = True,
                      strict: bool = True, threads: int = 1) -> KsReport:
    """Two-sample KS between G(m, n) under pp and under permuted parameters.

    With ``independent=False`` both arms reuse the same grid ids. ``strict=False``
    allows a non-permutation second arm (negative controls).
    """
    a1, b1 = pp.a.row(m), pp.b.row(n)
    a2, b2 = permuted.a.row(m), permuted.b.row(n)
    if strict and not (_is_permutation(a1, a2) and _is_permutation(b1, b2)):
        raise InvalidParametersError("second parameter set is not a permutation of the first on the grid")
    x = lpp_batch(a1, b1, seed, replicas, 0, threads)
    y = lpp_batch(a2, b2, seed, replicas, replicas if independent else 0, threads)
    return ks_two_sample(x, y, alpha, f"perm G({m},{n})")


# ---------------------------------------------------------------------------
# tails and exit points

@dataclass(frozen=True)
class TailRow:
    s: float
    level: float
    frequency: float
    lo: float
    hi: float


@dataclass(frozen=True)
class TailProfile:
    side: str
    M: float
    C: float
    replicas: int
    rows: list[TailRow]
    nonincreasing: bool
    below_half_at_1: bool | None


def tail_profile(pp: ParamPair, m: int, n: int, s_grid: Sequence[float], replicas: int = 1000,
                 side: str = "right", seed: int = 0, center_shift: float = 0.0,
                 grid_id0: int = 0, threads: int = 1, samples: np.ndarray | None = None) -> TailProfile:
    """Exceedance frequencies P{G >= M + s sqrt(C)} (right) or P{G <= M - s sqrt(C)} (left)
    around the centering M(m, n) + center_shift."""
    if side not in ("right", "left"):
        raise InvalidParametersError("side must be 'right' or 'left'")
    if replicas < 1000:
        raise InvalidParametersError("tail profiles need at least 1000 replicas")
    cr = solve_centering(pp, m, n)
    M = cr.M + center_shift
    sq = math.sqrt(cr.C)
    if samples is None:
        samples = lpp_batch(pp.a.row(m), pp.b.row(n), seed, replicas, grid_id0, threads)
    x = np.sort(np.asarray(samples, dtype=float))
    N = x.size
    rows = []
    for s in sorted(float(v) for v in s_grid):
        if side == "right":
            lev = M + s * sq
            k = N - int(np.searchsorted(x, lev, side="left"))
        else:
            lev = M - s * sq
            k = int(np.searchsorted(x, lev, side="right"))
        lo, hi = wilson(k, N)
        rows.append(TailRow(s, lev, k / N, lo, hi))
    freqs = [r.frequency for r in rows]
    mono = all(f2 <= f1 for f1, f2 in zip(freqs, freqs[1:]))
    at1 = [r.frequency < 0.5 for r in rows if r.s == 1.0]
    return TailProfile(side, M, cr.C, N, rows, mono, at1[0] if at1 else None)


@dataclass(frozen=True)
class ExitProfile:
    z: float
    m: int
    n: int
    hist_hor: dict[int, int]
    hist_ver: dict[int, int]
    max_exit: np.ndarray
    median_max_exit: float
    scale: float
    frac_beyond_scale: float
    both_positive: int


def exit_profile(pp: ParamPair, m: int, n: int, seed: int, replicas: int = 1000, z: float | None = None,
                 grid_id0: int = 0, threads: int = 1) -> ExitProfile:
    """Exit-point histograms of the stationary grid at z (default: the minimizer zeta(m, n))."""
    if z is None:
        z = solve_centering(pp, m, n).zeta
    batch = stationary_batch(pp, m, n, z, seed, replicas, grid_id0, threads)
    zh, zv = batch.exits[:, 0], batch.exits[:, 1]
    mx = np.maximum(zh, zv)
    scale = float(m) ** 0.75
    hh = dict(zip(*[u.tolist() for u in np.unique(zh, return_counts=True)]))
    hv = dict(zip(*[u.tolist() for u in np.unique(zv, return_counts=True)]))
    return ExitProfile(float(z), m, n, hh, hv, mx, float(np.median(mx)), scale,
                       float(np.mean(mx > scale)), int(np.count_nonzero((zh > 0) & (zv > 0))))


# ---------------------------------------------------------------------------
# rasters and Hausdorff distance

@dataclass(frozen=True, eq=False)
class RegionRaster:
    """Node raster: mask[k, l] says whether (k h, l h) belongs to the region, k, l = 0..K."""

    mask: np.ndarray
    h: float

    @property
    def extent(self) -> float:
        return (self.mask.shape[0] - 1) * self.h

    @classmethod
    def from_predicate(cls, pred: Callable[[np.ndarray, np.ndarray], np.ndarray], extent: float,
                       h: float) -> "RegionRaster":
        g = np.arange(int(round(extent / h)) + 1) * h
        X, Y = np.meshgrid(g, g, indexing="ij")
        return cls(np.asarray(pred(X, Y), dtype=bool), h)

    def points(self) -> np.ndarray:
        return np.argwhere(self.mask) * self.h


def directed_hausdorff_raster(r1: RegionRaster, r2: RegionRaster) -> float:
    """sup over nodes of r1 of the distance to the nearest node of r2."""
    dt = ndimage.distance_transform_edt(~r2.mask, sampling=r2.h)
    return float(dt[r1.mask].max())


def hausdorff(r1: RegionRaster, r2: RegionRaster) -> float:
    """Exact Hausdorff distance between the node sets of two rasters on the same grid."""
    if r1.mask.shape != r2.mask.shape or not math.isclose(r1.h, r2.h):
        raise InvalidParametersError("rasters must share bounding box and resolution")
    if not r1.mask.any() or not r2.mask.any():
        raise DataError("Hausdorff distance to an empty raster is undefined")
    return max(directed_hausdorff_raster(r1, r2), directed_hausdorff_raster(r2, r1))


@dataclass(frozen=True, eq=False)
class LimitShapeResult:
    t: float
    distance: float
    cluster: RegionRaster
    predicted: RegionRaster


def predicted_raster(spec: ShapeSpec, extent: float, h: float) -> RegionRaster:
    return RegionRaster.from_predicate(lambda x, y: in_limit_shape(spec, x, y), extent, h)


def cluster_raster(raster: ClusterRaster, extent: float, h: float) -> RegionRaster:
    return RegionRaster(scaled_nodes(raster, extent, h), h)


def limit_shape_check(pp: ParamPair, spec: ShapeSpec, t: float | Sequence[float], N: int, seed: int,
                      C: float = 1.1, h: float | None = None, grid_id: int = 0,
                      threads: int = 1) -> LimitShapeResult | list[LimitShapeResult]:
    """Hausdorff distance between t^{-1} cluster(t) and the predicted limit shape on [0, C]^2.

    A sequence of times reuses one sample of the weights.
    """
    h = C / 800 if h is None else h
    times = [float(t)] if np.ndim(t) == 0 else [float(s) for s in t]
    G = collection_values(pp, N, N, seed, grid_id, threads)
    pred = predicted_raster(spec, C, h)
    out = []
    for s in times:
        cr = cluster_raster(ClusterRaster(s, G <= s), C, h)
        out.append(LimitShapeResult(s, hausdorff(cr, pred), cr, pred))
    return out[0] if np.ndim(t) == 0 else out


# ---------------------------------------------------------------------------
# sums of exponentials

@dataclass(frozen=True)
class ExpSumRow:
    s: float
    frequency: float
    lo: float
    hi: float


def expsum_concentration(rates: Sequence[float], replicas: int, s_grid: Sequence[float],
                         seed: int = 0) -> tuple[list[ExpSumRow], bool]:
    """Two-sided exceedances P{|sum X - sum 1/l| >= s sqrt(sum 1/l^2)} for independent X ~ Exp(l)."""
    lam = np.asarray(rates, dtype=float)
    if lam.size == 0 or np.any(~(lam > 0)):
        raise DomainError("rates must be positive")
    rng = np.random.Generator(np.random.Philox(seed))
    sums = (rng.standard_exponential((replicas, lam.size)) / lam).sum(axis=1)
    dev = np.abs(sums - np.sum(1.0 / lam)) / math.sqrt(np.sum(1.0 / lam**2))
    rows = []
    for s in sorted(float(v) for v in s_grid):
        k = int(np.count_nonzero(dev >= s))
        lo, hi = wilson(k, replicas)
        rows.append(ExpSumRow(s, k / replicas, lo, hi))
    fr = [r.frequency for r in rows]
    return rows, all(b <= a for a, b in zip(fr, fr[1:]))


# ---------------------------------------------------------------------------
# block-constant weights

@dataclass(frozen=True)
class RainsCheck:
    n: int
    blocks: int
    G: float
    ratio: float
    limit: RainsLimit
    rel_error: float


def rains_check(base_a, base_b, n: int, blocks: int, seed: int, tail_bound: float,
                terms: int | None = None, grid_id: int = 0) -> RainsCheck:
    """G_n(K n, K n) / n for rates a_ceil(i/n) + b_ceil(j/n) against the series limit.

    Weights are nonnegative, so the sup of G_n over the box is its far corner.
    """
    lim = rains_limit(base_a, base_b, tail_bound, terms)
    idx = np.arange(1, blocks + 1)
    ca = np.asarray(base_a(idx) if callable(base_a) else base_a[:blocks], dtype=float)
    cb = np.asarray(base_b(idx) if callable(base_b) else base_b[:blocks], dtype=float)
    g = lpp_from_vectors(np.repeat(ca, n), np.repeat(cb, n), seed, grid_id, mode="rolling")
    ratio = g.corner / n
    return RainsCheck(n, blocks, g.corner, ratio, lim, abs(ratio - lim.value) / lim.value)


# ---------------------------------------------------------------------------
# reports

def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(v) for v in r])


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def write_verdicts(path, verdicts: Iterable[Verdict | KsReport]) -> list[dict]:
    out = []
    for v in verdicts:
        d = asdict(v)
        out.append({"check": d["check"], "statistic": d["statistic"], "threshold": d["threshold"],
                    "pass": bool(d["passed"])})
    with open(path, "w") as fh:
        json.dump(out, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return out
