"""Finite-size variational centering of the last-passage times.

For parameters a = a_m, b = b_n the stationary mean is

    M(z) = sum_i 1 / (a_i + z) + sum_j 1 / (b_j - z),   z in (-min a, min b),

strictly convex with poles at both ends. Its minimizer zeta equalizes the two
inverse-square sums, whose common value C is the boundary variance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ._optimize import bisect_decreasing, golden_section
from .exceptions import DivergenceError, DomainError, InvalidParametersError, NumericalError
from .params import ParamPair

RESIDUAL_RTOL = 1e-9
BRACKET_INSET = 1e-12
BISECT_RTOL = 1e-14


@dataclass(frozen=True)
class CenteringResult:
    zeta: float
    M: float
    C: float
    Delta: float
    residual: float
    C_b: float

    def as_row(self) -> tuple[float, float, float, float, float]:
        return (self.zeta, self.M, self.C, self.Delta, self.residual)


def _rows(pp: ParamPair, m: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    if m < 1 or n < 1:
        raise DomainError(f"(m, n) = ({m}, {n}) must be positive")
    return pp.a.row(m), pp.b.row(n)


def _mean(a: np.ndarray, b: np.ndarray, z: float) -> float:
    return math.fsum(np.concatenate([1.0 / (a + z), 1.0 / (b - z)]))


def _root_fn(a: np.ndarray, b: np.ndarray, z: float) -> float:
    # compensated: sum 1/(a+z)^2 - sum 1/(b-z)^2, strictly decreasing in z
    return math.fsum(np.concatenate([1.0 / (a + z) ** 2, -1.0 / (b - z) ** 2]))


def _root_slope(a: np.ndarray, b: np.ndarray, z: float) -> float:
    return -2.0 * math.fsum(np.concatenate([1.0 / (a + z) ** 3, 1.0 / (b - z) ** 3]))


def stationary_mean(pp: ParamPair, m: int, n: int, z: float) -> float:
    """Mean of the increment-stationary last-passage value at (m, n) for parameter z."""
    a, b = _rows(pp, m, n)
    lo, hi = -float(a.min()), float(b.min())
    if not lo < z < hi:
        raise DomainError(f"z = {z!r} outside the open interval ({lo}, {hi})")
    return _mean(a, b, z)


def centering_from_rows(a: Sequence[float], b: Sequence[float]) -> CenteringResult:
    """Solve the centering problem for explicit parameter vectors a (length m) and b (length n)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise DomainError("both parameter vectors must be nonempty")
    amin, bmin = float(a.min()), float(b.min())
    width = amin + bmin
    if not width > 0:
        raise InvalidParametersError(f"min a + min b = {width} <= 0")
    f = lambda z: _root_fn(a, b, z)  # noqa: E731

    d_lo = d_hi = BRACKET_INSET * width
    lo, hi = -amin + d_lo, bmin - d_hi
    # near the poles f may overflow; walk inward until the sign is certain
    while not f(lo) > 0:
        d_lo *= 10.0
        lo = -amin + d_lo
        if d_lo >= 0.5 * width:
            raise NumericalError("no positive bracket end for the minimizer equation")
    while not f(hi) < 0:
        d_hi *= 10.0
        hi = bmin - d_hi
        if d_hi >= 0.5 * width:
            raise NumericalError("no negative bracket end for the minimizer equation")
    if not lo < hi:
        raise NumericalError("empty bracket for the minimizer equation")

    zeta, blo, bhi = bisect_decreasing(f, lo, hi, BISECT_RTOL * width)
    res = f(zeta)
    if res != 0.0:
        slope = _root_slope(a, b, zeta)
        if slope < 0 and math.isfinite(slope):
            z1 = zeta - res / slope
            if blo <= z1 <= bhi:
                r1 = f(z1)
                if abs(r1) < abs(res):
                    zeta, res = z1, r1

    C = math.fsum(1.0 / (a + zeta) ** 2)
    C_b = math.fsum(1.0 / (b - zeta) ** 2)
    if not abs(res) <= RESIDUAL_RTOL * C:
        raise NumericalError(f"minimizer residual {res:g} exceeds {RESIDUAL_RTOL:g} * C = {RESIDUAL_RTOL * C:g}")
    return CenteringResult(
        zeta=zeta,
        M=_mean(a, b, zeta),
        C=C,
        Delta=min(amin + zeta, bmin - zeta),
        residual=res,
        C_b=C_b,
    )


def solve_centering(pp: ParamPair, m: int, n: int) -> CenteringResult:
    """Minimizer zeta(m, n), centering M(m, n), variance C(m, n) and boundary distance Delta(m, n)."""
    return centering_from_rows(*_rows(pp, m, n))


# ---------------------------------------------------------------------------
# infinite-series limit for block-constant weights

SeqLike = Callable[[np.ndarray], np.ndarray] | Sequence[float] | np.ndarray


@dataclass(frozen=True)
class RainsLimit:
    """inf_z of the full two-sided series, certified to lie in [lower, upper]."""

    value: float
    lower: float
    upper: float
    zeta: float
    terms: int
    tail_bound: float
    solver_tol: float

    @property
    def error(self) -> float:
        return 0.5 * (self.upper - self.lower) + self.solver_tol


def _materialize(seq: SeqLike, count: int) -> np.ndarray:
    if callable(seq):
        out = np.asarray(seq(np.arange(1, count + 1)), dtype=float)
    else:
        out = np.asarray(seq, dtype=float)[:count]
    if out.shape != (count,):
        raise InvalidParametersError(f"sequence provides {out.size} of {count} required terms")
    return out


def rains_limit(a_seq: SeqLike, b_seq: SeqLike, tail_bound: float, terms: int | None = None,
                xtol: float = 1e-13) -> RainsLimit:
    """Minimize sum_i 1/(a_i + z) + sum_j 1/(b_j - z) over (-inf a, inf b).

    The series are truncated after ``terms`` entries (default 10**6 for callables,
    half the length for arrays). ``tail_bound`` must bound the two discarded
    tails uniformly over the interval. The terms in (K, 2K] are summed as a
    Cauchy check: if they alone exceed ``tail_bound`` the claimed bound is false
    and the series is treated as divergent.
    """
    if not tail_bound >= 0:
        raise ValueError("tail_bound must be nonnegative")
    if terms is None:
        if callable(a_seq) and callable(b_seq):
            terms = 10**6
        else:
            lens = [len(s) for s in (a_seq, b_seq) if not callable(s)]
            terms = min(lens) // 2
    K = int(terms)
    if K < 1:
        raise InvalidParametersError("need at least one term")
    a_all = _materialize(a_seq, 2 * K)
    b_all = _materialize(b_seq, 2 * K)
    a, b = a_all[:K], b_all[:K]
    inf_a, inf_b = float(a_all.min()), float(b_all.min())
    if not inf_a + inf_b > 0:
        raise InvalidParametersError(f"inf a + inf b = {inf_a + inf_b} <= 0")
    width = inf_a + inf_b

    obj = lambda z: float(np.sum(1.0 / (a + z)) + np.sum(1.0 / (b - z)))  # noqa: E731
    lo, hi = -inf_a + 1e-9 * width, inf_b - 1e-9 * width
    zeta, _ = golden_section(obj, lo, hi, tol=xtol)
    lower = _mean(a, b, zeta)
    check = math.fsum(np.concatenate([1.0 / (a_all[K:] + zeta), 1.0 / (b_all[K:] - zeta)]))
    if not math.isfinite(lower) or check > tail_bound:
        raise DivergenceError(
            f"terms {K + 1}..{2 * K} contribute {check:g} > tail bound {tail_bound:g}; "
            "the series is not summable within budget")
    # convexity makes the value error quadratic in the argmin error
    slope = abs(math.fsum(np.concatenate([-1.0 / (a + zeta) ** 2, 1.0 / (b - zeta) ** 2])))
    solver_tol = slope * xtol * max(1.0, abs(lo) + abs(hi))
    return RainsLimit(
        value=lower + 0.5 * tail_bound,
        lower=lower,
        upper=lower + tail_bound,
        zeta=zeta,
        terms=K,
        tail_bound=tail_bound,
        solver_tol=solver_tol,
    )


def rains_objective(a_seq: SeqLike, b_seq: SeqLike, z: float, terms: int) -> float:
    """Truncated series value at a fixed z (compensated)."""
    a = _materialize(a_seq, terms)
    b = _materialize(b_seq, terms)
    return _mean(a, b, z)
