"""Limit-shape analytics for the inhomogeneous corner growth model.

Given limit data (alpha, beta, frak_a, frak_b) the shape function is

    gamma(x, y) = inf_{z in (-frak_a, frak_b)} x A(z) + y B(z),

and the scaled cluster converges to {gamma <= 1} together with axis
segments governed by frakA = sup_m min a_m and frakB = sup_n min b_n.
All public functions broadcast over numpy arrays of (x, y).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator

import numpy as np

from ._optimize import bisect_decreasing_vec, golden_section
from .exceptions import DomainError, InvalidParametersError
from .measures import Measure1D, TransformPair, inverse_moment

#: z-grid size of the dense scan behind limit_height / limit_flux
SCAN_POINTS = 1025


@dataclass(frozen=True)
class ShapeSpec:
    tp: TransformPair
    frakA: float
    frakB: float

    def __post_init__(self):
        if self.frakA < self.tp.mfa:
            raise InvalidParametersError(f"frakA = {self.frakA} < frak_a = {self.tp.mfa}")
        if self.frakB < self.tp.mfb:
            raise InvalidParametersError(f"frakB = {self.frakB} < frak_b = {self.tp.mfb}")

    @classmethod
    def build(cls, alpha: Measure1D, beta: Measure1D, mfa: float, mfb: float,
              frakA: float | None = None, frakB: float | None = None) -> "ShapeSpec":
        return cls(TransformPair(alpha, beta, mfa, mfb),
                   mfa if frakA is None else frakA, mfb if frakB is None else frakB)

    @property
    def alpha(self) -> Measure1D:
        return self.tp.alpha

    @property
    def beta(self) -> Measure1D:
        return self.tp.beta

    @property
    def mfa(self) -> float:
        return self.tp.mfa

    @property
    def mfb(self) -> float:
        return self.tp.mfb

    @property
    def trivial(self) -> bool:
        """gamma vanishes identically."""
        return (math.isinf(self.mfa) or math.isinf(self.mfb)
                or (self.alpha.is_zero and self.beta.is_zero))

    def A(self, z):
        return inverse_moment(self.alpha, z, 1)

    def B(self, z):
        return inverse_moment(self.beta, -np.asarray(z, dtype=float) if np.ndim(z) else -float(z), 1)

    def dA(self, z):
        return -inverse_moment(self.alpha, z, 2)

    def dB(self, z):
        return inverse_moment(self.beta, -np.asarray(z, dtype=float) if np.ndim(z) else -float(z), 2)

    def edge_integrals(self) -> tuple[float, float, float, float]:
        """(int alpha/(a-fa)^2, int beta/(b+fa)^2, int alpha/(a+fb)^2, int beta/(b-fb)^2), possibly inf."""
        a, b = self.mfa, self.mfb
        return (inverse_moment(self.alpha, -a, 2), inverse_moment(self.beta, a, 2),
                inverse_moment(self.alpha, b, 2), inverse_moment(self.beta, -b, 2))

    def to_dict(self) -> dict:
        d = self.tp.to_dict()
        d["frakA"] = "inf" if math.isinf(self.frakA) else self.frakA
        d["frakB"] = "inf" if math.isinf(self.frakB) else self.frakB
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ShapeSpec":
        tp = TransformPair.from_dict(d)
        return cls(tp, float(d.get("frakA", tp.mfa)), float(d.get("frakB", tp.mfb)))


def rost_spec(a: float = 0.5, b: float = 0.5) -> ShapeSpec:
    """Homogeneous rates a + b: alpha = delta_a, beta = delta_b."""
    return ShapeSpec.build(Measure1D.dirac(a), Measure1D.dirac(b), a, b)


class Region(str, Enum):
    FlatV = "FlatV"
    FlatH = "FlatH"
    Curved = "Curved"


def _positive_xy(x, y) -> tuple[np.ndarray, np.ndarray, bool]:
    scalar = np.ndim(x) == 0 and np.ndim(y) == 0
    xa, ya = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    if not (np.all(xa > 0) and np.all(ya > 0)):
        raise DomainError("x and y must be strictly positive")
    return np.atleast_1d(xa).astype(float), np.atleast_1d(ya).astype(float), scalar


def _case_masks(spec: ShapeSpec, x: np.ndarray, y: np.ndarray):
    lv_a, lv_b, rh_a, rh_b = spec.edge_integrals()
    with np.errstate(invalid="ignore"):
        left = x * lv_a <= y * lv_b
        right = (x * rh_a >= y * rh_b) & ~left
    return left, right


def _argmin(spec: ShapeSpec, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    lo, hi = -spec.mfa, spec.mfb
    left, right = _case_masks(spec, x, y)
    z = np.where(left, lo, hi)
    inner = ~(left | right)
    if np.any(inner):
        xi, yi = x[inner], y[inner]

        def g(zz):
            # decreasing in z; +inf / -inf limits at the bracket ends
            return xi * inverse_moment(spec.alpha, zz, 2) - yi * inverse_moment(spec.beta, -zz, 2)

        xtol = 4e-16 * max(abs(lo), abs(hi), hi - lo)
        z[inner] = bisect_decreasing_vec(g, np.full(xi.shape, lo), np.full(xi.shape, hi), xtol=xtol)
    return z


def _degenerate_gamma(spec: ShapeSpec, x: np.ndarray, y: np.ndarray) -> np.ndarray | None:
    if spec.trivial:
        return np.zeros(x.shape)
    if spec.beta.is_zero:
        return x * spec.A(spec.mfb)
    if spec.alpha.is_zero:
        return y * spec.B(-spec.mfa)
    return None


def gamma(spec: ShapeSpec, x, y):
    """Shape function gamma(x, y) for x, y > 0 (scalars or broadcastable arrays)."""
    xa, ya, scalar = _positive_xy(x, y)
    out = _degenerate_gamma(spec, xa, ya)
    if out is None:
        z = _argmin(spec, xa.ravel(), ya.ravel()).reshape(xa.shape)
        out = xa * spec.A(z) + ya * spec.B(z)
    return float(out.ravel()[0]) if scalar else out


def gamma_argmin(spec: ShapeSpec, x, y):
    """Minimizing z of x A(z) + y B(z), clipped to [-frak_a, frak_b]."""
    xa, ya, scalar = _positive_xy(x, y)
    if spec.beta.is_zero and not spec.alpha.is_zero:
        z = np.full(xa.shape, spec.mfb)
    elif spec.alpha.is_zero:
        z = np.full(xa.shape, -spec.mfa)
    else:
        z = _argmin(spec, xa.ravel(), ya.ravel()).reshape(xa.shape)
    z = z + 0.0  # no signed zeros
    return float(z.ravel()[0]) if scalar else z


def argmin_residual(spec: ShapeSpec, x: float, y: float, z: float) -> float:
    """Relative residual of x int alpha/(a+z)^2 = y int beta/(b-z)^2."""
    lhs = x * inverse_moment(spec.alpha, z, 2)
    rhs = y * inverse_moment(spec.beta, -z, 2)
    return abs(lhs - rhs) / max(lhs, rhs)


def gamma_closure(spec: ShapeSpec, x, y):
    """gamma extended continuously to the closed quadrant: x A(frak_b) on y = 0, y B(-frak_a) on x = 0."""
    xa, ya = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    if np.any(xa < 0) or np.any(ya < 0):
        raise DomainError("x and y must be nonnegative")
    out = np.zeros(xa.shape)
    pos = (xa > 0) & (ya > 0)
    if np.any(pos):
        out[pos] = gamma(spec, xa[pos], ya[pos])
    if not spec.trivial:
        xs = (xa > 0) & (ya == 0)
        ys = (ya > 0) & (xa == 0)
        if np.any(xs):
            out[xs] = xa[xs] * spec.A(spec.mfb)
        if np.any(ys):
            out[ys] = ya[ys] * spec.B(-spec.mfa)
    return float(out) if out.ndim == 0 else out


def classify_region(spec: ShapeSpec, x, y):
    """FlatV / FlatH / Curved by the two edge second-moment inequalities."""
    xa, ya, scalar = _positive_xy(x, y)
    left, right = _case_masks(spec, xa, ya)
    lab = np.where(left, Region.FlatV.value, np.where(right, Region.FlatH.value, Region.Curved.value))
    return Region(str(lab.ravel()[0])) if scalar else lab


def _inv(v: float) -> float:
    return math.inf if v == 0 else 1.0 / v


def in_limit_shape(spec: ShapeSpec, x, y, rtol: float = 1e-12):
    """Membership in the limit shape: gamma <= 1 off the axes, x A(frakB) <= 1 and y B(-frakA) <= 1 on them."""
    xa, ya = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    if np.any(xa < 0) or np.any(ya < 0):
        raise DomainError("x and y must be nonnegative")
    out = np.zeros(xa.shape, dtype=bool)
    pos = (xa > 0) & (ya > 0)
    if np.any(pos):
        out[pos] = gamma(spec, xa[pos], ya[pos]) <= 1.0 + rtol
    xs = (ya == 0)
    ys = (xa == 0) & (ya > 0)
    if np.any(xs):
        out[xs] = xa[xs] * spec.A(spec.frakB) <= 1.0 + rtol
    if np.any(ys):
        out[ys] = ya[ys] * spec.B(-spec.frakA) <= 1.0 + rtol
    return bool(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# boundary geometry

@dataclass(frozen=True)
class BoundaryGeometry:
    """Boundary of the limit shape; segments are 2x2 arrays of endpoints, absent pieces are None."""

    curved: np.ndarray
    flat_v: np.ndarray | None
    flat_h: np.ndarray | None
    spike_v: np.ndarray | None
    spike_h: np.ndarray | None
    vertical_intercept: float
    horizontal_intercept: float
    degenerate: str | None = None

    def rows(self) -> Iterator[tuple[str, float, float]]:
        for kind in ("curved", "flat_v", "flat_h", "spike_v", "spike_h"):
            pts = getattr(self, kind)
            if pts is None:
                continue
            for px, py in pts:
                yield kind, float(px), float(py)

    def points(self) -> np.ndarray:
        parts = [p for p in (self.curved, self.flat_v, self.flat_h, self.spike_v, self.spike_h)
                 if p is not None and len(p)]
        return np.concatenate(parts) if parts else np.empty((0, 2))


def _phi(spec: ShapeSpec, z: np.ndarray) -> np.ndarray:
    A, B = spec.A(z), spec.B(z)
    dA, dB = spec.dA(z), spec.dB(z)
    den = A * dB - B * dA
    return np.column_stack([dB / den, -dA / den])


def cosine_grid(lo: float, hi: float, samples: int) -> np.ndarray:
    k = np.arange(samples)
    z = 0.5 * (lo + hi) - 0.5 * (hi - lo) * np.cos(np.pi * k / (samples - 1))
    z[0], z[-1] = lo, hi
    return z


def boundary(spec: ShapeSpec, samples: int = 201, truncate: float = math.inf) -> BoundaryGeometry:
    """Boundary polyline Phi(z), flat segments and axis spikes of the limit shape."""
    if samples < 2:
        raise ValueError("samples must be >= 2")
    if spec.trivial or spec.alpha.is_zero or spec.beta.is_zero:
        return _degenerate_boundary(spec, truncate)
    lo, hi = -spec.mfa, spec.mfb
    lv_a, _, _, rh_b = spec.edge_integrals()
    v_int = _inv(spec.B(lo))
    h_int = _inv(spec.A(hi))

    z = cosine_grid(lo, hi, samples)
    curved = np.empty((samples, 2))
    curved[1:-1] = _phi(spec, z[1:-1])
    curved[0] = _phi(spec, z[:1])[0] if math.isfinite(lv_a) else (0.0, v_int)
    curved[-1] = _phi(spec, z[-1:])[0] if math.isfinite(rh_b) else (h_int, 0.0)

    flat_v = np.array([[0.0, v_int], curved[0]]) if math.isfinite(lv_a) else None
    flat_h = np.array([curved[-1], [h_int, 0.0]]) if math.isfinite(rh_b) else None
    spike_v = spike_h = None
    if spec.frakA > spec.mfa:
        spike_v = np.array([[0.0, v_int], [0.0, min(_inv(spec.B(-spec.frakA)), truncate)]])
    if spec.frakB > spec.mfb:
        spike_h = np.array([[h_int, 0.0], [min(_inv(spec.A(spec.frakB)), truncate), 0.0]])
    return BoundaryGeometry(curved, flat_v, flat_h, spike_v, spike_h, v_int, h_int)


def _degenerate_boundary(spec: ShapeSpec, truncate: float) -> BoundaryGeometry:
    empty = np.empty((0, 2))
    if spec.trivial:
        return BoundaryGeometry(empty, None, None, None, None, math.inf, math.inf, "whole-quadrant")
    if spec.beta.is_zero:
        # {x A(frak_b) <= 1}: vertical half-line
        xi = _inv(spec.A(spec.mfb))
        line = np.array([[xi, 0.0], [xi, truncate]])
        return BoundaryGeometry(line, None, None, None, None, math.inf, xi, "half-line-vertical")
    yi = _inv(spec.B(-spec.mfa))
    line = np.array([[0.0, yi], [truncate, yi]])
    return BoundaryGeometry(line, None, None, None, None, yi, math.inf, "half-line-horizontal")


@dataclass(frozen=True)
class AxisFeature:
    kind: str  # "spike" or "crevice"
    lo: float
    hi: float


def spike_crevice_segment(spec: ShapeSpec, min_value: float, axis: str = "vertical") -> AxisFeature | None:
    """Spike or crevice next to an axis for a block of rows (vertical) or columns (horizontal)
    whose running minimum is ``min_value``."""
    if axis == "vertical":
        if spec.beta.is_zero:
            raise DomainError("vertical features need beta != 0")
        if not min_value + spec.mfb > 0:
            raise DomainError(f"min a + frak_b = {min_value + spec.mfb} <= 0")
        edge = _inv(spec.B(-spec.mfa))
        here = _inv(spec.B(-min_value))
        ref = spec.mfa
    elif axis == "horizontal":
        if spec.alpha.is_zero:
            raise DomainError("horizontal features need alpha != 0")
        if not min_value + spec.mfa > 0:
            raise DomainError(f"min b + frak_a = {min_value + spec.mfa} <= 0")
        edge = _inv(spec.A(spec.mfb))
        here = _inv(spec.A(min_value))
        ref = spec.mfb
    else:
        raise ValueError("axis must be 'vertical' or 'horizontal'")
    if min_value > ref:
        return AxisFeature("spike", edge, here)
    if min_value < ref:
        return AxisFeature("crevice", here, edge)
    return None


# ---------------------------------------------------------------------------
# limiting height and flux

def _finite_interval(spec: ShapeSpec) -> tuple[float, float]:
    if spec.alpha.is_zero or spec.beta.is_zero:
        raise DomainError("alpha and beta must both be nonzero")
    if spec.trivial:
        raise DomainError("unbounded parameter interval")
    return -spec.mfa, spec.mfb


def _height_obj(spec: ShapeSpec, y: float, t: float, z: np.ndarray) -> np.ndarray:
    A, B = spec.A(z), spec.B(z)
    num = t - y * B if y > 0 else np.full(z.shape, float(t))
    with np.errstate(invalid="ignore", divide="ignore"):
        val = num / A
    # A = inf only at the left end where B is finite: limit 0
    val = np.where(np.isinf(A), 0.0, val)
    return np.where(np.isnan(val), -math.inf, val)


def _flux_obj(spec: ShapeSpec, x: float, t: float, z: np.ndarray) -> np.ndarray:
    A, B = spec.A(z), spec.B(z)
    with np.errstate(invalid="ignore", divide="ignore"):
        num = t - x * A if x > 0 else np.full(z.shape, float(t))
        val = num / (A + B)
    val = np.where(np.isinf(A), -x if x > 0 else 0.0, val)
    val = np.where(np.isinf(B) & ~np.isinf(A), 0.0, val)
    return np.where(np.isnan(val), -math.inf, val)


@dataclass(frozen=True)
class SupResult:
    value: float
    z: float
    scan_value: float


def _maximize(obj, lo: float, hi: float) -> SupResult:
    z = cosine_grid(lo, hi, SCAN_POINTS)
    vals = obj(z)
    k = int(np.argmax(vals))
    scan = float(vals[k])
    a, b = z[max(k - 1, 0)], z[min(k + 1, SCAN_POINTS - 1)]
    zr, vr = golden_section(lambda s: float(obj(np.array([s]))[0]), a, b, tol=1e-14, maximize=True)
    if vr >= scan:
        return SupResult(vr, zr, scan)
    return SupResult(scan, float(z[k]), scan)


def _sup(spec, obj, coord: float, t: float) -> SupResult:
    if coord < 0 or t < 0:
        raise DomainError("coordinates and time must be nonnegative")
    lo, hi = _finite_interval(spec)
    if t == 0:
        return SupResult(0.0, math.nan, 0.0)
    res = _maximize(lambda z: obj(spec, coord, t, z), lo, hi)
    return SupResult(max(res.value, 0.0), res.z, max(res.scan_value, 0.0))


def limit_height_detail(spec: ShapeSpec, y: float, t: float) -> SupResult:
    return _sup(spec, _height_obj, y, t)


def limit_flux_detail(spec: ShapeSpec, x: float, t: float) -> SupResult:
    return _sup(spec, _flux_obj, x, t)


def limit_height(spec: ShapeSpec, y: float, t: float) -> float:
    """H(y, t) = max(sup_z (t - y B(z)) / A(z), 0)."""
    return limit_height_detail(spec, y, t).value


def limit_flux(spec: ShapeSpec, x: float, t: float) -> float:
    """F(x, t) = max(sup_z (t - x A(z)) / (A(z) + B(z)), 0)."""
    return limit_flux_detail(spec, x, t).value


def narrow_rate(spec: ShapeSpec | TransformPair, fixed_min: float, side: str = "column") -> float:
    """Growth rate along a thin strip: A(fixed_min) for a fixed column index set, B(-fixed_min) for rows.

    In the column case ``fixed_min`` is the minimum of b_n over the fixed columns and
    1 / A(fixed_min) is the limiting height speed of that row.
    """
    tp = spec.tp if isinstance(spec, ShapeSpec) else spec
    if side == "column":
        if not fixed_min + tp.alpha.inf_supp > 0:
            raise DomainError(f"inf a + fixed_min = {tp.alpha.inf_supp + fixed_min} <= 0")
        return float(tp.A(fixed_min))
    if side == "row":
        if not fixed_min + tp.beta.inf_supp > 0:
            raise DomainError(f"inf b + fixed_min = {tp.beta.inf_supp + fixed_min} <= 0")
        return float(tp.B(-fixed_min))
    raise ValueError("side must be 'row' or 'column'")


def fixed_row_speed(spec: ShapeSpec | TransformPair, min_b: float) -> float:
    return 1.0 / narrow_rate(spec, min_b, "column")
