"""Inhomogeneity parameters a_m(i), b_n(j) of the exponential corner growth model.

A family is materialized eagerly up to ``cap``. Row ``m`` of a family is the
vector ``(a_m(1), ..., a_m(m))``; site (i, j) of the (m, n)-th weight grid has
rate ``a_m(i) + b_n(j)``.

Four kinds are supported:

* :class:`RowConstant` -- a_m(i) = c_i, no dependence on m.
* :class:`BlockConstant` -- a_m(i) = c_{ceil(i / block)}.
* :class:`Triangular` -- a base sequence plus overrides that are active only
  for a range of rows m, or fully explicit rows.
* :class:`MacroProfile` -- a_m(i) = f(i / m) for a piecewise-linear f.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .exceptions import InvalidParametersError, ParameterRangeError
from .measures import Measure1D


class ParamFamily:
    """Base class; subclasses fill ``self._rows_min`` via :meth:`_init_minima`."""

    kind: str = ""
    cap: int

    def row(self, m: int) -> np.ndarray:
        """Return ``(a_m(1), ..., a_m(m))`` as a float array."""
        raise NotImplementedError

    def regimes(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """Partition rows 1..cap into groups sharing one parameter vector.

        Each entry is ``(vector, rows)`` where ``vector`` has length ``cap`` and
        ``a_m(i) == vector[i - 1]`` for every ``m`` in ``rows`` and ``i <= m``.
        A single weight grid built from ``vector`` then yields G(m, .) for all
        those rows at once.
        """
        raise NotImplementedError

    def to_config(self) -> dict:
        raise NotImplementedError

    # ---- shared machinery -------------------------------------------------

    def _check_cap(self) -> None:
        if int(self.cap) != self.cap or self.cap < 1:
            raise InvalidParametersError(f"cap must be a positive integer, got {self.cap!r}")

    def _check_index(self, m: int, i: int | None = None) -> None:
        if not 1 <= m <= self.cap:
            raise ParameterRangeError(f"row m={m} outside 1..{self.cap}")
        if i is not None and not 1 <= i <= m:
            raise ParameterRangeError(f"index i={i} outside 1..{m}")

    def _init_minima(self) -> None:
        mins = np.empty(self.cap + 1)
        argmins = np.zeros(self.cap + 1, dtype=np.int64)
        mins[0] = math.inf
        for m in range(1, self.cap + 1):
            r = self.row(m)
            k = int(np.argmin(r))
            mins[m] = r[k]
            argmins[m] = k + 1
        if not np.all(np.isfinite(mins[1:])):
            raise InvalidParametersError(f"{self.kind} family has non-finite values")
        self._rows_min = mins
        self._rows_argmin = argmins

    def value(self, m: int, i: int) -> float:
        self._check_index(m, i)
        return float(self.row(m)[i - 1])

    def row_min(self, m: int) -> float:
        """min a_m; ``inf`` for m = 0 by convention."""
        if m == 0:
            return math.inf
        self._check_index(m)
        return float(self._rows_min[m])

    def row_argmin(self, m: int) -> int:
        self._check_index(m)
        return int(self._rows_argmin[m])

    @property
    def running_minima(self) -> np.ndarray:
        """Array ``r`` with ``r[m - 1] = min a_m`` for m = 1..cap."""
        return self._rows_min[1:].copy()

    @property
    def sup_of_minima_exact(self) -> bool:
        """True when sup_m min a_m over all m is already attained for m <= cap."""
        return False

    def __repr__(self) -> str:
        return f"{type(self).__name__}(cap={self.cap})"


def _apply_defects(values: np.ndarray, defects: Iterable[Sequence[float]]) -> np.ndarray:
    out = values.copy()
    for idx, val in defects:
        idx = int(idx)
        if not 1 <= idx <= len(out):
            raise ParameterRangeError(f"defect index {idx} outside 1..{len(out)}")
        out[idx - 1] = float(val)
    return out


class RowConstant(ParamFamily):
    kind = "RowConstant"

    def __init__(self, values: Sequence[float] | np.ndarray, cap: int | None = None,
                 defects: Iterable[Sequence[float]] = ()):
        v = np.asarray(values, dtype=float).ravel()
        if cap is None:
            cap = len(v)
        self.cap = cap
        self._check_cap()
        if len(v) < cap:
            raise InvalidParametersError(f"need {cap} values, got {len(v)}")
        self.defects = tuple((int(i), float(x)) for i, x in defects)
        self.values = _apply_defects(v[:cap], self.defects)
        self.values.setflags(write=False)
        # running minima of a fixed sequence are its cumulative minima
        self._rows_min = np.concatenate([[math.inf], np.minimum.accumulate(self.values)])
        arg = np.zeros(cap + 1, dtype=np.int64)
        best = 0
        for k in range(cap):
            if self.values[k] < self.values[best]:
                best = k
            arg[k + 1] = best + 1
        self._rows_argmin = arg

    @classmethod
    def constant(cls, value: float, cap: int, defects: Iterable[Sequence[float]] = ()) -> "RowConstant":
        return cls(np.full(cap, float(value)), cap, defects)

    def row(self, m: int) -> np.ndarray:
        self._check_index(m)
        return self.values[:m]

    def regimes(self):
        return [(np.array(self.values), np.arange(1, self.cap + 1))]

    @property
    def sup_of_minima_exact(self) -> bool:
        return True

    def to_config(self) -> dict:
        base = self.values.copy()
        for i, _ in self.defects:
            base[i - 1] = np.nan
        uniq = np.unique(base[~np.isnan(base)])
        if len(uniq) == 1:
            vals: float | list = float(uniq[0])
            defects = [list(d) for d in self.defects]
        else:
            vals = [float(x) for x in self.values]
            defects = []
        return {"kind": self.kind, "cap": self.cap, "values": vals, "defects": defects}


class BlockConstant(ParamFamily):
    """a_m(i) = base[ceil(i / block) - 1]; the block weights of the Rains model."""

    kind = "BlockConstant"

    def __init__(self, base: Sequence[float], block: int, cap: int | None = None):
        self.base = np.asarray(base, dtype=float).ravel()
        self.base.setflags(write=False)
        if int(block) != block or block < 1:
            raise InvalidParametersError(f"block size must be a positive integer, got {block!r}")
        self.block = int(block)
        self.cap = len(self.base) * self.block if cap is None else cap
        self._check_cap()
        if len(self.base) * self.block < self.cap:
            raise InvalidParametersError(
                f"{len(self.base)} blocks of size {self.block} cannot reach cap {self.cap}")
        self._vec = np.repeat(self.base, self.block)[: self.cap]
        self._rows_min = np.concatenate([[math.inf], np.minimum.accumulate(self._vec)])
        self._rows_argmin = np.concatenate(
            [[0], [int(np.argmin(self._vec[:m])) + 1 for m in range(1, self.cap + 1)]]
        ).astype(np.int64)

    def row(self, m: int) -> np.ndarray:
        self._check_index(m)
        return self._vec[:m]

    def regimes(self):
        return [(self._vec.copy(), np.arange(1, self.cap + 1))]

    @property
    def sup_of_minima_exact(self) -> bool:
        return True

    def to_config(self) -> dict:
        return {"kind": self.kind, "cap": self.cap, "values": [float(x) for x in self.base],
                "block": self.block}


@dataclass(frozen=True)
class Override:
    """a_m(index) = value for m_min <= m <= m_max (m_max None means unbounded)."""

    index: int
    value: float
    m_min: int = 1
    m_max: int | None = None

    def active(self, m: int) -> bool:
        return self.index <= m and self.m_min <= m and (self.m_max is None or m <= self.m_max)


class Triangular(ParamFamily):
    """Row-dependent parameters.

    Either ``base`` plus row-ranged :class:`Override` entries, or explicit rows
    through :meth:`from_rows`. The override form scales to large caps because
    its rows fall into few regimes.
    """

    kind = "Triangular"

    def __init__(self, base: Sequence[float] | None = None, overrides: Iterable = (),
                 cap: int | None = None, rows: Sequence[Sequence[float]] | None = None):
        if rows is not None:
            self._rows = [np.asarray(r, dtype=float).ravel() for r in rows]
            for m, r in enumerate(self._rows, start=1):
                if len(r) != m:
                    raise InvalidParametersError(f"explicit row {m} has length {len(r)}")
                r.setflags(write=False)
            self.cap = len(self._rows) if cap is None else cap
            self._check_cap()
            if self.cap > len(self._rows):
                raise InvalidParametersError(f"only {len(self._rows)} explicit rows for cap {self.cap}")
            self.base = None
            self.overrides: tuple[Override, ...] = ()
        else:
            if base is None:
                raise InvalidParametersError("Triangular needs base values or explicit rows")
            self._rows = None
            b = np.asarray(base, dtype=float).ravel()
            self.cap = len(b) if cap is None else cap
            self._check_cap()
            if len(b) < self.cap:
                raise InvalidParametersError(f"need {self.cap} base values, got {len(b)}")
            self.base = b[: self.cap].copy()
            self.base.setflags(write=False)
            ovs = []
            for o in overrides:
                o = o if isinstance(o, Override) else Override(*o)
                if not 1 <= o.index <= self.cap:
                    raise ParameterRangeError(f"override index {o.index} outside 1..{self.cap}")
                ovs.append(o)
            self.overrides = tuple(ovs)
        self._init_minima()

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> "Triangular":
        return cls(rows=rows)

    def row(self, m: int) -> np.ndarray:
        self._check_index(m)
        if self._rows is not None:
            return self._rows[m - 1]
        r = self.base[:m].copy()
        for o in self.overrides:
            if o.active(m):
                r[o.index - 1] = o.value
        return r

    def _breakpoints(self) -> list[int]:
        pts = {1}
        for o in self.overrides:
            for p in (o.m_min, o.index, None if o.m_max is None else o.m_max + 1):
                if p is not None and 1 <= p <= self.cap:
                    pts.add(p)
        return sorted(pts)

    def regimes(self):
        if self._rows is not None:
            out = []
            for m in range(1, self.cap + 1):
                r = self._rows[m - 1]
                vec = np.concatenate([r, np.full(self.cap - m, float(np.max(r)))])
                out.append((vec, np.array([m])))
            return out
        pts = self._breakpoints() + [self.cap + 1]
        out = []
        for lo, hi in zip(pts[:-1], pts[1:]):
            vec = self.base.copy()
            for o in self.overrides:
                if o.m_min <= lo and (o.m_max is None or hi - 1 <= o.m_max):
                    vec[o.index - 1] = o.value
            out.append((vec, np.arange(lo, hi)))
        return out

    @property
    def sup_of_minima_exact(self) -> bool:
        # beyond the last breakpoint rows only grow by base entries, so minima can only drop
        return self._rows is None and self.cap >= self._breakpoints()[-1]

    def to_config(self) -> dict:
        if self._rows is not None:
            return {"kind": self.kind, "cap": self.cap, "rows": [[float(x) for x in r] for r in self._rows]}
        base = [float(x) for x in self.base]
        if len(set(base)) == 1:
            base = base[0]
        return {
            "kind": self.kind,
            "cap": self.cap,
            "values": base,
            "overrides": [[o.index, o.value, o.m_min, o.m_max] for o in self.overrides],
        }


class MacroProfile(ParamFamily):
    """a_m(i) = f(i / m) with f piecewise linear through ``breakpoints`` [(u, f(u)), ...] on [0, 1]."""

    kind = "MacroProfile"

    def __init__(self, breakpoints: Sequence[Sequence[float]], cap: int):
        bp = np.asarray(breakpoints, dtype=float)
        if bp.ndim != 2 or bp.shape[1] != 2 or len(bp) < 1:
            raise InvalidParametersError("profile needs breakpoints [[u, value], ...]")
        if np.any(np.diff(bp[:, 0]) <= 0) or bp[0, 0] > 0 or bp[-1, 0] < 1:
            raise InvalidParametersError("profile breakpoints must increase and cover [0, 1]")
        self.breakpoints = bp
        self.cap = cap
        self._check_cap()
        self._init_minima()

    def profile(self, u) -> np.ndarray:
        return np.interp(u, self.breakpoints[:, 0], self.breakpoints[:, 1])

    def row(self, m: int) -> np.ndarray:
        self._check_index(m)
        return self.profile(np.arange(1, m + 1) / m)

    def regimes(self):
        out = []
        for m in range(1, self.cap + 1):
            r = self.row(m)
            out.append((np.concatenate([r, np.full(self.cap - m, float(np.max(r)))]), np.array([m])))
        return out

    def to_config(self) -> dict:
        return {"kind": self.kind, "cap": self.cap, "profile": self.breakpoints.tolist()}


def family_from_config(cfg: dict) -> ParamFamily:
    """Build a family from its run-configuration dictionary."""
    kind = cfg.get("kind")
    cap = cfg.get("cap")
    if cap is not None:
        cap = int(cap)
    values = cfg.get("values")
    if kind == "RowConstant":
        if np.ndim(values) == 0:
            return RowConstant.constant(float(values), cap, cfg.get("defects", ()))
        return RowConstant(values, cap, cfg.get("defects", ()))
    if kind == "BlockConstant":
        return BlockConstant(values, int(cfg["block"]), cap)
    if kind == "Triangular":
        if "rows" in cfg:
            return Triangular.from_rows(cfg["rows"])
        if np.ndim(values) == 0:
            values = np.full(cap, float(values))
        ovs = [Override(int(o[0]), float(o[1]), int(o[2]) if len(o) > 2 else 1,
                        None if len(o) < 4 or o[3] is None else int(o[3]))
               for o in cfg.get("overrides", ())]
        return Triangular(values, ovs, cap)
    if kind == "MacroProfile":
        return MacroProfile(cfg["profile"], cap)
    raise InvalidParametersError(f"unknown parameter family kind {kind!r}")


class ParamPair:
    """The pair (a, b); construction checks a_m(i) + b_n(j) > 0 up to both caps."""

    def __init__(self, a: ParamFamily, b: ParamFamily):
        self.a = a
        self.b = b
        ma = a._rows_min[1:]
        mb = b._rows_min[1:]
        m = int(np.argmin(ma)) + 1
        n = int(np.argmin(mb)) + 1
        if not ma[m - 1] + mb[n - 1] > 0:
            raise InvalidParametersError(
                f"a_m(i) + b_n(j) = {ma[m - 1] + mb[n - 1]:g} <= 0 at "
                f"(m, n, i, j) = ({m}, {n}, {a.row_argmin(m)}, {b.row_argmin(n)})"
            )

    @property
    def cap_m(self) -> int:
        return self.a.cap

    @property
    def cap_n(self) -> int:
        return self.b.cap

    @classmethod
    def homogeneous(cls, a: float = 0.5, b: float = 0.5, cap: int = 1000) -> "ParamPair":
        return cls(RowConstant.constant(a, cap), RowConstant.constant(b, cap))

    def rates(self, m: int, n: int) -> np.ndarray:
        """Rate matrix a_m(i) + b_n(j), shape (m, n)."""
        return self.a.row(m)[:, None] + self.b.row(n)[None, :]

    def to_config(self) -> dict:
        return {"a": self.a.to_config(), "b": self.b.to_config()}

    @classmethod
    def from_config(cls, cfg: dict) -> "ParamPair":
        return cls(family_from_config(cfg["a"]), family_from_config(cfg["b"]))


@dataclass(frozen=True)
class ParamSummary:
    m: int
    n: int
    min_a: float
    min_b: float
    interval: tuple[float, float]
    length: float
    frakA: float
    frakB: float
    frakA_truncated: bool
    frakB_truncated: bool


def summary(pp: ParamPair, m: int, n: int) -> ParamSummary:
    """Running minima, the admissible z-interval I(m, n) and the sups of running minima."""
    min_a = pp.a.row_min(m)
    min_b = pp.b.row_min(n)
    if not min_a + min_b > 0:
        raise InvalidParametersError(
            f"a_m(i) + b_n(j) <= 0 at (m, n, i, j) = ({m}, {n}, "
            f"{pp.a.row_argmin(m)}, {pp.b.row_argmin(n)})")
    return ParamSummary(
        m=m,
        n=n,
        min_a=min_a,
        min_b=min_b,
        interval=(-min_a, min_b),
        length=min_a + min_b,
        frakA=float(np.max(pp.a._rows_min[1:])),
        frakB=float(np.max(pp.b._rows_min[1:])),
        frakA_truncated=not pp.a.sup_of_minima_exact,
        frakB_truncated=not pp.b.sup_of_minima_exact,
    )


def empirical_measure(p: ParamFamily, m: int) -> Measure1D:
    """(1/m) * sum_i delta_{a_m(i)} as an atomic probability measure."""
    counts = Counter(p.row(m).tolist())
    locs = sorted(counts)
    return Measure1D(atoms=[(x, counts[x] / m) for x in locs])
