"""Finite measures on the line built from atoms and uniform pieces, and their
Cauchy-type transforms

    A(z) = int alpha(da) / (a + z),      B(z) = int beta(db) / (b - z).

Everything reduces to the inverse power moments

    I_k(w) = int mu(dt) / (t + w)^k,     k >= 1,

which have closed forms on atoms and uniform pieces. ``I_k(w)`` is defined
for ``w >= -inf supp mu``; at the edge it is ``+inf`` (every admissible
measure here puts mass at its support infimum).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from numba import njit

from .exceptions import DomainError, InvalidParametersError


@dataclass(frozen=True, eq=False)
class Measure1D:
    atoms: tuple[tuple[float, float], ...] = ()
    pieces: tuple[tuple[float, float, float], ...] = ()
    _arrays: tuple = field(init=False, repr=False)

    def __init__(self, atoms: Iterable[Sequence[float]] = (), pieces: Iterable[Sequence[float]] = ()):
        atoms = tuple((float(x), float(w)) for x, w in atoms)
        pieces = tuple((float(l), float(r), float(w)) for l, r, w in pieces)
        for x, w in atoms:
            if not (math.isfinite(x) and math.isfinite(w) and w >= 0):
                raise InvalidParametersError(f"bad atom ({x}, {w})")
        for l, r, w in pieces:
            if not (math.isfinite(l) and math.isfinite(r) and l < r and math.isfinite(w) and w >= 0):
                raise InvalidParametersError(f"bad piece ({l}, {r}, {w})")
        # zero-mass components do not belong to the support
        atoms = tuple(a for a in atoms if a[1] > 0)
        pieces = tuple(p for p in pieces if p[2] > 0)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "pieces", pieces)
        arrs = (
            np.array([a[0] for a in atoms], dtype=float),
            np.array([a[1] for a in atoms], dtype=float),
            np.array([p[0] for p in pieces], dtype=float),
            np.array([p[1] for p in pieces], dtype=float),
            np.array([p[2] for p in pieces], dtype=float),
        )
        object.__setattr__(self, "_arrays", arrs)

    @classmethod
    def dirac(cls, loc: float, mass: float = 1.0) -> "Measure1D":
        return cls(atoms=[(loc, mass)])

    @classmethod
    def uniform(cls, left: float, right: float, mass: float = 1.0) -> "Measure1D":
        return cls(pieces=[(left, right, mass)])

    @classmethod
    def zero(cls) -> "Measure1D":
        return cls()

    @property
    def total_mass(self) -> float:
        return math.fsum([w for _, w in self.atoms] + [w for _, _, w in self.pieces])

    @property
    def is_zero(self) -> bool:
        return not self.atoms and not self.pieces

    @property
    def inf_supp(self) -> float:
        pts = [x for x, _ in self.atoms] + [l for l, _, _ in self.pieces]
        return min(pts) if pts else math.inf

    def to_dict(self) -> dict:
        return {"atoms": [list(a) for a in self.atoms], "pieces": [list(p) for p in self.pieces]}

    @classmethod
    def from_dict(cls, d: dict) -> "Measure1D":
        return cls(d.get("atoms", ()), d.get("pieces", ()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Measure1D):
            return NotImplemented
        return sorted(self.atoms) == sorted(other.atoms) and sorted(self.pieces) == sorted(other.pieces)

    def __hash__(self) -> int:
        return hash((tuple(sorted(self.atoms)), tuple(sorted(self.pieces))))

    def __repr__(self) -> str:
        parts = []
        if self.atoms:
            parts.append(f"atoms={list(self.atoms)}")
        if self.pieces:
            parts.append(f"pieces={list(self.pieces)}")
        return f"Measure1D({', '.join(parts) or '0'})"


@njit(cache=True)
def _moment_kernel(locs, masses, pl, pr, pm, w, k):
    # Neumaier-compensated sum of int mu(dt) / (t + w)^k over atoms and pieces.
    out = np.empty(w.shape[0])
    for q in range(w.shape[0]):
        ww = w[q]
        s = 0.0
        c = 0.0
        for a in range(locs.shape[0]):
            term = masses[a] / (locs[a] + ww) ** k
            t = s + term
            if abs(s) >= abs(term):
                c += (s - t) + term
            else:
                c += (term - t) + s
            s = t
        for p in range(pl.shape[0]):
            lo = pl[p] + ww
            hi = pr[p] + ww
            dens = pm[p] / (pr[p] - pl[p])
            if k == 1:
                term = dens * np.log1p((pr[p] - pl[p]) / lo)
            else:
                term = dens * (lo ** (1 - k) - hi ** (1 - k)) / (k - 1)
            t = s + term
            if abs(s) >= abs(term):
                c += (s - t) + term
            else:
                c += (term - t) + s
            s = t
        out[q] = s + c
    return out


def inverse_moment(mu: Measure1D, w, k: int = 1):
    """int mu(dt) / (t + w)^k for scalar or array ``w``; ``+inf`` at ``w = -inf supp mu``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    scalar = np.ndim(w) == 0
    wa = np.atleast_1d(np.asarray(w, dtype=float))
    if mu.is_zero:
        out = np.zeros(wa.shape)
        return float(out[0]) if scalar else out
    edge = -mu.inf_supp
    if np.any(np.isnan(wa)) or np.any(wa < edge):
        bad = wa[np.isnan(wa) | (wa < edge)][0]
        raise DomainError(f"argument {bad:g} falls inside the (reflected) support; need >= {edge:g}")
    flat = wa.ravel()
    inner = flat > edge
    res = np.full(flat.shape, math.inf)
    if np.any(inner):
        res[inner] = _moment_kernel(*mu._arrays, np.ascontiguousarray(flat[inner]), k)
    res = res.reshape(wa.shape)
    return float(res[0]) if scalar else res


def cauchy_A(alpha: Measure1D, z):
    """A(z) = int alpha(da) / (a + z), valid for z >= -inf supp alpha."""
    return inverse_moment(alpha, z, 1)


def cauchy_B(beta: Measure1D, z):
    """B(z) = int beta(db) / (b - z), valid for z <= inf supp beta."""
    return inverse_moment(beta, -np.asarray(z, dtype=float) if np.ndim(z) else -float(z), 1)


def cauchy_deriv(mu: Measure1D, z, order: int = 1, side: str = "A"):
    """n-th z-derivative of A (side="A") or B (side="B").

    d^n A / dz^n = (-1)^n n! int alpha(da) / (a + z)^(n+1)
    d^n B / dz^n =        n! int beta(db)  / (b - z)^(n+1)

    A divergent edge value comes back as an infinity with the formula's sign.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if side not in ("A", "B"):
        raise ValueError("side must be 'A' or 'B'")
    fact = math.factorial(order)
    if side == "A":
        val = inverse_moment(mu, z, order + 1)
        sign = -1.0 if order % 2 else 1.0
    else:
        val = inverse_moment(mu, -np.asarray(z, dtype=float) if np.ndim(z) else -float(z), order + 1)
        sign = 1.0
    return sign * fact * val


@dataclass(frozen=True)
class TransformPair:
    """Limit data (alpha, beta, frak_a, frak_b) defining the shape function."""

    alpha: Measure1D
    beta: Measure1D
    mfa: float
    mfb: float

    def __post_init__(self):
        if not self.mfa + self.mfb > 0:
            raise InvalidParametersError(f"need frak_a + frak_b > 0, got {self.mfa} + {self.mfb}")
        if self.mfa > self.alpha.inf_supp:
            raise InvalidParametersError(
                f"frak_a = {self.mfa} exceeds inf supp alpha = {self.alpha.inf_supp}")
        if self.mfb > self.beta.inf_supp:
            raise InvalidParametersError(
                f"frak_b = {self.mfb} exceeds inf supp beta = {self.beta.inf_supp}")

    def A(self, z):
        return cauchy_A(self.alpha, z)

    def B(self, z):
        return cauchy_B(self.beta, z)

    def to_dict(self) -> dict:
        return {"alpha": self.alpha.to_dict(), "beta": self.beta.to_dict(),
                "mfa": _enc(self.mfa), "mfb": _enc(self.mfb)}

    @classmethod
    def from_dict(cls, d: dict) -> "TransformPair":
        return cls(Measure1D.from_dict(d["alpha"]), Measure1D.from_dict(d["beta"]),
                   _dec(d["mfa"]), _dec(d["mfb"]))


def _enc(x: float):
    return "inf" if math.isinf(x) else x


def _dec(x) -> float:
    return float(x)
