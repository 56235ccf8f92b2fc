"""Named experiment presets.

Rates are split as a_m(i) + b_n(j) with b = 0.5, so a site of rate r in a
marked column i has a_m(i) = r - 0.5.

* ``rost``: all rates 1.
* ``fig1b``: rate 0.5 in column 100.
* ``fig1c``: rate 0.75 in column 50 and 0.5 in column 100.
* ``fig1d``: rate 0.25 in column 50 while m < 100, rate 0.5 in column 100 once m >= 100.
* ``rains-squares``: block-constant rates k^2 + l^2 on blocks of size n = 100.
"""

from __future__ import annotations

import copy

from .exceptions import InvalidParametersError

N_FIG = 4000
T_FIG = 1000.0

_HALF = {"atoms": [[0.5, 1.0]], "pieces": []}


def _const(cap: int = N_FIG) -> dict:
    return {"kind": "RowConstant", "cap": cap, "values": 0.5}


def _fig_shape(frakA: float = 0.5) -> dict:
    return {"alpha": _HALF, "beta": _HALF, "mfa": 0.0, "mfb": 0.5, "frakA": frakA, "frakB": 0.5}


PRESETS: dict[str, dict] = {
    "rost": {
        "command": "simulate",
        "params": {"a": _const(), "b": _const()},
        "shape": {"alpha": _HALF, "beta": _HALF, "mfa": 0.5, "mfb": 0.5, "frakA": 0.5, "frakB": 0.5},
        "grid": [N_FIG, N_FIG],
        "t": T_FIG,
    },
    "fig1b": {
        "command": "simulate",
        "params": {"a": {"kind": "RowConstant", "cap": N_FIG, "values": 0.5, "defects": [[100, 0.0]]},
                   "b": _const()},
        "shape": _fig_shape(),
        "grid": [N_FIG, N_FIG],
        "t": T_FIG,
    },
    "fig1c": {
        "command": "simulate",
        "params": {"a": {"kind": "RowConstant", "cap": N_FIG, "values": 0.5,
                         "defects": [[50, 0.25], [100, 0.0]]},
                   "b": _const()},
        "shape": _fig_shape(),
        "grid": [N_FIG, N_FIG],
        "t": T_FIG,
    },
    "fig1d": {
        "command": "simulate",
        "params": {"a": {"kind": "Triangular", "cap": N_FIG, "values": 0.5,
                         "overrides": [[50, -0.25, 1, 99], [100, 0.0, 100, None]]},
                   "b": _const()},
        "shape": _fig_shape(),
        "grid": [N_FIG, N_FIG],
        "t": T_FIG,
    },
    "rains-squares": {
        "command": "rains",
        "params": {"a": {"kind": "BlockConstant", "cap": 2000, "values": [float(k * k) for k in range(1, 21)],
                         "block": 100},
                   "b": {"kind": "BlockConstant", "cap": 2000, "values": [float(k * k) for k in range(1, 21)],
                         "block": 100}},
        "options": {"series": "squares", "n": 100, "blocks": 20, "terms": 1000000, "tail_bound": 2.001e-6},
    },
}


def preset(name: str) -> dict:
    try:
        return copy.deepcopy(PRESETS[name])
    except KeyError:
        raise InvalidParametersError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
