"""Command-line front end.

    cornergrowth COMMAND [--config PATH] [--preset NAME] [--seed U64] [--threads N]
                 [--out DIR] [--t REAL] [--grid MxN] [--replicas N]

A run configuration is a JSON object with keys ``command``, ``preset``,
``params`` ({"a": family, "b": family}), ``shape``, ``grid``, ``t``, ``seed``,
``replicas`` and ``options`` (command-specific). Numbers may be given as
decimal strings. Presets fill in defaults, the config file overrides them and
flags override both. Every run writes its artifacts and a ``run.json``
manifest holding the resolved config, its hash, the seed, grid checksums and
artifact digests; thread count and wall time are deliberately left out so the
manifest depends only on the inputs.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__
from .centering import rains_limit, solve_centering
from .exceptions import CornerGrowthError, InvalidParametersError
from .lpp import ClusterRaster, checksum, collection_values
from .params import ParamPair
from .presets import preset as load_preset
from .shape import ShapeSpec, boundary, classify_region, gamma
from .tasep import TasepSampler
from . import verify as V

COMMANDS = ("simulate", "shape", "centering", "tasep", "verify-burke", "verify-permutation",
            "verify-tails", "verify-exit", "verify-limitshape", "verify-expsum", "rains")

EXIT_USAGE = 2
EXIT_CODES = {
    "range": 3,
    "invalid-parameters": 4,
    "domain": 5,
    "numerical": 6,
    "divergence": 7,
    "resource": 8,
    "insufficient-extent": 9,
    "data": 10,
    "config": 11,
    "io": 12,
}


class ConfigError(CornerGrowthError):
    code = "config"


# ---------------------------------------------------------------------------
# configuration

def _num(v, kind=float):
    if v is None:
        return None
    if isinstance(v, str):
        v = v.strip()
        if v.lower() in ("inf", "+inf", "infinity"):
            return math.inf
    try:
        return kind(float(v)) if kind is int else kind(v)
    except (TypeError, ValueError):
        raise ConfigError(f"not a number: {v!r}") from None


def _parse_grid(v) -> tuple[int, int] | None:
    if v is None:
        return None
    if isinstance(v, str):
        parts = v.lower().split("x")
        if len(parts) != 2:
            raise ConfigError(f"grid must look like MxN, got {v!r}")
        return _num(parts[0], int), _num(parts[1], int)
    if isinstance(v, (int, float)):
        return int(v), int(v)
    if len(v) != 2:
        raise ConfigError(f"grid must have two entries, got {v!r}")
    return _num(v[0], int), _num(v[1], int)


def _deep_merge(base: dict, over: dict) -> dict:
    out = dict(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict) and k != "params":
            out[k] = _deep_merge(out[k], v)
        else:
            out[k] = v
    return out


@dataclass
class RunConfig:
    command: str
    params: dict | None = None
    shape: dict | None = None
    grid: tuple[int, int] | None = None
    t: float | None = None
    seed: int = 0
    replicas: int | None = None
    out: str = "out"
    preset: str | None = None
    options: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        unknown = set(d) - {"command", "params", "shape", "grid", "t", "seed", "replicas", "out",
                            "preset", "options"}
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        cmd = d.get("command")
        if cmd not in COMMANDS:
            raise ConfigError(f"unknown command {cmd!r}; choose from {list(COMMANDS)}")
        seed = _num(d.get("seed", 0), int)
        if not 0 <= seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        rep = d.get("replicas")
        return cls(
            command=cmd,
            params=d.get("params"),
            shape=d.get("shape"),
            grid=_parse_grid(d.get("grid")),
            t=_num(d.get("t")),
            seed=seed,
            replicas=None if rep is None else _num(rep, int),
            out=str(d.get("out", "out")),
            preset=d.get("preset"),
            options=dict(d.get("options") or {}),
        )

    def canonical(self) -> dict:
        """Inputs that determine the artifacts (no output path, no thread count)."""
        return {
            "command": self.command,
            "preset": self.preset,
            "params": self.params,
            "shape": self.shape,
            "grid": list(self.grid) if self.grid else None,
            "t": self.t,
            "seed": self.seed,
            "replicas": self.replicas,
            "options": self.options,
        }

    def digest(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    # helpers used by the commands
    def param_pair(self) -> ParamPair:
        if not self.params:
            raise ConfigError("this command needs 'params' (or a preset)")
        return ParamPair.from_config(self.params)

    def shape_spec(self) -> ShapeSpec:
        if not self.shape:
            raise ConfigError("this command needs a 'shape' section (or a preset)")
        return ShapeSpec.from_dict(self.shape)

    def need_grid(self) -> tuple[int, int]:
        if self.grid is None:
            raise ConfigError("this command needs 'grid' (MxN)")
        return self.grid

    def need_t(self) -> float:
        if self.t is None:
            raise ConfigError("this command needs 't'")
        return self.t

    def opt(self, key: str, default: Any = None, kind: Callable = float):
        v = self.options.get(key, default)
        if v is None:
            return None
        if isinstance(v, (list, tuple)):
            return [_num(x, kind) for x in v]
        return _num(v, kind)


def resolve_config(file_cfg: dict | None, args: argparse.Namespace) -> RunConfig:
    base: dict = {}
    name = args.preset or (file_cfg or {}).get("preset")
    if name:
        try:
            base = load_preset(name)
        except InvalidParametersError as e:
            raise ConfigError(str(e)) from None
        base["preset"] = name
    merged = _deep_merge(base, file_cfg or {})
    if args.command:
        merged["command"] = args.command
    for key in ("seed", "t", "grid", "replicas", "out"):
        v = getattr(args, key)
        if v is not None:
            merged[key] = v
    if name:
        merged["preset"] = name
    return RunConfig.from_dict(merged)


# ---------------------------------------------------------------------------
# artifact bookkeeping

class Run:
    def __init__(self, cfg: RunConfig, threads: int):
        self.cfg = cfg
        self.threads = threads
        self.out = Path(cfg.out)
        self.out.mkdir(parents=True, exist_ok=True)
        self.artifacts: dict[str, str] = {}
        self.checksums: dict[str, str] = {}
        self.verdicts: list = []
        self.summary: dict[str, Any] = {}

    def path(self, name: str) -> Path:
        return self.out / name

    def csv(self, name: str, header, rows) -> None:
        V.write_csv(self.path(name), header, rows)
        self.artifacts[name] = ""

    def add(self, name: str) -> None:
        self.artifacts[name] = ""

    def finish(self) -> dict:
        if self.verdicts:
            V.write_verdicts(self.path("verdicts.json"), self.verdicts)
            self.artifacts["verdicts.json"] = ""
        for name in sorted(self.artifacts):
            self.artifacts[name] = hashlib.sha256(self.path(name).read_bytes()).hexdigest()
        manifest = {
            "tool": "cornergrowth",
            "version": __version__,
            "command": self.cfg.command,
            "config": self.cfg.canonical(),
            "config_sha256": self.cfg.digest(),
            "seed": self.cfg.seed,
            "grid_checksums": dict(sorted(self.checksums.items())),
            "artifacts": dict(sorted(self.artifacts.items())),
            "summary": self.summary,
        }
        if self.verdicts:
            manifest["pass"] = all(bool(v.passed) for v in self.verdicts)
        with open(self.path("run.json"), "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True, default=_json_default)
            fh.write("\n")
        return manifest


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, np.bool_):
        return bool(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")


def _boundary_rows(spec: ShapeSpec, samples: int, truncate: float):
    return list(boundary(spec, samples, truncate).rows())


# ---------------------------------------------------------------------------
# commands

def cmd_simulate(run: Run) -> None:
    cfg = run.cfg
    pp = cfg.param_pair()
    m, n = cfg.need_grid()
    t = cfg.need_t()
    mode = cfg.options.get("mode", "common")
    if mode == "common":
        G = collection_values(pp, m, n, cfg.seed, threads=run.threads)
        raster = ClusterRaster(t, G <= t)
        run.checksums["G"] = checksum(G)
    else:
        from .lpp import cluster
        raster = cluster(pp, t, m, n, cfg.seed, mode=mode, threads=run.threads)
    run.checksums["cluster"] = raster.checksum()
    raster.write_pgm(run.path("cluster.pgm"))
    run.add("cluster.pgm")
    raster.write_rle_csv(run.path("cluster_rle.csv"))
    run.add("cluster_rle.csv")
    run.summary.update(cluster_cells=raster.size, t=t, grid=[m, n])
    if cfg.shape:
        spec = cfg.shape_spec()
        samples = cfg.opt("samples", 400, int)
        # boundary of t * R, in lattice units
        rows = [(k, t * x, t * y) for k, x, y in _boundary_rows(spec, samples, max(m, n) / t)]
        run.csv("boundary.csv", ["kind", "x", "y"], rows)


def cmd_shape(run: Run) -> None:
    cfg = run.cfg
    spec = cfg.shape_spec()
    samples = cfg.opt("samples", 400, int)
    truncate = cfg.opt("truncate", 2.0)
    run.csv("boundary.csv", ["kind", "x", "y"], _boundary_rows(spec, samples, truncate))
    k = cfg.opt("gamma_points", 50, int)
    hi = cfg.opt("gamma_extent", 1.0)
    g = np.arange(1, k + 1) * (hi / k)
    X, Y = np.meshgrid(g, g, indexing="ij")
    G = gamma(spec, X, Y)
    if spec.alpha.is_zero or spec.beta.is_zero:
        R = np.full(X.shape, "Degenerate")
    else:
        R = classify_region(spec, X, Y)
    rows = [(float(x), float(y), float(v), str(r)) for x, y, v, r in
            zip(X.ravel(), Y.ravel(), G.ravel(), R.ravel())]
    run.csv("gamma.csv", ["x", "y", "gamma", "region"], rows)


def cmd_centering(run: Run) -> None:
    cfg = run.cfg
    pp = cfg.param_pair()
    pts = cfg.options.get("points")
    if pts is None:
        pts = [cfg.need_grid()]
    rows = []
    for m, n in pts:
        r = solve_centering(pp, int(m), int(n))
        rows.append((int(m), int(n), r.zeta, r.M, r.C, r.Delta, r.residual))
    run.csv("centering.csv", ["m", "n", "zeta", "M", "C", "Delta", "residual"], rows)


def cmd_tasep(run: Run) -> None:
    cfg = run.cfg
    pp = cfg.param_pair()
    ts = cfg.opt("times") or [cfg.need_t()]
    ns = cfg.opt("particles", [1], int)
    ms = cfg.opt("sites", [1], int)
    sampler = TasepSampler(pp, cfg.seed, threads=run.threads)
    hrows = []
    for n in ns:
        hs = sampler.heights(n, ts)
        hrows += [(t, n, int(h), int(h) - n + 1) for t, h in zip(ts, hs)]
    run.csv("height.csv", ["t", "n", "H", "sigma"], sorted(hrows))
    frows = [(t, m, sampler.flux(m, t)) for t in ts for m in ms]
    run.csv("flux.csv", ["t", "m", "F"], frows)


def _replicas(cfg: RunConfig, default: int) -> int:
    return default if cfg.replicas is None else cfg.replicas


def cmd_verify_burke(run: Run) -> None:
    cfg = run.cfg
    pp = cfg.param_pair()
    m, n = cfg.need_grid()
    zs = cfg.opt("z", [0.0])
    zs = zs if isinstance(zs, list) else [zs]
    rows_i = cfg.opt("rows", [1, m], int)
    cols_j = cfg.opt("cols", [1, n], int)
    out = []
    for k, z in enumerate(zs):
        res = V.burke_check(pp, m, n, z, cfg.seed, rows_i, cols_j, _replicas(cfg, 10_000),
                            grid_id0=k * 2**40, threads=run.threads)
        for r in res.reports:
            out.append((z, r.check, r.reference, r.statistic, r.threshold, r.passed))
            run.verdicts.append(V.Verdict(f"z={z!r} {r.check}", r.statistic, r.threshold, r.passed))
        for c in res.correlations:
            out.append((z, c.check, "|rho|", c.statistic, c.threshold, c.passed))
            run.verdicts.append(V.Verdict(f"z={z!r} {c.check}", c.statistic, c.threshold, c.passed))
    run.csv("burke.csv", ["z", "stream", "reference", "statistic", "threshold", "pass"], out)


def cmd_verify_permutation(run: Run) -> None:
    cfg = run.cfg
    pp = cfg.param_pair()
    other = cfg.options.get("permuted")
    if other is None:
        raise ConfigError("verify-permutation needs options.permuted (an a/b params block)")
    qq = ParamPair.from_config(other)
    m, n = cfg.need_grid()
    strict = bool(cfg.options.get("strict", True))
    rep = V.permutation_check(pp, qq, m, n, cfg.seed, _replicas(cfg, 20_000), strict=strict,
                              threads=run.threads)
    run.csv("permutation.csv", ["check", "statistic", "threshold", "pass"],
            [(rep.check, rep.statistic, rep.threshold, rep.passed)])
    run.verdicts.append(V.Verdict(rep.check, rep.statistic, rep.threshold, rep.passed))


def cmd_verify_tails(run: Run) -> None:
    cfg = run.cfg
    pp = cfg.param_pair()
    m, n = cfg.need_grid()
    s_grid = cfg.opt("s", [0, 1, 2, 3])
    reps = _replicas(cfg, 2000)
    samples = V.lpp_batch(pp.a.row(m), pp.b.row(n), cfg.seed, reps, 0, run.threads)
    rows = []
    for side in ("right", "left"):
        tp = V.tail_profile(pp, m, n, s_grid, reps, side, samples=samples)
        rows += [(side, r.s, r.level, r.frequency, r.lo, r.hi) for r in tp.rows]
        run.verdicts.append(V.Verdict(f"{side} nonincreasing", float(tp.nonincreasing), 1.0, tp.nonincreasing))
        if side == "right" and tp.below_half_at_1 is not None:
            f1 = next(r.frequency for r in tp.rows if r.s == 1.0)
            run.verdicts.append(V.Verdict(f"{side} below 1/2 at s=1", f1, 0.5, tp.below_half_at_1))
    run.csv("tails.csv", ["side", "s", "level", "frequency", "wilson_lo", "wilson_hi"], rows)


def cmd_verify_exit(run: Run) -> None:
    cfg = run.cfg
    pp = cfg.param_pair()
    m, n = cfg.need_grid()
    z = cfg.opt("z")
    ep = V.exit_profile(pp, m, n, cfg.seed, _replicas(cfg, 1000), z, threads=run.threads)
    keys = sorted(set(ep.hist_hor) | set(ep.hist_ver))
    run.csv("exits.csv", ["k", "count_Z_hor", "count_Z_ver"],
            [(k, ep.hist_hor.get(k, 0), ep.hist_ver.get(k, 0)) for k in keys])
    run.summary.update(z=ep.z, median_max_exit=ep.median_max_exit, scale=ep.scale,
                       frac_beyond_scale=ep.frac_beyond_scale)
    run.verdicts.append(V.Verdict("median max exit <= m^0.75", ep.median_max_exit, ep.scale,
                                  ep.median_max_exit <= ep.scale))


def cmd_verify_limitshape(run: Run) -> None:
    cfg = run.cfg
    pp = cfg.param_pair()
    spec = cfg.shape_spec()
    m, n = cfg.need_grid()
    times = cfg.opt("times") or [cfg.need_t()]
    C = cfg.opt("C", 1.1)
    h = cfg.opt("h", C / 800)
    tol = cfg.opt("tolerance", 0.08)
    res = V.limit_shape_check(pp, spec, times, min(m, n), cfg.seed, C, h, threads=run.threads)
    run.csv("limitshape.csv", ["t", "hausdorff"], [(r.t, r.distance) for r in res])
    last = max(res, key=lambda r: r.t)
    run.verdicts.append(V.Verdict(f"hausdorff t={last.t!r}", last.distance, tol, last.distance <= tol))
    ds = [r.distance for r in sorted(res, key=lambda r: r.t)]
    trend = all(b <= 1.5 * a for a, b in zip(ds, ds[1:]))
    run.verdicts.append(V.Verdict("nonincreasing within 50%", float(trend), 1.0, trend))


def cmd_verify_expsum(run: Run) -> None:
    cfg = run.cfg
    rates = cfg.opt("rates", [1.0] * 100)
    s_grid = cfg.opt("s", [0, 1, 2, 3, 4])
    rows, mono = V.expsum_concentration(rates, _replicas(cfg, 20_000), s_grid, cfg.seed)
    run.csv("expsum.csv", ["s", "frequency", "wilson_lo", "wilson_hi"],
            [(r.s, r.frequency, r.lo, r.hi) for r in rows])
    run.verdicts.append(V.Verdict("nonincreasing", float(mono), 1.0, mono))


_SERIES = {
    "squares": lambda i: np.asarray(i, dtype=float) ** 2,
}


def cmd_rains(run: Run) -> None:
    cfg = run.cfg
    name = cfg.options.get("series", "squares")
    if name not in _SERIES:
        raise ConfigError(f"unknown series {name!r}; choose from {sorted(_SERIES)}")
    f = _SERIES[name]
    tail = cfg.opt("tail_bound", 2.001e-6)
    terms = cfg.opt("terms", 10**6, int)
    lim = rains_limit(f, f, tail, terms)
    rows = [("limit", lim.value, lim.lower, lim.upper, lim.zeta)]
    ns = cfg.opt("n", 100, int)
    ns = ns if isinstance(ns, list) else [ns]
    blocks = cfg.opt("blocks", 20, int)
    sims = []
    for n in ns:
        rc = V.rains_check(f, f, n, blocks, cfg.seed, tail, terms)
        sims.append((n, blocks, rc.G, rc.ratio, rc.rel_error))
        run.verdicts.append(V.Verdict(f"ratio n={n} within 10%", rc.rel_error, 0.1, rc.rel_error <= 0.1))
    run.csv("rains_limit.csv", ["quantity", "value", "lower", "upper", "zeta"], rows)
    run.csv("rains.csv", ["n", "blocks", "G", "ratio", "rel_error"], sims)


DISPATCH = {
    "simulate": cmd_simulate,
    "shape": cmd_shape,
    "centering": cmd_centering,
    "tasep": cmd_tasep,
    "verify-burke": cmd_verify_burke,
    "verify-permutation": cmd_verify_permutation,
    "verify-tails": cmd_verify_tails,
    "verify-exit": cmd_verify_exit,
    "verify-limitshape": cmd_verify_limitshape,
    "verify-expsum": cmd_verify_expsum,
    "rains": cmd_rains,
}


def run(cfg: RunConfig, threads: int = 1) -> dict:
    """Execute one configured command and return its manifest."""
    r = Run(cfg, threads)
    DISPATCH[cfg.command](r)
    return r.finish()


# ---------------------------------------------------------------------------
# entry point

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cornergrowth",
                                description="Inhomogeneous exponential corner growth laboratory.")
    p.add_argument("command", nargs="?", choices=COMMANDS, help="subcommand (or 'command' in the config)")
    p.add_argument("--config", metavar="PATH", help="JSON run configuration")
    p.add_argument("--preset", metavar="NAME", help="rost | fig1b | fig1c | fig1d | rains-squares")
    p.add_argument("--seed", metavar="U64", type=int)
    p.add_argument("--threads", metavar="N", type=int, default=None,
                   help="worker threads (default: hardware count)")
    p.add_argument("--out", metavar="DIR")
    p.add_argument("--t", metavar="REAL", type=float)
    p.add_argument("--grid", metavar="MxN")
    p.add_argument("--replicas", metavar="N", type=int)
    return p


def _fail(code: str, message: str) -> int:
    print(json.dumps({"error": code, "message": message}), file=sys.stderr)
    return EXIT_CODES.get(code, 1)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    file_cfg = None
    if args.config:
        try:
            with open(args.config) as fh:
                file_cfg = json.load(fh)
        except OSError as e:
            return _fail("io", str(e))
        except json.JSONDecodeError as e:
            return _fail("config", f"invalid JSON: {e}")
        if not isinstance(file_cfg, dict):
            return _fail("config", "config must be a JSON object")
        if "config_sha256" in file_cfg and isinstance(file_cfg.get("config"), dict):
            # a run.json manifest: replay its resolved configuration
            file_cfg = {k: v for k, v in file_cfg["config"].items() if v is not None}
    if not args.command and not args.preset and not (file_cfg or {}).get("command") \
            and not (file_cfg or {}).get("preset"):
        parser.print_usage(sys.stderr)
        print("error: no command given (positional, config 'command', or a preset)", file=sys.stderr)
        return EXIT_USAGE
    threads = args.threads if args.threads is not None else (os.cpu_count() or 1)
    if threads < 1:
        return _fail("config", "--threads must be >= 1")
    try:
        cfg = resolve_config(file_cfg, args)
        manifest = run(cfg, threads)
    except CornerGrowthError as e:
        return _fail(e.code, str(e))
    except OSError as e:
        return _fail("io", str(e))
    print(json.dumps({"command": manifest["command"], "out": str(Path(cfg.out)),
                      "config_sha256": manifest["config_sha256"], "pass": manifest.get("pass")}))
    # statistical verdicts live in verdicts.json; a failed check is not a failed run
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
