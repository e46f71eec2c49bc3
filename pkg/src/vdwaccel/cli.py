"""Command-line front end.

Verbs: ``rest``, ``accel``, ``near``, ``far``, ``consistency``, ``tensor-dump``.
Output is CSV with ``#`` comment lines at the top and a column-name row.
Floats are written with 17 significant digits so a fixed configuration
always produces byte-identical files.

Exit codes: 0 success, 2 configuration error, 3 quadrature failure (or a
failed consistency check).
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import sys
import warnings
from dataclasses import dataclass

import numpy as np

from . import __version__, energy, polarizability
from .constants import get_units
from .kinematics import Trajectory
from .potential_tensor import ModeContext, time_average_closed, time_average_numeric
from .quadrature import QuadratureError, QuadratureSpec

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_QUADRATURE = 3

VERBS = ("rest", "accel", "near", "far", "consistency", "tensor-dump")

DEFAULTS = {
    "units": "natural",
    "R_start": 100.0,
    "R_stop": None,
    "R_count": 1,
    "R_spacing": "linear",
    "a": 0.0,
    "t_start": 0.0,
    "t_stop": None,
    "t_count": 1,
    "alphaA": "static:1",
    "alphaB": "static:1",
    "rel_tol": None,
    "k": 1.0,
    "samples": 64,
    "form": "closed",
    "out": None,
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    verb: str
    units: str
    R: tuple[float, ...]
    a: float
    t: tuple[float, ...]
    alphaA: str
    alphaB: str
    rel_tol: float | None
    k: float
    samples: int
    form: str
    out: str | None

    @property
    def spec(self) -> QuadratureSpec | None:
        return None if self.rel_tol is None else QuadratureSpec(rel_tol=self.rel_tol)


def parse_model(text: str) -> polarizability.PolarizabilityModel:
    """``static:a0`` | ``lorentz:a0:k0`` | ``table:PATH``."""
    kind, _, rest = text.partition(":")
    try:
        if kind == "static":
            return polarizability.static(float(rest))
        if kind == "lorentz":
            a0, k0 = rest.split(":")
            return polarizability.lorentz(float(a0), float(k0))
        if kind == "table":
            return polarizability.load_table(rest)
    except (ValueError, OSError) as exc:
        raise ConfigError(f"bad polarizability {text!r}: {exc}") from None
    raise ConfigError(f"unknown polarizability kind in {text!r}")


def _grid(start, stop, count, spacing, name, positive):
    try:
        count = int(count)
        start = float(start)
        stop = None if stop is None else float(stop)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} grid: non-numeric value") from None
    if count < 1:
        raise ConfigError(f"{name} grid: count must be >= 1, got {count}")
    if positive and not start > 0:
        raise ConfigError(f"{name} grid: start must be > 0")
    if not positive and start < 0:
        raise ConfigError(f"{name} grid: start must be >= 0")
    if count == 1:
        if stop is not None and stop != start:
            raise ConfigError(f"{name} grid: count 1 needs stop == start or no stop")
        return (start,)
    if stop is None or not stop > start:
        raise ConfigError(f"{name} grid: stop must be > start for count > 1")
    if spacing == "linear":
        pts = np.linspace(start, stop, count)
    elif spacing == "log":
        if not start > 0:
            raise ConfigError(f"{name} grid: log spacing needs start > 0")
        pts = np.geomspace(start, stop, count)
    else:
        raise ConfigError(f"{name} grid: spacing must be linear or log")
    return tuple(float(p) for p in pts)


def _read_config(path):
    """Flatten an INI file into the option names used by the flags.

    Sections: ``[run]`` (units, a, rel_tol, k, samples, form, out),
    ``[R]`` and ``[t]`` (start, stop, count, spacing), ``[atomA]`` and
    ``[atomB]`` (``model = static:1`` style specs).
    """
    cp = configparser.ConfigParser()
    cp.optionxform = str
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    out = {}
    known = {"run", "R", "t", "atomA", "atomB"}
    for section in cp.sections():
        if section not in known:
            raise ConfigError(f"unknown config section [{section}]")
    for key, val in cp["run"].items() if cp.has_section("run") else ():
        out[key] = val
    for grid in ("R", "t"):
        if cp.has_section(grid):
            for key, val in cp[grid].items():
                out[f"{grid}_{key}"] = val
    for atom in ("atomA", "atomB"):
        if cp.has_section(atom):
            if "model" not in cp[atom]:
                raise ConfigError(f"[{atom}] needs a model = ... entry")
            out["alpha" + atom[-1]] = cp[atom]["model"]
    unknown = set(out) - set(DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return out


def build_config(args: argparse.Namespace) -> RunConfig:
    merged = dict(DEFAULTS)
    if args.config:
        merged.update(_read_config(args.config))
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    try:
        units = get_units(merged["units"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    try:
        a = float(merged["a"])
        k = float(merged["k"])
        samples = int(merged["samples"])
        rel_tol = None if merged["rel_tol"] is None else float(merged["rel_tol"])
    except ValueError as exc:
        raise ConfigError(f"non-numeric option: {exc}") from None
    if a < 0:
        raise ConfigError("a must be >= 0")
    if rel_tol is not None and not rel_tol > 0:
        raise ConfigError("rel-tol must be > 0")
    if merged["form"] not in ("closed", "integral"):
        raise ConfigError("form must be closed or integral")
    R = _grid(merged["R_start"], merged["R_stop"], merged["R_count"],
              merged["R_spacing"], "R", positive=True)
    t = _grid(merged["t_start"], merged["t_stop"], merged["t_count"],
              "linear", "t", positive=False)
    return RunConfig(args.verb, units.name, R, a, t, merged["alphaA"], merged["alphaB"],
                     rel_tol, k, samples, merged["form"], merged["out"])


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return "%.16e" % x
    return str(x)


class _Table:
    def __init__(self, cfg: RunConfig, columns):
        self.cfg = cfg
        self.comments = []
        self.columns = list(columns)
        self.rows = []

    def comment(self, text):
        self.comments.append(text)

    def add(self, *row):
        self.rows.append([_fmt(v) for v in row])

    def render(self) -> str:
        units = get_units(self.cfg.units)
        buf = io.StringIO()
        buf.write(f"# vdwaccel {__version__} {self.cfg.verb}\n")
        buf.write(f"# units={units.name} hbar={_fmt(units.hbar)} c={_fmt(units.c)} "
                  f"k_B={_fmt(units.k_B)}\n")
        buf.write(f"# alphaA={self.cfg.alphaA} alphaB={self.cfg.alphaB} a={_fmt(self.cfg.a)}\n")
        for line in self.comments:
            buf.write(f"# {line}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        w.writerows(self.rows)
        return buf.getvalue()


def _pair(cfg: RunConfig, R: float, t: float, models):
    units = get_units(cfg.units)
    return energy.AtomPair(models[0], models[1], R, Trajectory(cfg.a, units.c), t, units)


BREAKDOWN_COLUMNS = ("R", "t", "a", "E_rest", "E_a2t", "E_a2t2", "E_total",
                     "at_over_c", "aR_over_c2", "validity_flag", "regime",
                     "err_rest", "err_a2t", "err_a2t2", "status")


def _breakdown_rows(cfg, table, models, compute):
    failed = False
    nan = float("nan")
    for R in cfg.R:
        for t in cfg.t:
            pair = _pair(cfg, R, t, models)
            v = pair.validity
            try:
                b = compute(pair)
                status = "ok" if b.converged else "unconverged"
                vals = (b.rest, b.a2t_term, b.a2t2_term, b.total)
                errs = (b.errors["rest"], b.errors["a2t"], b.errors["a2t2"])
            except QuadratureError:
                failed = True
                status = "quadrature_error"
                vals, errs = (nan,) * 4, (nan,) * 3
            table.add(R, t, cfg.a, *vals, v.at_over_c, v.aR_over_c2, v.flag, v.regime,
                      *errs, status)
    return EXIT_QUADRATURE if failed else EXIT_OK


def cmd_rest(cfg: RunConfig, models) -> tuple[str, int]:
    table = _Table(cfg, ("R", "E_rest", "err", "regime", "status"))
    failed = False
    for R in cfg.R:
        pair = _pair(cfg, R, 0.0, models)
        try:
            res = energy.rest_energy(pair, "imaginary", cfg.spec)
            row = (res.value, res.error_estimate, pair.validity.regime, "ok")
        except QuadratureError:
            failed = True
            row = (float("nan"), float("nan"), pair.validity.regime, "quadrature_error")
        table.add(R, *row)
    return table.render(), EXIT_QUADRATURE if failed else EXIT_OK


def cmd_accel(cfg: RunConfig, models) -> tuple[str, int]:
    table = _Table(cfg, BREAKDOWN_COLUMNS)
    code = _breakdown_rows(cfg, table, models,
                           lambda p: energy.accelerated_energy(p, cfg.spec))
    return table.render(), code


def cmd_near(cfg: RunConfig, models) -> tuple[str, int]:
    table = _Table(cfg, BREAKDOWN_COLUMNS)
    code = _breakdown_rows(cfg, table, models,
                           lambda p: energy.near_zone_energy(p, cfg.spec))
    return table.render(), code


def cmd_far(cfg: RunConfig, models) -> tuple[str, int]:
    table = _Table(cfg, BREAKDOWN_COLUMNS)
    table.comment(f"form={cfg.form}")
    code = _breakdown_rows(cfg, table, models,
                           lambda p: energy.far_zone_energy(p, cfg.form, cfg.spec))
    return table.render(), code


def cmd_consistency(cfg: RunConfig, models) -> tuple[str, int]:
    pair = _pair(cfg, cfg.R[0], cfg.t[0], models)
    rep = energy.consistency_report(pair, cfg.spec)
    lap, abel = rep.a2t2_pair
    table = _Table(cfg, ("name", "value", "error", "expected", "rel_deviation", "within_tol"))
    table.comment(f"probe R={_fmt(pair.R)} t={_fmt(pair.t)} at_over_c={_fmt(rep.at_over_c)} "
                  f"aR_over_c2={_fmt(rep.aR_over_c2)}")
    table.comment(f"a2t2 imaginary/real = {_fmt(lap)}/{_fmt(abel)} "
                  f"ratio={_fmt(rep.a2t2_ratio)} discrepancy={rep.a2t2_discrepancy}")
    table.comment(f"rest_consistent={rep.rest_consistent} "
                  f"a2t_consistent={rep.a2t_consistent} status={rep.status}")
    for c in rep.coefficients:
        table.add(c.name, c.value, c.error, c.expected, c.rel_deviation,
                  c.rel_deviation <= rep.tolerance)
    return table.render(), EXIT_OK if rep.ok else EXIT_QUADRATURE


def cmd_tensor_dump(cfg: RunConfig, models) -> tuple[str, int]:
    units = get_units(cfg.units)
    R, t = cfg.R[0], cfg.t[0]
    if not cfg.k > 0:
        raise ConfigError("k must be > 0")
    if not t > 0:
        raise ConfigError("tensor-dump needs t > 0 (time-average window)")
    try:
        ctx = ModeContext(cfg.k, R, t, Trajectory(cfg.a, units.c))
        numeric = time_average_numeric(ctx, cfg.samples)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    closed = time_average_closed(ctx).V
    diff = np.abs(numeric.V - closed)
    table = _Table(cfg, ("i", "j", "closed", "numeric", "numeric_err", "abs_diff"))
    table.comment(f"k={_fmt(cfg.k)} R={_fmt(R)} t={_fmt(t)} omega_t={_fmt(ctx.omega * t)} "
                  f"at_over_c={_fmt(cfg.a * t / units.c)} "
                  f"samples={cfg.samples}")
    max_diff = float(diff.max())
    table.comment(f"max_norm_diff={_fmt(max_diff)} "
                  f"relative={_fmt(max_diff / float(np.abs(closed).max()))}")
    for i in range(3):
        for j in range(3):
            table.add(i + 1, j + 1, closed[i, j], numeric.V[i, j],
                      numeric.error[i, j], diff[i, j])
    return table.render(), EXIT_OK


COMMANDS = {
    "rest": cmd_rest,
    "accel": cmd_accel,
    "near": cmd_near,
    "far": cmd_far,
    "consistency": cmd_consistency,
    "tensor-dump": cmd_tensor_dump,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="vdwaccel",
        description="Dispersion energy of two uniformly accelerated atoms.",
    )
    p.add_argument("verb", choices=VERBS)
    p.add_argument("--config", metavar="PATH", help="INI file; flags override it")
    p.add_argument("--units", choices=("gaussian", "natural"))
    p.add_argument("--R-start", dest="R_start", type=float)
    p.add_argument("--R-stop", dest="R_stop", type=float)
    p.add_argument("--R-count", dest="R_count", type=int)
    p.add_argument("--R-spacing", dest="R_spacing", choices=("linear", "log"))
    p.add_argument("--a", type=float, help="proper acceleration")
    p.add_argument("--t-start", dest="t_start", type=float)
    p.add_argument("--t-stop", dest="t_stop", type=float)
    p.add_argument("--t-count", dest="t_count", type=int)
    p.add_argument("--alphaA", help="static:a0 | lorentz:a0:k0 | table:PATH")
    p.add_argument("--alphaB", help="static:a0 | lorentz:a0:k0 | table:PATH")
    p.add_argument("--rel-tol", dest="rel_tol", type=float)
    p.add_argument("--k", type=float, help="mode wavenumber for tensor-dump")
    p.add_argument("--samples", type=int, help="samples per period for tensor-dump")
    p.add_argument("--form", choices=("closed", "integral"), help="far-zone form")
    p.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        models = (parse_model(cfg.alphaA), parse_model(cfg.alphaB))
        with warnings.catch_warnings():
            # validity is reported per row
            warnings.simplefilter("ignore", energy.ValidityWarning)
            text, code = COMMANDS[cfg.verb](cfg, models)
    except (ConfigError, energy.StaticModelRequired) as exc:
        print(f"vdwaccel: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QuadratureError as exc:
        print(f"vdwaccel: quadrature failure: {exc}", file=sys.stderr)
        return EXIT_QUADRATURE
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
