"""Command-line driver.

Commands: ``series``, ``bounds``, ``residuals``, ``radius``, ``ab-exact`` and
``trajectory``.  Exit status is 0 on success, 2 for invalid input and 3
for numerical failures (for instance step-size underflow in the
trajectory integrator).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import presets
from .abflow import StepUnderflow, ab_singular_time, ab_trajectory_path
from .bounds import (
    CUBICS,
    RADIUS_METHODS,
    bound_table,
    critical_time,
    cubic_bound_root,
    partial_sums,
    radius_estimate,
)
from .euler import TaylorSeries, compute_series, evaluate_map, residuals
from .poisson import ep_compute_series, ep_mass_residual
from .spectral import SpectralError, SpectralField

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3
PROBLEMS = ("euler", "euler-poisson")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    problem: str = "euler"
    orders: list[int] = field(default_factory=lambda: [8])
    cap: int | None = None
    preset: str | None = None
    inline: dict | None = None
    evals: list[tuple[tuple[float, ...], float]] = field(default_factory=list)

    @property
    def S(self) -> int:
        return max(self.orders)

    def validate(self) -> "RunConfig":
        if self.problem not in PROBLEMS:
            raise ConfigError(f"problem must be one of {PROBLEMS}")
        if (self.preset is None) == (self.inline is None):
            raise ConfigError("give exactly one of a preset name or inline initial data")
        if not self.orders or min(self.orders) < 1:
            raise ConfigError("orders must be at least 1")
        if self.cap is not None and self.cap < 1:
            raise ConfigError("cap must be a positive integer")
        return self


@dataclass
class RunReport:
    warnings: list[tuple[str, str]] = field(default_factory=list)
    files: list[str] = field(default_factory=list)

    def warn(self, code: str, message: str) -> None:
        self.warnings.append((code, message))
        print(f"warning[{code}]: {message}", file=sys.stderr)


def _parse_orders(text) -> list[int]:
    if isinstance(text, int):
        return [text]
    if isinstance(text, list):
        return [int(v) for v in text]
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"bad order list {text!r}") from None


def load_config(args) -> RunConfig:
    """Merge a JSON config file (if any) with command-line overrides."""
    doc = {}
    if getattr(args, "input", None):
        doc = json.loads(Path(args.input).read_text())
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
    cfg = RunConfig()
    cfg.problem = doc.get("problem", cfg.problem)
    if "orders" in doc:
        cfg.orders = _parse_orders(doc["orders"])
    cfg.cap = doc.get("cap")
    initial = doc.get("initial")
    if isinstance(initial, str):
        cfg.preset = initial
    elif isinstance(initial, dict):
        if set(initial) == {"preset"}:
            cfg.preset = initial["preset"]
        else:
            cfg.inline = initial
    elif "preset" in doc:
        cfg.preset = doc["preset"]
    for item in doc.get("eval", []):
        cfg.evals.append((tuple(float(v) for v in item["label"]), float(item["time"])))
    if getattr(args, "problem", None):
        cfg.problem = args.problem
    if getattr(args, "preset", None):
        cfg.preset, cfg.inline = args.preset, None
    if getattr(args, "orders", None) is not None:
        cfg.orders = _parse_orders(args.orders)
    if getattr(args, "cap", None) is not None:
        cfg.cap = args.cap
    if cfg.preset is not None and cfg.preset in presets.POTENTIAL_PRESETS and not getattr(args, "problem", None):
        cfg.problem = "euler-poisson"
    return cfg.validate()


def build_series(cfg: RunConfig, S: int | None = None) -> TaylorSeries:
    S = cfg.S if S is None else S
    if cfg.problem == "euler":
        if cfg.preset is not None:
            initial = cfg.preset
        else:
            kinds = [k for k in ("velocity", "vorticity") if k in cfg.inline]
            if len(kinds) != 1:
                raise ConfigError("inline Euler data needs exactly one of 'velocity' or 'vorticity'")
            initial = {kinds[0]: SpectralField.from_dict(cfg.inline[kinds[0]])}
        return compute_series(initial, S, cfg.cap)
    if cfg.preset is not None:
        potential = cfg.preset
    else:
        if "potential" not in cfg.inline:
            raise ConfigError("inline Euler-Poisson data needs a 'potential' field")
        potential = SpectralField.from_dict(cfg.inline["potential"])
    return ep_compute_series(potential, S, cfg.cap)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _write_csv(path: Path, header, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _guaranteed_time(series: TaylorSeries) -> float:
    if series.gamma <= 0:
        return math.inf
    return critical_time("l1", series.gamma).t_guaranteed


def _check_disk(report: RunReport, series: TaylorSeries, t: float) -> None:
    tg = _guaranteed_time(series)
    if abs(t) > tg:
        report.warn("DISK_EXIT", f"t={t!r} exceeds the guaranteed analyticity time {tg!r}")


def _check_truncation(report: RunReport, series: TaylorSeries) -> None:
    if series.truncated:
        report.warn("TRUNCATED", f"mode cap {series.cap} dropped nonzero coefficients; results are not exact")


def _out_dir(args) -> Path:
    return Path(args.out) if args.out else Path(".")


def _write_summary(path: Path, doc: dict, report: RunReport) -> None:
    doc = dict(doc)
    doc["warnings"] = [{"code": c, "message": m} for c, m in report.warnings]
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# Commands


def cmd_series(args) -> int:
    cfg = load_config(args)
    report = RunReport()
    series = build_series(cfg)
    _check_truncation(report, series)
    t = args.time if args.time is not None else 0.5 * _guaranteed_time(series)
    if math.isfinite(t):
        _check_disk(report, series, t)
    root = cubic_bound_root(*CUBICS["l1"], series.gamma * t) if math.isfinite(t) else None
    sums = partial_sums(series.weighted_norms(), t) if math.isfinite(t) else [math.nan] * series.order
    rows = []
    for s, (rec, ps) in enumerate(zip(series.norms, sums), start=1):
        ok = root is not None and ps <= root + 1e-9
        rows.append((s, rec.l1, rec.weighted, ok))
    out = _out_dir(args)
    _write_csv(out / "norms.csv", ("order", "l1", "weighted", "cumulative_bound_ok"), rows)
    summary = {
        "problem": series.problem,
        "orders": series.order,
        "gamma": series.gamma,
        "bound_time": t if math.isfinite(t) else None,
        "truncated": series.truncated,
    }
    _write_summary(out / "series.json", summary, report)
    print(f"problem={series.problem} S={series.order} gamma={series.gamma!r} truncated={series.truncated}")
    for s, l1, wn, ok in rows:
        print(f"{s:4d}  {wn!r:>24}  {'ok' if ok else 'FAIL'}")
    return EXIT_OK


def cmd_bounds(args) -> int:
    cfg = load_config(args)
    cfg.orders = [1]
    series = build_series(cfg, S=1)
    if series.gamma <= 0:
        raise ConfigError("initial data has zero norm; every time is guaranteed")
    reports = bound_table(series.gamma, series.norms[0].weighted)
    rows = [(r.kind, r.T_critical, r.t_guaranteed) for r in reports]
    print(f"gamma={series.gamma!r}")
    print(f"{'kind':<14}{'T_critical':>22}{'t_guaranteed':>22}")
    for kind, Tc, tg in rows:
        print(f"{kind:<14}{Tc:>22.16f}{tg:>22.16f}")
    if args.out:
        out = _out_dir(args)
        _write_csv(out / "bounds.csv", ("kind", "T_critical", "t_guaranteed"), rows)
        (out / "bounds.json").write_text(json.dumps([r.to_dict() for r in reports], indent=2) + "\n")
    return EXIT_OK


def cmd_residuals(args) -> int:
    cfg = load_config(args)
    report = RunReport()
    series = build_series(cfg)
    _check_truncation(report, series)
    t = args.time if args.time is not None else 0.1 / series.gamma
    if t <= 0:
        raise ConfigError("time must be positive")
    _check_disk(report, series, t)
    rows = []
    if series.problem == "euler":
        header = ("S", "t", "cauchy_residual", "jacobian_residual")
        for S in sorted(set(cfg.orders)):
            r = residuals(series, S, t)
            rows.append((S, t, r.cauchy_residual, r.jacobian_residual))
    else:
        header = ("S", "t", "cauchy_residual", "ep_mass_residual")
        for S in sorted(set(cfg.orders)):
            r = ep_mass_residual(series, S, t)
            rows.append((S, t, r.cauchy_residual, r.mass_residual))
    _write_csv(_out_dir(args) / "residuals.csv", header, rows)
    print(",".join(header))
    for row in rows:
        print(",".join(_fmt(v) for v in row))
    return EXIT_OK


def _read_norms(path: Path) -> list[float]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows or "weighted" not in rows[0]:
        raise ConfigError(f"{path} is not a norms table with a 'weighted' column")
    rows.sort(key=lambda r: int(r["order"]))
    return [float(r["weighted"]) for r in rows]


def cmd_radius(args) -> int:
    report = RunReport()
    if args.norms:
        norms = _read_norms(Path(args.norms))
    else:
        series = build_series(load_config(args))
        _check_truncation(report, series)
        norms = list(series.weighted_norms())
    est = radius_estimate(norms, args.method)
    if est.flagged:
        report.warn("PARITY_STRIDE", "alternate orders vanish; fitted the stride-2 subsequence")
    doc = est.to_dict()
    doc["warnings"] = [{"code": c, "message": m} for c, m in report.warnings]
    text = json.dumps(doc, indent=2, sort_keys=True)
    print(text)
    if args.out:
        out = _out_dir(args)
        out.mkdir(parents=True, exist_ok=True)
        (out / "radius.json").write_text(text + "\n")
    return EXIT_OK


def cmd_ab_exact(args) -> int:
    t = ab_singular_time(args.psi, args.w0)
    print(f"t_star = {t.real!r} + {t.imag!r}i")
    print(f"|t_star| = {abs(t)!r}")
    return EXIT_OK


def _parse_label(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise ConfigError(f"bad label {text!r}") from None
    if len(vals) not in (2, 3):
        raise ConfigError("label needs 2 or 3 comma-separated coordinates")
    return vals + (0.0,) * (3 - len(vals))


def cmd_trajectory(args) -> int:
    cfg = load_config(args)
    report = RunReport()
    if args.label:
        jobs = [(_parse_label(args.label), args.time if args.time is not None else 0.3)]
    elif cfg.evals:
        jobs = [(lbl + (0.0,) * (3 - len(lbl)), t) for lbl, t in cfg.evals]
    else:
        raise ConfigError("give --label or an 'eval' list in the config")
    rows = []
    if args.method == "ode":
        if cfg.preset not in ("ab", "ab3") or cfg.problem != "euler":
            raise ConfigError("the ODE oracle is available for the AB presets only")
        for a, t in jobs:
            times = np.linspace(0.0, t, args.steps + 1)[1:]
            for smp in ab_trajectory_path(a, times, args.tol, vertical=cfg.preset == "ab3"):
                rows.append((smp.time, *smp.position, *smp.velocity, "ode"))
    else:
        series = build_series(cfg)
        _check_truncation(report, series)
        for a, t in jobs:
            _check_disk(report, series, t)
            for tt in np.linspace(0.0, t, args.steps + 1)[1:]:
                smp = evaluate_map(series, a, float(tt))
                rows.append((float(tt), *smp.position, *smp.velocity, "taylor"))
    header = ("t", "x1", "x2", "x3", "v1", "v2", "v3", "source")
    _write_csv(_out_dir(args) / "trajectory.csv", header, rows)
    for row in rows:
        print(",".join(_fmt(v) for v in row))
    return EXIT_OK


# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, orders_default=None) -> None:
    p.add_argument("--input", help="JSON run configuration")
    p.add_argument("--preset", help="initial-data preset: ab, ab3, taylor-green, two-mode, one-d")
    p.add_argument("--problem", choices=PROBLEMS)
    p.add_argument("--orders", default=orders_default, help="highest order S (comma list for residuals)")
    p.add_argument("--cap", type=int, help="mode cap |p|_inf applied after every order")
    p.add_argument("--out", help="output directory (default: current directory)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lagrangia", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("series", help="Taylor coefficients and per-order norms")
    _add_common(p)
    p.add_argument("--time", type=float, help="time for the cumulative bound check")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("bounds", help="critical times of the convergence bounds")
    _add_common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("residuals", help="invariant residuals of truncated maps")
    _add_common(p)
    p.add_argument("--time", type=float, help="evaluation time (default 0.1/gamma)")
    p.set_defaults(func=cmd_residuals)

    p = sub.add_parser("radius", help="radius-of-convergence estimate")
    _add_common(p)
    p.add_argument("--norms", help="norms.csv written by the series command")
    p.add_argument("--method", choices=RADIUS_METHODS, default="ratio")
    p.set_defaults(func=cmd_radius)

    p = sub.add_parser("ab-exact", help="complex singular time of an AB trajectory")
    p.add_argument("--psi", type=float, default=0.0)
    p.add_argument("--w0", type=float, default=1.0)
    p.set_defaults(func=cmd_ab_exact)

    p = sub.add_parser("trajectory", help="particle positions from the series or the ODE oracle")
    _add_common(p)
    p.add_argument("--label", help="Lagrangian label a1,a2[,a3]")
    p.add_argument("--time", type=float)
    p.add_argument("--method", choices=("taylor", "ode"), default="taylor")
    p.add_argument("--steps", type=int, default=1, help="number of output times in (0, t]")
    p.add_argument("--tol", type=float, default=1e-10, help="local tolerance of the ODE oracle")
    p.set_defaults(func=cmd_trajectory)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        if getattr(args, "steps", 1) < 1:
            raise ConfigError("steps must be at least 1")
        return args.func(args)
    except (StepUnderflow, ArithmeticError, FloatingPointError) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (SpectralError, ConfigError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
