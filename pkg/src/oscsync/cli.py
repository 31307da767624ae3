"""Batch front-end: spectrum / trajectory / steady / validate runs with CSV or JSON output.

Configs are plain JSON with ``--set key=value`` dotted overrides (flags win
over the file).  Output is deterministic byte-for-byte for identical
(config, seed): floats are written with 17 significant digits and provenance
headers carry the full effective config, never timestamps.

Exit codes: 0 success, 2 config error, 3 solver/integrator error,
4 validation failure.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Any

import numpy as np

from . import __version__
from . import gauss_info
from . import validate as validate_mod
from .dynamics import CovarianceState, MomentState, eigenspectrum, propagate_covariance
from .errors import (
    ConfigError,
    NoUniqueSteadyStateError,
    OscSyncError,
    PhysicalityLostError,
    SingularSolveError,
    StepTooLargeError,
    ZeroDampingError,
)
from .model import SystemParams, critical_xi, validate_params
from .steady import flux, singular_xi, solve_lyapunov

OUTPUT_DIR_ENV = "OSCSYNC_OUTPUT_DIR"
SWEEP_AXES = ("xi", "g", "gamma", "nbar2", "delta")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_VALIDATION = 4

DEFAULT_CONFIG: dict[str, Any] = {
    "params": {
        "omega1": 1.0, "omega2": 1.0, "g": 0.0, "gamma": 0.1,
        "xi": 0.0, "nbar1": 0.0, "nbar2": 0.0,
    },
    "sweep": None,            # {"name": "xi", "start": -1, "stop": 1, "count": 201}
    "integrator": {"dt": None, "t_end": None},
    "initial": {
        "alpha1": [1.0, 0.0], "alpha2": [1.0, 0.0],   # [re, im]
        "covariance": "vacuum",                       # vacuum | thermal
    },
    "output": {"path": None, "format": "csv"},
    "seed": 12345,
    "workers": 1,
    "debug": {"flip_diffusion_sign": False},
}


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    raw: dict[str, Any]

    @property
    def params(self) -> SystemParams:
        p = self.raw["params"]
        return SystemParams(
            omega1=float(p["omega1"]), omega2=float(p["omega2"]), g=float(p["g"]),
            gamma=float(p["gamma"]), xi=float(p["xi"]),
            nbar1=float(p["nbar1"]), nbar2=float(p["nbar2"]),
        )

    @property
    def sweep(self) -> dict[str, Any] | None:
        return self.raw.get("sweep")

    @property
    def seed(self) -> int:
        return int(self.raw["seed"])

    @property
    def workers(self) -> int:
        return max(1, int(self.raw.get("workers", 1)))


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[list[Any]]
    provenance: list[str]

    def write_csv(self, fh) -> None:
        for line in self.provenance:
            fh.write(f"# {line}\n")
        fh.write(",".join(self.columns) + "\n")
        for row in self.rows:
            fh.write(",".join(_fmt_cell(v) for v in row) + "\n")

    def write_json(self, fh) -> None:
        payload = {
            "provenance": self.provenance,
            "columns": self.columns,
            "rows": [[_json_cell(v) for v in row] for row in self.rows],
        }
        json.dump(payload, fh, indent=1, sort_keys=False)
        fh.write("\n")


def _fmt_cell(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def _json_cell(v):
    if isinstance(v, bool):
        return v
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        f = float(v)
        if math.isnan(f):
            return "nan"
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        return f
    return str(v)


def _deep_update(base: dict, override: dict) -> dict:
    for k, v in override.items():
        if isinstance(v, dict) and isinstance(base.get(k), dict):
            _deep_update(base[k], v)
        else:
            base[k] = v
    return base


def _apply_set(cfg: dict, item: str) -> None:
    if "=" not in item:
        raise ConfigError(f"--set expects key=value, got {item!r}")
    key, _, raw_value = item.partition("=")
    try:
        value = json.loads(raw_value)
    except json.JSONDecodeError:
        value = raw_value
    node = cfg
    parts = key.strip().split(".")
    for part in parts[:-1]:
        nxt = node.get(part)
        if not isinstance(nxt, dict):
            nxt = {}
            node[part] = nxt
        node = nxt
    node[parts[-1]] = value


def load_config(subcommand: str, args) -> RunConfig:
    cfg = copy.deepcopy(DEFAULT_CONFIG)
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                file_cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(file_cfg, dict):
            raise ConfigError("config root must be a JSON object")
        _deep_update(cfg, file_cfg)
    for item in args.set or []:
        _apply_set(cfg, item)
    if args.output is not None:
        cfg["output"]["path"] = args.output
    if args.format is not None:
        cfg["output"]["format"] = args.format
    if args.seed is not None:
        cfg["seed"] = args.seed
    if getattr(args, "workers", None) is not None:
        cfg["workers"] = args.workers

    fmt = cfg["output"]["format"]
    if fmt not in ("csv", "json"):
        raise ConfigError(f"output.format must be csv or json, got {fmt!r}")
    sweep = cfg.get("sweep")
    if sweep is not None:
        for field in ("name", "start", "stop", "count"):
            if field not in sweep:
                raise ConfigError(f"sweep missing field {field!r}")
        if sweep["name"] not in SWEEP_AXES:
            raise ConfigError(f"sweep.name must be one of {SWEEP_AXES}, got {sweep['name']!r}")
        if int(sweep["count"]) < 2:
            raise ConfigError("sweep.count must be >= 2")
        if float(sweep["start"]) == float(sweep["stop"]):
            raise ConfigError("sweep.start must differ from sweep.stop")
    return RunConfig(subcommand=subcommand, raw=cfg)


def _provenance(cfg: RunConfig, columns: list[str], extra: list[str] | None = None) -> list[str]:
    lines = [
        f"oscsync {__version__}",
        f"subcommand: {cfg.subcommand}",
        "config: " + json.dumps(cfg.raw, sort_keys=True, separators=(",", ":")),
        f"seed: {cfg.seed}",
    ]
    if extra:
        lines.extend(extra)
    lines.append("columns: " + ",".join(columns))
    return lines


def _params_at(cfg: RunConfig, axis: str, value: float) -> SystemParams:
    p = cfg.params
    if axis == "delta":
        # detuning = omega1 - omega2 swept by moving omega2
        return replace(p, omega2=p.omega1 - value)
    return replace(p, **{axis: value})


def _sweep_values(cfg: RunConfig, default_axis: str, default: tuple[float, float, int]):
    sweep = cfg.sweep
    if sweep is None:
        name = default_axis
        values = np.linspace(*default)
    else:
        name = sweep["name"]
        values = np.linspace(float(sweep["start"]), float(sweep["stop"]), int(sweep["count"]))
    return name, values


def _pool_map(fn, values, workers: int):
    if workers <= 1:
        return [fn(v) for v in values]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, values))


# ---------------------------------------------------------------- spectrum

def run_spectrum(cfg: RunConfig) -> ResultTable:
    """Eigenvalue branches along a xi (default) or g sweep.

    The *_offset imaginary columns are shifted by +gamma/2 so the undamped
    branch reads zero at |xi| = 1; raw values are emitted alongside.
    """
    axis, values = _sweep_values(cfg, "xi", (-1.0, 1.0, 201))
    if axis not in ("xi", "g"):
        raise ConfigError("spectrum sweeps over xi or g only")
    columns = [axis, "re_lambda_plus", "re_lambda_minus",
               "im_lambda_plus_offset", "im_lambda_minus_offset",
               "im_lambda_plus", "im_lambda_minus", "regime", "xi_crit"]

    def point(v: float):
        p = validate_params(_params_at(cfg, axis, float(v)))
        sr = eigenspectrum(p)
        try:
            xc = critical_xi(p)
            xc = math.nan if xc is None else xc
        except ZeroDampingError:
            xc = math.nan
        off = p.gamma / 2.0
        return [float(v), sr.lambda_plus.real, sr.lambda_minus.real,
                sr.lambda_plus.imag + off, sr.lambda_minus.imag + off,
                sr.lambda_plus.imag, sr.lambda_minus.imag,
                sr.regime.value, xc]

    rows = _pool_map(point, values, cfg.workers)
    prov = _provenance(cfg, columns,
                       ["im_*_offset columns are shifted by +gamma/2"])
    return ResultTable(columns, rows, prov)


# ---------------------------------------------------------------- trajectory

def run_trajectory(cfg: RunConfig) -> ResultTable:
    """Moment and covariance samples for a single parameter point."""
    if cfg.sweep is not None:
        raise ConfigError("trajectory does not sweep; run one config per parameter point")
    p = validate_params(cfg.params)
    integ = cfg.raw["integrator"]
    period = 2.0 * math.pi / max(abs(p.omega1), 1e-6)
    t_end = float(integ["t_end"]) if integ.get("t_end") is not None else 100.0 * period
    dt = float(integ["dt"]) if integ.get("dt") is not None else period / 200.0
    init = cfg.raw["initial"]
    a1 = complex(init["alpha1"][0], init["alpha1"][1])
    a2 = complex(init["alpha2"][0], init["alpha2"][1])
    x0 = MomentState.displaced(a1, a2)
    if init.get("covariance", "vacuum") == "thermal":
        theta0 = CovarianceState.thermal(p.nbar1, p.nbar2)
    else:
        theta0 = CovarianceState.vacuum()

    traj = propagate_covariance(p, theta0, t_end, dt=dt, x0=x0,
                                strict_physicality=False)
    a1s = traj.moments[:, 0]
    a2s = traj.moments[:, 2]
    amp1, amp2 = np.abs(a1s), np.abs(a2s)
    rel = np.unwrap(np.angle(a1s) - np.angle(a2s))
    ok = (amp1 > 1e-12) & (amp2 > 1e-12)

    columns = ["t", "re_a1", "im_a1", "re_a2", "im_a2",
               "theta11", "theta22", "abs_theta12",
               "rel_phase", "amplitude_ratio", "physical"]
    rows = []
    for i, t in enumerate(traj.times):
        th = traj.covariances[i]
        rows.append([
            float(t), a1s[i].real, a1s[i].imag, a2s[i].real, a2s[i].imag,
            th[0, 0].real, th[2, 2].real, abs(th[2, 0]),
            float(rel[i]) if ok[i] else math.nan,
            float(amp2[i] / amp1[i]) if ok[i] else math.nan,
            bool(traj.physical[i]),
        ])
    prov = _provenance(cfg, columns, [f"dt: {dt:.17g}", f"t_end: {t_end:.17g}",
                                      f"expm_fallback: {traj.used_expm_fallback}"])
    return ResultTable(columns, rows, prov)


# ---------------------------------------------------------------- steady

def _steady_point(cfg: RunConfig, axis: str, value: float) -> list:
    value = float(value)
    p = validate_params(_params_at(cfg, axis, value))
    sx = singular_xi(p)
    singular_cols = [sx.occupation_form, sx.denominator_form,
                     sx.denominator_form - abs(p.xi)]
    nan = math.nan
    try:
        ss = solve_lyapunov(p)
    except (NoUniqueSteadyStateError, SingularSolveError):
        # divergent point: flagged, I2 reported as inf, everything else nan
        return ([value, "no_unique_steady_state"]
                + [nan] * 6 + [True, False]
                + [nan, nan, nan, math.inf, nan, nan, nan]
                + [nan, nan] + [nan, nan, nan] + singular_cols)

    fr = flux(p, ss)
    th = ss.theta_ss
    sigma = gauss_info.ladder_to_quadrature_matrix(th)
    nus = gauss_info.symplectic_eigenvalues(sigma) \
        if np.linalg.eigvalsh(sigma).min() > 0 else (nan, nan)
    physical = gauss_info.is_physical(sigma)
    if physical:
        rep = gauss_info.info_report(sigma)
        info = [rep.S2_A, rep.S2_B, rep.S2_AB, rep.I2, rep.J2, rep.D2, rep.D2_lower]
    else:
        info = [nan] * 7
    return ([value, "ok",
             th[0, 0].real, th[2, 2].real, th[2, 0].real, th[2, 0].imag,
             abs(th[2, 0]), ss.residual, ss.near_singular, physical]
            + info + [nus[0], nus[1]]
            + [fr.J, fr.theta_flux, fr.continuity_residual]
            + singular_cols)


STEADY_COLUMNS = [
    "sweep", "status",
    "theta11", "theta22", "re_theta12", "im_theta12", "abs_theta12",
    "residual", "near_singular", "physical",
    "S2_A", "S2_B", "S2_AB", "I2", "J2", "D2", "D2_lower",
    "nu1", "nu2",
    "J_flux", "theta_flux", "continuity_residual",
    "xi_singular_occupation", "xi_singular_denominator", "dist_to_singular_xi",
]


def run_steady(cfg: RunConfig) -> ResultTable:
    """Stationary covariance, flux and information measures along a sweep.

    Points without a unique stationary state are emitted as flagged rows with
    I2 = inf (divergent), never dropped.  theta12 denotes <a1† a2>.
    """
    axis, values = _sweep_values(cfg, "xi", (-0.95, 0.95, 39))
    columns = [axis] + STEADY_COLUMNS[1:]
    rows = _pool_map(lambda v: _steady_point(cfg, axis, v), values, cfg.workers)
    prov = _provenance(cfg, columns, [
        "theta12 = <a1dag a2>; I2 above 50 nats reported as inf",
        "dist_to_singular_xi = xi_singular_denominator - |xi|",
    ])
    return ResultTable(columns, rows, prov)


# ---------------------------------------------------------------- validate

def run_validate(cfg: RunConfig) -> tuple[ResultTable, bool]:
    debug = cfg.raw.get("debug", {})
    flip = bool(debug.get("flip_diffusion_sign", False))
    scale = float(debug.get("scale", 1.0))
    results = validate_mod.run_all(seed=cfg.seed, flip_diffusion_sign=flip, scale=scale)
    columns = ["check", "value", "threshold", "passed", "note"]
    rows = [[r.name, r.value, r.threshold, r.passed, r.note.replace(",", ";")]
            for r in results]
    prov = _provenance(cfg, columns, [f"flip_diffusion_sign: {flip}", f"scale: {scale:.17g}"])
    all_passed = all(r.passed for r in results)
    return ResultTable(columns, rows, prov), all_passed


# ---------------------------------------------------------------- driver

def _resolve_output(path: str | None) -> str | None:
    if path is None:
        return None
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _emit(table: ResultTable, cfg: RunConfig) -> None:
    path = _resolve_output(cfg.raw["output"]["path"])
    fmt = cfg.raw["output"]["format"]
    if path is None:
        (table.write_csv if fmt == "csv" else table.write_json)(sys.stdout)
        return
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        (table.write_csv if fmt == "csv" else table.write_json)(fh)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oscsync",
        description="Coupled-oscillator synchronization in a correlated bath: "
                    "batch spectrum/trajectory/steady-state/validation runs.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, help_ in [
        ("spectrum", "eigenvalue branches along a xi or g sweep"),
        ("trajectory", "moment/covariance time series at one parameter point"),
        ("steady", "stationary state, flux and information measures along a sweep"),
        ("validate", "run the seeded invariant suite"),
    ]:
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", help="JSON config file")
        sp.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="dotted config override, repeatable")
        sp.add_argument("--output", help="output path (default stdout)")
        sp.add_argument("--format", choices=("csv", "json"))
        sp.add_argument("--seed", type=int)
        sp.add_argument("--workers", type=int)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.subcommand, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.subcommand == "spectrum":
            table = run_spectrum(cfg)
        elif args.subcommand == "trajectory":
            table = run_trajectory(cfg)
        elif args.subcommand == "steady":
            table = run_steady(cfg)
        else:
            table, all_passed = run_validate(cfg)
            _emit(table, cfg)
            if not all_passed:
                print("validation failures detected", file=sys.stderr)
                return EXIT_VALIDATION
            return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (StepTooLargeError, PhysicalityLostError, SingularSolveError,
            NoUniqueSteadyStateError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OscSyncError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    _emit(table, cfg)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
