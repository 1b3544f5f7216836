"""Experiment runner: ``kscg run <spec>``.

A spec is an INI file with an ``[experiment]`` section and optional
``[curve <label>]`` sections overriding scenario keys per curve::

    [experiment]
    name = fig2a
    kind = sweep
    network = TPIL
    stsb = weibull(4)
    stpb = nakagami(0.5)
    p_ave_db = 15
    q_ave_db = 0
    n_list = 16, 32, 64, 128, 256, 512, 1024
    trials = 20000
    seed = 1

    [curve full]
    feedback = full

    [curve kscg]
    feedback = kscg
    k_exponent = 0.8

Exit status: 0 on success, 2 on a configuration error, 3 when the dual
solver fails at some (scenario, N) point.
"""
from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import math
import os
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .duals import SolverError
from .fading import parse_model
from .scaling import (SweepPoint, fit_points, regressor_kind, run_sweep, theory_curve,
                      theory_slope, with_parameter)
from .scenario import ScenarioConfig, db_to_linear
from .simulator import estimate, estimate_many

KINDS = ("estimate", "sweep", "interference_profile", "parameter_study")
SCENARIO_KEYS = {"network", "feedback", "k_exponent", "k_const", "p_ave_db", "q_ave_db", "stsb", "stpb"}
RUN_KEYS = {"name", "kind", "n", "n_list", "trials", "seed", "solve_trials", "tol", "theory",
            "param_link", "param_grid"}
CURVE_RUN_KEYS = {"param_grid"}
SWEEP_HEADER = "N,K,sum_rate_nats,rate_hw,interference,intf_hw,lambda,mu"


class ConfigError(ValueError):
    pass


def fmt(x) -> str:
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def _line_of(text: str, section: str | None, key: str | None) -> int | None:
    current = None
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if s.startswith("[") and s.endswith("]"):
            current = s[1:-1].strip()
            if key is None and current == section:
                return no
            continue
        if key is not None and current == section and "=" in s:
            if s.split("=", 1)[0].strip().lower() == key:
                return no
    return None


def _where(path, text, section, key=None) -> str:
    line = _line_of(text, section, key) if text is not None else None
    return f"{path}:{line}" if line else str(path)


def bundled_specs() -> list[str]:
    return sorted(p.name[:-4] for p in resources.files("kscg").joinpath("specs").iterdir()
                  if p.name.endswith(".ini"))


def _resolve(spec: str) -> Path:
    p = Path(spec)
    if p.exists():
        return p
    name = p.name[:-4] if p.name.endswith(".ini") else p.name
    bundled = resources.files("kscg").joinpath("specs", f"{name}.ini")
    if bundled.is_file():
        return Path(str(bundled))
    raise ConfigError(f"{spec}: no such spec file or bundled experiment")


def read_spec(path: Path) -> dict:
    """Parse a spec file (INI) or a JSON sidecar into a plain config dict."""
    text = path.read_text()
    if path.suffix == ".json":
        try:
            return json.loads(text)["config"]
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"{path}: not a sidecar file ({exc})") from None
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    try:
        cp.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    if not cp.has_section("experiment"):
        raise ConfigError(f"{path}: missing [experiment] section")
    cfg = {"curves": {}}
    for key, value in cp.items("experiment"):
        if key not in SCENARIO_KEYS | RUN_KEYS:
            raise ConfigError(f"{_where(path, text, 'experiment', key)}: unknown key {key!r}")
        cfg[key] = value
    for section in cp.sections():
        if section == "experiment":
            continue
        head, _, label = section.partition(" ")
        if head != "curve" or not label.strip():
            raise ConfigError(f"{_where(path, text, section)}: unknown section [{section}]")
        curve = {}
        for key, value in cp.items(section):
            if key not in SCENARIO_KEYS | CURVE_RUN_KEYS:
                raise ConfigError(f"{_where(path, text, section, key)}: key {key!r} not allowed in a curve")
            curve[key] = value
        cfg["curves"][label.strip()] = curve
    cfg["_text"] = text
    cfg["_path"] = str(path)
    return cfg


def _num_list(s: str, cast=float):
    return [cast(v) for v in str(s).replace(",", " ").split()]


def _db(value: str) -> float:
    v = str(value).strip().lower()
    if v in ("inf", "none", "off"):
        return math.inf
    return db_to_linear(float(v))


def build_scenario(fields: dict, n: int) -> ScenarioConfig:
    k_exp = fields.get("k_exponent")
    k_const = fields.get("k_const")
    return ScenarioConfig(
        network=fields.get("network", "TPIL"),
        stsb=parse_model(fields.get("stsb", "rayleigh")),
        stpb=parse_model(fields.get("stpb", "rayleigh")),
        n=int(n),
        p_ave=_db(fields.get("p_ave_db", 15)),
        q_ave=_db(fields.get("q_ave_db", 0)),
        feedback=fields.get("feedback", "full"),
        k_exponent=float(k_exp) if k_exp not in (None, "") else None,
        k_const=int(k_const) if k_const not in (None, "") else None,
    )


def canonical(cfg: dict) -> dict:
    return {k: v for k, v in cfg.items() if not k.startswith("_")}


def config_hash(cfg: dict) -> str:
    blob = json.dumps(canonical(cfg), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _curves(cfg: dict):
    base = {k: v for k, v in cfg.items() if k in SCENARIO_KEYS}
    curves = cfg.get("curves") or {"main": {}}
    return [(label, {**base, **over}) for label, over in curves.items()]


def _validate(cfg: dict):
    """Build every scenario once so bad values fail before any simulation."""
    path, text = cfg.get("_path", "<config>"), cfg.get("_text")
    kind = cfg.get("kind", "sweep")
    if kind not in KINDS:
        raise ConfigError(f"{_where(path, text, 'experiment', 'kind')}: kind must be one of {KINDS}")
    for key in ("trials", "seed", "n", "solve_trials"):
        if key in cfg:
            try:
                int(cfg[key])
            except ValueError:
                raise ConfigError(f"{_where(path, text, 'experiment', key)}: {key} must be an integer") from None
    try:
        if kind in ("sweep", "interference_profile"):
            n_list = _num_list(cfg["n_list"], int)
        else:
            n_list = [int(cfg.get("n", 50))]
        if kind == "parameter_study":
            for label, fields in _curves(cfg):
                grid = fields.get("param_grid", cfg.get("param_grid"))
                if grid is None:
                    raise ConfigError(f"{path}: curve {label!r} has no param_grid")
                _num_list(grid)
            if cfg.get("param_link") not in ("stsb", "stpb"):
                raise ConfigError(f"{_where(path, text, 'experiment', 'param_link')}: param_link must be stsb or stpb")
    except KeyError as exc:
        raise ConfigError(f"{path}: missing key {exc.args[0]!r}") from None
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{path}: {exc}") from None
    checks = {"stsb": parse_model, "stpb": parse_model, "p_ave_db": _db, "q_ave_db": _db,
              "k_exponent": float, "k_const": int}
    overrides = cfg.get("curves") or {}
    for label, fields in _curves(cfg):
        section = f"curve {label}" if label in overrides else "experiment"
        for key, parse in checks.items():
            if key in fields:
                at = f"curve {label}" if key in overrides.get(label, {}) else "experiment"
                try:
                    parse(fields[key])
                except ValueError as exc:
                    raise ConfigError(f"{_where(path, text, at, key)}: {key}: {exc}") from None
        try:
            build_scenario(fields, max(n_list))
        except ValueError as exc:
            raise ConfigError(f"{_where(path, text, section)}: curve {label!r}: {exc}") from None


def _sweep_rows(points):
    for p in points:
        yield [p.n, p.k, p.sum_rate, p.rate_hw, p.interference, p.intf_hw, p.lam, p.mu]


def _write_csv(path: Path, header: str, rows, stamp: str):
    with open(path, "w", newline="") as fh:
        fh.write(stamp + "\n")
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def execute(cfg: dict, out_dir: Path, jobs: int | None = None) -> dict:
    _validate(cfg)
    kind = cfg.get("kind", "sweep")
    name = cfg.get("name", "experiment")
    trials = int(cfg.get("trials", 20_000))
    seed = int(cfg.get("seed", 0))
    kw = {"jobs": jobs, "tol": float(cfg.get("tol", 0.02))}
    if "solve_trials" in cfg:
        kw["solve_trials"] = int(cfg["solve_trials"])
    out_dir.mkdir(parents=True, exist_ok=True)
    digest = config_hash(cfg)
    stamp = f"# kscg {__version__} seed={seed} config_hash={digest}"
    summary = {}
    theory_source = None
    for label, fields in _curves(cfg):
        csv_path = out_dir / f"{name}_{label}.csv"
        info = {"csv": csv_path.name}
        if kind in ("sweep", "interference_profile"):
            n_list = _num_list(cfg["n_list"], int)
            base = build_scenario(fields, n_list[0])
            if kind == "sweep":
                res = run_sweep(base, n_list, trials, seed, **kw)
                points = res.points
                info.update(fitted_slope=res.fitted_slope, fitted_intercept=res.fitted_intercept,
                            slope_se=res.slope_se, regressor=res.regressor_kind)
            else:
                points = [SweepPoint.from_estimate(r) for r in estimate_many(base, n_list, trials, seed, **kw)]
                slope, intercept, se = fit_points(points, regressor_kind(base))
                info.update(fitted_slope=slope, fitted_intercept=intercept, slope_se=se,
                            regressor=regressor_kind(base))
            info["theory_slope"] = theory_slope(base)
            _write_csv(csv_path, SWEEP_HEADER, _sweep_rows(points), stamp)
            theory_source = theory_source or base
        elif kind == "estimate":
            sc = build_scenario(fields, int(cfg.get("n", 50)))
            r = estimate(sc, trials, seed, **kw)
            _write_csv(csv_path, SWEEP_HEADER, _sweep_rows([SweepPoint.from_estimate(r)]), stamp)
        else:
            sc = build_scenario(fields, int(cfg.get("n", 50)))
            link = cfg["param_link"]
            rows = []
            for v in _num_list(fields.get("param_grid", cfg.get("param_grid"))):
                r = estimate(sc.replace(**{link: with_parameter(getattr(sc, link), v)}), trials, seed, **kw)
                rows.append([v, *next(_sweep_rows([SweepPoint.from_estimate(r)]))])
            _write_csv(csv_path, "parameter," + SWEEP_HEADER, rows, stamp)
        summary[label] = info
    if kind in ("sweep", "interference_profile") and str(cfg.get("theory", "no")).lower() in ("1", "yes", "true", "on"):
        tpath = out_dir / f"{name}_theory.csv"
        _write_csv(tpath, "N,theory_nats", theory_curve(theory_source, _num_list(cfg["n_list"], int)), stamp)
        summary["theory"] = {"csv": tpath.name}
    sidecar = {
        "tool": "kscg",
        "version": __version__,
        "name": name,
        "seed": seed,
        "trials": trials,
        "config_hash": digest,
        "config": canonical(cfg),
        "curves": summary,
    }
    with open(out_dir / f"{name}.json", "w") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return sidecar


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="kscg", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run an experiment spec (INI file, sidecar JSON or bundled name)")
    run.add_argument("spec")
    run.add_argument("--seed", type=int)
    run.add_argument("--trials", type=int)
    run.add_argument("--out-dir", default=".")
    run.add_argument("--jobs", type=int, default=None,
                     help="worker threads (default: $KSCG_JOBS or 1)")
    sub.add_parser("list", help="list bundled experiment specs")
    args = parser.parse_args(argv)

    if args.command == "list":
        print("\n".join(bundled_specs()))
        return 0
    try:
        cfg = read_spec(_resolve(args.spec))
        if args.seed is not None:
            cfg["seed"] = str(args.seed)
        if args.trials is not None:
            cfg["trials"] = str(args.trials)
        sidecar = execute(cfg, Path(args.out_dir), args.jobs)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3
    for label, info in sidecar["curves"].items():
        extra = ""
        if "fitted_slope" in info:
            extra = f"  slope {info['fitted_slope']:.3f} (theory {info['theory_slope']:.3f})"
        print(f"{label}: {os.path.join(args.out_dir, info['csv'])}{extra}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
