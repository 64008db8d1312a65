"""Command-line front end.

    conimhd speeds   --state JSON [--xi x1,x2 | --metric g11,g12,g22]
    conimhd pseudo   --state JSON --w w1,w2
    conimhd classify --field FIELD.csv --out TYPEMAP.csv
    conimhd residual --field FIELD.csv --out RESIDUAL.csv
    conimhd verify   --seed 42 --out REPORT.json

A TOML config (``--config``) may hold ``[chart]``, ``[gas]``, ``[grid]``,
``[freestream]`` and ``[options]`` tables; command-line flags win over
``[options]``.  Exit status: 0 success, 1 verification failure, 2 bad input
or config, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import characteristics as ch
from .errors import (
    ConfigError,
    ConimhdError,
    DegenerateError,
    DomainError,
    EigenError,
    GridError,
    NoiseFloorError,
    SingularChartError,
    ThermoError,
    BranchError,
)
from .geometry import constant_metric, flat_metric, metric_at, named_embedding_chart, spherical_chart
from .pseudotime import pseudo_speeds_formula, pseudo_speeds_numeric
from .residual import RESIDUAL_NAMES, assemble_residual, read_field_csv, write_residual_csv
from .state import IdealGas, state_from_dict

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3
COMMANDS = ("speeds", "classify", "residual", "pseudo", "verify")


class _Stage:
    """Name of the operation in progress, for error messages."""
    name = "startup"


# ----------------------------------------------------------------- config

def load_config(path):
    if path is None:
        return {}
    try:
        with open(path, "rb") as fh:
            cfg = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}")
    for key in cfg:
        if key not in ("chart", "gas", "grid", "freestream", "options"):
            raise ConfigError(f"unknown config section [{key}]")
    grid = cfg.get("grid", {})
    for k in ("n1", "n2"):
        if k in grid and int(grid[k]) < 3:
            raise ConfigError(f"grid.{k} must be at least 3")
    return cfg


def chart_from_config(cfg):
    c = cfg.get("chart", {})
    kind = c.get("kind", "spherical")
    if kind == "spherical":
        kw = {}
        if "theta" in c:
            kw["theta"] = tuple(c["theta"])
        if "phi" in c:
            kw["phi"] = tuple(c["phi"])
        if "periodic_phi" in c:
            kw["periodic_phi"] = bool(c["periodic_phi"])
        return spherical_chart(**kw)
    dom = c.get("domain")
    per = c.get("periodic")
    return named_embedding_chart(kind, tuple(tuple(d) for d in dom) if dom else None,
                                 tuple(per) if per else None)


def gas_from_config(cfg):
    g = cfg.get("gas", {})
    return IdealGas(float(g.get("gamma", 1.4))), float(g.get("mu", 1.0))


def _pair(text, name):
    try:
        vals = [float(x) for x in str(text).split(",")]
    except ValueError:
        raise ConfigError(f"--{name} expects comma-separated numbers, got {text!r}")
    return vals


def _load_state(text, cfg):
    if text is None:
        raise ConfigError("--state is required")
    if isinstance(text, dict):
        d = text
    else:
        src = text
        if not text.lstrip().startswith("{"):
            try:
                with open(text) as fh:
                    src = fh.read()
            except OSError as exc:
                raise ConfigError(f"cannot read state file {text}: {exc}")
        try:
            d = json.loads(src)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"state is not valid JSON: {exc}")
    gas, mu = gas_from_config(cfg)
    d = dict(d)
    d.setdefault("mu", mu)
    return state_from_dict(d, default_gamma=gas.gamma)


def _point_metric(args, cfg):
    if args.xi is not None and args.metric is not None:
        raise ConfigError("give at most one of --xi and --metric")
    if args.xi is not None:
        x = _pair(args.xi, "xi")
        if len(x) != 2:
            raise ConfigError("--xi expects two numbers")
        return metric_at(chart_from_config(cfg), x[0], x[1])
    if args.metric is not None:
        g = _pair(args.metric, "metric")
        if len(g) != 3:
            raise ConfigError("--metric expects g11,g12,g22")
        return constant_metric([[g[0], g[1]], [g[1], g[2]]])
    return flat_metric()


def _load_field(args, cfg):
    chart = chart_from_config(cfg)
    gas, mu = gas_from_config(cfg)
    if args.field:
        if not os.path.exists(args.field):
            raise ConfigError(f"field file not found: {args.field}")
        return read_field_csv(args.field, chart, gas, mu)
    fs = cfg.get("freestream")
    if fs is None:
        raise ConfigError("--field is required (or a [freestream] config table)")
    from .verify.fields import freestream_field
    grid = cfg.get("grid", {})
    return freestream_field(chart, int(grid.get("n1", 32)), int(grid.get("n2", 32)),
                            float(fs.get("rho", 1.0)), fs.get("V", [1.0, 0.0, 0.0]),
                            float(fs.get("P", 1.0)), fs.get("B", [0.0, 0.0, 0.0]),
                            mu=mu, gamma=gas.gamma)


# ----------------------------------------------------------------- output

def _num(x):
    x = float(x)
    return x if math.isfinite(x) else None


def _cplx(z):
    return [_num(z.real), _num(z.imag)]


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    sys.stdout.write(text)
    if out:
        with open(out, "w") as fh:
            fh.write(text)


# --------------------------------------------------------------- commands

def cmd_speeds(args, cfg):
    _Stage.name = "state input"
    state, gas = _load_state(args.state, cfg)
    metric = _point_metric(args, cfg)
    _Stage.name = "full_spectrum"
    sp = ch.full_spectrum(state, metric, gas, args.tol_imag)
    out = {
        "type": sp.flow_type.value,
        "eigenvalues": [_cplx(z) for z in sp.eigenvalues],
        "infinite": [bool(x) for x in sp.infinite],
        "max_imag": _num(sp.max_imag),
        "tau_imag": _num(sp.tau_imag),
    }
    _Stage.name = "explicit_speeds"
    try:
        ex = ch.explicit_speeds(state, metric)
    except DegenerateError as exc:
        out["explicit"] = None
        out["explicit_error"] = str(exc)
        out["quartic_residuals"] = None
    else:
        dev, _, rest = ch.match_explicit(sp.eigenvalues, ex)
        out["explicit"] = [_num(x) for x in ex]
        out["explicit_deviation"] = [_num(x) for x in dev]
        _Stage.name = "quartic_residual"
        qr = []
        for j in rest:
            try:
                qr.append({"lambda": _cplx(sp.eigenvalues[j]),
                           "residual": _num(ch.quartic_residual(state, metric, gas, sp.eigenvalues[j]))})
            except BranchError as exc:
                qr.append({"lambda": _cplx(sp.eigenvalues[j]), "residual": None, "error": str(exc)})
        out["quartic_residuals"] = qr
    _emit(out, args.out)
    return EXIT_OK


def cmd_pseudo(args, cfg):
    _Stage.name = "state input"
    state, gas = _load_state(args.state, cfg)
    metric = _point_metric(args, cfg)
    w = args.w or cfg.get("options", {}).get("w")
    if w is None:
        raise ConfigError("--w is required")
    w = _pair(w, "w") if isinstance(w, str) else [float(x) for x in w]
    if len(w) != 2:
        raise ConfigError("--w expects two numbers")
    _Stage.name = "pseudo_speeds_formula"
    try:
        f, cf, cs = pseudo_speeds_formula(state, metric, gas, w)
    except ValueError as exc:
        raise ConfigError(str(exc))
    _Stage.name = "pseudo_speeds_numeric"
    lam = pseudo_speeds_numeric(state, metric, gas, w)
    scale = max(1.0, float(np.max(np.abs(f))))
    _emit({
        "speeds": [_num(x) for x in f],
        "c_f": _num(cf),
        "c_s": _num(cs),
        "numeric": [_cplx(z) for z in lam],
        "deviation": _num(np.max(np.abs(np.sort(lam.real) - f)) / scale),
        "max_imag": _num(np.max(np.abs(lam.imag))),
    }, args.out)
    return EXIT_OK


def cmd_classify(args, cfg):
    _Stage.name = "field input"
    field = _load_field(args, cfg)
    _Stage.name = "type_map"
    tm = ch.type_map(field, tau_imag=args.tol_imag)
    out = args.out or "typemap.csv"
    ch.write_type_map_csv(out, tm)
    _emit({"counts": tm.counts(), "errors": len(tm.errors), "output": out})
    return EXIT_OK


def cmd_residual(args, cfg):
    _Stage.name = "field input"
    field = _load_field(args, cfg)
    _Stage.name = "assemble_residual"
    R = assemble_residual(field)
    out = args.out or "residual.csv"
    write_residual_csv(out, field, R)
    norms = {n: _num(np.max(np.abs(R[k]))) for k, n in enumerate(RESIDUAL_NAMES)}
    _emit({"max_norm": norms, "output": out})
    return EXIT_OK


def cmd_verify(args, cfg):
    from .verify.suites import SUITES, report_json, run_all
    seed = args.seed if args.seed is not None else int(cfg.get("options", {}).get("seed", 42))
    names = None
    if args.suites:
        names = [s.strip() for s in args.suites.split(",") if s.strip()]
        bad = [s for s in names if s not in SUITES]
        if bad:
            raise ConfigError(f"unknown suites {bad}; choose from {sorted(SUITES)}")
    _Stage.name = "verify"
    report = run_all(seed, names)
    out = args.out or "verify_report.json"
    with open(out, "w") as fh:
        fh.write(report_json(report))
    for r in report["suites"]:
        flag = "PASS" if r["passed"] else "FAIL"
        print(f"{flag}  {r['name']:<40s} max_dev={r['max_deviation']:.3e}  tol={r['tolerance']:.1e}")
    print(f"report written to {out}")
    return EXIT_OK if report["passed"] else EXIT_FAIL


HANDLERS = {
    "speeds": cmd_speeds,
    "classify": cmd_classify,
    "residual": cmd_residual,
    "pseudo": cmd_pseudo,
    "verify": cmd_verify,
}


def build_parser():
    p = argparse.ArgumentParser(prog="conimhd", description="Conical ideal-MHD characteristic analysis.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="TOML run configuration")
    p.add_argument("--field", help="field CSV (xi1,xi2,rho,v1,v2,V3,P,b1,b2,B3)")
    p.add_argument("--state", help="state as a JSON literal or path to a JSON file")
    p.add_argument("--w", help="pseudo-time direction w1,w2 (covariant)")
    p.add_argument("--xi", help="chart point x1,x2 for single-state commands")
    p.add_argument("--metric", help="constant metric g11,g12,g22 for single-state commands")
    p.add_argument("--out", help="output path")
    p.add_argument("--seed", type=int, help="seed for verify")
    p.add_argument("--suites", help="comma-separated subset of verify suites")
    p.add_argument("--tol-imag", type=float, dest="tol_imag", help="imaginary-part threshold")
    return p


def _merge_options(args, cfg):
    for k, v in cfg.get("options", {}).items():
        k = k.replace("-", "_")
        if hasattr(args, k) and getattr(args, k) is None:
            setattr(args, k, v)
    if args.tol_imag is not None and not args.tol_imag > 0:
        raise ConfigError("--tol-imag must be positive")


def main(argv=None):
    args = build_parser().parse_args(argv)
    _Stage.name = "config"
    try:
        cfg = load_config(args.config)
        _merge_options(args, cfg)
        return HANDLERS[args.command](args, cfg)
    except (ConfigError, ThermoError, DomainError, GridError, OSError) as exc:
        print(f"conimhd: input error in {_Stage.name}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (EigenError, DegenerateError, SingularChartError, NoiseFloorError, BranchError) as exc:
        print(f"conimhd: numerical error in {_Stage.name}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ConimhdError as exc:
        print(f"conimhd: error in {_Stage.name}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
