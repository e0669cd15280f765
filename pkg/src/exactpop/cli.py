"""Config-driven command line front end.

A run is described by one JSON document, for example::

    {"job": "eigenset",
     "model": {"type": "ThreeLevelChain", "Omega": 1.0},
     "tau": 1.0,
     "exchange": {"i": 0, "f": 2},
     "output": "out/three_level"}

Each job writes ``<output>/<job>.csv`` plus ``<output>/summary.json`` and
prints a one-line summary. Exit status: 0 ok, 2 invalid input, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from . import paperlab, sigmax
from .errors import ConfigError, NumericalError, ValidationError
from .hammod import MODEL_TYPES, HamiltonianSpec
from .xtrans import ALL_TIMES, ExchangeSpec, population_report, superposition_exact_times, transition_set, verify_exact

JOBS = ("eigenset", "verify", "scan", "maximize", "figure1", "figure2", "superposition")
# jobs whose physics is fixed by the job itself
SELF_CONTAINED = ("figure1", "figure2", "superposition")
TOP_KEYS = {"job", "model", "tau", "exchange", "params", "output", "steps", "tolerance"}
EXCHANGE_KEYS = {"i", "f", "alpha", "beta"}
JOB_PARAMS = {
    "eigenset": set(),
    "verify": set(),
    "scan": {"parameter", "grid", "direction", "tau_follows"},
    "maximize": {"direction", "samples"},
    "figure1": {"variant", "points", "substeps", "frame"},
    "figure2": {"points"},
    "superposition": {"lines", "window", "tol"},
}
DEFAULT_TOLERANCE = 1e-8


@dataclass(frozen=True)
class RunConfig:
    job: str
    output: str
    model: Optional[HamiltonianSpec] = None
    tau: Optional[float] = None
    exchange: Optional[ExchangeSpec] = None
    params: dict = field(default_factory=dict)
    steps: Optional[int] = None
    tolerance: float = DEFAULT_TOLERANCE
    raw: dict = field(default_factory=dict, compare=False)


# ---------------------------------------------------------------- loading


def _reject_unknown(obj: dict, allowed: set, where: str):
    extra = sorted(set(obj) - allowed)
    if extra:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(extra)}")


def _number(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{name} must be finite")
    return float(value)


def _integer(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    return value


def _entry(x, name: str) -> complex:
    if isinstance(x, list):
        if len(x) != 2:
            raise ConfigError(f"{name}: complex entries are [re, im] pairs")
        return complex(_number(x[0], name), _number(x[1], name))
    return complex(_number(x, name))


def _matrix(rows, name: str) -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ConfigError(f"{name} must be a list of rows")
    return np.array([[_entry(x, name) for x in row] for row in rows], dtype=complex)


def load_model(obj: dict) -> HamiltonianSpec:
    if not isinstance(obj, dict) or "type" not in obj:
        raise ConfigError("model must be an object with a 'type' key")
    kind = obj["type"]
    if kind not in MODEL_TYPES:
        raise ConfigError(f"model.type {kind!r} unknown; choose from {sorted(MODEL_TYPES)}")
    cls = MODEL_TYPES[kind]
    flds = {f.name: f for f in dataclasses.fields(cls)}
    _reject_unknown(obj, set(flds) | {"type"}, f"model ({kind})")
    kwargs: dict[str, Any] = {}
    for name, f in flds.items():
        key = f"model.{name}"
        if name not in obj:
            has_default = f.default is not dataclasses.MISSING or f.default_factory is not dataclasses.MISSING
            if not has_default:
                raise ConfigError(f"{key} is required")
            continue
        value = obj[name]
        if name == "matrix":
            kwargs[name] = _matrix(value, key)
        elif name == "matrices":
            if not isinstance(value, list):
                raise ConfigError(f"{key} must be a list of matrices")
            kwargs[name] = tuple(_matrix(m, f"{key}[{k}]") for k, m in enumerate(value))
        elif name == "times":
            if not isinstance(value, list):
                raise ConfigError(f"{key} must be a list")
            kwargs[name] = tuple(_number(t, key) for t in value)
        elif name == "schedule":
            if not isinstance(value, str):
                raise ConfigError(f"{key} must be a string")
            kwargs[name] = value
        elif name == "V01":
            kwargs[name] = _entry(value, key)
        elif name == "kick_area" and value is None:
            kwargs[name] = None
        else:
            kwargs[name] = _number(value, key)
    return cls(**kwargs)


def load_exchange(obj: dict, dim: int) -> ExchangeSpec:
    if not isinstance(obj, dict):
        raise ConfigError("exchange must be an object")
    _reject_unknown(obj, EXCHANGE_KEYS, "exchange")
    for key in ("i", "f"):
        if key not in obj:
            raise ConfigError(f"exchange.{key} is required")
    i, f = _integer(obj["i"], "exchange.i"), _integer(obj["f"], "exchange.f")
    if i == f:
        raise ConfigError(f"exchange.i and exchange.f must differ (I != F required), both are {i}")
    alpha = _number(obj.get("alpha", 0.0), "exchange.alpha")
    beta = _number(obj.get("beta", 0.0), "exchange.beta")
    try:
        return ExchangeSpec(dim, i, f, alpha, beta)
    except IndexError as exc:
        raise ConfigError(f"exchange: {exc}") from None


def load_config(raw: dict) -> RunConfig:
    """Validate a parsed JSON document; every error names the offending field."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    _reject_unknown(raw, TOP_KEYS, "config")
    job = raw.get("job")
    if job not in JOBS:
        raise ConfigError(f"job must be one of {', '.join(JOBS)}; got {job!r}")
    if "output" not in raw or not isinstance(raw["output"], str):
        raise ConfigError("output must be a path string")
    params = raw.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("params must be an object")
    params = dict(params)
    _reject_unknown(params, JOB_PARAMS[job], f"params ({job})")
    steps = raw.get("steps")
    if steps is not None and _integer(steps, "steps") < 1:
        raise ConfigError("steps must be >= 1")
    tol = _number(raw.get("tolerance", DEFAULT_TOLERANCE), "tolerance")
    if tol <= 0:
        raise ConfigError("tolerance must be > 0")

    model = tau = exch = None
    if job in SELF_CONTAINED:
        present = sorted({"model", "tau", "exchange"} & set(raw))
        if present:
            raise ConfigError(f"job {job} fixes its own physics; remove {', '.join(present)}")
    else:
        for key in ("model", "tau", "exchange"):
            if key not in raw:
                raise ConfigError(f"{key} is required for job {job}")
        tau = _number(raw["tau"], "tau")
        if tau < 0:
            raise ConfigError("tau must be >= 0")
        if job == "scan":
            model = _scan_base(raw["model"], params)
            dim = _scan_family(model, params)(params["grid_values"][0]).dim
        else:
            model = load_model(raw["model"])
            dim = model.dim
        exch = load_exchange(raw["exchange"], dim)
        if job == "maximize" and dim != 2:
            raise ConfigError("maximize needs a two-level model")
    _check_params(job, params)
    return RunConfig(job, raw["output"], model, tau, exch, params, steps, tol, raw)


def _grid_values(grid) -> list[float]:
    if isinstance(grid, list):
        vals = [_number(g, "params.grid") for g in grid]
    elif isinstance(grid, dict):
        _reject_unknown(grid, {"start", "stop", "num"}, "params.grid")
        num = _integer(grid.get("num"), "params.grid.num")
        if num < 1:
            raise ConfigError("params.grid.num must be >= 1")
        vals = np.linspace(_number(grid.get("start"), "params.grid.start"), _number(grid.get("stop"), "params.grid.stop"), num).tolist()
    else:
        raise ConfigError("params.grid must be a list or {start, stop, num}")
    if not vals or any(b < a for a, b in zip(vals, vals[1:])):
        raise ConfigError("params.grid must be non-empty and ascending")
    return vals


def _scan_base(model_obj, params) -> dict:
    name = params.get("parameter")
    if not isinstance(name, str):
        raise ConfigError("params.parameter must name a model field")
    params["grid_values"] = _grid_values(params.get("grid"))
    if not isinstance(model_obj, dict):
        raise ConfigError("model must be an object")
    base = dict(model_obj)
    base[name] = params["grid_values"][0]
    load_model(base)  # validates the family at the first grid point
    return model_obj


def _scan_family(model_obj, params):
    name = params["parameter"]

    def family(value: float) -> HamiltonianSpec:
        return load_model({**model_obj, name: value})

    return family


def _check_params(job: str, params: dict):
    if "direction" in params and params["direction"] not in (1, -1):
        raise ConfigError("params.direction must be 1 or -1")
    if job == "figure1":
        if params.get("variant") not in ("a", "b"):
            raise ConfigError("params.variant must be 'a' or 'b'")
        if params.get("frame") not in (None, "interaction", "lab"):
            raise ConfigError("params.frame must be 'interaction' or 'lab'")
    for key in ("points", "substeps", "samples"):
        if key in params and _integer(params[key], f"params.{key}") < 1:
            raise ConfigError(f"params.{key} must be >= 1")
    if job == "superposition":
        lines = params.get("lines")
        if not isinstance(lines, list) or not all(isinstance(x, list) and len(x) == 2 for x in lines):
            raise ConfigError("params.lines must be a list of [a, b] pairs")
        for a, b in lines:
            _number(a, "params.lines"), _number(b, "params.lines")
        win = params.get("window")
        if not isinstance(win, list) or len(win) != 2:
            raise ConfigError("params.window must be [T_min, T_max]")
        for w in win:
            _number(w, "params.window")
    if job == "scan" and "tau_follows" in params and not isinstance(params["tau_follows"], bool):
        raise ConfigError("params.tau_follows must be true or false")


# ---------------------------------------------------------------- output


def fmt(x) -> str:
    return "%.17g" % x


def write_csv(path: Path, header: list[str], rows) -> None:
    """Comma-separated, 17 significant digits, LF endings; written atomically."""
    lines = [",".join(header)]
    lines += [",".join(c if isinstance(c, str) else fmt(c) for c in row) for row in rows]
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, path)


def _amplitude_columns(dim: int) -> list[str]:
    return [c for k in range(dim) for c in (f"re_{k}", f"im_{k}")]


def _amplitudes(psi) -> list[float]:
    return [c for a in psi for c in (a.real, a.imag)]


# ---------------------------------------------------------------- jobs


def _eigenset_rows(tset):
    rows = []
    for k in range(len(tset)):
        rep = tset.reports[k]
        rows.append([k, tset.phases[k], *rep, *_amplitudes(tset.state(k))])
    return rows


def run_eigenset(cfg: RunConfig, out: Path, verify: bool) -> dict:
    tset = transition_set(cfg.model, cfg.tau, cfg.exchange, cfg.steps)
    own = tset.max_residual()
    check = verify_exact(tset, cfg.model, cfg.exchange) if verify or tset.steps_used > 1 else own
    residual = max(own, check)
    if residual > cfg.tolerance:
        raise NumericalError(f"eigenset residual {residual:.3e} exceeds tolerance {cfg.tolerance:.1e}")
    header = ["k", "phase", "P_I0", "P_F0", "P_Ftau", "significance", *_amplitude_columns(cfg.exchange.dim)]
    write_csv(out / f"{cfg.job}.csv", header, _eigenset_rows(tset))
    best = tset.reports[tset.best()].significance
    return {
        "max_residual": residual,
        "own_residual": own,
        "refined_residual": check,
        "best_significance": best,
        "gram_deviation": tset.gram_deviation(),
        "steps_used": tset.steps_used,
        "error_estimate": tset.error_estimate,
        "rows": len(tset),
    }


def run_scan(cfg: RunConfig, out: Path) -> dict:
    p = cfg.params
    grid = p["grid_values"]
    tau = (lambda g: g) if p.get("tau_follows") else cfg.tau
    rows = sigmax.significance_scan(
        _scan_family(cfg.raw["model"], p), grid, tau, cfg.exchange, cfg.steps, p.get("direction", 1)
    )
    write_csv(out / "scan.csv", ["param", "best_P_I0", "best_significance", "branch"], [list(r) for r in rows])
    best = max(rows, key=lambda r: p.get("direction", 1) * r.best_significance)
    return {"max_residual": None, "best_significance": best.best_significance, "best_param": best.param, "rows": len(rows)}


def run_maximize(cfg: RunConfig, out: Path, seed: int) -> dict:
    from .prop import propagate

    p = cfg.params
    direction = p.get("direction", 1)
    u = propagate(cfg.model, 0.0, cfg.tau, cfg.steps).unitary
    # bring the exchange phases into the Bloch frame: rotate so E acts as sigma_x
    if cfg.exchange.i_index != 0:
        u = u[::-1, ::-1]
    s = sigmax.s_vector(u)
    best = sigmax.max_significance_state(s, direction)
    exch2 = ExchangeSpec(2, 0, 1)
    rep = population_report(best.psi, u, exch2)
    residual = abs(rep.P_Ftau - rep.P_I0)
    # random feasible competitors, a cross-check of optimality
    rng = np.random.default_rng(seed)
    samples = p.get("samples", 10000)
    top = -np.inf
    for _ in range(samples):
        v = rng.normal(size=3)
        m = np.array([s.x, s.y, s.z + 1.0])
        if np.linalg.norm(m) > 1e-12:
            v -= (v @ m) / (m @ m) * m
        nv = np.linalg.norm(v)
        if nv < 1e-12:
            continue
        top = max(top, direction * v[2] / nv)
    psi = best.psi if cfg.exchange.i_index == 0 else best.psi[::-1]
    header = ["significance", "P_I0", "P_F0", "P_Ftau", "s_x", "s_y", "s_z", *_amplitude_columns(2)]
    write_csv(out / "maximize.csv", header, [[best.significance, rep.P_I0, rep.P_F0, rep.P_Ftau, s.x, s.y, s.z, *_amplitudes(psi)]])
    return {
        "max_residual": residual,
        "best_significance": best.significance,
        "degenerate": best.degenerate,
        "random_best_significance": direction * float(top),
        "samples": samples,
    }


def run_figure1(cfg: RunConfig, out: Path) -> dict:
    p = cfg.params
    res = paperlab.figure1(p["variant"], p.get("points", 1201), p.get("substeps", 64), p.get("frame"))
    write_csv(out / "figure1.csv", ["t", "P_I", "P_F"], res.rows)
    return {"max_residual": res.residual, "best_significance": res.P_I0 - res.P_F0, "tau": res.tau, "P_I0": res.P_I0}


def run_figure2(cfg: RunConfig, out: Path) -> dict:
    res = paperlab.figure2(cfg.params.get("points", 201))
    write_csv(out / "figure2.csv", ["delta", "P_branch0", "P_branch1"], res.rows)
    return {
        "max_residual": res.max_population_diff,
        "max_closed_numeric_diff": res.max_population_diff,
        "max_phase_diff": res.max_phase_diff,
        "best_significance": None,
        "rows": len(res.rows),
    }


def run_superposition(cfg: RunConfig, out: Path) -> dict:
    p = cfg.params
    kwargs = {"tol": p["tol"]} if "tol" in p else {}
    times = superposition_exact_times(p["lines"], p["window"], **kwargs)
    all_times = times is ALL_TIMES
    write_csv(out / "superposition.csv", ["T"], [] if all_times else [[t] for t in times])
    return {"max_residual": None, "best_significance": None, "all_times": all_times, "count": None if all_times else len(times)}


def execute(cfg: RunConfig, output: Optional[str] = None, seed: int = 0) -> tuple[Path, dict]:
    out = Path(output or cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    if cfg.job in ("eigenset", "verify"):
        result = run_eigenset(cfg, out, verify=cfg.job == "verify")
    elif cfg.job == "scan":
        result = run_scan(cfg, out)
    elif cfg.job == "maximize":
        result = run_maximize(cfg, out, seed)
    elif cfg.job == "figure1":
        result = run_figure1(cfg, out)
    elif cfg.job == "figure2":
        result = run_figure2(cfg, out)
    else:
        result = run_superposition(cfg, out)
    summary = {
        "job": cfg.job,
        "config": cfg.raw,
        "seed": seed,
        "result": result,
        "wall_time_s": time.perf_counter() - start,
    }
    with open(out / "summary.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True, default=_jsonable)
        fh.write("\n")
    return out, result


def _jsonable(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, np.generic):
        return x.item()
    raise TypeError(f"not serializable: {type(x)}")


def _summary_line(job: str, result: dict, out: Path) -> str:
    def show(v, spec):
        return "n/a" if v is None else format(v, spec)

    return (
        f"{job}: max_residual={show(result.get('max_residual'), '.3e')} "
        f"best_significance={show(result.get('best_significance'), '.6f')} -> {out}"
    )


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="exactpop", description="Exact population-transition toolkit")
    ap.add_argument("config", help="path to a JSON run config")
    ap.add_argument("--output", help="output directory (overrides config)")
    ap.add_argument("--steps", type=int, help="time steps for time-dependent models (overrides config)")
    ap.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    ap.add_argument("--quiet", action="store_true", help="suppress the summary line")
    args = ap.parse_args(argv)
    try:
        try:
            with open(args.config, encoding="utf-8") as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        if args.steps is not None:
            if args.steps < 1:
                raise ConfigError("--steps must be >= 1")
            raw = {**raw, "steps": args.steps}
        cfg = load_config(raw)
        out, result = execute(cfg, args.output, args.seed)
    except (ValidationError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    if not args.quiet:
        print(_summary_line(cfg.job, result, out))
    return 0


if __name__ == "__main__":
    sys.exit(main())
