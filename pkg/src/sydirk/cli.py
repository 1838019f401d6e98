"""Command-line driver: ``classify``, ``run`` and ``convergence``."""
from __future__ import annotations

import argparse
import contextlib
import io
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from .convergence import MODES as CONVERGENCE_MODES
from .convergence import convergence_study, fitted_order
from .descent import descend_trajectory
from .equivalence import lockstep_trajectory, stage_order
from .errors import DegenerateSpectrum, NonConvergence, SydirkError, UnknownName
from .rk import rk_trajectory
from .solver import SolverSettings
from .systems import build_system
from .tableau import BUILTIN_NAMES, builtin_tableau, classify, loads_tableau, make_sydirk, tableau_from_dict

EXIT_OK = 0
EXIT_NONCONVERGENCE = 2
EXIT_DEGENERATE = 3
EXIT_CONFIG = 4

RUN_MODES = ("descended", "full", "both")


class ConfigError(Exception):
    pass


def fmt(x) -> str:
    return f"{x:.17g}"


# --- config --------------------------------------------------------------

def resolve_tableau(source):
    """Builtin name, path to a JSON tableau, ``{"b": [...]}`` for a SyDIRK
    method, or a serialized tableau document."""
    if isinstance(source, dict):
        if set(source) == {"b"}:
            return make_sydirk(source["b"])
        return tableau_from_dict(source)
    if not isinstance(source, str):
        raise ConfigError(f"cannot interpret method {source!r}")
    if source in BUILTIN_NAMES:
        return builtin_tableau(source)
    if os.path.exists(source):
        with open(source) as fh:
            doc = json.load(fh)
        return resolve_tableau(doc) if isinstance(doc, dict) and set(doc) == {"b"} else loads_tableau(json.dumps(doc))
    raise ConfigError(f"unknown tableau {source!r}; builtins are {', '.join(BUILTIN_NAMES)}")


def load_config(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    return doc


def solver_settings(doc):
    try:
        return SolverSettings(**(doc or {}))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad solver settings: {exc}") from exc


def system_from(doc):
    if isinstance(doc, str):
        doc = {"name": doc}
    if not isinstance(doc, dict) or "name" not in doc:
        raise ConfigError('system must be a name or {"name": ..., "params": {...}}')
    try:
        return build_system(doc["name"], doc.get("params"))
    except TypeError as exc:
        raise ConfigError(f"bad parameters for system {doc['name']!r}: {exc}") from exc


def initial_states(sysm, doc, seed):
    rng = np.random.default_rng(seed)
    if "initial_state" in doc:
        z0 = np.asarray(doc["initial_state"], dtype=float)
        if z0.shape != (sysm.dim_z,):
            raise ConfigError(f"initial_state must have {sysm.dim_z} entries, got {z0.size}")
    else:
        z0 = sysm.initial_state(rng)
    return z0, sysm.lift(z0, rng)


def _require(doc, key, kind):
    if key not in doc:
        raise ConfigError(f"config is missing {key!r}")
    try:
        return kind(doc[key])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {key!r}: {doc[key]!r}") from exc


# --- output --------------------------------------------------------------

def csv_header(names, mode, dim=None):
    cols = ["step", "t", *names, "stage_iters_max"]
    if dim is not None:
        cols += [f"z{k + 1}" for k in range(dim)]
    if mode == "both":
        cols.append("dev")
    return ",".join(cols)


def csv_rows(rec, h, mode):
    for k, t in enumerate(rec.times):
        row = [str(k), fmt(k * h)]
        row += [fmt(rec.diagnostics[name][k]) for name in rec.names]
        iters = rec.stage_iters[k]
        row.append(str(max(iters) if iters else 0))
        if rec.states is not None:
            row += [fmt(x) for x in rec.states[k]]
        if mode == "both":
            row.append(fmt(rec.deviations[k]))
        yield ",".join(row)


def write_record(out, rec, h, mode, dim=None, abort=None):
    out.write(csv_header(rec.names, mode, dim) + "\n")
    for line in csv_rows(rec, h, mode):
        out.write(line + "\n")
    if abort is not None:
        out.write(f"# aborted at step {abort.step}\n")


@contextlib.contextmanager
def open_output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


# --- commands ------------------------------------------------------------

def cmd_classify(args):
    source = args.tableau or args.name
    if source is None:
        raise ConfigError("classify needs a tableau name or path")
    c = classify(resolve_tableau(source))
    print(c.summary())
    print(json.dumps(c.to_dict()))
    return EXIT_OK


@dataclass
class RunPlan:
    system: object
    tableau: object
    h: float
    steps: int
    mode: str
    settings: SolverSettings
    z0: np.ndarray
    y0: np.ndarray


def plan_run(cfg, seed) -> RunPlan:
    """Validate a run config; every problem surfaces as :class:`ConfigError`
    (or an unknown-name error) before any integration starts."""
    sysm = system_from(cfg.get("system"))
    t = resolve_tableau(cfg.get("method", "midpoint"))
    h = _require(cfg, "h", float)
    steps = _require(cfg, "steps", int)
    if not h > 0:
        raise ConfigError("h must be positive")
    if steps < 0:
        raise ConfigError("steps must be nonnegative")
    mode = str(cfg.get("mode", "descended")).lower()
    if mode not in RUN_MODES:
        raise ConfigError(f"mode must be one of {', '.join(RUN_MODES)}")
    if mode != "full":
        try:
            stage_order(t)
        except ValueError as exc:
            raise ConfigError(f"{mode} mode needs a SyDIRK method: {exc}") from exc
    settings = solver_settings(cfg.get("solver"))
    z0, y0 = initial_states(sysm, cfg, seed)
    return RunPlan(sysm, t, h, steps, mode, settings, z0, y0)


def execute(plan: RunPlan, dump_states=False):
    """Integrate a plan. Solver errors propagate with the partial record
    attached as ``record``."""
    sysm, t = plan.system, plan.tableau
    if plan.mode == "full":
        return rk_trajectory(
            t, sysm.f, plan.y0, plan.h, plan.steps, plan.settings,
            diagnostics=sysm.diagnostics, observe=sysm.F.value, keep_states=dump_states,
        )
    if plan.mode == "both":
        return lockstep_trajectory(t, sysm, plan.y0, plan.h, plan.steps, plan.settings, keep_states=dump_states)
    b = t.b[list(stage_order(t))]
    return descend_trajectory(
        b, sysm.reduced, plan.z0, plan.h, plan.steps, plan.settings, sysm.diagnostics, dump_states
    )


def cmd_run(args):
    cfg = load_config(args.config)
    if args.tableau:
        cfg["method"] = args.tableau
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    output = args.output or cfg.get("output")
    plan = plan_run(cfg, seed)
    failure, code = None, EXIT_OK
    try:
        rec = execute(plan, args.dump_states)
    except NonConvergence as exc:
        failure, code, rec = exc, EXIT_NONCONVERGENCE, exc.record
    except DegenerateSpectrum as exc:
        failure, code, rec = exc, EXIT_DEGENERATE, exc.record
    if failure is not None:
        print(f"error: {failure}", file=sys.stderr)
        if rec is None:
            return code
    if args.dump_states and plan.mode == "full":
        # full-space states are dumped through F, like the diagnostics
        rec.states = [plan.system.F.value(y) for y in rec.states]
    dim = plan.system.dim_z if args.dump_states else None
    with open_output(output) as out:
        write_record(out, rec, plan.h, plan.mode, dim, abort=failure)
    return code


def cmd_convergence(args):
    cfg = load_config(args.config) if args.config else {}
    for key, val in (
        ("system", args.system),
        ("method", args.tableau),
        ("h0", args.h0),
        ("levels", args.levels),
        ("t_end", args.t_end),
        ("mode", args.mode),
    ):
        if val is not None:
            cfg[key] = val
    sysm = system_from(cfg.get("system", "hopf_rigid_body"))
    t = resolve_tableau(cfg.get("method", "midpoint"))
    h0 = float(cfg.get("h0", 0.1))
    levels = int(cfg.get("levels", 4))
    t_end = float(cfg.get("t_end", 1.0))
    mode = str(cfg.get("mode", "descended")).lower()
    if mode not in CONVERGENCE_MODES:
        raise ConfigError(f"mode must be one of {', '.join(CONVERGENCE_MODES)}")
    if mode == "descended":
        try:
            stage_order(t)
        except ValueError as exc:
            raise ConfigError(f"descended mode needs a SyDIRK method: {exc}") from exc
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    _, y0 = initial_states(sysm, cfg, seed)
    try:
        rows = convergence_study(t, sysm, y0, h0, levels, t_end, mode, solver_settings(cfg.get("solver")))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    order = fitted_order(rows)
    text = io.StringIO()
    text.write(f"{'level':>5} {'h':>12} {'steps':>7} {'error':>12} {'order':>7}\n")
    for r in rows:
        o = "-" if r.order is None else f"{r.order:.3f}"
        text.write(f"{r.level:>5} {r.h:>12.6g} {r.steps:>7} {r.error:>12.4e} {o:>7}\n")
    text.write(f"observed order {order:.3f}\n")
    csv = ["level,h,steps,error,order"]
    for r in rows:
        csv.append(",".join([str(r.level), fmt(r.h), str(r.steps), fmt(r.error), "" if r.order is None else fmt(r.order)]))
    csv.append(f"fit,,,,{fmt(order)}")
    sys.stdout.write(text.getvalue())
    if args.output:
        with open(args.output, "w") as fh:
            fh.write("\n".join(csv) + "\n")
    else:
        sys.stdout.write("\n" + "\n".join(csv) + "\n")
    return EXIT_OK


# --- entry point ---------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="sydirk", description="SyDIRK integrators and their descended methods.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="classify a Butcher tableau")
    c.add_argument("name", nargs="?", help="builtin name or path to a JSON tableau")
    c.add_argument("--tableau", help="builtin name or path (same as the positional argument)")
    c.set_defaults(func=cmd_classify)

    r = sub.add_parser("run", help="integrate a system and write diagnostics as CSV")
    r.add_argument("--config", required=True, help="JSON run configuration")
    r.add_argument("--tableau", help="override the configured method")
    r.add_argument("--output", help="CSV path (default: stdout)")
    r.add_argument("--dump-states", action="store_true", help="append the state vector to every row")
    r.add_argument("--seed", type=int, help="seed for the initial condition")
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("convergence", help="observed order from a step-halving ladder")
    v.add_argument("--config", help="JSON configuration (optional)")
    v.add_argument("--system")
    v.add_argument("--tableau")
    v.add_argument("--h0", type=float)
    v.add_argument("--levels", type=int)
    v.add_argument("--t-end", dest="t_end", type=float)
    v.add_argument("--mode", choices=CONVERGENCE_MODES)
    v.add_argument("--output", help="write the machine-readable rows here instead of stdout")
    v.add_argument("--seed", type=int)
    v.set_defaults(func=cmd_convergence)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, UnknownName, KeyError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except DegenerateSpectrum as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except SydirkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
