"""Command-line interface: ``sica-nsfd <subcommand> [options]``.

Exit status is 0 on success, 1 on a numerical failure and 2 on a usage or
configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import data as data_mod
from .exceptions import ConfigError, NoEndemicEquilibrium, SICAError
from .model import (
    ModelParams,
    State,
    derived_constants,
    dfe,
    endemic_equilibrium,
    equilibrium_residual,
)
from .nsfd import (
    Denominator,
    Trajectory,
    lyapunov_dfe,
    lyapunov_ee,
    simulate,
    write_trajectory_csv,
)
from .presets import INITIAL_CONDITIONS, PRESETS
from .reference import Scheme, integrate
from .stability import dfe_local_stability


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _num(x):
    """JSON-safe float: non-finite values become null."""
    x = float(x)
    return x if math.isfinite(x) else None


@dataclass
class RunConfig:
    params: ModelParams
    init: State
    h: float
    n_steps: int
    denominator: Denominator
    out: str | None
    fmt: str
    tol: float


def _parse_init(text: str) -> State:
    text = text.strip()
    if text.isdigit():
        key = int(text)
        if key not in INITIAL_CONDITIONS:
            raise ConfigError(f"--init preset must be 1-4, got {key}")
        return INITIAL_CONDITIONS[key]
    parts = text.split(",")
    if len(parts) != 4:
        raise ConfigError(f"--init must be 1..4 or S,I,C,A; got {text!r}")
    try:
        return State(*(float(v) for v in parts))
    except ValueError as exc:
        raise ConfigError(f"bad --init value {text!r}: {exc}") from None


def build_config(args, default_steps: int) -> RunConfig:
    if args.preset and args.params:
        raise ConfigError("give either --preset or --params, not both")
    if args.params:
        params = ModelParams.from_json(args.params)
    else:
        params = PRESETS[args.preset or "cape-verde"]
    if args.beta is not None:
        params = params.with_(beta=args.beta)
    if not args.h > 0:
        raise ConfigError(f"--h must be > 0, got {args.h}")
    steps = default_steps if args.steps is None else args.steps
    if steps < 0:
        raise ConfigError(f"--steps must be >= 0, got {steps}")
    return RunConfig(params, _parse_init(args.init), args.h, steps,
                     Denominator(args.denominator), args.out, args.format, args.tol)


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _trajectory_json(traj: Trajectory) -> dict:
    return {
        "scheme": traj.scheme,
        "h": traj.h,
        "psi": traj.psi,
        "params": traj.params.to_dict(),
        "states": [
            {"n": n, "t": n * traj.h, "S": _num(s[0]), "I": _num(s[1]),
             "C": _num(s[2]), "A": _num(s[3]), "N": _num(s.sum())}
            for n, s in enumerate(traj.states)
        ],
    }


def cmd_simulate(cfg: RunConfig) -> None:
    traj = simulate(cfg.params, cfg.init, cfg.h, cfg.n_steps, cfg.denominator)
    if cfg.fmt == "json":
        _emit(cfg, _dump_json(_trajectory_json(traj)))
    else:
        buf = io.StringIO()
        write_trajectory_csv(traj, buf)
        _emit(cfg, buf.getvalue())


def _eq_record(p, eq, tol):
    res = equilibrium_residual(p, eq)
    S, I, C, A = eq.state
    return {"kind": eq.kind.value, "S": S, "I": I, "C": C, "A": A,
            "lambda_star": eq.lambda_star, "residual": res, "residual_ok": res <= tol}


def cmd_equilibria(cfg: RunConfig) -> None:
    p = cfg.params
    k = derived_constants(p)
    records = [_eq_record(p, dfe(p), cfg.tol)]
    note = None
    try:
        records.append(_eq_record(p, endemic_equilibrium(p), cfg.tol))
    except NoEndemicEquilibrium as exc:
        note = f"NoEndemicEquilibrium: {exc}"
    if cfg.fmt == "json":
        out = {"r0": k.r0, "dfe": records[0],
               "endemic": records[1] if len(records) > 1 else None, "note": note}
        _emit(cfg, _dump_json(out))
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kind", "S", "I", "C", "A", "lambda_star", "residual"])
        for r in records:
            w.writerow([r["kind"], *(_fmt(r[c]) for c in ("S", "I", "C", "A", "lambda_star",
                                                          "residual"))])
        _emit(cfg, buf.getvalue())


def cmd_stability(cfg: RunConfig) -> None:
    report = dfe_local_stability(cfg.params)
    if cfg.fmt == "json":
        _emit(cfg, _dump_json(report.to_dict()))
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["condition", "holds", "lhs", "rhs"])
    w.writerow(["r0", "", _fmt(report.r0), ""])
    w.writerow(["verdict", report.verdict.value, "", ""])
    for name, c in report.conditions.items():
        d = c.to_dict()
        w.writerow([name, "" if d["holds"] is None else str(d["holds"]).lower(),
                    "" if d["lhs"] is None else _fmt(d["lhs"]),
                    "" if d["rhs"] is None else _fmt(d["rhs"])])
    _emit(cfg, buf.getvalue())


def cmd_lyapunov(cfg: RunConfig, kind: str) -> None:
    traj = simulate(cfg.params, cfg.init, cfg.h, cfg.n_steps, cfg.denominator)
    if kind == "dfe":
        series = lyapunov_dfe(cfg.params, traj)
    else:
        # ln() needs every compartment positive; skip leading states with zeros
        positive = np.all(traj.states > 0, axis=1)
        start = int(np.argmax(positive)) if positive.any() else len(traj)
        series = lyapunov_ee(cfg.params, traj, start=start)
    monotone = series.is_monotone()
    diffs = series.differences
    if cfg.fmt == "json":
        out = {"kind": kind, "monotone": monotone,
               "violations": [int(i) for i in series.violations()],
               "index": [int(i) for i in series.index],
               "values": [_num(v) for v in series.values],
               "differences": [_num(v) for v in diffs],
               "checked": [bool(c) for c in series.checked]}
        _emit(cfg, _dump_json(out))
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "value", "difference", "checked"])
    for i, (n, v) in enumerate(zip(series.index, series.values)):
        if i < len(diffs):
            w.writerow([int(n), _fmt(v), _fmt(diffs[i]), str(bool(series.checked[i])).lower()])
        else:
            w.writerow([int(n), _fmt(v), "", ""])
    _emit(cfg, buf.getvalue())
    print(f"monotone={str(monotone).lower()}", file=sys.stderr)


COMPARE_SCHEMES = (Scheme.NSFD, Scheme.EULER, Scheme.RK4)


def cmd_compare(cfg: RunConfig) -> None:
    trajs = {}
    for scheme in COMPARE_SCHEMES:
        if scheme is Scheme.NSFD:
            trajs[scheme.value] = simulate(cfg.params, cfg.init, cfg.h, cfg.n_steps,
                                           cfg.denominator)
        else:
            trajs[scheme.value] = integrate(scheme, cfg.params, cfg.init, cfg.h, cfg.n_steps)
    if cfg.fmt == "json":
        out = {name: _trajectory_json(t)["states"] for name, t in trajs.items()}
        _emit(cfg, _dump_json({"h": cfg.h, "steps": cfg.n_steps, "schemes": out}))
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["n", "t"]
    for name in trajs:
        header += [f"{c}_{name}" for c in "SICA"]
    w.writerow(header)
    for n in range(cfg.n_steps + 1):
        row = [n, _fmt(n * cfg.h)]
        for t in trajs.values():
            row += [_fmt(v) for v in t.states[n]]
        w.writerow(row)
    _emit(cfg, buf.getvalue())


def cmd_fit(cfg: RunConfig) -> None:
    obs = data_mod.load_cape_verde()
    years = len(obs) - 1
    spy = round(1.0 / cfg.h)
    if spy < 1 or abs(spy * cfg.h - 1.0) > 1e-9:
        raise ConfigError(f"--h must divide one year, got {cfg.h}")
    traj = simulate(cfg.params, cfg.init, cfg.h, years * spy, cfg.denominator)
    report = data_mod.fit_metrics(data_mod.cumulative_cases(traj, years), obs)
    _emit(cfg, report.to_json() + "\n" if cfg.fmt == "json" else report.to_csv())


def _add_common(sp: argparse.ArgumentParser, steps_help: str) -> None:
    sp.add_argument("--preset", choices=sorted(PRESETS), default=None,
                    help="built-in parameter set (default: cape-verde)")
    sp.add_argument("--params", metavar="PATH", help="JSON file with the ten model rates")
    sp.add_argument("--beta", type=float, default=None, help="override the transmission rate")
    sp.add_argument("--init", default="1", help="initial condition preset 1-4 or S,I,C,A")
    sp.add_argument("--h", type=float, default=1.0, help="step size in years")
    sp.add_argument("--steps", type=int, default=None, help=steps_help)
    sp.add_argument("--denominator", choices=[d.value for d in Denominator],
                    default=Denominator.MICKENS.value)
    sp.add_argument("--out", metavar="PATH", default=None, help="output file (default stdout)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--tol", type=float, default=1e-8,
                    help="relative residual tolerance for equilibria")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sica-nsfd",
        description="NSFD simulation and stability analysis of the SICA HIV/AIDS model.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_, steps in (
        ("simulate", "write an NSFD trajectory", "number of steps (default 27)"),
        ("equilibria", "disease-free and endemic equilibria", "unused"),
        ("stability", "local stability report for the DFE", "unused"),
        ("lyapunov", "Lyapunov sequence along a trajectory", "number of steps (default 1000)"),
        ("compare", "NSFD, explicit Euler and RK4 side by side", "number of steps (default 27)"),
        ("fit", "cumulative cases versus the Cape Verde data", "unused; horizon is 27 years"),
    ):
        sp = sub.add_parser(name, help=help_)
        _add_common(sp, steps)
        if name == "lyapunov":
            sp.add_argument("--kind", choices=("dfe", "ee"), default="ee")
    return parser


DEFAULT_STEPS = {"simulate": 27, "compare": 27, "lyapunov": 1000}


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args, DEFAULT_STEPS.get(args.command, 0))
        if args.command == "simulate":
            cmd_simulate(cfg)
        elif args.command == "equilibria":
            cmd_equilibria(cfg)
        elif args.command == "stability":
            cmd_stability(cfg)
        elif args.command == "lyapunov":
            cmd_lyapunov(cfg, args.kind)
        elif args.command == "compare":
            cmd_compare(cfg)
        elif args.command == "fit":
            cmd_fit(cfg)
    except ConfigError as exc:
        print(f"sica-nsfd: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"sica-nsfd: error: {exc}", file=sys.stderr)
        return 2
    except (SICAError, ArithmeticError) as exc:
        print(f"sica-nsfd: numerical failure: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
