"""Command-line front end: run integrations, emit trajectories, run the
verification checks, and compare methods against each other.

    dirac run     --config FILE | --system NAME --method M --h H --steps N \
                  --q0 CSV --p0 CSV [--rule R] [--format csv|json] [--output F]
    dirac verify  --config ... --checks LIST [--tol T]
    dirac compare --config ... --methods a,b[,c] [--tol T]

Exit codes: 0 success, 1 configuration error, 2 numerical failure (partial
trajectory output is still written). Floats are printed with shortest
round-trip representation so emitted files are diff-stable and parse back
bit-for-bit.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import legendre, verify as verify_mod
from .core import PhasePoint, unconstrained
from .errors import DiracMechError, UnknownSystem
from .integrators import (METHODS, StepFailure, Trajectory, integrate,
                          make_stepper)
from .newton import DEFAULT_NEWTON, NewtonOptions
from .systems import CATALOG_NAMES, QuadratureRule, catalog, discretize

CHECK_NAMES = ("symplectic", "genfunc1", "genfunc2", "genfunc3", "dirac",
               "gradient", "energy")


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    system: str
    method: str = "del"
    h: float = 0.1
    steps: int = 100
    q0: np.ndarray = None
    p0: np.ndarray = None
    rule: str = "midpoint"
    newton: NewtonOptions = field(default_factory=NewtonOptions)
    output: str = "-"
    format: str = "csv"

    def validate(self, n: int):
        if self.method not in METHODS:
            raise ConfigError(f"method: unknown method {self.method!r}")
        if self.rule not in ("midpoint", "trapezoidal"):
            raise ConfigError(f"rule: unknown quadrature rule {self.rule!r}")
        if not self.h > 0:
            raise ConfigError("h: timestep must be positive")
        if self.steps < 0:
            raise ConfigError("steps: must be nonnegative")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format: must be csv or json, got {self.format!r}")
        if self.q0 is None:
            self.q0 = np.zeros(n)
        if self.p0 is None:
            self.p0 = np.zeros(n)
        self.q0 = np.asarray(self.q0, float)
        self.p0 = np.asarray(self.p0, float)
        if self.q0.shape != (n,):
            raise ConfigError(f"q0: expected {n} components, got {self.q0.size}")
        if self.p0.shape != (n,):
            raise ConfigError(f"p0: expected {n} components, got {self.p0.size}")


def _fmt(x: float) -> str:
    """Shortest decimal string that round-trips to the same float."""
    return repr(float(x))


def _parse_vector(text: str) -> np.ndarray:
    try:
        return np.array([float(t) for t in text.split(",") if t.strip() != ""])
    except ValueError as exc:
        raise ConfigError(f"vector: could not parse {text!r}: {exc}") from exc


def _load_config(args) -> RunConfig:
    data = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"config: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config: top-level JSON value must be an object")
    for key in ("system", "method", "rule", "output", "format"):
        flag = getattr(args, key, None)
        if flag is not None:
            data[key] = flag
    if getattr(args, "h", None) is not None:
        data["h"] = args.h
    if getattr(args, "steps", None) is not None:
        data["steps"] = args.steps
    for key in ("q0", "p0"):
        flag = getattr(args, key, None)
        if flag is not None:
            data[key] = flag
    if "system" not in data:
        raise ConfigError("system: required (via --system or config file)")

    newton = data.pop("newton", {})
    if not isinstance(newton, dict):
        raise ConfigError("newton: must be an object of solver options")
    try:
        opts = NewtonOptions(**newton)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"newton: {exc}") from exc

    cfg = RunConfig(system=data["system"], newton=opts)
    for key in ("method", "rule", "output", "format"):
        if key in data:
            setattr(cfg, key, data[key])
    if "h" in data:
        try:
            cfg.h = float(data["h"])
        except (TypeError, ValueError):
            raise ConfigError(f"h: not a number: {data['h']!r}")
    if "steps" in data:
        try:
            cfg.steps = int(data["steps"])
        except (TypeError, ValueError):
            raise ConfigError(f"steps: not an integer: {data['steps']!r}")
    for key in ("q0", "p0"):
        if key in data and data[key] is not None:
            val = data[key]
            setattr(cfg, key, _parse_vector(val) if isinstance(val, str)
                    else np.asarray(val, float))
    cfg.n_requested = int(data.get("n", 1))
    return cfg


def _build(cfg: RunConfig):
    try:
        system = catalog(cfg.system, n=getattr(cfg, "n_requested", 1))
    except UnknownSystem as exc:
        raise ConfigError(f"system: {exc}") from exc
    cfg.validate(system.n)
    rule = QuadratureRule(cfg.rule, cfg.h)
    lagrangian = discretize(system, rule)
    dist = system.constraint if system.constraint is not None else unconstrained(system.n)
    stepper = make_stepper(cfg.method, lagrangian, dist, cfg.newton)
    return system, lagrangian, dist, stepper


def _open_output(path: str):
    if path in ("-", None):
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _trajectory_rows(traj: Trajectory, n: int, m: int):
    header = (["k"] + [f"q_{i}" for i in range(n)] + [f"p_{i}" for i in range(n)]
              + ["newton_iters", "residual_norm", "constraint_violation"]
              + [f"lambda_{j}" for j in range(m)])
    rows = []
    for k, z in enumerate(traj.points):
        if k == 0:
            iters, rnorm, viol, lam = 0, 0.0, 0.0, np.zeros(m)
        else:
            d = traj.diagnostics[k - 1]
            iters, rnorm, viol = d.newton_iters, d.residual_norm, d.constraint_violation
            lam = d.multipliers if d.multipliers is not None and len(d.multipliers) == m \
                else np.zeros(m)
        rows.append([k] + [_fmt(v) for v in z.q] + [_fmt(v) for v in z.p]
                    + [iters, _fmt(rnorm), _fmt(viol)] + [_fmt(v) for v in lam])
    return header, rows


def write_trajectory(traj: Trajectory, n: int, m: int, fmt: str, stream):
    header, rows = _trajectory_rows(traj, n, m)
    if fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    else:
        records = [dict(zip(header, row)) for row in rows]
        json.dump(records, stream, indent=2)
        stream.write("\n")


def read_trajectory_csv(stream):
    """Parse a CSV trajectory back into (points, header) at full precision."""
    reader = csv.reader(stream)
    header = next(reader)
    nq = sum(1 for name in header if name.startswith("q_"))
    points = []
    for row in reader:
        q = np.array([float(v) for v in row[1:1 + nq]])
        p = np.array([float(v) for v in row[1 + nq:1 + 2 * nq]])
        points.append(PhasePoint(q, p))
    return points, header


def cmd_run(args) -> int:
    cfg = _load_config(args)
    system, _, dist, stepper = _build(cfg)
    z0 = PhasePoint(cfg.q0, cfg.p0)
    failure = None
    try:
        traj = integrate(stepper, z0, cfg.steps, cfg.h)
    except StepFailure as exc:
        traj, failure = exc.partial, exc
    stream, close = _open_output(cfg.output)
    try:
        write_trajectory(traj, system.n, dist.m, cfg.format, stream)
    finally:
        if close:
            stream.close()
    if failure is not None:
        print(f"error: {failure}", file=sys.stderr)
        return 2
    return 0


def _method_kind(method: str) -> str:
    return "minus" if "minus" in method else "plus"


def _run_checks(cfg: RunConfig, checks, tol: float):
    system, lagrangian, dist, stepper = _build(cfg)
    n = system.n
    reports = []
    for name in checks:
        if name == "symplectic":
            pts = verify_mod.sample_phase_points(n, 10, scale=0.5)
            reports.append(verify_mod.check_symplectic(stepper, pts, tol))
        elif name in ("genfunc1", "genfunc2", "genfunc3"):
            gtype = int(name[-1])
            pts = verify_mod.sample_phase_points(n, 10, scale=0.5)
            if gtype == 1:
                gen, gstep = lagrangian, make_stepper("del", lagrangian, dist, cfg.newton)
            elif gtype == 2:
                gen = legendre.build_hamiltonian_plus(lagrangian, cfg.newton)
                gstep = make_stepper("ham-plus", lagrangian, dist, cfg.newton)
            else:
                gen = legendre.build_hamiltonian_minus(lagrangian, cfg.newton)
                gstep = make_stepper("ham-minus", lagrangian, dist, cfg.newton)
            reports.append(verify_mod.check_generating_function(
                gtype, gstep, gen, pts, tol))
        elif name == "dirac":
            traj = integrate(stepper, PhasePoint(cfg.q0, cfg.p0),
                             min(cfg.steps, 50), cfg.h)
            kind = _method_kind(cfg.method)
            gen = lagrangian
            if cfg.method.startswith("ham"):
                gen = (legendre.build_hamiltonian_plus(lagrangian, cfg.newton)
                       if kind == "plus"
                       else legendre.build_hamiltonian_minus(lagrangian, cfg.newton))
            reports.append(verify_mod.check_dirac_membership(kind, gen, dist, traj, tol))
        elif name == "gradient":
            rng_pts = [np.concatenate([z.q, z.p]) for z in
                       verify_mod.sample_phase_points(n, 10, scale=0.5)]

            def f(u):
                return lagrangian(u[:n], u[n:])

            def grad(u):
                return np.concatenate([np.asarray(lagrangian.d1(u[:n], u[n:])),
                                       np.asarray(lagrangian.d2(u[:n], u[n:]))])

            reports.append(verify_mod.check_gradient(f, grad, rng_pts, max(tol, 1e-6)))
        elif name == "energy":
            traj = integrate(stepper, PhasePoint(cfg.q0, cfg.p0), cfg.steps, cfg.h)
            series = verify_mod.energy_momentum_report(traj, system.energy, dist)
            dev = float(np.max(np.abs(series.energy - series.energy[0]), initial=0.0))
            reports.append(verify_mod.CheckReport(
                "energy", dev, tol, len(traj.points),
                details=f"drift_slope={series.drift_slope:.3e}"))
        else:
            raise ConfigError(f"checks: unknown check {name!r}; "
                              f"known: {', '.join(CHECK_NAMES)}")
    return reports


def cmd_verify(args) -> int:
    cfg = _load_config(args)
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    if not checks:
        raise ConfigError("checks: at least one check is required")
    for c in checks:
        if c not in CHECK_NAMES:
            raise ConfigError(f"checks: unknown check {c!r}; "
                              f"known: {', '.join(CHECK_NAMES)}")
    tol = args.tol if args.tol is not None else 10.0 * cfg.newton.tol
    try:
        reports = _run_checks(cfg, checks, tol)
    except StepFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    stream, close = _open_output(cfg.output)
    try:
        json.dump([r.to_dict() for r in reports], stream, indent=2)
        stream.write("\n")
    finally:
        if close:
            stream.close()
    return 0 if all(r.passed for r in reports) else 2


def cmd_compare(args) -> int:
    cfg = _load_config(args)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    if len(methods) < 2:
        raise ConfigError("methods: need at least two methods to compare")
    for m in methods:
        if m not in METHODS:
            raise ConfigError(f"methods: unknown method {m!r}")
    tol = args.tol if args.tol is not None else 1e-8

    system, lagrangian, dist, _ = _build(cfg)
    z0 = PhasePoint(cfg.q0, cfg.p0)
    trajectories = {}
    for m in methods:
        stepper = make_stepper(m, lagrangian, dist, cfg.newton)
        try:
            trajectories[m] = integrate(stepper, z0, cfg.steps, cfg.h)
        except StepFailure as exc:
            print(f"error: method {m}: {exc}", file=sys.stderr)
            return 2

    pairs = []
    worst = 0.0
    for i, a in enumerate(methods):
        for b in methods[i + 1:]:
            za = np.array([z.as_array() for z in trajectories[a].points])
            zb = np.array([z.as_array() for z in trajectories[b].points])
            dev = float(np.max(np.abs(za - zb)))
            worst = max(worst, dev)
            pairs.append({"methods": [a, b], "deviation": dev})
    result = {"system": system.name, "method_pairs": pairs,
              "tolerance": tol, "pass": worst <= tol}
    stream, close = _open_output(cfg.output)
    try:
        json.dump(result, stream, indent=2)
        stream.write("\n")
    finally:
        if close:
            stream.close()
    return 0 if worst <= tol else 2


def _add_config_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--system", choices=CATALOG_NAMES)
    p.add_argument("--method", choices=METHODS)
    p.add_argument("--h", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--q0", help="comma-separated initial positions")
    p.add_argument("--p0", help="comma-separated initial momenta")
    p.add_argument("--rule", choices=("midpoint", "trapezoidal"))
    p.add_argument("--output", help="output path, '-' for stdout")
    p.add_argument("--format", choices=("csv", "json"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dirac", description="Discrete Dirac mechanics integrators")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="integrate and emit a trajectory")
    _add_config_flags(p_run)
    p_run.set_defaults(func=cmd_run)

    p_verify = sub.add_parser("verify", help="run structural checks")
    _add_config_flags(p_verify)
    p_verify.add_argument("--checks", required=True,
                          help=f"comma list of {', '.join(CHECK_NAMES)}")
    p_verify.add_argument("--tol", type=float)
    p_verify.set_defaults(func=cmd_verify)

    p_cmp = sub.add_parser("compare", help="compare methods on one system")
    _add_config_flags(p_cmp)
    p_cmp.add_argument("--methods", required=True, help="comma list of methods")
    p_cmp.add_argument("--tol", type=float)
    p_cmp.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        code = 1
    except DiracMechError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 2
    if argv is None:
        sys.exit(code)
    return code


if __name__ == "__main__":
    main()
