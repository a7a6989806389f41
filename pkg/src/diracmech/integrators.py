"""One-step maps defined by the implicit two-point equations, their
constrained variants, and the trajectory driver."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .core import (ConstraintDistribution, DiscreteHamiltonianMinus,
                   DiscreteHamiltonianPlus, DiscreteLagrangian, PhasePoint,
                   StepDiagnostics, RANK_TOL)
from .errors import (DegenerateHamiltonian, DiracMechError,
                     RankDeficientConstraint, SingularJacobian)
from .newton import DEFAULT_NEWTON, NewtonOptions, newton_solve
from . import legendre

Stepper = Callable[[PhasePoint], Tuple[PhasePoint, StepDiagnostics]]

METHODS = ("del", "del-constrained", "ham-plus", "ham-minus",
           "ham-plus-constrained", "ham-minus-constrained")


@dataclass(frozen=True)
class Trajectory:
    points: tuple          # PhasePoint, length steps + 1
    diagnostics: tuple     # StepDiagnostics, length steps
    h: Optional[float] = None

    def positions(self) -> np.ndarray:
        return np.array([z.q for z in self.points])

    def momenta(self) -> np.ndarray:
        return np.array([z.p for z in self.points])


class StepFailure(DiracMechError):
    """A step of the trajectory driver failed; carries the partial result."""

    def __init__(self, step_index: int, partial: Trajectory, cause: Exception):
        self.step_index = step_index
        self.partial = partial
        self.cause = cause
        super().__init__(f"step {step_index} failed: {cause}")


def _check_constraint_rank(dist: ConstraintDistribution, q):
    mat = dist.matrix(q)
    if dist.m == 0:
        return mat
    sv = np.linalg.svd(mat, compute_uv=False)
    if sv[-1] <= RANK_TOL * sv[0]:
        raise RankDeficientConstraint(f"A(q) is rank deficient at q={q}")
    return mat


def step_del(lagrangian: DiscreteLagrangian, z: PhasePoint,
             opts: NewtonOptions = DEFAULT_NEWTON):
    """Solve p0 + D1 L(q0, q1) = 0 for q1, then p1 = D2 L(q0, q1)."""
    q0, p0 = z.q, z.p

    def residual(q1):
        return p0 + np.asarray(lagrangian.d1(q0, q1), float)

    q1, iters, rnorm = newton_solve(residual, q0, opts=opts)
    p1 = np.asarray(lagrangian.d2(q0, q1), float)
    diag = StepDiagnostics(newton_iters=iters, residual_norm=rnorm)
    return PhasePoint(q1, p1), diag


def step_del_constrained(lagrangian: DiscreteLagrangian,
                         dist: ConstraintDistribution, z: PhasePoint,
                         opts: NewtonOptions = DEFAULT_NEWTON):
    """Constrained two-point step: solve for (q1, lam)

        p0 + D1 L(q0, q1) = A(q0)^T lam,    phi_d(q0, q1) = 0,

    then store the full momentum p1 = D2 L(q0, q1). The membership of
    D2 L - p1 in the constraint row space is enforced at the next step,
    which composes into the standard nonholonomic integrator.
    """
    if dist.m == 0:
        z1, diag = step_del(lagrangian, z, opts)
        return z1, np.zeros(0), diag

    q0, p0 = z.q, z.p
    n, m = z.n, dist.m
    A0 = _check_constraint_rank(dist, q0)

    def residual(u):
        q1, lam = u[:n], u[n:]
        r = np.empty(n + m)
        r[:n] = p0 + np.asarray(lagrangian.d1(q0, q1), float) - A0.T @ lam
        r[n:] = dist.phi(q0, q1)
        return r

    u0 = np.concatenate([q0, np.zeros(m)])
    u, iters, rnorm = newton_solve(residual, u0, opts=opts)
    q1, lam = u[:n], u[n:]
    _check_constraint_rank(dist, q1)
    p1 = np.asarray(lagrangian.d2(q0, q1), float)
    viol = float(np.max(np.abs(dist.phi(q0, q1)), initial=0.0))
    diag = StepDiagnostics(newton_iters=iters, residual_norm=rnorm,
                           multipliers=lam, constraint_violation=viol)
    return PhasePoint(q1, p1), lam, diag


def step_ham_plus(ham: DiscreteHamiltonianPlus, z: PhasePoint,
                  opts: NewtonOptions = DEFAULT_NEWTON):
    """Solve p0 = d1 H(q0, p1) for p1, then q1 = d2 H(q0, p1)."""
    q0, p0 = z.q, z.p

    def residual(p1):
        return p0 - np.asarray(ham.d1(q0, p1), float)

    try:
        p1, iters, rnorm = newton_solve(residual, p0, opts=opts)
    except SingularJacobian as exc:
        raise DegenerateHamiltonian(str(exc)) from exc
    q1 = np.asarray(ham.d2(q0, p1), float)
    diag = StepDiagnostics(newton_iters=iters, residual_norm=rnorm)
    return PhasePoint(q1, p1), diag


def step_ham_minus(ham: DiscreteHamiltonianMinus, z: PhasePoint,
                   opts: NewtonOptions = DEFAULT_NEWTON):
    """Solve q0 = -d1 H(p0, q1) for q1, then p1 = -d2 H(p0, q1)."""
    q0, p0 = z.q, z.p

    def residual(q1):
        return q0 + np.asarray(ham.d1(p0, q1), float)

    try:
        q1, iters, rnorm = newton_solve(residual, q0, opts=opts)
    except SingularJacobian as exc:
        raise DegenerateHamiltonian(str(exc)) from exc
    p1 = -np.asarray(ham.d2(p0, q1), float)
    diag = StepDiagnostics(newton_iters=iters, residual_norm=rnorm)
    return PhasePoint(q1, p1), diag


def step_ham_constrained(kind: str, ham, dist: ConstraintDistribution,
                         z: PhasePoint, opts: NewtonOptions = DEFAULT_NEWTON):
    """Constrained mixed-coordinate steps.

    plus: solve (p1, q1, lam) from
        p0 - d1 H(q0, p1) = A(q0)^T lam,  q1 = d2 H(q0, p1),  phi_d = 0.
    minus: solve (q1, lam) from
        q0 + d1 H(p0 - A(q0)^T lam, q1) = 0,  phi_d = 0,
    then p1 = -d2 H(p0 - A(q0)^T lam, q1).

    Both store the full outgoing momentum, matching the gauge of
    step_del_constrained so the three constrained methods produce the same
    phase-space trajectory.
    """
    if kind not in ("plus", "minus"):
        raise ValueError(f"kind must be 'plus' or 'minus', got {kind!r}")
    if dist.m == 0:
        step = step_ham_plus if kind == "plus" else step_ham_minus
        z1, diag = step(ham, z, opts)
        return z1, np.zeros(0), diag

    q0, p0 = z.q, z.p
    n, m = z.n, dist.m
    A0 = _check_constraint_rank(dist, q0)

    if kind == "plus":
        def residual(u):
            p1, q1, lam = u[:n], u[n:2 * n], u[2 * n:]
            r = np.empty(2 * n + m)
            r[:n] = p0 - np.asarray(ham.d1(q0, p1), float) - A0.T @ lam
            r[n:2 * n] = q1 - np.asarray(ham.d2(q0, p1), float)
            r[2 * n:] = dist.phi(q0, q1)
            return r

        u0 = np.concatenate([p0, q0, np.zeros(m)])
        try:
            u, iters, rnorm = newton_solve(residual, u0, opts=opts)
        except SingularJacobian as exc:
            raise DegenerateHamiltonian(str(exc)) from exc
        p1, q1, lam = u[:n], u[n:2 * n], u[2 * n:]
    else:
        def residual(u):
            q1, lam = u[:n], u[n:]
            r = np.empty(n + m)
            r[:n] = q0 + np.asarray(ham.d1(p0 - A0.T @ lam, q1), float)
            r[n:] = dist.phi(q0, q1)
            return r

        u0 = np.concatenate([q0, np.zeros(m)])
        try:
            u, iters, rnorm = newton_solve(residual, u0, opts=opts)
        except SingularJacobian as exc:
            raise DegenerateHamiltonian(str(exc)) from exc
        q1, lam = u[:n], u[n:]
        p1 = -np.asarray(ham.d2(p0 - A0.T @ lam, q1), float)

    _check_constraint_rank(dist, q1)
    viol = float(np.max(np.abs(dist.phi(q0, q1)), initial=0.0))
    diag = StepDiagnostics(newton_iters=iters, residual_norm=rnorm,
                           multipliers=lam, constraint_violation=viol)
    return PhasePoint(q1, p1), lam, diag


def integrate(stepper: Stepper, z0: PhasePoint, steps: int,
              h: Optional[float] = None) -> Trajectory:
    """Apply the stepper repeatedly. On failure raises StepFailure carrying
    the partial trajectory."""
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    points = [z0]
    diags = []
    for k in range(steps):
        try:
            z_next, diag = stepper(points[-1])
        except DiracMechError as exc:
            raise StepFailure(k, Trajectory(tuple(points), tuple(diags), h), exc) from exc
        points.append(z_next)
        diags.append(diag)
    return Trajectory(tuple(points), tuple(diags), h)


def make_stepper(method: str, lagrangian: DiscreteLagrangian,
                 dist: Optional[ConstraintDistribution] = None,
                 opts: NewtonOptions = DEFAULT_NEWTON) -> Stepper:
    """Uniform (z) -> (z', diagnostics) stepper for a named method.

    Hamiltonian methods build the Legendre dual of the supplied discrete
    Lagrangian once, up front.
    """
    if method == "del":
        return lambda z: step_del(lagrangian, z, opts)
    if method == "del-constrained":
        if dist is None:
            raise ValueError("del-constrained requires a constraint distribution")

        def stepper(z):
            z1, _, diag = step_del_constrained(lagrangian, dist, z, opts)
            return z1, diag
        return stepper
    if method == "ham-plus":
        ham = legendre.build_hamiltonian_plus(lagrangian, newton=opts)
        return lambda z: step_ham_plus(ham, z, opts)
    if method == "ham-minus":
        ham = legendre.build_hamiltonian_minus(lagrangian, newton=opts)
        return lambda z: step_ham_minus(ham, z, opts)
    if method in ("ham-plus-constrained", "ham-minus-constrained"):
        if dist is None:
            raise ValueError(f"{method} requires a constraint distribution")
        kind = "plus" if method == "ham-plus-constrained" else "minus"
        ham = (legendre.build_hamiltonian_plus(lagrangian, newton=opts)
               if kind == "plus"
               else legendre.build_hamiltonian_minus(lagrangian, newton=opts))

        def stepper(z):
            z1, _, diag = step_ham_constrained(kind, ham, dist, z, opts)
            return z1, diag
        return stepper
    raise ValueError(f"unknown method {method!r}; known: {', '.join(METHODS)}")
