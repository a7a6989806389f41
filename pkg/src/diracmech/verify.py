"""Numerical certification of the discrete geometric structure: symplecticity
of one-step maps, generating-function slot identities, membership residuals
of the constrained structure, gradient checks, and conservation series."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .core import (ConstraintDistribution, DiscreteHamiltonianMinus,
                   DiscreteHamiltonianPlus, DiscreteLagrangian, PhasePoint,
                   RANK_TOL)
from .errors import RankDeficientConstraint
from .integrators import Stepper, Trajectory
from .numdiff import JAC_STEP, central_gradient


@dataclass(frozen=True)
class CheckReport:
    name: str
    worst_residual: float
    tolerance: float
    samples: int
    details: str = ""

    @property
    def passed(self) -> bool:
        return self.worst_residual <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "pass": self.passed,
            "worst_residual": self.worst_residual,
            "tolerance": self.tolerance,
            "samples": self.samples,
            "details": self.details,
        }


def default_seed() -> int:
    return int(os.environ.get("DIRAC_SEED", "0"))


def sample_phase_points(n: int, count: int, seed=None, scale=1.0):
    """Random phase points in [-scale, scale]^{2n}."""
    rng = np.random.default_rng(default_seed() if seed is None else seed)
    return [PhasePoint(rng.uniform(-scale, scale, n), rng.uniform(-scale, scale, n))
            for _ in range(count)]


def _canonical_two_form(n: int) -> np.ndarray:
    J = np.zeros((2 * n, 2 * n))
    J[:n, n:] = np.eye(n)
    J[n:, :n] = -np.eye(n)
    return J


def check_symplectic(stepper: Stepper, sample_points, tol: float = 1e-6) -> CheckReport:
    """Worst infinity-norm of DF^T J DF - J over the samples, with DF by
    central finite differences of the step map in canonical coordinates."""
    worst = 0.0
    for z in sample_points:
        n = z.n
        J = _canonical_two_form(n)
        x0 = z.as_array()
        DF = np.empty((2 * n, 2 * n))
        for i in range(2 * n):
            h = JAC_STEP * max(1.0, abs(x0[i]))
            xp, xm = x0.copy(), x0.copy()
            xp[i] += h
            xm[i] -= h
            fp = stepper(PhasePoint.from_array(xp))[0].as_array()
            fm = stepper(PhasePoint.from_array(xm))[0].as_array()
            DF[:, i] = (fp - fm) / (2.0 * h)
        resid = float(np.max(np.abs(DF.T @ J @ DF - J)))
        worst = max(worst, resid)
    return CheckReport("symplectic", worst, tol, len(sample_points))


def check_generating_function(gtype: int, stepper: Stepper, generator,
                              sample_points, tol: float) -> CheckReport:
    """Slot identities of a type-1/2/3 generating function along one-step
    orbits of the stepper:

      type 1 (two-point scalar):  p0 = -D1 S(q0, q1),  p1 = D2 S(q0, q1)
      type 2 (mixed q0/p1):       p0 =  D1 S(q0, p1),  q1 = D2 S(q0, p1)
      type 3 (mixed p0/q1):       q0 = -D1 S(p0, q1),  p1 = -D2 S(p0, q1)
    """
    worst = 0.0
    for z0 in sample_points:
        z1 = stepper(z0)[0]
        q0, p0, q1, p1 = z0.q, z0.p, z1.q, z1.p
        if gtype == 1:
            r = max(np.max(np.abs(p0 + np.asarray(generator.d1(q0, q1)))),
                    np.max(np.abs(p1 - np.asarray(generator.d2(q0, q1)))))
        elif gtype == 2:
            r = max(np.max(np.abs(p0 - np.asarray(generator.d1(q0, p1)))),
                    np.max(np.abs(q1 - np.asarray(generator.d2(q0, p1)))))
        elif gtype == 3:
            r = max(np.max(np.abs(q0 + np.asarray(generator.d1(p0, q1)))),
                    np.max(np.abs(p1 + np.asarray(generator.d2(p0, q1)))))
        else:
            raise ValueError(f"generating-function type must be 1, 2 or 3, got {gtype}")
        worst = max(worst, float(r))
    return CheckReport(f"genfunc{gtype}", worst, tol, len(sample_points))


def _rowspace_projector_residual(dist: ConstraintDistribution, q, v) -> float:
    """Infinity-norm of the component of v outside the row space of A(q)."""
    if dist.m == 0:
        return float(np.max(np.abs(v), initial=0.0))
    A = dist.matrix(q)
    gram = A @ A.T
    cond = np.linalg.cond(gram)
    if not np.isfinite(cond) or cond > 1.0 / RANK_TOL ** 2:
        raise RankDeficientConstraint(f"A(q) Gram matrix singular at q={q}")
    proj = A.T @ np.linalg.solve(gram, A @ v)
    return float(np.max(np.abs(v - proj), initial=0.0))


def check_dirac_membership(kind: str, generator, dist: ConstraintDistribution,
                           trajectory: Trajectory, tol: float) -> CheckReport:
    """Membership residual of each trajectory segment in the constrained
    discrete structure.

    Per segment (z_k, z_{k+1}) the covector produced by the generator is
    compared against the image of the segment under the corresponding
    coordinate map. Configuration components of the difference must vanish;
    momentum components must lie in the constraint row space at the matching
    configuration; and the discrete constraint phi_d must vanish.
    """
    if kind not in ("plus", "minus"):
        raise ValueError(f"kind must be 'plus' or 'minus', got {kind!r}")
    is_lagrangian = isinstance(generator, DiscreteLagrangian)
    worst = 0.0
    pts = trajectory.points
    for z0, z1 in zip(pts[:-1], pts[1:]):
        q0, p0, q1, p1 = z0.q, z0.p, z1.q, z1.p
        phi = float(np.max(np.abs(dist.phi(q0, q1)), initial=0.0))
        config_resid = 0.0
        if is_lagrangian:
            d1 = np.asarray(generator.d1(q0, q1), float)
            d2 = np.asarray(generator.d2(q0, q1), float)
            if kind == "plus":
                # difference tuple (0, d2 - p1, -d1 - p0, 0) on the plus side
                mom = [(_rowspace_projector_residual(dist, q1, d2 - p1)),
                       (_rowspace_projector_residual(dist, q0, -d1 - p0))]
            else:
                # difference tuple (-d1 - p0, 0, 0, p1 - d2) on the minus side
                mom = [(_rowspace_projector_residual(dist, q0, -d1 - p0)),
                       (_rowspace_projector_residual(dist, q1, p1 - d2))]
        elif kind == "plus":
            if not isinstance(generator, DiscreteHamiltonianPlus):
                raise TypeError("plus-kind Hamiltonian check needs a (q0, p1) evaluator")
            d1 = np.asarray(generator.d1(q0, p1), float)
            d2 = np.asarray(generator.d2(q0, p1), float)
            config_resid = float(np.max(np.abs(d2 - q1)))
            mom = [_rowspace_projector_residual(dist, q0, d1 - p0)]
        else:
            if not isinstance(generator, DiscreteHamiltonianMinus):
                raise TypeError("minus-kind Hamiltonian check needs a (p0, q1) evaluator")
            d1 = np.asarray(generator.d1(p0, q1), float)
            d2 = np.asarray(generator.d2(p0, q1), float)
            config_resid = float(np.max(np.abs(d1 + q0)))
            mom = [_rowspace_projector_residual(dist, q1, d2 + p1)]
        worst = max(worst, phi, config_resid, *mom)
    return CheckReport(f"dirac-{kind}", worst, tol, len(pts) - 1)


def check_gradient(f, grad, sample_points, tol: float = 1e-6) -> CheckReport:
    """Relative infinity-norm deviation of a supplied gradient from central
    finite differences of f, over sample points."""
    worst = 0.0
    for x in sample_points:
        x = np.asarray(x, float)
        g = np.asarray(grad(x), float)
        gfd = central_gradient(f, x)
        r = float(np.max(np.abs(g - gfd))) / (1.0 + float(np.max(np.abs(gfd))))
        worst = max(worst, r)
    return CheckReport("gradient", worst, tol, len(sample_points))


@dataclass(frozen=True)
class ConservationSeries:
    """Per-step monitored quantities along a trajectory (no pass/fail)."""

    energy: np.ndarray
    constraint_violation: np.ndarray
    multipliers: tuple

    @property
    def drift_slope(self) -> float:
        """Least-squares slope of the energy series per step."""
        if self.energy.size < 2:
            return 0.0
        k = np.arange(self.energy.size)
        return float(np.polyfit(k, self.energy, 1)[0])


def energy_momentum_report(trajectory: Trajectory, energy,
                           dist: ConstraintDistribution = None) -> ConservationSeries:
    """Evaluate the monitored energy at every trajectory point and collect
    constraint violations and multipliers from the step diagnostics."""
    E = np.array([energy(z.q, z.p) for z in trajectory.points])
    viol = np.array([d.constraint_violation for d in trajectory.diagnostics])
    lams = tuple(d.multipliers for d in trajectory.diagnostics)
    return ConservationSeries(E, viol, lams)
