"""Discrete fiber derivatives, momentum and energy functions, and the
numerical Legendre transform producing the two mixed-coordinate
Hamiltonians from a discrete Lagrangian."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (ConstraintDistribution, DiscreteHamiltonianMinus,
                   DiscreteHamiltonianPlus, DiscreteLagrangian, PhasePoint,
                   PontryaginPoint, slot_gradients)
from .errors import DegenerateLagrangian, SingularJacobian
from .newton import DEFAULT_NEWTON, NewtonOptions, newton_solve
from .numdiff import fd_jacobian

HESSIAN_COND_LIMIT = 1e12


@dataclass(frozen=True)
class FiberDerivativeResult:
    """Image of a position pair under a discrete fiber derivative, with a
    condition estimate of the slot Hessian used for invertibility checks."""

    point: PhasePoint
    jacobian_cond: float


def fl_plus(lagrangian: DiscreteLagrangian, q0, q1) -> PhasePoint:
    """(q0, q1) -> (q1, D2 L(q0, q1))."""
    q0 = np.asarray(q0, float)
    q1 = np.asarray(q1, float)
    return PhasePoint(q1, lagrangian.d2(q0, q1))


def fl_minus(lagrangian: DiscreteLagrangian, q0, q1) -> PhasePoint:
    """(q0, q1) -> (q0, -D1 L(q0, q1))."""
    q0 = np.asarray(q0, float)
    q1 = np.asarray(q1, float)
    return PhasePoint(q0, -np.asarray(lagrangian.d1(q0, q1)))


def fiber_derivative(kind: str, lagrangian: DiscreteLagrangian, q0, q1) -> FiberDerivativeResult:
    """fl_plus / fl_minus together with the slot-Hessian condition number."""
    q0 = np.asarray(q0, float)
    q1 = np.asarray(q1, float)
    if kind == "plus":
        point = fl_plus(lagrangian, q0, q1)
        hess = fd_jacobian(lambda x: np.asarray(lagrangian.d2(q0, x)), q1)
    elif kind == "minus":
        point = fl_minus(lagrangian, q0, q1)
        hess = fd_jacobian(lambda x: -np.asarray(lagrangian.d1(x, q1)), q0)
    else:
        raise ValueError(f"kind must be 'plus' or 'minus', got {kind!r}")
    return FiberDerivativeResult(point, float(np.linalg.cond(hess)))


def momentum_and_energy(kind: str, lagrangian: DiscreteLagrangian,
                        x: PontryaginPoint):
    """Discrete momentum function and generalized energy at a Pontryagin
    point. For kind='plus' x.p is the outgoing momentum p1 and G = <p1, q1>;
    for kind='minus' x.p is the incoming momentum p0 and G = -<p0, q0>.
    E = G - L(q0, q1) in both cases."""
    if kind == "plus":
        G = float(np.dot(x.p, x.q1))
    elif kind == "minus":
        G = -float(np.dot(x.p, x.q0))
    else:
        raise ValueError(f"kind must be 'plus' or 'minus', got {kind!r}")
    return G, G - lagrangian(x.q0, x.q1)


def _solve_slot(residual, guess, newton: NewtonOptions):
    try:
        u, _, _ = newton_solve(residual, guess, opts=newton)
    except SingularJacobian as exc:
        raise DegenerateLagrangian(
            "slot Hessian is numerically singular; the discrete Lagrangian "
            "is not hyperregular here") from exc
    return u


def _check_hyperregular(hess_fn, at):
    cond = float(np.linalg.cond(fd_jacobian(hess_fn, at)))
    if not np.isfinite(cond) or cond > HESSIAN_COND_LIMIT:
        raise DegenerateLagrangian(
            f"slot-Hessian condition {cond:.3e} exceeds {HESSIAN_COND_LIMIT:.0e}")


def build_hamiltonian_plus(lagrangian: DiscreteLagrangian,
                           newton: NewtonOptions = DEFAULT_NEWTON,
                           derivative_mode: str = "envelope") -> DiscreteHamiltonianPlus:
    """Legendre dual on (q0, p1) coordinates:
    H(q0, p1) = <p1, q1> - L(q0, q1) with q1 solving p1 = D2 L(q0, q1).

    Slot derivatives default to the envelope identities
    d1 H = -D1 L(q0, q1*), d2 H = q1*; derivative_mode='fd' uses central
    differences of the evaluator instead (verification mode).
    """

    cache = {}

    def solve_q1(q0, p1):
        q0 = np.asarray(q0, float)
        p1 = np.asarray(p1, float)
        key = (q0.tobytes(), p1.tobytes())
        if key in cache:
            return cache[key]
        _check_hyperregular(lambda x: np.asarray(lagrangian.d2(q0, x)), q0)
        q1 = _solve_slot(lambda x: np.asarray(lagrangian.d2(q0, x)) - p1, q0, newton)
        cache.clear()  # keep only the most recent evaluation point
        cache[key] = q1
        return q1

    def value(q0, p1):
        q1 = solve_q1(q0, p1)
        return float(np.dot(np.asarray(p1, float), q1)) - lagrangian(q0, q1)

    if derivative_mode == "envelope":
        def d1(q0, p1):
            q1 = solve_q1(q0, p1)
            return -np.asarray(lagrangian.d1(np.asarray(q0, float), q1))

        def d2(q0, p1):
            return solve_q1(q0, p1)
    elif derivative_mode == "fd":
        d1, d2 = slot_gradients(value)
    else:
        raise ValueError(f"unknown derivative_mode {derivative_mode!r}")

    return DiscreteHamiltonianPlus(value=value, d1=d1, d2=d2,
                                   derivative_mode="analytic" if derivative_mode == "envelope"
                                   else "finite-difference")


def build_hamiltonian_minus(lagrangian: DiscreteLagrangian,
                            newton: NewtonOptions = DEFAULT_NEWTON,
                            derivative_mode: str = "envelope") -> DiscreteHamiltonianMinus:
    """Legendre dual on (p0, q1) coordinates:
    H(p0, q1) = -<p0, q0> - L(q0, q1) with q0 solving p0 = -D1 L(q0, q1).

    Envelope identities: d1 H = -q0*, d2 H = -D2 L(q0*, q1).
    """

    cache = {}

    def solve_q0(p0, q1):
        p0 = np.asarray(p0, float)
        q1 = np.asarray(q1, float)
        key = (p0.tobytes(), q1.tobytes())
        if key in cache:
            return cache[key]
        _check_hyperregular(lambda x: -np.asarray(lagrangian.d1(x, q1)), q1)
        q0 = _solve_slot(lambda x: -np.asarray(lagrangian.d1(x, q1)) - p0, q1, newton)
        cache.clear()  # keep only the most recent evaluation point
        cache[key] = q0
        return q0

    def value(p0, q1):
        q0 = solve_q0(p0, q1)
        return -float(np.dot(np.asarray(p0, float), q0)) - lagrangian(q0, q1)

    if derivative_mode == "envelope":
        def d1(p0, q1):
            return -solve_q0(p0, q1)

        def d2(p0, q1):
            q0 = solve_q0(p0, q1)
            return -np.asarray(lagrangian.d2(q0, np.asarray(q1, float)))
    elif derivative_mode == "fd":
        d1, d2 = slot_gradients(value)
    else:
        raise ValueError(f"unknown derivative_mode {derivative_mode!r}")

    return DiscreteHamiltonianMinus(value=value, d1=d1, d2=d2,
                                    derivative_mode="analytic" if derivative_mode == "envelope"
                                    else "finite-difference")


def constraint_submanifold_residual(kind: str, lagrangian: DiscreteLagrangian,
                                    dist: ConstraintDistribution,
                                    x: PontryaginPoint) -> float:
    """Distance of a Pontryagin point from the constrained graph of the
    corresponding fiber derivative: max of the momentum mismatch and the
    discrete constraint violation, both in the infinity norm."""
    if kind == "plus":
        ref = fl_plus(lagrangian, x.q0, x.q1).p
    elif kind == "minus":
        ref = fl_minus(lagrangian, x.q0, x.q1).p
    else:
        raise ValueError(f"kind must be 'plus' or 'minus', got {kind!r}")
    p_err = float(np.max(np.abs(x.p - ref), initial=0.0))
    phi_err = float(np.max(np.abs(dist.phi(x.q0, x.q1)), initial=0.0))
    return max(p_err, phi_err)
