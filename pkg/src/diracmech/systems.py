"""Benchmark systems and the quadrature rules that turn a continuous
Lagrangian into a discrete one."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import kernels
from .core import ConstraintDistribution, DiscreteLagrangian, constraint_from_matrix, \
    make_finite_difference_lagrangian, slot_gradients
from .errors import UnknownSystem

CATALOG_NAMES = ("free_particle", "harmonic_oscillator", "pendulum",
                 "nonholonomic_particle")


@dataclass(frozen=True)
class QuadratureRule:
    """Quadrature for the one-step action integral."""

    kind: str  # midpoint | trapezoidal
    h: float

    def __post_init__(self):
        if self.kind not in ("midpoint", "trapezoidal"):
            raise ValueError(f"unknown quadrature kind {self.kind!r}")
        if not self.h > 0:
            raise ValueError("timestep h must be positive")


@dataclass(frozen=True)
class ContinuousSystem:
    """A mechanical system L(q, v), with analytic partials when available and
    the conserved energy used for monitoring.

    potential_id marks kinetic-minus-potential systems that the compiled
    kernels can discretize directly.
    """

    name: str
    n: int
    lagrangian: Callable[[np.ndarray, np.ndarray], float]
    energy: Callable[[np.ndarray, np.ndarray], float]
    dLdq: Optional[Callable] = None
    dLdv: Optional[Callable] = None
    constraint: Optional[ConstraintDistribution] = None
    exact_flow: Optional[Callable] = None
    potential_id: Optional[int] = None


def discretize(system: ContinuousSystem, rule: QuadratureRule,
               backend=None) -> DiscreteLagrangian:
    """Discrete Lagrangian for one step of length h.

    midpoint:    h * L((q0+q1)/2, (q1-q0)/h)
    trapezoidal: (h/2) * [L(q0, (q1-q0)/h) + L(q1, (q1-q0)/h)]
    """
    h = rule.h

    if system.potential_id is not None:
        value, d1, d2 = kernels.make_kmp_kernels(system.potential_id, rule.kind, h,
                                                 backend=backend)
        return DiscreteLagrangian(value=value, d1=d1, d2=d2, derivative_mode="analytic")

    if system.dLdq is not None and system.dLdv is not None:
        L, dLdq, dLdv = system.lagrangian, system.dLdq, system.dLdv
        if rule.kind == "midpoint":
            def value(q0, q1):
                return h * L(0.5 * (q0 + q1), (q1 - q0) / h)

            def d1(q0, q1):
                qm, v = 0.5 * (q0 + q1), (q1 - q0) / h
                return 0.5 * h * np.asarray(dLdq(qm, v)) - np.asarray(dLdv(qm, v))

            def d2(q0, q1):
                qm, v = 0.5 * (q0 + q1), (q1 - q0) / h
                return 0.5 * h * np.asarray(dLdq(qm, v)) + np.asarray(dLdv(qm, v))
        else:
            def value(q0, q1):
                v = (q1 - q0) / h
                return 0.5 * h * (L(q0, v) + L(q1, v))

            def d1(q0, q1):
                v = (q1 - q0) / h
                dv = 0.5 * (np.asarray(dLdv(q0, v)) + np.asarray(dLdv(q1, v)))
                return 0.5 * h * np.asarray(dLdq(q0, v)) - dv

            def d2(q0, q1):
                v = (q1 - q0) / h
                dv = 0.5 * (np.asarray(dLdv(q0, v)) + np.asarray(dLdv(q1, v)))
                return 0.5 * h * np.asarray(dLdq(q1, v)) + dv
        return DiscreteLagrangian(value=value, d1=d1, d2=d2, derivative_mode="analytic")

    L = system.lagrangian
    if rule.kind == "midpoint":
        def value(q0, q1):
            return h * L(0.5 * (q0 + q1), (q1 - q0) / h)
    else:
        def value(q0, q1):
            v = (q1 - q0) / h
            return 0.5 * h * (L(q0, v) + L(q1, v))
    return make_finite_difference_lagrangian(value)


def _kinetic_minus_potential(name, n, potential_id, potential, grad_potential,
                             constraint=None, exact_flow=None):
    def lagrangian(q, v):
        return 0.5 * float(np.dot(v, v)) - potential(q)

    def energy(q, p):
        return 0.5 * float(np.dot(p, p)) + potential(q)

    return ContinuousSystem(
        name=name,
        n=n,
        lagrangian=lagrangian,
        energy=energy,
        dLdq=lambda q, v: -grad_potential(q),
        dLdv=lambda q, v: np.asarray(v, float).copy(),
        constraint=constraint,
        exact_flow=exact_flow,
        potential_id=potential_id,
    )


def catalog(name: str, n: int = 1) -> ContinuousSystem:
    """Benchmark systems by name; n is honored only by free_particle."""
    if name == "free_particle":
        def exact_flow(z, t):
            q, p = z
            return np.asarray(q) + t * np.asarray(p), np.asarray(p, float).copy()

        return _kinetic_minus_potential(
            "free_particle", n, kernels.POT_ZERO,
            lambda q: 0.0, lambda q: np.zeros_like(q), exact_flow=exact_flow)

    if name == "harmonic_oscillator":
        def exact_flow(z, t):
            q, p = np.asarray(z[0], float), np.asarray(z[1], float)
            c, s = np.cos(t), np.sin(t)
            return c * q + s * p, -s * q + c * p

        return _kinetic_minus_potential(
            "harmonic_oscillator", 1, kernels.POT_HARMONIC,
            lambda q: 0.5 * float(np.dot(q, q)), lambda q: np.asarray(q, float).copy(),
            exact_flow=exact_flow)

    if name == "pendulum":
        return _kinetic_minus_potential(
            "pendulum", 1, kernels.POT_PENDULUM,
            lambda q: -float(np.cos(q[0])), lambda q: np.sin(np.asarray(q, float)))

    if name == "nonholonomic_particle":
        # free particle in R^3 with the knife-edge-style constraint
        # dz - y dx = 0, one-form row A(q) = [-y, 0, 1]
        def A(q):
            return np.array([[-q[1], 0.0, 1.0]])

        dist = constraint_from_matrix(A, n=3, m=1, phi_mode="midpoint")
        return _kinetic_minus_potential(
            "nonholonomic_particle", 3, kernels.POT_ZERO,
            lambda q: 0.0, lambda q: np.zeros_like(q), constraint=dist)

    raise UnknownSystem(f"unknown system {name!r}; known: {', '.join(CATALOG_NAMES)}")
