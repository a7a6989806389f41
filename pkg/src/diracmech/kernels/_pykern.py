"""Pure-Python kernels for kinetic-minus-potential discrete Lagrangians.

Every catalog system has L(q, v) = |v|^2/2 - V(q) with unit mass, so the
discrete Lagrangian and its slot derivatives reduce to a small family of
closed forms indexed by the potential.
"""

import numpy as np

POT_ZERO = 0
POT_HARMONIC = 1
POT_PENDULUM = 2


def potential(pid, q):
    if pid == POT_ZERO:
        return 0.0
    if pid == POT_HARMONIC:
        return 0.5 * float(np.dot(q, q))
    if pid == POT_PENDULUM:
        return -float(np.cos(q[0]))
    raise ValueError(f"unknown potential id {pid}")


def grad_potential(pid, q):
    if pid == POT_ZERO:
        return np.zeros_like(q)
    if pid == POT_HARMONIC:
        return np.asarray(q, dtype=float).copy()
    if pid == POT_PENDULUM:
        return np.sin(np.asarray(q, dtype=float))
    raise ValueError(f"unknown potential id {pid}")


def _check_rule(rule):
    if rule not in ("midpoint", "trapezoidal"):
        raise ValueError(f"unknown rule {rule!r}")


def ld_value(pid, rule, h, q0, q1):
    _check_rule(rule)
    v = (q1 - q0) / h
    kinetic = 0.5 * float(np.dot(v, v))
    if rule == "midpoint":
        return h * (kinetic - potential(pid, 0.5 * (q0 + q1)))
    return h * (kinetic - 0.5 * (potential(pid, q0) + potential(pid, q1)))


def ld_d1(pid, rule, h, q0, q1):
    _check_rule(rule)
    v = (q1 - q0) / h
    if rule == "midpoint":
        return -0.5 * h * grad_potential(pid, 0.5 * (q0 + q1)) - v
    return -0.5 * h * grad_potential(pid, q0) - v


def ld_d2(pid, rule, h, q0, q1):
    _check_rule(rule)
    v = (q1 - q0) / h
    if rule == "midpoint":
        return -0.5 * h * grad_potential(pid, 0.5 * (q0 + q1)) + v
    return -0.5 * h * grad_potential(pid, q1) + v
