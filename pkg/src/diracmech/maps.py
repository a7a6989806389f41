"""Coordinate shuffle maps between the doubled cotangent bundle and the
cotangent bundles of the product space and of the two mixed-coordinate
spaces, plus the associated one-forms and a finite-difference exterior
derivative.

Points of the doubled cotangent bundle are ((q0, p0), (q1, p1)); tangent
vectors to it are concatenated (dq0, dp0, dq1, dp1) arrays of length 4n.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import PhasePoint, as_config
from .errors import DimensionMismatch
from .numdiff import FD_STEP, directional_derivative


@dataclass(frozen=True)
class DoubleCotangentPoint:
    """A pair of phase points ((q0, p0), (q1, p1))."""

    z0: PhasePoint
    z1: PhasePoint

    def __post_init__(self):
        if self.z0.n != self.z1.n:
            raise DimensionMismatch("z0 and z1 must have equal dimension")

    @property
    def n(self) -> int:
        return self.z0.n

    def as_array(self) -> np.ndarray:
        """Concatenated (q0, p0, q1, p1), length 4n."""
        return np.concatenate([self.z0.q, self.z0.p, self.z1.q, self.z1.p])

    @staticmethod
    def from_array(x: np.ndarray) -> "DoubleCotangentPoint":
        x = np.asarray(x, dtype=float)
        n = x.size // 4
        return DoubleCotangentPoint(
            PhasePoint(x[:n], x[n:2 * n]), PhasePoint(x[2 * n:3 * n], x[3 * n:])
        )


@dataclass(frozen=True)
class CotangentOfProductPoint:
    """A point (q0, q1; a0, a1) of the cotangent bundle of the product space."""

    q0: np.ndarray
    q1: np.ndarray
    a0: np.ndarray
    a1: np.ndarray

    def __post_init__(self):
        for name in ("q0", "q1", "a0", "a1"):
            object.__setattr__(self, name, as_config(getattr(self, name)))
        if not (self.q0.size == self.q1.size == self.a0.size == self.a1.size):
            raise DimensionMismatch("all four slots must have equal length")

    def slots(self):
        return (self.q0, self.q1, self.a0, self.a1)


@dataclass(frozen=True)
class CotangentOfHPlusPoint:
    """A point (q0, p1; a, b) with base (q0, p1)."""

    q0: np.ndarray
    p1: np.ndarray
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        for name in ("q0", "p1", "a", "b"):
            object.__setattr__(self, name, as_config(getattr(self, name)))
        if not (self.q0.size == self.p1.size == self.a.size == self.b.size):
            raise DimensionMismatch("all four slots must have equal length")

    def slots(self):
        return (self.q0, self.p1, self.a, self.b)


@dataclass(frozen=True)
class CotangentOfHMinusPoint:
    """A point (p0, q1; a, b) with base (p0, q1)."""

    p0: np.ndarray
    q1: np.ndarray
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        for name in ("p0", "q1", "a", "b"):
            object.__setattr__(self, name, as_config(getattr(self, name)))
        if not (self.p0.size == self.q1.size == self.a.size == self.b.size):
            raise DimensionMismatch("all four slots must have equal length")

    def slots(self):
        return (self.p0, self.q1, self.a, self.b)


# -- discrete coordinate maps ------------------------------------------------

def kappa_d(x: DoubleCotangentPoint) -> CotangentOfProductPoint:
    """((q0, p0), (q1, p1)) -> (q0, q1, -p0, p1)."""
    return CotangentOfProductPoint(x.z0.q, x.z1.q, -x.z0.p, x.z1.p)


def kappa_d_inv(c: CotangentOfProductPoint) -> DoubleCotangentPoint:
    """(q0, q1, a0, a1) -> ((q0, -a0), (q1, a1))."""
    return DoubleCotangentPoint(PhasePoint(c.q0, -c.a0), PhasePoint(c.q1, c.a1))


def omega_d_plus(x: DoubleCotangentPoint) -> CotangentOfHPlusPoint:
    """((q0, p0), (q1, p1)) -> (q0, p1, p0, q1)."""
    return CotangentOfHPlusPoint(x.z0.q, x.z1.p, x.z0.p, x.z1.q)


def omega_d_plus_inv(c: CotangentOfHPlusPoint) -> DoubleCotangentPoint:
    return DoubleCotangentPoint(PhasePoint(c.q0, c.a), PhasePoint(c.b, c.p1))


def omega_d_minus(x: DoubleCotangentPoint) -> CotangentOfHMinusPoint:
    """((q0, p0), (q1, p1)) -> (p0, q1, -q0, -p1)."""
    return CotangentOfHMinusPoint(x.z0.p, x.z1.q, -x.z0.q, -x.z1.p)


def omega_d_minus_inv(c: CotangentOfHMinusPoint) -> DoubleCotangentPoint:
    return DoubleCotangentPoint(PhasePoint(-c.a, c.p0), PhasePoint(c.q1, -c.b))


def gamma_d_plus(c: CotangentOfProductPoint) -> CotangentOfHPlusPoint:
    """Composition of the inverse product-space map with the plus map:
    (q0, q1, a0, a1) -> (q0, a1, -a0, q1)."""
    return omega_d_plus(kappa_d_inv(c))


def gamma_d_minus(c: CotangentOfProductPoint) -> CotangentOfHMinusPoint:
    """Composition of the inverse product-space map with the minus map:
    (q0, q1, a0, a1) -> (-a0, q1, -q0, -a1)."""
    return omega_d_minus(kappa_d_inv(c))


# -- continuous limits -------------------------------------------------------

def kappa_continuous(q, p, dq, dp):
    """(q, p, dq, dp) -> (q, dq, dp, p)."""
    return (as_config(q), as_config(dq), as_config(dp), as_config(p))


def omega_flat_continuous(q, p, dq, dp):
    """(q, p, dq, dp) -> (q, p, -dp, dq)."""
    return (as_config(q), as_config(p), -as_config(dp), as_config(dq))


# -- one-forms on the doubled cotangent bundle -------------------------------

@dataclass(frozen=True)
class OneForm:
    """A one-form on the doubled cotangent bundle, evaluated on concatenated
    coordinates x = (q0, p0, q1, p1) and tangents v of the same length."""

    name: str
    coefficients: Callable[[np.ndarray], np.ndarray]

    def __call__(self, x, v) -> float:
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        if x.size != v.size:
            raise DimensionMismatch("point and tangent must have equal length")
        return float(np.dot(self.coefficients(x), v))


def _split(x):
    n = x.size // 4
    return x[:n], x[n:2 * n], x[2 * n:3 * n], x[3 * n:]


def _coeffs_lambda(x):
    # -p0 dq0 + p1 dq1
    q0, p0, q1, p1 = _split(x)
    return np.concatenate([-p0, np.zeros_like(p0), p1, np.zeros_like(p1)])


def _coeffs_chi_plus(x):
    # p0 dq0 + q1 dp1
    q0, p0, q1, p1 = _split(x)
    return np.concatenate([p0, np.zeros_like(p0), np.zeros_like(q1), q1])


def _coeffs_chi_minus(x):
    # -q0 dp0 - p1 dq1
    q0, p0, q1, p1 = _split(x)
    return np.concatenate([np.zeros_like(q0), -q0, -p1, np.zeros_like(p1)])


def one_forms() -> dict:
    """The canonical one-forms used by the structure checks.

    lambda_plus and lambda_minus coincide; chi_plus/chi_minus are the two
    mixed-coordinate potentials; theta2/theta3 are aliases for them and
    theta for lambda.
    """
    lam = OneForm("lambda", _coeffs_lambda)
    chip = OneForm("chi_plus", _coeffs_chi_plus)
    chim = OneForm("chi_minus", _coeffs_chi_minus)
    return {
        "lambda_plus": lam,
        "lambda_minus": lam,
        "chi_plus": chip,
        "chi_minus": chim,
        "theta": lam,
        "theta2": chip,
        "theta3": chim,
    }


def exterior_derivative_2form(form: OneForm, x, v, w, step=FD_STEP) -> float:
    """d(form)(v, w) at x by central finite differences, extending v and w as
    constant vector fields (their bracket term vanishes in a chart)."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    dv = directional_derivative(lambda y: form(y, w), x, v, step=step)
    dw = directional_derivative(lambda y: form(y, v), x, w, step=step)
    return dv - dw


def pullback_through_kappa_d(x: DoubleCotangentPoint, v: np.ndarray) -> float:
    """The canonical product-space one-form a0 dq0 + a1 dq1 pulled back
    through the product-space map, evaluated at (x, v)."""
    v = np.asarray(v, dtype=float)
    n = x.n
    c = kappa_d(x)
    # image tangent under the (linear) map: (dq0, dq1, -dp0, dp1)
    dq0, dp0, dq1, dp1 = v[:n], v[n:2 * n], v[2 * n:3 * n], v[3 * n:]
    return float(np.dot(c.a0, dq0) + np.dot(c.a1, dq1))
