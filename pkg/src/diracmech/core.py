"""State types, system-definition interfaces, and per-step diagnostics.

Configurations live in a single flat chart of R^n; momenta are covectors of
the same length. All containers are immutable after construction and every
user-supplied evaluator is expected to be pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DimensionMismatch
from .numdiff import central_gradient

RANK_TOL = 1e-10


def as_config(q) -> np.ndarray:
    """Validate and return a configuration vector (finite, 1-d, n >= 1)."""
    arr = np.atleast_1d(np.asarray(q, dtype=float))
    if arr.ndim != 1 or arr.size < 1:
        raise DimensionMismatch(f"configuration must be a 1-d vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("configuration contains non-finite entries")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class PhasePoint:
    """A point (q, p) of phase space in the flat chart."""

    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "q", as_config(self.q))
        object.__setattr__(self, "p", as_config(self.p))
        if self.q.size != self.p.size:
            raise DimensionMismatch(
                f"q has length {self.q.size} but p has length {self.p.size}"
            )

    @property
    def n(self) -> int:
        return self.q.size

    def as_array(self) -> np.ndarray:
        """Concatenated (q, p) vector of length 2n."""
        return np.concatenate([self.q, self.p])

    @staticmethod
    def from_array(z: np.ndarray) -> "PhasePoint":
        z = np.asarray(z, dtype=float)
        n = z.size // 2
        return PhasePoint(z[:n], z[n:])


@dataclass(frozen=True)
class PontryaginPoint:
    """A point (q0, q1, p) of the discrete Pontryagin bundle."""

    q0: np.ndarray
    q1: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "q0", as_config(self.q0))
        object.__setattr__(self, "q1", as_config(self.q1))
        object.__setattr__(self, "p", as_config(self.p))
        if not (self.q0.size == self.q1.size == self.p.size):
            raise DimensionMismatch("q0, q1 and p must have equal length")

    @property
    def n(self) -> int:
        return self.q0.size


@dataclass(frozen=True)
class DiscreteLagrangian:
    """Two-point generating function with slot derivatives.

    value(q0, q1) is scalar; d1 and d2 return covectors of length n.
    derivative_mode records whether d1/d2 are analytic or central differences
    of value.
    """

    value: Callable[[np.ndarray, np.ndarray], float]
    d1: Callable[[np.ndarray, np.ndarray], np.ndarray]
    d2: Callable[[np.ndarray, np.ndarray], np.ndarray]
    derivative_mode: str = "analytic"

    def __call__(self, q0, q1) -> float:
        return float(self.value(np.asarray(q0, float), np.asarray(q1, float)))


@dataclass(frozen=True)
class DiscreteHamiltonianPlus:
    """Evaluator H(q0, p1) with slot derivatives d1 (q0-slot) and d2 (p1-slot)."""

    value: Callable[[np.ndarray, np.ndarray], float]
    d1: Callable[[np.ndarray, np.ndarray], np.ndarray]
    d2: Callable[[np.ndarray, np.ndarray], np.ndarray]
    derivative_mode: str = "analytic"

    def __call__(self, q0, p1) -> float:
        return float(self.value(np.asarray(q0, float), np.asarray(p1, float)))


@dataclass(frozen=True)
class DiscreteHamiltonianMinus:
    """Evaluator H(p0, q1) with slot derivatives d1 (p0-slot) and d2 (q1-slot)."""

    value: Callable[[np.ndarray, np.ndarray], float]
    d1: Callable[[np.ndarray, np.ndarray], np.ndarray]
    d2: Callable[[np.ndarray, np.ndarray], np.ndarray]
    derivative_mode: str = "analytic"

    def __call__(self, p0, q1) -> float:
        return float(self.value(np.asarray(p0, float), np.asarray(q1, float)))


def slot_gradients(value):
    """Central-difference slot derivatives (d1, d2) of a two-slot scalar."""

    def d1(a, b):
        b = np.asarray(b, float)
        return central_gradient(lambda x: value(x, b), np.asarray(a, float))

    def d2(a, b):
        a = np.asarray(a, float)
        return central_gradient(lambda x: value(a, x), np.asarray(b, float))

    return d1, d2


def make_finite_difference_lagrangian(value) -> DiscreteLagrangian:
    """Wrap a two-point scalar with central-difference slot derivatives."""
    d1, d2 = slot_gradients(value)
    return DiscreteLagrangian(value=value, d1=d1, d2=d2, derivative_mode="finite-difference")


@dataclass(frozen=True)
class ConstraintDistribution:
    """Velocity constraints as the row space of A(q), with a discrete
    two-point constraint function phi_d whose zero set contains the diagonal.

    m = 0 encodes the unconstrained case: A returns an empty (0, n) matrix
    and phi_d an empty vector.
    """

    m: int
    n: int
    A: Callable[[np.ndarray], np.ndarray]
    phi_d: Callable[[np.ndarray, np.ndarray], np.ndarray]
    phi_mode: str = "midpoint"

    def __post_init__(self):
        if not (0 <= self.m < self.n):
            raise DimensionMismatch(f"need 0 <= m < n, got m={self.m}, n={self.n}")

    def matrix(self, q) -> np.ndarray:
        """A(q) as an (m, n) array, validated for shape."""
        mat = np.atleast_2d(np.asarray(self.A(np.asarray(q, float)), dtype=float))
        if mat.shape != (self.m, self.n):
            raise DimensionMismatch(
                f"A(q) has shape {mat.shape}, expected {(self.m, self.n)}"
            )
        return mat

    def phi(self, q0, q1) -> np.ndarray:
        if self.m == 0:
            return np.zeros(0)
        return np.atleast_1d(
            np.asarray(self.phi_d(np.asarray(q0, float), np.asarray(q1, float)), float)
        )


def unconstrained(n: int) -> ConstraintDistribution:
    """The trivial distribution: every position pair is admissible."""
    return ConstraintDistribution(
        m=0,
        n=n,
        A=lambda q: np.zeros((0, n)),
        phi_d=lambda q0, q1: np.zeros(0),
        phi_mode="user",
    )


def constraint_from_matrix(A, n: int, m: int, phi_mode: str = "midpoint",
                           phi_d=None) -> ConstraintDistribution:
    """Build a distribution from a one-form matrix function A(q).

    phi_mode selects the default discrete constraint:
      midpoint: A((q0+q1)/2) (q1-q0)  (second-order consistent)
      left:     A(q0) (q1-q0)
      user:     phi_d supplied explicitly
    """
    if phi_mode == "midpoint":
        def phi(q0, q1):
            return np.atleast_2d(np.asarray(A(0.5 * (q0 + q1)), float)) @ (q1 - q0)
    elif phi_mode == "left":
        def phi(q0, q1):
            return np.atleast_2d(np.asarray(A(q0), float)) @ (q1 - q0)
    elif phi_mode == "user":
        if phi_d is None:
            raise ValueError("phi_mode='user' requires phi_d")
        phi = phi_d
    else:
        raise ValueError(f"unknown phi_mode {phi_mode!r}")
    return ConstraintDistribution(m=m, n=n, A=A, phi_d=phi, phi_mode=phi_mode)


@dataclass(frozen=True)
class StepDiagnostics:
    """Record of one accepted integrator step."""

    newton_iters: int
    residual_norm: float
    multipliers: np.ndarray = field(default_factory=lambda: np.zeros(0))
    dirac_residuals: dict = field(default_factory=dict)
    constraint_violation: float = 0.0


@dataclass(frozen=True)
class ValidationCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def validate_system(lagrangian: DiscreteLagrangian,
                    dist: ConstraintDistribution,
                    samples: int = 20,
                    seed: int = 0) -> ValidationReport:
    """Sanity-check a system definition on random sample points.

    Checks: full row rank of A(q), phi_d vanishing on the diagonal, and
    agreement of analytic slot derivatives with central differences.
    """
    rng = np.random.default_rng(seed)
    n = dist.n
    checks = []

    rank_ok, rank_detail = True, ""
    if dist.m > 0:
        for _ in range(samples):
            q = rng.uniform(-1.0, 1.0, n)
            mat = dist.matrix(q)
            sv = np.linalg.svd(mat, compute_uv=False)
            if sv[-1] <= RANK_TOL * sv[0]:
                rank_ok = False
                rank_detail = f"rank-deficient A(q) at q={q}"
                break
    checks.append(ValidationCheck("constraint_rank", rank_ok, rank_detail))

    diag_ok, diag_detail = True, ""
    for _ in range(samples):
        q = rng.uniform(-1.0, 1.0, n)
        viol = float(np.max(np.abs(dist.phi(q, q)), initial=0.0))
        if viol > 1e-12:
            diag_ok = False
            diag_detail = f"phi_d(q, q) = {viol:.3e} at q={q}"
            break
    checks.append(ValidationCheck("diagonal_containment", diag_ok, diag_detail))

    grad_ok, grad_detail = True, ""
    if lagrangian.derivative_mode == "analytic":
        fd1, fd2 = slot_gradients(lagrangian.value)
        worst = 0.0
        for _ in range(samples):
            q0 = rng.uniform(-1.0, 1.0, n)
            q1 = rng.uniform(-1.0, 1.0, n)
            for exact, approx in ((lagrangian.d1, fd1), (lagrangian.d2, fd2)):
                g = np.asarray(exact(q0, q1), float)
                if g.size != n:
                    raise DimensionMismatch(
                        f"slot derivative has length {g.size}, expected {n}"
                    )
                err = np.max(np.abs(g - approx(q0, q1))) / (1.0 + np.max(np.abs(g)))
                worst = max(worst, float(err))
        grad_ok = worst <= 1e-6
        grad_detail = f"worst relative slot-derivative error {worst:.3e}"
    checks.append(ValidationCheck("gradient_check", grad_ok, grad_detail))

    return ValidationReport(tuple(checks))
