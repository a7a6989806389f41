"""Damped Newton solver shared by the steppers and the Hamiltonian builders."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import NoConvergence, SingularJacobian
from .numdiff import fd_jacobian

COND_LIMIT = 1e14


@dataclass(frozen=True)
class NewtonOptions:
    tol: float = 1e-12          # residual infinity-norm
    max_iters: int = 50
    damping: str = "halving"    # halving | none
    max_halvings: int = 30

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.damping not in ("halving", "none"):
            raise ValueError(f"unknown damping {self.damping!r}")


DEFAULT_NEWTON = NewtonOptions()


def newton_solve(residual: Callable[[np.ndarray], np.ndarray],
                 u0: np.ndarray,
                 jac: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                 opts: NewtonOptions = DEFAULT_NEWTON):
    """Solve residual(u) = 0 from u0. Returns (u, iters, final_norm).

    Damping halves the step until the residual norm decreases; each accepted
    iterate therefore decreases the residual monotonically. After reaching
    the tolerance one extra full step is attempted to push the residual to
    the machine floor (accepted only if it decreases further).
    """
    u = np.atleast_1d(np.asarray(u0, dtype=float)).copy()
    jac_fn = jac if jac is not None else (lambda v: fd_jacobian(residual, v))

    def norm(r):
        return float(np.max(np.abs(r), initial=0.0))

    r = np.atleast_1d(np.asarray(residual(u), dtype=float))
    rnorm = norm(r)
    iters = 0

    def solve_step(u, r):
        jmat = np.atleast_2d(np.asarray(jac_fn(u), dtype=float))
        cond = np.linalg.cond(jmat)
        if not np.isfinite(cond) or cond > COND_LIMIT:
            raise SingularJacobian(
                f"Jacobian condition {cond:.3e} exceeds {COND_LIMIT:.0e}")
        return np.linalg.solve(jmat, -r)

    while rnorm > opts.tol:
        if iters >= opts.max_iters:
            raise NoConvergence(iters, rnorm)
        d = solve_step(u, r)
        alpha = 1.0
        for _ in range(opts.max_halvings + 1):
            u_try = u + alpha * d
            r_try = np.atleast_1d(np.asarray(residual(u_try), dtype=float))
            if norm(r_try) < rnorm or opts.damping == "none":
                break
            alpha *= 0.5
        else:
            raise NoConvergence(iters, rnorm,
                                "damped step failed to decrease the residual")
        u, r, rnorm = u_try, r_try, norm(r_try)
        iters += 1

    if rnorm > 0.0 and iters > 0:
        # polish: quadratic convergence makes one more step land at roundoff
        try:
            u_try = u + solve_step(u, r)
            r_try = np.atleast_1d(np.asarray(residual(u_try), dtype=float))
            if norm(r_try) < rnorm:
                u, r, rnorm = u_try, r_try, norm(r_try)
                iters += 1
        except SingularJacobian:
            pass

    return u, iters, rnorm
