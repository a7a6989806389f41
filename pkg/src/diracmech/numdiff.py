"""Central finite-difference derivatives used for fallback slot derivatives,
Newton Jacobians, and the verification suite."""

import numpy as np

_EPS = np.finfo(float).eps
# cube root of machine epsilon: optimal step for first-order central differences
FD_STEP = _EPS ** (1.0 / 3.0)
# square root of machine epsilon: step for Jacobians of already-noisy residuals
JAC_STEP = np.sqrt(_EPS)


def central_gradient(f, x, step=FD_STEP):
    """Central-difference gradient of a scalar function at x.

    The step is scaled per coordinate: h_i = step * max(1, |x_i|).
    """
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    for i in range(x.size):
        h = step * max(1.0, abs(x[i]))
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        g[i] = (f(xp) - f(xm)) / (2.0 * h)
    return g


def fd_jacobian(residual, u, step=JAC_STEP):
    """Forward-mode finite-difference Jacobian of a vector residual at u."""
    u = np.asarray(u, dtype=float)
    r0 = np.asarray(residual(u), dtype=float)
    jac = np.empty((r0.size, u.size))
    for i in range(u.size):
        h = step * max(1.0, abs(u[i]))
        up = u.copy()
        um = u.copy()
        up[i] += h
        um[i] -= h
        jac[:, i] = (np.asarray(residual(up)) - np.asarray(residual(um))) / (2.0 * h)
    return jac


def directional_derivative(f, x, v, step=FD_STEP):
    """Central-difference derivative of f along direction v at x."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    scale = max(1.0, float(np.max(np.abs(x))))
    vnorm = float(np.max(np.abs(v)))
    if vnorm == 0.0:
        return 0.0
    h = step * scale / vnorm
    return (f(x + h * v) - f(x - h * v)) / (2.0 * h)
