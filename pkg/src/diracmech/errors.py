"""Exception hierarchy shared across the package."""


class DiracMechError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(DiracMechError):
    """Array dimensions are inconsistent with the system dimension n."""


class NoConvergence(DiracMechError):
    """Newton iteration failed to reach the residual tolerance."""

    def __init__(self, iters, final_norm, message=None):
        self.iters = iters
        self.final_norm = final_norm
        super().__init__(
            message
            or f"Newton failed after {iters} iterations, residual {final_norm:.3e}"
        )


class SingularJacobian(DiracMechError):
    """Newton Jacobian is numerically singular (condition > 1e14)."""


class DegenerateLagrangian(DiracMechError):
    """Slot Hessian of the discrete Lagrangian is numerically singular."""


class DegenerateHamiltonian(DiracMechError):
    """Slot derivative of the discrete Hamiltonian is not invertible."""


class RankDeficientConstraint(DiracMechError):
    """Constraint matrix A(q) lost full row rank."""


class UnknownSystem(DiracMechError):
    """Requested catalog system name does not exist."""
