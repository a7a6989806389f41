"""diracmech: geometric integrators built on discrete Dirac mechanics.

Implicit two-point (discrete Euler-Lagrange) and mixed-coordinate
(discrete Hamiltonian) integrators with nonholonomic constraints, the
discrete Legendre transform connecting them, the coordinate maps and
one-forms underlying the discrete structure, and numerical certification
of symplecticity, generating-function identities, and constraint
membership.
"""

from .core import (ConstraintDistribution, DiscreteHamiltonianMinus,
                   DiscreteHamiltonianPlus, DiscreteLagrangian, PhasePoint,
                   PontryaginPoint, StepDiagnostics, ValidationReport,
                   constraint_from_matrix, make_finite_difference_lagrangian,
                   unconstrained, validate_system)
from .errors import (DegenerateHamiltonian, DegenerateLagrangian,
                     DimensionMismatch, DiracMechError, NoConvergence,
                     RankDeficientConstraint, SingularJacobian, UnknownSystem)
from .integrators import (METHODS, StepFailure, Trajectory, integrate,
                          make_stepper, step_del, step_del_constrained,
                          step_ham_constrained, step_ham_minus, step_ham_plus)
from .legendre import (build_hamiltonian_minus, build_hamiltonian_plus,
                       constraint_submanifold_residual, fiber_derivative,
                       fl_minus, fl_plus, momentum_and_energy)
from .maps import (CotangentOfHMinusPoint, CotangentOfHPlusPoint,
                   CotangentOfProductPoint, DoubleCotangentPoint, OneForm,
                   exterior_derivative_2form, gamma_d_minus, gamma_d_plus,
                   kappa_continuous, kappa_d, kappa_d_inv, omega_d_minus,
                   omega_d_minus_inv, omega_d_plus, omega_d_plus_inv,
                   omega_flat_continuous, one_forms)
from .newton import NewtonOptions, newton_solve
from .systems import (CATALOG_NAMES, ContinuousSystem, QuadratureRule,
                      catalog, discretize)
from .verify import (CheckReport, ConservationSeries, check_dirac_membership,
                     check_generating_function, check_gradient,
                     check_symplectic, energy_momentum_report,
                     sample_phase_points)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
