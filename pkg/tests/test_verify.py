import numpy as np
import pytest

from diracmech import (PhasePoint, QuadratureRule, build_hamiltonian_minus,
                       build_hamiltonian_plus, catalog, check_dirac_membership,
                       check_generating_function, check_gradient,
                       check_symplectic, discretize, energy_momentum_report,
                       integrate, make_stepper, sample_phase_points,
                       unconstrained)
from diracmech.core import DiscreteLagrangian, constraint_from_matrix
from diracmech.errors import RankDeficientConstraint
from diracmech.integrators import Trajectory
from diracmech.core import StepDiagnostics


@pytest.fixture
def ho_ld():
    return discretize(catalog("harmonic_oscillator"), QuadratureRule("midpoint", 0.1))


def _perturbed(ld, delta=1e-3):
    return DiscreteLagrangian(
        value=ld.value,
        d1=lambda a, b: np.asarray(ld.d1(a, b)) + delta,
        d2=ld.d2)


def test_sample_points_deterministic(monkeypatch):
    monkeypatch.setenv("DIRAC_SEED", "123")
    a = sample_phase_points(2, 5)
    b = sample_phase_points(2, 5)
    for za, zb in zip(a, b):
        np.testing.assert_array_equal(za.as_array(), zb.as_array())
    monkeypatch.setenv("DIRAC_SEED", "124")
    c = sample_phase_points(2, 5)
    assert not np.array_equal(a[0].as_array(), c[0].as_array())


def test_symplectic_pass_and_fail(ho_ld):
    pts = sample_phase_points(1, 10, seed=0, scale=0.5)
    report = check_symplectic(make_stepper("del", ho_ld), pts, tol=1e-6)
    assert report.passed

    def contracting(z):
        return PhasePoint(0.9 * z.q, 0.9 * z.p), StepDiagnostics(0, 0.0)

    bad = check_symplectic(contracting, pts, tol=1e-6)
    assert not bad.passed
    assert bad.worst_residual > 0.1


def test_check_report_serialization(ho_ld):
    pts = sample_phase_points(1, 3, seed=0, scale=0.5)
    d = check_symplectic(make_stepper("del", ho_ld), pts, tol=1e-6).to_dict()
    assert set(d) == {"name", "pass", "worst_residual", "tolerance",
                      "samples", "details"}
    assert d["pass"] is True
    assert d["samples"] == 3


@pytest.mark.parametrize("gtype", [1, 2, 3])
def test_generating_functions_pass(ho_ld, gtype):
    pts = sample_phase_points(1, 8, seed=1, scale=0.5)
    if gtype == 1:
        gen, stepper = ho_ld, make_stepper("del", ho_ld)
    elif gtype == 2:
        gen = build_hamiltonian_plus(ho_ld)
        stepper = make_stepper("ham-plus", ho_ld)
    else:
        gen = build_hamiltonian_minus(ho_ld)
        stepper = make_stepper("ham-minus", ho_ld)
    report = check_generating_function(gtype, stepper, gen, pts, tol=1e-11)
    assert report.passed


def test_generating_function_fault_injection(ho_ld):
    pts = sample_phase_points(1, 8, seed=1, scale=0.5)
    bad = _perturbed(ho_ld)
    report = check_generating_function(1, make_stepper("del", ho_ld), bad,
                                       pts, tol=1e-11)
    assert not report.passed
    assert report.worst_residual >= 1e-4


def test_generating_function_bad_type(ho_ld):
    with pytest.raises(ValueError):
        check_generating_function(4, make_stepper("del", ho_ld), ho_ld,
                                  sample_phase_points(1, 1), tol=1e-9)


def _nonholonomic_trajectory(method="del-constrained", steps=50):
    sys = catalog("nonholonomic_particle")
    ld = discretize(sys, QuadratureRule("midpoint", 0.05))
    z0 = PhasePoint([0.0, 0.0, 0.0], [0.4, 0.3, 0.0])
    traj = integrate(make_stepper(method, ld, sys.constraint), z0, steps, 0.05)
    return sys, ld, traj


def test_dirac_membership_constrained_pass():
    sys, ld, traj = _nonholonomic_trajectory()
    for kind in ("plus", "minus"):
        report = check_dirac_membership(kind, ld, sys.constraint, traj, tol=1e-9)
        assert report.passed, report.to_dict()


def test_dirac_membership_hamiltonian_generators(ho_ld):
    traj = integrate(make_stepper("ham-plus", ho_ld), PhasePoint([1.0], [0.0]),
                     20, 0.1)
    Hp = build_hamiltonian_plus(ho_ld)
    assert check_dirac_membership("plus", Hp, unconstrained(1), traj,
                                  tol=1e-10).passed
    traj_m = integrate(make_stepper("ham-minus", ho_ld), PhasePoint([1.0], [0.0]),
                       20, 0.1)
    Hm = build_hamiltonian_minus(ho_ld)
    assert check_dirac_membership("minus", Hm, unconstrained(1), traj_m,
                                  tol=1e-10).passed


def test_dirac_membership_fault_injection():
    sys, ld, traj = _nonholonomic_trajectory(steps=10)
    # corrupt one momentum off the constraint row space
    pts = list(traj.points)
    z = pts[5]
    pts[5] = PhasePoint(z.q, z.p + np.array([1e-3, 0.0, 0.0]))
    bad = Trajectory(tuple(pts), traj.diagnostics, traj.h)
    report = check_dirac_membership("plus", ld, sys.constraint, bad, tol=1e-9)
    assert not report.passed
    assert report.worst_residual >= 1e-4


def test_dirac_membership_unconstrained_trajectory_fails_constraint():
    """Integrating without the constraint leaves phi_d visibly nonzero."""
    sys = catalog("nonholonomic_particle")
    ld = discretize(sys, QuadratureRule("midpoint", 0.05))
    z0 = PhasePoint([0.0, 0.0, 0.0], [0.4, 0.3, 0.2])
    traj = integrate(make_stepper("del", ld), z0, 20, 0.05)
    report = check_dirac_membership("plus", ld, sys.constraint, traj, tol=1e-9)
    assert not report.passed


def test_dirac_membership_rank_deficient_raises():
    bad_dist = constraint_from_matrix(lambda q: np.zeros((1, 2)), n=2, m=1)
    flat_ld = DiscreteLagrangian(
        value=lambda a, b: 0.0,
        d1=lambda a, b: np.zeros(2),
        d2=lambda a, b: np.zeros(2))
    pts = (PhasePoint([0.0, 0.0], [0.1, 0.0]), PhasePoint([0.0, 0.0], [0.2, 0.0]))
    traj = Trajectory(pts, (StepDiagnostics(0, 0.0),), 0.1)
    with pytest.raises(RankDeficientConstraint):
        check_dirac_membership("plus", flat_ld, bad_dist, traj, tol=1e-9)


def test_check_gradient_pass_and_fail():
    pts = [np.array([0.3, -0.7]), np.array([1.1, 0.2])]
    f = lambda x: 0.5 * float(np.dot(x, x))
    good = check_gradient(f, lambda x: x, pts, tol=1e-6)
    assert good.passed
    bad = check_gradient(f, lambda x: 2.0 * x, pts, tol=1e-6)
    assert not bad.passed
    assert bad.worst_residual > 0.1


def test_energy_momentum_report():
    sys = catalog("harmonic_oscillator")
    ld = discretize(sys, QuadratureRule("midpoint", 0.1))
    traj = integrate(make_stepper("del", ld), PhasePoint([1.0], [0.0]), 100, 0.1)
    series = energy_momentum_report(traj, sys.energy)
    assert series.energy.shape == (101,)
    # implicit midpoint preserves the quadratic energy to roundoff
    assert np.max(np.abs(series.energy - 0.5)) < 1e-12
    assert abs(series.drift_slope) < 1e-14
    assert np.all(series.constraint_violation == 0.0)
