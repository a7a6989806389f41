import numpy as np
import pytest

from diracmech import (DegenerateLagrangian, PontryaginPoint, QuadratureRule,
                       build_hamiltonian_minus, build_hamiltonian_plus,
                       catalog, constraint_submanifold_residual, discretize,
                       fiber_derivative, fl_minus, fl_plus,
                       momentum_and_energy, unconstrained)
from diracmech.core import DiscreteLagrangian, make_finite_difference_lagrangian


@pytest.fixture
def free_ld():
    return discretize(catalog("free_particle"), QuadratureRule("midpoint", 0.5))


@pytest.fixture
def ho_ld():
    return discretize(catalog("harmonic_oscillator"), QuadratureRule("midpoint", 0.1))


def test_fiber_derivatives_free_particle(free_ld):
    q0, q1 = np.array([0.0]), np.array([0.5])
    zp = fl_plus(free_ld, q0, q1)
    zm = fl_minus(free_ld, q0, q1)
    # velocity (q1-q0)/h = 1: outgoing and incoming momenta both 1
    np.testing.assert_allclose(zp.q, q1)
    np.testing.assert_allclose(zp.p, [1.0], atol=1e-14)
    np.testing.assert_allclose(zm.q, q0)
    np.testing.assert_allclose(zm.p, [1.0], atol=1e-14)


def test_fiber_derivative_condition(free_ld):
    res = fiber_derivative("plus", free_ld, np.array([0.0]), np.array([0.5]))
    assert np.isfinite(res.jacobian_cond)
    with pytest.raises(ValueError):
        fiber_derivative("sideways", free_ld, np.array([0.0]), np.array([0.5]))


def test_hamiltonian_plus_free_particle_closed_form(free_ld):
    # H(q0, p1) = p1 q0 + h p1^2 / 2 for the free particle
    h = 0.5
    H = build_hamiltonian_plus(free_ld)
    q0, p1 = np.array([0.3]), np.array([0.7])
    expect = p1[0] * q0[0] + h * p1[0] ** 2 / 2
    assert H(q0, p1) == pytest.approx(expect, abs=1e-12)
    # envelope derivatives: d1 = p1, d2 = q0 + h p1
    np.testing.assert_allclose(H.d1(q0, p1), p1, atol=1e-12)
    np.testing.assert_allclose(H.d2(q0, p1), q0 + h * p1, atol=1e-12)


def test_hamiltonian_minus_free_particle_closed_form(free_ld):
    # H(p0, q1) = -p0 q1 + h p0^2 / 2 (q0 = q1 - h p0)
    h = 0.5
    H = build_hamiltonian_minus(free_ld)
    p0, q1 = np.array([0.7]), np.array([0.3])
    expect = -p0[0] * q1[0] + h * p0[0] ** 2 / 2
    assert H(p0, q1) == pytest.approx(expect, abs=1e-12)
    np.testing.assert_allclose(H.d1(p0, q1), -(q1 - h * p0), atol=1e-12)
    np.testing.assert_allclose(H.d2(p0, q1), -p0, atol=1e-12)


def test_envelope_matches_fd_derivatives(ho_ld):
    He = build_hamiltonian_plus(ho_ld, derivative_mode="envelope")
    Hf = build_hamiltonian_plus(ho_ld, derivative_mode="fd")
    q0, p1 = np.array([0.4]), np.array([-0.2])
    np.testing.assert_allclose(He.d1(q0, p1), Hf.d1(q0, p1), atol=1e-8)
    np.testing.assert_allclose(He.d2(q0, p1), Hf.d2(q0, p1), atol=1e-8)

    Ge = build_hamiltonian_minus(ho_ld, derivative_mode="envelope")
    Gf = build_hamiltonian_minus(ho_ld, derivative_mode="fd")
    p0, q1 = np.array([-0.2]), np.array([0.4])
    np.testing.assert_allclose(Ge.d1(p0, q1), Gf.d1(p0, q1), atol=1e-8)
    np.testing.assert_allclose(Ge.d2(p0, q1), Gf.d2(p0, q1), atol=1e-8)


def test_momentum_and_energy(free_ld):
    x = PontryaginPoint([0.0], [0.5], [1.0])
    G, E = momentum_and_energy("plus", free_ld, x)
    assert G == pytest.approx(0.5)            # <p1, q1>
    assert E == pytest.approx(0.5 - free_ld([0.0], [0.5]))
    Gm, Em = momentum_and_energy("minus", free_ld, x)
    assert Gm == pytest.approx(0.0)           # -<p0, q0> with q0 = 0
    with pytest.raises(ValueError):
        momentum_and_energy("sideways", free_ld, x)


def test_degenerate_lagrangian_rejected():
    # bilinear in (q0, q1): slot Hessian vanishes identically
    L = DiscreteLagrangian(value=lambda a, b: float(np.dot(a, b)),
                           d1=lambda a, b: np.asarray(b, float).copy(),
                           d2=lambda a, b: np.asarray(a, float).copy())
    H = build_hamiltonian_plus(L)
    with pytest.raises(DegenerateLagrangian):
        H(np.array([1.0]), np.array([1.0]))


def test_constraint_submanifold_residual(free_ld):
    dist = unconstrained(1)
    x = PontryaginPoint([0.0], [0.5], [1.0])  # consistent with fl_plus
    assert constraint_submanifold_residual("plus", free_ld, dist, x) < 1e-12
    x_bad = PontryaginPoint([0.0], [0.5], [1.5])
    assert constraint_submanifold_residual("plus", free_ld, dist, x_bad) == \
        pytest.approx(0.5, abs=1e-12)


def test_legendre_duality_roundtrip(ho_ld):
    """fl_plus followed by the plus-Hamiltonian slot solve is the identity."""
    H = build_hamiltonian_plus(ho_ld)
    q0, q1 = np.array([0.8]), np.array([0.75])
    p1 = np.asarray(ho_ld.d2(q0, q1))
    np.testing.assert_allclose(H.d2(q0, p1), q1, atol=1e-10)
