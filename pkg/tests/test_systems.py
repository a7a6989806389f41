import numpy as np
import pytest

from diracmech import (CATALOG_NAMES, QuadratureRule, UnknownSystem, catalog,
                       discretize, unconstrained, validate_system)
from diracmech.core import make_finite_difference_lagrangian
from diracmech.systems import ContinuousSystem


def test_catalog_names_resolve():
    for name in CATALOG_NAMES:
        sys = catalog(name)
        assert sys.name == name
        assert sys.n >= 1


def test_unknown_system():
    with pytest.raises(UnknownSystem):
        catalog("double_pendulum")


def test_quadrature_rule_validation():
    with pytest.raises(ValueError):
        QuadratureRule("simpson", 0.1)
    with pytest.raises(ValueError):
        QuadratureRule("midpoint", -0.1)


def test_free_particle_configurable_dimension():
    sys = catalog("free_particle", n=4)
    assert sys.n == 4
    q, p = sys.exact_flow((np.zeros(4), np.ones(4)), 2.0)
    np.testing.assert_allclose(q, 2.0 * np.ones(4))


def test_ho_exact_flow_is_rotation():
    sys = catalog("harmonic_oscillator")
    q, p = sys.exact_flow((np.array([1.0]), np.array([0.0])), np.pi / 2)
    np.testing.assert_allclose(q, [0.0], atol=1e-15)
    np.testing.assert_allclose(p, [-1.0], atol=1e-15)


@pytest.mark.parametrize("name", CATALOG_NAMES)
@pytest.mark.parametrize("rule", ["midpoint", "trapezoidal"])
def test_catalog_discretizations_validate(name, rule):
    sys = catalog(name)
    ld = discretize(sys, QuadratureRule(rule, 0.1))
    dist = sys.constraint if sys.constraint is not None else unconstrained(sys.n)
    assert validate_system(ld, dist).passed


def test_discretize_values_midpoint_vs_trapezoidal():
    sys = catalog("harmonic_oscillator")
    h = 0.2
    q0, q1 = np.array([0.3]), np.array([0.7])
    mid = discretize(sys, QuadratureRule("midpoint", h))
    trap = discretize(sys, QuadratureRule("trapezoidal", h))
    v = (q1 - q0) / h
    qm = 0.5 * (q0 + q1)
    assert mid(q0, q1) == pytest.approx(
        h * (0.5 * v[0] ** 2 - 0.5 * qm[0] ** 2), abs=1e-14)
    assert trap(q0, q1) == pytest.approx(
        h * (0.5 * v[0] ** 2 - 0.25 * (q0[0] ** 2 + q1[0] ** 2)), abs=1e-14)


def test_analytic_partials_path_matches_kernels():
    """A system given via dLdq/dLdv discretizes identically to the kernels."""
    ho = catalog("harmonic_oscillator")
    generic = ContinuousSystem(
        name="ho-generic", n=1,
        lagrangian=ho.lagrangian, energy=ho.energy,
        dLdq=ho.dLdq, dLdv=ho.dLdv)
    for rule in ("midpoint", "trapezoidal"):
        qr = QuadratureRule(rule, 0.1)
        a, b = discretize(ho, qr), discretize(generic, qr)
        q0, q1 = np.array([0.4]), np.array([-0.3])
        assert a(q0, q1) == pytest.approx(b(q0, q1), abs=1e-14)
        np.testing.assert_allclose(a.d1(q0, q1), b.d1(q0, q1), atol=1e-14)
        np.testing.assert_allclose(a.d2(q0, q1), b.d2(q0, q1), atol=1e-14)


def test_value_only_path_uses_finite_differences():
    sys = ContinuousSystem(
        name="cubic", n=1,
        lagrangian=lambda q, v: 0.5 * float(v @ v) - float(q[0] ** 3),
        energy=lambda q, p: 0.5 * float(p @ p) + float(q[0] ** 3))
    ld = discretize(sys, QuadratureRule("midpoint", 0.1))
    assert ld.derivative_mode == "finite-difference"
    q0, q1 = np.array([0.2]), np.array([0.5])
    ref = make_finite_difference_lagrangian(ld.value)
    np.testing.assert_allclose(ld.d1(q0, q1), ref.d1(q0, q1))


def test_nonholonomic_constraint_shape():
    sys = catalog("nonholonomic_particle")
    assert sys.constraint.m == 1
    A = sys.constraint.matrix(np.array([0.1, 0.2, 0.3]))
    np.testing.assert_allclose(A, [[-0.2, 0.0, 1.0]])
