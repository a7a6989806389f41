# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for kinetic-minus-potential discrete Lagrangians.

Mirrors _pykern exactly; selected at import when the extension built.
"""

from libc.math cimport cos, sin

import numpy as np
cimport numpy as cnp

cnp.import_array()

DEF POT_ZERO = 0
DEF POT_HARMONIC = 1
DEF POT_PENDULUM = 2

DEF RULE_MIDPOINT = 0
DEF RULE_TRAPEZOIDAL = 1


cdef inline double _potential(int pid, const double[::1] q) nogil:
    cdef double acc = 0.0
    cdef Py_ssize_t i
    if pid == POT_ZERO:
        return 0.0
    if pid == POT_HARMONIC:
        for i in range(q.shape[0]):
            acc += q[i] * q[i]
        return 0.5 * acc
    # pendulum: one degree of freedom
    return -cos(q[0])


cdef inline void _grad_potential(int pid, const double[::1] q, double[::1] out) nogil:
    cdef Py_ssize_t i
    if pid == POT_ZERO:
        for i in range(q.shape[0]):
            out[i] = 0.0
    elif pid == POT_HARMONIC:
        for i in range(q.shape[0]):
            out[i] = q[i]
    else:
        for i in range(q.shape[0]):
            out[i] = sin(q[i])


cdef int _rule_id(str rule) except -1:
    if rule == "midpoint":
        return RULE_MIDPOINT
    if rule == "trapezoidal":
        return RULE_TRAPEZOIDAL
    raise ValueError(f"unknown rule {rule!r}")


def ld_value(int pid, str rule, double h, const double[::1] q0, const double[::1] q1):
    cdef int rid = _rule_id(rule)
    cdef Py_ssize_t n = q0.shape[0], i
    cdef double kin = 0.0, vi, pot
    cdef cnp.ndarray[double, ndim=1] qm
    for i in range(n):
        vi = (q1[i] - q0[i]) / h
        kin += vi * vi
    kin *= 0.5
    if rid == RULE_MIDPOINT:
        qm = np.empty(n)
        for i in range(n):
            qm[i] = 0.5 * (q0[i] + q1[i])
        pot = _potential(pid, qm)
    else:
        pot = 0.5 * (_potential(pid, q0) + _potential(pid, q1))
    return h * (kin - pot)


def ld_d1(int pid, str rule, double h, const double[::1] q0, const double[::1] q1):
    cdef int rid = _rule_id(rule)
    cdef Py_ssize_t n = q0.shape[0], i
    cdef cnp.ndarray[double, ndim=1] out = np.empty(n)
    cdef cnp.ndarray[double, ndim=1] qm
    if rid == RULE_MIDPOINT:
        qm = np.empty(n)
        for i in range(n):
            qm[i] = 0.5 * (q0[i] + q1[i])
        _grad_potential(pid, qm, out)
    else:
        _grad_potential(pid, q0, out)
    for i in range(n):
        out[i] = -0.5 * h * out[i] - (q1[i] - q0[i]) / h
    return out


def ld_d2(int pid, str rule, double h, const double[::1] q0, const double[::1] q1):
    cdef int rid = _rule_id(rule)
    cdef Py_ssize_t n = q0.shape[0], i
    cdef cnp.ndarray[double, ndim=1] out = np.empty(n)
    cdef cnp.ndarray[double, ndim=1] qm
    if rid == RULE_MIDPOINT:
        qm = np.empty(n)
        for i in range(n):
            qm[i] = 0.5 * (q0[i] + q1[i])
        _grad_potential(pid, qm, out)
    else:
        _grad_potential(pid, q1, out)
    for i in range(n):
        out[i] = -0.5 * h * out[i] + (q1[i] - q0[i]) / h
    return out
