# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the py_backend kernels.

Arithmetic must stay bit-compatible with py_backend.py: same operations in
the same order, compiled without FMA contraction (see setup.py flags).
"""
import numpy as np

cimport numpy as cnp

cnp.import_array()


def godunov_fluxes(cnp.ndarray[double, ndim=1] a,
                   cnp.ndarray[double, ndim=1] b,
                   cnp.ndarray[double, ndim=1] ga,
                   cnp.ndarray[double, ndim=1] gb,
                   double g_omega, double omega, int convex):
    cdef Py_ssize_t n = a.shape[0]
    cdef cnp.ndarray[double, ndim=1] G = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i
    cdef double gl, gr
    for i in range(n):
        gl = ga[i]
        gr = gb[i]
        if convex:
            if a[i] <= b[i]:
                if omega <= a[i]:
                    G[i] = gl
                elif omega >= b[i]:
                    G[i] = gr
                else:
                    G[i] = g_omega
            else:
                G[i] = gl if gl >= gr else gr
        else:
            if a[i] <= b[i]:
                G[i] = gl if gl <= gr else gr
            else:
                if omega >= a[i]:
                    G[i] = gl
                elif omega <= b[i]:
                    G[i] = gr
                else:
                    G[i] = g_omega
    return G


def scalar_step(cnp.ndarray[double, ndim=1] v,
                cnp.ndarray[double, ndim=1] G, double mu):
    cdef Py_ssize_t n = v.shape[0]
    cdef cnp.ndarray[double, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i
    cdef double alpha, beta
    for i in range(n):
        alpha = v[i] - mu * G[i + 1]
        beta = mu * G[i]
        out[i] = alpha + beta
    return out


def upwind_step(cnp.ndarray[double, ndim=1] v,
                cnp.ndarray[double, ndim=1] w,
                cnp.ndarray[double, ndim=1] G, double mu, int periodic):
    cdef Py_ssize_t n = v.shape[0]
    cdef cnp.ndarray[double, ndim=1] v_new = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] w_new = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] lam = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i
    cdef double alpha, beta, lam_left
    for i in range(n):
        lam[i] = w[i] / v[i] if v[i] != 0.0 else 0.0
    for i in range(n):
        alpha = v[i] - mu * G[i + 1]
        beta = mu * G[i]
        if i > 0:
            lam_left = lam[i - 1]
        elif periodic:
            lam_left = lam[n - 1]
        else:
            lam_left = lam[0]
        w_new[i] = lam[i] * alpha + lam_left * beta
        v_new[i] = alpha + beta
    return v_new, w_new


def lxf_fluxes(cnp.ndarray[double, ndim=1] u,
               cnp.ndarray[double, ndim=1] F, double inv2mu):
    cdef Py_ssize_t n = u.shape[0] - 1
    cdef cnp.ndarray[double, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = 0.5 * (F[i] + F[i + 1]) - inv2mu * (u[i + 1] - u[i])
    return out
