# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Must stay signature-compatible with ``_purepy``."""

from libc.math cimport sqrt
import numpy as np


cdef inline void _rhs(double complex r00, double complex r01,
                      double complex r10, double complex r11,
                      double omega, double gp,
                      double complex* d) noexcept nogil:
    # -i[H, rho] with H = -omega sigma_z / 2, plus gp (2 s- rho s+ - {s+ s-, rho})
    d[0] = 2.0 * gp * r11
    d[1] = (1j * omega - gp) * r01
    d[2] = (-1j * omega - gp) * r10
    d[3] = -2.0 * gp * r11


def rk4_lindblad(rho0, double omega, double gamma_prime, double h, Py_ssize_t nsteps):
    """Fixed-step RK4 for the spontaneous-emission master equation."""
    cdef const double complex[:, ::1] r = np.ascontiguousarray(rho0, dtype=np.complex128)
    cdef double complex y[4]
    cdef double complex t[4]
    cdef double complex k1[4]
    cdef double complex k2[4]
    cdef double complex k3[4]
    cdef double complex k4[4]
    cdef Py_ssize_t n, j
    cdef double h2 = 0.5 * h
    cdef double h6 = h / 6.0
    y[0] = r[0, 0]; y[1] = r[0, 1]; y[2] = r[1, 0]; y[3] = r[1, 1]
    with nogil:
        for n in range(nsteps):
            _rhs(y[0], y[1], y[2], y[3], omega, gamma_prime, k1)
            for j in range(4):
                t[j] = y[j] + h2 * k1[j]
            _rhs(t[0], t[1], t[2], t[3], omega, gamma_prime, k2)
            for j in range(4):
                t[j] = y[j] + h2 * k2[j]
            _rhs(t[0], t[1], t[2], t[3], omega, gamma_prime, k3)
            for j in range(4):
                t[j] = y[j] + h * k3[j]
            _rhs(t[0], t[1], t[2], t[3], omega, gamma_prime, k4)
            for j in range(4):
                y[j] = y[j] + h6 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
    out = np.empty((2, 2), dtype=np.complex128)
    out[0, 0] = y[0]; out[0, 1] = y[1]; out[1, 0] = y[2]; out[1, 1] = y[3]
    return out


def iterate_affine(M, c, x0, double tol, Py_ssize_t max_iter):
    """Iterate ``x <- M x + c`` until ``|M x + c - x| <= tol``.

    Returns ``(x, iterations, residual)``.
    """
    cdef const double[:, ::1] m = np.ascontiguousarray(M, dtype=np.float64)
    cdef const double[::1] cv = np.ascontiguousarray(c, dtype=np.float64)
    cdef double x[3]
    cdef double y[3]
    cdef double res = 0.0, dx
    cdef Py_ssize_t i, j, it = 0
    for i in range(3):
        x[i] = x0[i]
    with nogil:
        while True:
            res = 0.0
            for i in range(3):
                y[i] = cv[i]
                for j in range(3):
                    y[i] += m[i, j] * x[j]
                dx = y[i] - x[i]
                res += dx * dx
            res = sqrt(res)
            if res <= tol or it >= max_iter:
                break
            for i in range(3):
                x[i] = y[i]
            it += 1
    return np.array([x[0], x[1], x[2]]), it, res
