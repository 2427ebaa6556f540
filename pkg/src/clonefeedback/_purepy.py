"""Pure-Python versions of the compiled kernels in ``_kernels.pyx``."""

import math

import numpy as np


def _rhs(y, omega, gp):
    r00, r01, r10, r11 = y
    return (2.0 * gp * r11, (1j * omega - gp) * r01, (-1j * omega - gp) * r10, -2.0 * gp * r11)


def rk4_lindblad(rho0, omega, gamma_prime, h, nsteps):
    """Fixed-step RK4 for the spontaneous-emission master equation."""
    r = np.asarray(rho0, dtype=complex)
    y = (complex(r[0, 0]), complex(r[0, 1]), complex(r[1, 0]), complex(r[1, 1]))
    omega, gp, h = float(omega), float(gamma_prime), float(h)
    h2, h6 = 0.5 * h, h / 6.0
    for _ in range(int(nsteps)):
        k1 = _rhs(y, omega, gp)
        k2 = _rhs([a + h2 * b for a, b in zip(y, k1)], omega, gp)
        k3 = _rhs([a + h2 * b for a, b in zip(y, k2)], omega, gp)
        k4 = _rhs([a + h * b for a, b in zip(y, k3)], omega, gp)
        y = tuple(
            a + h6 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
            for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4)
        )
    return np.array([[y[0], y[1]], [y[2], y[3]]], dtype=complex)


def iterate_affine(M, c, x0, tol, max_iter):
    """Iterate ``x <- M x + c`` until ``|M x + c - x| <= tol``.

    Returns ``(x, iterations, residual)``.
    """
    m = [[float(v) for v in row] for row in np.asarray(M)]
    cv = [float(v) for v in c]
    x = [float(v) for v in x0]
    it = 0
    while True:
        y = [cv[i] + m[i][0] * x[0] + m[i][1] * x[1] + m[i][2] * x[2] for i in range(3)]
        res = math.sqrt(sum((yi - xi) ** 2 for yi, xi in zip(y, x)))
        if res <= tol or it >= max_iter:
            break
        x = y
        it += 1
    return np.array(x), it, res
