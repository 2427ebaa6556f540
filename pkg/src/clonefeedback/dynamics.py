"""Spontaneous emission of a two-level atom in the time domain.

The master equation

    drho/dt = -i[H, rho] + g' (2 s- rho s+ - s+ s- rho - rho s+ s-)

with ``H = -omega sigma_z / 2`` and ``s- = |0><1|`` is integrated with
fixed-step RK4 and compared against the amplitude-damping channel with
``gamma = 1 - exp(-2 t g')``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .channels import amplitude_damping, apply_channel
from .qmath import SIGMA_Z, check_density

DEFAULT_DT = 1e-3
RENORM_THRESHOLD = 1e-12
DRIFT_FAILURE = 1e-8

SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_PLUS = SIGMA_MINUS.conj().T


class IntegrationError(RuntimeError):
    """The integrator lost trace beyond :data:`DRIFT_FAILURE`."""


@dataclass(frozen=True)
class EmissionParams:
    omega: float
    gamma_prime: float
    t: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.omega, self.gamma_prime, self.t)):
            raise ValueError("emission parameters must be finite")
        if self.gamma_prime < 0:
            raise ValueError(f"gamma_prime must be >= 0, got {self.gamma_prime!r}")
        if self.t < 0:
            raise ValueError(f"t must be >= 0, got {self.t!r}")

    @property
    def hamiltonian(self) -> np.ndarray:
        return -0.5 * self.omega * SIGMA_Z


@dataclass(frozen=True)
class LindbladResult:
    rho: np.ndarray
    steps: int
    dt: float
    trace_drift: float
    renormalized: bool


def gamma_from_time(gamma_prime: float, t: float) -> float:
    """Photon-loss probability ``1 - exp(-2 t gamma_prime)``."""
    if gamma_prime < 0 or t < 0:
        raise ValueError("gamma_prime and t must be non-negative")
    return -math.expm1(-2.0 * t * gamma_prime)


def lindblad_rhs(rho: np.ndarray, p: EmissionParams) -> np.ndarray:
    """Right-hand side of the master equation in matrix form."""
    h = p.hamiltonian
    pm = SIGMA_PLUS @ SIGMA_MINUS
    return -1j * (h @ rho - rho @ h) + p.gamma_prime * (
        2 * SIGMA_MINUS @ rho @ SIGMA_PLUS - pm @ rho - rho @ pm
    )


def lindblad_step(rho: np.ndarray, p: EmissionParams, dt: float) -> np.ndarray:
    """One RK4 step of size ``dt`` using the matrix right-hand side."""
    k1 = lindblad_rhs(rho, p)
    k2 = lindblad_rhs(rho + 0.5 * dt * k1, p)
    k3 = lindblad_rhs(rho + 0.5 * dt * k2, p)
    k4 = lindblad_rhs(rho + dt * k3, p)
    return rho + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def lindblad_evolve(rho0, p: EmissionParams, dt: float = DEFAULT_DT) -> LindbladResult:
    """Integrate from time 0 to ``p.t`` with RK4.

    The step count is ``ceil(t / dt)`` and the step is shrunk to land exactly
    on ``t``.  If the final trace drifts from 1 by more than 1e-12 the state
    is renormalized and the drift reported; drift above 1e-8 raises
    :class:`IntegrationError`.
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    rho0 = check_density(rho0)
    nsteps = math.ceil(p.t / dt - 1e-9) if p.t > 0 else 0
    h = p.t / nsteps if nsteps else 0.0
    rho = _backend.rk4_lindblad(rho0, p.omega, p.gamma_prime, h, nsteps)
    drift = abs(np.trace(rho) - 1.0)
    if drift > DRIFT_FAILURE:
        raise IntegrationError(f"trace drift {drift:.3e} exceeds {DRIFT_FAILURE:g}")
    renorm = drift > RENORM_THRESHOLD
    if renorm:
        rho = rho / np.trace(rho)
    return LindbladResult(rho, nsteps, h, float(drift), renorm)


def to_interaction_picture(rho_prime, p: EmissionParams) -> np.ndarray:
    """``exp(iHt) rho' exp(-iHt)``; ``H`` is diagonal so the exponential is exact."""
    rho_prime = np.asarray(rho_prime, dtype=complex)
    u = np.diag(np.exp(1j * p.t * np.diag(p.hamiltonian)))
    return u @ rho_prime @ u.conj().T


def kraus_solution(rho0, p: EmissionParams) -> np.ndarray:
    return apply_channel(amplitude_damping(gamma_from_time(p.gamma_prime, p.t)), rho0)


def compare_with_kraus(rho0, p: EmissionParams, dt: float = DEFAULT_DT) -> float:
    """Max entrywise gap between the interaction-picture RK4 and Kraus states."""
    res = lindblad_evolve(rho0, p, dt)
    return float(np.max(np.abs(to_interaction_picture(res.rho, p) - kraus_solution(rho0, p))))
