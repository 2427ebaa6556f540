"""Closed feedback loop: process, cloner and mixing gate.

The loop is traced once around starting from the process input ``a``::

    a --process--> b --cloner--> (2/3) b --gate with input I--> a'

and the steady state is the fixed point ``a = a'``.  Every stage is affine
on Bloch vectors, so the whole loop is one :class:`AffineBlochMap`.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Literal, Optional

import numpy as np

from . import _backend
from .channels import AffineBlochMap, amplitude_damping, channel_to_affine, cloner_affine
from .qmath import (
    ATOL,
    I4,
    SIGMA_X,
    bloch_matrix,
    bloch_to_density,
    check_density,
    check_unitary,
    controlled_phase,
    controlled_u,
    partial_trace_first,
    partial_trace_second,
    rotation_x,
)

GATES = ("none", "cnot", "cu", "cphase")
CONTROLS = ("input", "feedback")
SOLVERS = ("linear", "iteration")
RANK_TOL = 1e-9


class SolverError(RuntimeError):
    pass


class NonContractionError(SolverError):
    """The loop map has spectral radius >= 1."""


class SingularSystemError(SolverError):
    """``I - M`` cannot be inverted."""


class ConvergenceError(SolverError):
    """Fixed-point iteration hit ``max_iters`` before reaching ``tol``."""


class NotObservableError(ValueError):
    pass


@dataclass(frozen=True)
class LoopConfig:
    """One instance of the feedback loop.

    ``input_bloch=None`` is the loop without an input terminal; the cloned
    feedback is then fed straight back into the process.  ``control`` names
    the leg that sits on the gate's control qubit; ``"input"`` is the
    arrangement whose partial trace gives ``(f1, e3 f2, e3 f3)`` for the CNOT.
    For ``gate="cu"`` the target unitary is ``u`` if given, else
    ``exp(-i phi sigma_x / 2)``.
    """

    gamma: float
    input_bloch: Optional[tuple[float, float, float]] = None
    gate: Literal["none", "cnot", "cu", "cphase"] = "cnot"
    phi: float = 0.0
    u: Optional[np.ndarray] = field(default=None, compare=False)
    control: Literal["input", "feedback"] = "input"
    feedback_leg: Literal["clone", "ancilla"] = "clone"
    solver: Literal["linear", "iteration"] = "linear"
    max_iters: int = 10_000
    tol: float = 1e-13

    def __post_init__(self):
        g = float(self.gamma)
        if not (0.0 <= g <= 1.0):
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma!r}")
        object.__setattr__(self, "gamma", g)
        if self.input_bloch is None:
            if self.gate != "none":
                object.__setattr__(self, "gate", "none")
        else:
            e = tuple(float(x) for x in self.input_bloch)
            if len(e) != 3 or not np.all(np.isfinite(e)):
                raise ValueError("input_bloch must be 3 finite reals")
            if np.linalg.norm(e) > 1 + ATOL:
                raise ValueError(f"input Bloch vector {e} lies outside the unit ball")
            object.__setattr__(self, "input_bloch", e)
        if self.gate not in GATES:
            raise ValueError(f"unknown gate {self.gate!r}; expected one of {GATES}")
        if self.control not in CONTROLS:
            raise ValueError(f"unknown control assignment {self.control!r}")
        if self.feedback_leg != "clone":
            raise ValueError("only a cloned copy can be fed back; ancilla feedback is not modeled")
        if self.solver not in SOLVERS:
            raise ValueError(f"unknown solver {self.solver!r}")
        if self.max_iters < 1 or not self.tol > 0:
            raise ValueError("max_iters must be >= 1 and tol > 0")
        if self.u is not None:
            object.__setattr__(self, "u", check_unitary(self.u, 2))

    @property
    def has_input(self) -> bool:
        return self.input_bloch is not None

    def gate_matrix(self) -> np.ndarray:
        if self.gate == "none":
            return I4
        if self.gate == "cnot":
            return controlled_u(SIGMA_X)
        if self.gate == "cphase":
            return controlled_phase(self.phi)
        return controlled_u(self.u if self.u is not None else rotation_x(self.phi))

    def with_input(self, e) -> "LoopConfig":
        return replace(self, input_bloch=tuple(e))


@dataclass(frozen=True)
class LoopSolution:
    process_input_bloch: np.ndarray
    process_output_bloch: np.ndarray
    system_output_bloch: np.ndarray
    iterations: int
    residual: float


@dataclass(frozen=True)
class ControlAnalysis:
    controllable: bool
    observable: bool
    sensitivity: float
    affected_components: tuple[int, ...]
    jacobian: np.ndarray = field(compare=False, repr=False, default=None)


def _mix_with_matrix(gate: np.ndarray, rho_in: np.ndarray, control: str) -> AffineBlochMap:
    if control == "input":
        def mix(rho_b):
            joint = np.kron(rho_in, rho_b)
            return partial_trace_first(gate @ joint @ gate.conj().T)
    else:
        def mix(rho_b):
            joint = np.kron(rho_b, rho_in)
            return partial_trace_second(gate @ joint @ gate.conj().T)
    return AffineBlochMap.from_state_map(mix)


def gate_mix_affine(gate, input_state, control: str = "input") -> AffineBlochMap:
    """Affine map from the feedback Bloch vector to the retained feedback leg.

    The feedback state ``rho_B`` and the input ``rho_I`` are joined with a
    tensor product, passed through ``gate`` and the input leg is traced out.
    ``control`` picks which leg is on the gate's control (slow) qubit.
    """
    gate = check_unitary(gate, 4)
    rho_in = check_density(input_state)
    if control not in CONTROLS:
        raise ValueError(f"unknown control assignment {control!r}")
    return _mix_with_matrix(gate, rho_in, control)


def process_affine(gamma: float) -> AffineBlochMap:
    return channel_to_affine(amplitude_damping(gamma))


def _loop_map(cfg: LoopConfig, rho_in: Optional[np.ndarray]) -> AffineBlochMap:
    loop = process_affine(cfg.gamma).then(cloner_affine())
    if rho_in is not None:
        loop = loop.then(_mix_with_matrix(cfg.gate_matrix(), rho_in, cfg.control))
    return loop


def loop_map(cfg: LoopConfig) -> AffineBlochMap:
    """Once-around-the-loop map on the process input Bloch vector."""
    rho_in = bloch_to_density(cfg.input_bloch) if cfg.has_input else None
    return _loop_map(cfg, rho_in)


def _solve(cfg: LoopConfig, loop: AffineBlochMap) -> LoopSolution:
    if loop.spectral_radius() >= 1.0:
        raise NonContractionError(f"loop spectral radius {loop.spectral_radius():.6g} >= 1")
    if cfg.solver == "linear":
        lhs = np.eye(3) - loop.M
        if np.linalg.svd(lhs, compute_uv=False).min() < ATOL:
            raise SingularSystemError("I - M is singular")
        a = np.linalg.solve(lhs, loop.c)
        iters = 0
    else:
        a, iters, _ = _backend.iterate_affine(loop.M, loop.c, np.zeros(3), cfg.tol, cfg.max_iters)
    residual = float(np.linalg.norm(loop(a) - a))
    if residual > cfg.tol:
        raise ConvergenceError(
            f"residual {residual:.3e} above tolerance {cfg.tol:g} after {iters} iterations"
        )
    b = process_affine(cfg.gamma)(a)
    out = cloner_affine()(b)
    return LoopSolution(a, b, out, int(iters), residual)


def solve_steady_state(cfg: LoopConfig) -> LoopSolution:
    """Solve the matching condition ``a = L(a)`` for the loop.

    Raises:
        NonContractionError: if the loop map is not contractive.
        SingularSystemError: if ``I - M`` is singular (linear solver).
        ConvergenceError: if the residual ends above ``cfg.tol``.
    """
    return _solve(cfg, loop_map(cfg))


def _steady_output_unchecked(cfg: LoopConfig, e: np.ndarray) -> np.ndarray:
    # affine extension in e; the stencil may poke just outside the ball
    return _solve(cfg, _loop_map(cfg, bloch_matrix(e))).process_output_bloch


def controllability(cfg: LoopConfig, de: float = 1e-5) -> ControlAnalysis:
    """Finite-difference analysis of the input-to-process-output map.

    Central differences of the steady-state ``b`` with respect to each input
    component give a 3x3 Jacobian.  Components whose column exceeds 1e-9 are
    the affected ones, and the loop is controllable when the Jacobian
    restricted to them has full column rank.  ``sensitivity`` is ``db3/de3``.
    """
    if not de > 0:
        raise ValueError(f"finite-difference step must be positive, got {de!r}")
    observable = cfg.gamma < 1.0
    if not cfg.has_input:
        return ControlAnalysis(False, observable, 0.0, (), np.zeros((3, 3)))
    e0 = np.asarray(cfg.input_bloch)
    jac = np.empty((3, 3))
    for k in range(3):
        step = np.zeros(3)
        step[k] = de
        jac[:, k] = (
            _steady_output_unchecked(cfg, e0 + step) - _steady_output_unchecked(cfg, e0 - step)
        ) / (2 * de)
    affected = tuple(k + 1 for k in range(3) if np.max(np.abs(jac[:, k])) > RANK_TOL)
    if affected:
        sv = np.linalg.svd(jac[:, [k - 1 for k in affected]], compute_uv=False)
        controllable = bool(np.sum(sv > RANK_TOL) == len(affected))
    else:
        controllable = False
    return ControlAnalysis(controllable, observable, float(jac[2, 2]), affected, jac)


def observability(gamma: float, system_output) -> np.ndarray:
    """Reconstruct the process input from the observed system output.

    Undoes the cloner (factor 3/2) and then the damping map.

    Raises:
        NotObservableError: at ``gamma == 1``, where the damping map
            forgets its input.
        ValueError: if the reconstruction leaves the Bloch ball.
    """
    gamma = float(gamma)
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma!r}")
    if gamma == 1.0:
        raise NotObservableError("process state cannot be recovered at gamma = 1")
    b = 1.5 * np.asarray(system_output, dtype=float)
    s = np.sqrt(1.0 - gamma)
    a = np.array([b[0] / s, b[1] / s, (b[2] - gamma) / (1.0 - gamma)])
    if np.linalg.norm(a) > 1 + 1e-9:
        raise ValueError(f"observed output is inconsistent: reconstructed |a| = {np.linalg.norm(a):.6g}")
    return a
