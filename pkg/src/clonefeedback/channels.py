"""Operator-sum channels on one qubit and their action on Bloch vectors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .qmath import ATOL, I2, PAULIS, bloch_matrix, check_density, density_to_bloch


class IncompleteChannelError(ValueError):
    """Kraus operators violate ``sum_i P_i^dagger P_i = I``."""


@dataclass(frozen=True)
class KrausChannel:
    """A qubit quantum operation ``rho -> sum_i P_i rho P_i^dagger``.

    The completeness relation is checked at construction, so every instance
    is trace preserving.
    """

    operators: tuple[np.ndarray, ...]

    def __init__(self, operators: Sequence[np.ndarray], atol: float = ATOL):
        ops = []
        for p in operators:
            arr = np.array(p, dtype=complex)
            if arr.shape != (2, 2):
                raise ValueError(f"Kraus operator must be 2x2, got shape {arr.shape}")
            arr.setflags(write=False)
            ops.append(arr)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        total = sum(p.conj().T @ p for p in ops)
        defect = np.max(np.abs(total - I2))
        if defect > atol:
            raise IncompleteChannelError(f"sum P^dag P deviates from I by {defect:.3e}")
        object.__setattr__(self, "operators", tuple(ops))

    def __call__(self, rho) -> np.ndarray:
        return apply_channel(self, rho)

    def __len__(self) -> int:
        return len(self.operators)


@dataclass(frozen=True)
class AffineBlochMap:
    """The map ``a -> M a + c`` on Bloch vectors."""

    M: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        m = np.array(self.M, dtype=float)
        c = np.array(self.c, dtype=float)
        if m.shape != (3, 3) or c.shape != (3,):
            raise ValueError("AffineBlochMap needs a 3x3 matrix and a 3-vector")
        m.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "M", m)
        object.__setattr__(self, "c", c)

    def __call__(self, a) -> np.ndarray:
        return self.M @ np.asarray(a, dtype=float) + self.c

    def then(self, other: "AffineBlochMap") -> "AffineBlochMap":
        """``other`` applied after ``self``."""
        return AffineBlochMap(other.M @ self.M, other.M @ self.c + other.c)

    @classmethod
    def identity(cls) -> "AffineBlochMap":
        return cls(np.eye(3), np.zeros(3))

    @classmethod
    def from_state_map(cls, fn) -> "AffineBlochMap":
        """Recover the affine action of a linear trace-preserving state map.

        ``fn`` maps a 2x2 density matrix to a 2x2 density matrix.  It is
        probed on the maximally mixed state (giving ``c``) and on the three
        positive axis poles (giving the columns of ``M``).
        """
        c = density_to_bloch(fn(bloch_matrix((0, 0, 0))), check=False)
        cols = [density_to_bloch(fn(bloch_matrix(e)), check=False) - c for e in np.eye(3)]
        return cls(np.column_stack(cols), c)

    def spectral_radius(self) -> float:
        return float(np.max(np.abs(np.linalg.eigvals(self.M))))

    def maps_ball_into_ball(self, n_samples: int = 2000, atol: float = 1e-10,
                            rng: np.random.Generator | None = None) -> bool:
        """Spot-check that sampled unit-sphere points land inside the ball."""
        rng = np.random.default_rng(0) if rng is None else rng
        pts = rng.normal(size=(n_samples, 3))
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        pts = np.vstack([pts, np.eye(3), -np.eye(3)])
        out = pts @ self.M.T + self.c
        return bool(np.all(np.linalg.norm(out, axis=1) <= 1 + atol))


def apply_channel(ch: KrausChannel, rho) -> np.ndarray:
    rho = check_density(rho)
    return sum(p @ rho @ p.conj().T for p in ch.operators)


def identity_channel() -> KrausChannel:
    return KrausChannel([I2])


def amplitude_damping(gamma: float) -> KrausChannel:
    """Decay towards ``|0>`` with photon-loss probability ``gamma``.

    ``P0 = diag(1, sqrt(1 - gamma))`` and ``P1 = sqrt(gamma) |0><1|``.
    """
    gamma = float(gamma)
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma!r}")
    p0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]], dtype=complex)
    p1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]], dtype=complex)
    return KrausChannel([p0, p1])


def buzek_hillery_clone(rho) -> np.ndarray:
    """Single-copy output of the symmetric universal cloner, ``2/3 rho + I/6``.

    Both clones carry this same state; the ancilla is not modeled.
    """
    rho = check_density(rho)
    return (2.0 / 3.0) * rho + I2 / 6.0


def cloner_channel() -> KrausChannel:
    """The cloner marginal written in operator-sum form.

    ``2/3 rho + I/6`` is the depolarizing map with weight ``1/2`` on each of
    the three non-identity Pauli conjugations: ``(3/4) rho + (1/12) sum_k
    sigma_k rho sigma_k``.
    """
    return KrausChannel([np.sqrt(0.75) * I2] + [np.sqrt(1.0 / 12.0) * s for s in PAULIS])


def channel_to_affine(ch: KrausChannel) -> AffineBlochMap:
    def act(rho):
        return sum(p @ rho @ p.conj().T for p in ch.operators)

    return AffineBlochMap.from_state_map(act)


def amplitude_damping_affine(gamma: float) -> AffineBlochMap:
    """Closed-form Bloch action of :func:`amplitude_damping`."""
    gamma = float(gamma)
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma!r}")
    s = np.sqrt(1.0 - gamma)
    return AffineBlochMap(np.diag([s, s, 1.0 - gamma]), np.array([0.0, 0.0, gamma]))


def cloner_affine() -> AffineBlochMap:
    return AffineBlochMap((2.0 / 3.0) * np.eye(3), np.zeros(3))
