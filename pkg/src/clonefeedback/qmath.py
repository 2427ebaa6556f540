"""One- and two-qubit linear algebra.

States are plain ``numpy`` arrays: a qubit density matrix is a ``(2, 2)``
complex array, a two-qubit one is ``(4, 4)`` and a Bloch vector is a real
array of shape ``(3,)``.  Two-qubit arrays use the ordering
``|00>, |01>, |10>, |11>`` with the first tensor factor as the slow index.
"""

from __future__ import annotations

import numpy as np

ATOL = 1e-12

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

for _m in (I2, I4, SIGMA_X, SIGMA_Y, SIGMA_Z):
    _m.setflags(write=False)


class InvalidStateError(ValueError):
    """Raised when an array does not describe a physical quantum state."""


class NotUnitaryError(ValueError):
    """Raised when a gate fails the unitarity check."""


def _as_square(mat, dim: int) -> np.ndarray:
    arr = np.asarray(mat, dtype=complex)
    if arr.shape != (dim, dim):
        raise ValueError(f"expected a {dim}x{dim} matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    return arr


def check_density(rho, dim: int = 2, atol: float = ATOL) -> np.ndarray:
    """Validate a density matrix and return it as a complex array.

    Checks Hermiticity, unit trace and positive semidefiniteness (via the
    eigenvalues of the Hermitian part), all to absolute tolerance ``atol``.
    """
    arr = _as_square(rho, dim)
    if np.max(np.abs(arr - arr.conj().T)) > atol:
        raise InvalidStateError("density matrix is not Hermitian")
    tr = np.trace(arr)
    if abs(tr - 1.0) > atol:
        raise InvalidStateError(f"density matrix has trace {tr.real:.15g}, expected 1")
    evals = np.linalg.eigvalsh(0.5 * (arr + arr.conj().T))
    if evals.min() < -atol:
        raise InvalidStateError(f"density matrix has negative eigenvalue {evals.min():.3e}")
    return arr


def is_unitary(u, atol: float = ATOL) -> bool:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= atol)


def check_unitary(u, dim: int, atol: float = ATOL) -> np.ndarray:
    arr = _as_square(u, dim)
    if not is_unitary(arr, atol):
        raise NotUnitaryError(f"{dim}x{dim} gate is not unitary within {atol:g}")
    return arr


def bloch_matrix(a) -> np.ndarray:
    """``(I + a.sigma) / 2`` without any physicality check.

    Used where an affine extension slightly outside the ball is wanted,
    e.g. finite-difference stencils at the surface.
    """
    a1, a2, a3 = (float(x) for x in a)
    return 0.5 * np.array([[1 + a3, a1 - 1j * a2], [a1 + 1j * a2, 1 - a3]])


def bloch_to_density(a) -> np.ndarray:
    """Density matrix of the qubit state with Bloch vector ``a``.

    Raises:
        InvalidStateError: if ``|a| > 1 + 1e-12``.
    """
    a = np.asarray(a, dtype=float)
    if a.shape != (3,) or not np.all(np.isfinite(a)):
        raise ValueError(f"Bloch vector must be 3 finite reals, got {a!r}")
    norm = np.linalg.norm(a)
    if norm > 1 + ATOL:
        raise InvalidStateError(f"Bloch vector length {norm:.15g} exceeds 1")
    return bloch_matrix(a)


def density_to_bloch(rho, check: bool = True) -> np.ndarray:
    """Bloch vector ``a_k = Tr(rho sigma_k)`` of a qubit density matrix."""
    rho = check_density(rho) if check else np.asarray(rho, dtype=complex)
    # Tr(rho X) = 2 Re rho_10, Tr(rho Y) = 2 Im rho_10, Tr(rho Z) = rho_00 - rho_11
    return np.array([2 * rho[1, 0].real, 2 * rho[1, 0].imag, (rho[0, 0] - rho[1, 1]).real])


def tensor_product(rho_a, rho_b) -> np.ndarray:
    """Kronecker product with ``rho_a`` on the slow (first) index."""
    return np.kron(_as_square(rho_a, 2), _as_square(rho_b, 2))


def partial_trace_first(rho) -> np.ndarray:
    """Trace out the slow-index qubit of a two-qubit matrix."""
    r = _as_square(rho, 4).reshape(2, 2, 2, 2)
    return np.einsum("ijik->jk", r)


def partial_trace_second(rho) -> np.ndarray:
    """Trace out the fast-index qubit of a two-qubit matrix."""
    r = _as_square(rho, 4).reshape(2, 2, 2, 2)
    return np.einsum("ijkj->ik", r)


def controlled_u(u) -> np.ndarray:
    """Two-qubit gate applying ``u`` to the target when the control is ``|1>``.

    The control is the slow (first) index.  ``controlled_u(SIGMA_X)`` is the
    standard CNOT.
    """
    u = check_unitary(u, 2)
    gate = np.zeros((4, 4), dtype=complex)
    gate[:2, :2] = I2
    gate[2:, 2:] = u
    return gate


def cnot() -> np.ndarray:
    return controlled_u(SIGMA_X)


def controlled_phase(phi: float) -> np.ndarray:
    return controlled_u(np.diag([1.0, np.exp(1j * phi)]))


def rotation_x(phi: float) -> np.ndarray:
    """``exp(-i phi sigma_x / 2)``."""
    c, s = np.cos(phi / 2), np.sin(phi / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def conjugate_by(gate, rho) -> np.ndarray:
    """``gate @ rho @ gate^dagger`` for a unitary two-qubit ``gate``."""
    gate = check_unitary(gate, 4)
    rho = _as_square(rho, 4)
    return gate @ rho @ gate.conj().T


def random_bloch(rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Bloch vectors drawn uniformly from the closed unit ball."""
    n = 1 if size is None else size
    v = rng.normal(size=(n, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    v *= rng.random((n, 1)) ** (1 / 3)
    return v[0] if size is None else v


def random_density(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    """Random mixed state from the Hilbert-Schmidt (Ginibre) ensemble."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    """Haar-random unitary via QR with phase correction."""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
