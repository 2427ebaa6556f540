import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clonefeedback import qmath
from clonefeedback.qmath import (
    I2,
    I4,
    SIGMA_X,
    InvalidStateError,
    NotUnitaryError,
    bloch_to_density,
    check_density,
    conjugate_by,
    controlled_u,
    density_to_bloch,
    partial_trace_first,
    partial_trace_second,
    random_bloch,
    random_density,
    random_unitary,
    tensor_product,
)

from oracles import CNOT_AS_PRINTED, CNOT_STANDARD

finite = st.floats(-1, 1, allow_nan=False)


@st.composite
def bloch_vectors(draw):
    v = np.array([draw(finite), draw(finite), draw(finite)])
    n = np.linalg.norm(v)
    return v / n if n > 1 else v


class TestBloch:
    def test_center_is_maximally_mixed(self):
        np.testing.assert_allclose(bloch_to_density([0, 0, 0]), I2 / 2, atol=1e-15)

    def test_north_pole(self):
        np.testing.assert_allclose(bloch_to_density([0, 0, 1]), np.diag([1, 0]), atol=1e-15)

    def test_x_eigenstate(self):
        np.testing.assert_allclose(bloch_to_density([1, 0, 0]), 0.5 * np.ones((2, 2)), atol=1e-15)

    def test_off_diagonal_layout(self):
        rho = bloch_to_density([0.3, 0.4, 0.1])
        assert rho[0, 1] == pytest.approx(0.5 * (0.3 - 0.4j))
        assert rho[1, 0] == pytest.approx(0.5 * (0.3 + 0.4j))

    def test_rejects_outside_ball(self):
        with pytest.raises(InvalidStateError):
            bloch_to_density([0.8, 0.8, 0])

    def test_accepts_surface_within_tolerance(self):
        bloch_to_density(np.array([0, 0, 1 + 5e-13]))

    def test_inverse_examples(self):
        np.testing.assert_allclose(density_to_bloch(I2 / 2), 0, atol=1e-15)
        np.testing.assert_allclose(density_to_bloch(np.diag([1.0, 0.0])), [0, 0, 1], atol=1e-15)

    def test_round_trip_1000(self, rng):
        for v in random_bloch(rng, 1000):
            np.testing.assert_allclose(density_to_bloch(bloch_to_density(v)), v, atol=1e-12)

    @given(bloch_vectors())
    @settings(max_examples=200)
    def test_round_trip_property(self, v):
        np.testing.assert_allclose(density_to_bloch(bloch_to_density(v)), v, atol=1e-12)

    def test_random_bloch_in_ball(self, rng):
        assert np.all(np.linalg.norm(random_bloch(rng, 500), axis=1) <= 1)


class TestCheckDensity:
    def test_non_hermitian(self):
        with pytest.raises(InvalidStateError, match="Hermitian"):
            check_density([[0.5, 0.1], [0.0, 0.5]])

    def test_bad_trace(self):
        with pytest.raises(InvalidStateError, match="trace"):
            check_density(np.diag([0.6, 0.6]))

    def test_negative_eigenvalue(self):
        with pytest.raises(InvalidStateError, match="negative"):
            check_density([[0.5, 0.6], [0.6, 0.5]])

    def test_wrong_shape(self):
        with pytest.raises(ValueError):
            check_density(np.eye(3) / 3)


class TestTensorAndTrace:
    def test_mixed_product(self):
        np.testing.assert_allclose(tensor_product(I2 / 2, I2 / 2), I4 / 4)

    def test_basis_bookkeeping(self):
        out = tensor_product(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
        np.testing.assert_array_equal(out, np.diag([0, 1, 0, 0]))

    def test_trace_of_product(self, rng):
        for _ in range(50):
            rho = tensor_product(random_density(rng), random_density(rng))
            assert abs(np.trace(rho) - 1) < 1e-12

    def test_partial_trace_recovers_second_factor(self, rng):
        for _ in range(200):
            ra, rb = random_density(rng), random_density(rng)
            np.testing.assert_allclose(partial_trace_first(tensor_product(ra, rb)), rb, atol=1e-12)
            np.testing.assert_allclose(partial_trace_second(tensor_product(ra, rb)), ra, atol=1e-12)

    def test_partial_trace_of_mixed(self):
        np.testing.assert_allclose(partial_trace_first(I4 / 4), I2 / 2)

    def test_partial_trace_matches_explicit_sum(self, rng):
        rho = random_density(rng, 4)
        expected = rho[0:2, 0:2] + rho[2:4, 2:4]
        np.testing.assert_allclose(partial_trace_first(rho), expected, atol=1e-15)


class TestGates:
    def test_controlled_identity(self):
        np.testing.assert_array_equal(controlled_u(I2), I4)

    def test_controlled_x_is_standard_cnot(self):
        np.testing.assert_array_equal(controlled_u(SIGMA_X), CNOT_STANDARD)

    def test_printed_matrix_is_cnot_conjugated_by_control_flip(self):
        flip = np.kron(SIGMA_X, I2)
        np.testing.assert_array_equal(flip @ CNOT_STANDARD @ flip, CNOT_AS_PRINTED)

    def test_controlled_u_unitary(self, rng):
        for _ in range(100):
            g = controlled_u(random_unitary(rng))
            np.testing.assert_allclose(g.conj().T @ g, I4, atol=1e-12)

    def test_rejects_non_unitary(self):
        with pytest.raises(NotUnitaryError):
            controlled_u(np.array([[1, 1], [0, 1]]))

    def test_controlled_phase(self):
        np.testing.assert_allclose(qmath.controlled_phase(np.pi), np.diag([1, 1, 1, -1]), atol=1e-15)

    def test_rotation_x_pi_is_x_up_to_phase(self):
        np.testing.assert_allclose(qmath.rotation_x(np.pi), -1j * SIGMA_X, atol=1e-15)


class TestConjugateBy:
    def test_identity(self, rng):
        rho = random_density(rng, 4)
        np.testing.assert_allclose(conjugate_by(I4, rho), rho)

    def test_rejects_non_unitary(self):
        with pytest.raises(NotUnitaryError):
            conjugate_by(2 * I4, I4 / 4)

    def test_printed_cnot_moves_00_to_01(self):
        out = conjugate_by(CNOT_AS_PRINTED, np.diag([1.0, 0, 0, 0]))
        np.testing.assert_array_equal(np.diag(out).real, [0, 1, 0, 0])

    def test_standard_cnot_populations(self):
        for k, target in enumerate([0, 1, 3, 2]):
            pop = np.zeros(4)
            pop[k] = 1
            out = conjugate_by(qmath.cnot(), np.diag(pop))
            assert np.argmax(np.diag(out).real) == target

    def test_preserves_spectrum(self, rng):
        for _ in range(200):
            rho = random_density(rng, 4)
            out = conjugate_by(random_unitary(rng, 4), rho)
            assert abs(np.trace(out) - 1) < 1e-12
            np.testing.assert_allclose(out, out.conj().T, atol=1e-12)
            np.testing.assert_allclose(np.linalg.eigvalsh(out), np.linalg.eigvalsh(rho), atol=1e-10)
