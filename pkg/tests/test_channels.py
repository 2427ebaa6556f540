import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clonefeedback.channels import (
    AffineBlochMap,
    IncompleteChannelError,
    KrausChannel,
    amplitude_damping,
    amplitude_damping_affine,
    apply_channel,
    buzek_hillery_clone,
    channel_to_affine,
    cloner_affine,
    cloner_channel,
    identity_channel,
)
from clonefeedback.qmath import I2, bloch_to_density, density_to_bloch, random_bloch, random_density

GAMMAS = np.linspace(0, 1, 11)


def test_kraus_channel_requires_completeness():
    with pytest.raises(IncompleteChannelError):
        KrausChannel([np.diag([1.0, 0.5])])


def test_kraus_channel_requires_operator():
    with pytest.raises(ValueError):
        KrausChannel([])


def test_kraus_operators_are_read_only():
    ch = amplitude_damping(0.3)
    with pytest.raises(ValueError):
        ch.operators[0][0, 0] = 2


class TestAmplitudeDamping:
    def test_zero_is_identity(self, rng):
        ch = amplitude_damping(0)
        np.testing.assert_array_equal(ch.operators[0], I2)
        np.testing.assert_array_equal(ch.operators[1], np.zeros((2, 2)))
        rho = random_density(rng)
        np.testing.assert_allclose(apply_channel(ch, rho), rho, atol=1e-15)

    def test_half(self):
        p0, p1 = amplitude_damping(0.5).operators
        np.testing.assert_allclose(p0, np.diag([1, np.sqrt(0.5)]))
        np.testing.assert_allclose(p1, [[0, np.sqrt(0.5)], [0, 0]])

    @pytest.mark.parametrize("gamma", [0, 0.25, 0.5, 0.75, 1])
    def test_completeness(self, gamma):
        total = sum(p.conj().T @ p for p in amplitude_damping(gamma).operators)
        np.testing.assert_allclose(total, I2, atol=1e-12)

    @pytest.mark.parametrize("gamma", [-0.01, 1.01, np.nan])
    def test_rejects_gamma(self, gamma):
        with pytest.raises(ValueError):
            amplitude_damping(gamma)

    def test_full_decay(self, rng):
        for _ in range(20):
            out = apply_channel(amplitude_damping(1), random_density(rng))
            np.testing.assert_allclose(out, np.diag([1, 0]), atol=1e-15)

    def test_bloch_action(self, rng):
        for gamma in GAMMAS:
            s = np.sqrt(1 - gamma)
            for a in random_bloch(rng, 50):
                out = density_to_bloch(apply_channel(amplitude_damping(gamma), bloch_to_density(a)))
                expected = [a[0] * s, a[1] * s, a[2] * (1 - gamma) + gamma]
                np.testing.assert_allclose(out, expected, atol=1e-12)

    def test_composition_law(self, rng):
        for g1, g2 in rng.random((30, 2)):
            rho = random_density(rng)
            two = apply_channel(amplitude_damping(g2), apply_channel(amplitude_damping(g1), rho))
            one = apply_channel(amplitude_damping(1 - (1 - g1) * (1 - g2)), rho)
            np.testing.assert_allclose(two, one, atol=1e-12)


class TestValidity:
    @pytest.mark.parametrize(
        "make", [lambda: amplitude_damping(0.37), cloner_channel, identity_channel],
        ids=["damping", "cloner", "identity"],
    )
    def test_outputs_are_states(self, make, rng):
        ch = make()
        for _ in range(1000):
            out = apply_channel(ch, random_density(rng))
            assert abs(np.trace(out) - 1) < 1e-12
            np.testing.assert_allclose(out, out.conj().T, atol=1e-12)
            assert np.linalg.eigvalsh(out).min() >= -1e-10

    @pytest.mark.parametrize("gamma", GAMMAS)
    def test_ball_containment(self, gamma):
        assert channel_to_affine(amplitude_damping(gamma)).maps_ball_into_ball()

    def test_containment_detects_expansion(self):
        assert not AffineBlochMap(1.01 * np.eye(3), np.zeros(3)).maps_ball_into_ball()


class TestCloner:
    def test_mixed_fixed_point(self):
        np.testing.assert_allclose(buzek_hillery_clone(I2 / 2), I2 / 2, atol=1e-16)

    def test_pole(self):
        out = buzek_hillery_clone(bloch_to_density([0, 0, 1]))
        np.testing.assert_allclose(density_to_bloch(out), [0, 0, 2 / 3], atol=1e-15)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=100)
    def test_shrinks_by_two_thirds(self, seed):
        a = random_bloch(np.random.default_rng(seed))
        out = density_to_bloch(buzek_hillery_clone(bloch_to_density(a)))
        np.testing.assert_allclose(out, 2 * a / 3, atol=1e-12)

    def test_kraus_form_matches(self, rng):
        for _ in range(100):
            rho = random_density(rng)
            np.testing.assert_allclose(apply_channel(cloner_channel(), rho), buzek_hillery_clone(rho), atol=1e-15)

    def test_affine(self, rng):
        m = cloner_affine()
        np.testing.assert_allclose(m([0, 0, 1]), [0, 0, 2 / 3])
        np.testing.assert_array_equal(m(np.zeros(3)), np.zeros(3))
        for a in random_bloch(rng, 100):
            np.testing.assert_allclose(m(a), density_to_bloch(buzek_hillery_clone(bloch_to_density(a))), atol=1e-12)

    def test_channel_to_affine_of_cloner(self):
        m = channel_to_affine(cloner_channel())
        np.testing.assert_allclose(m.M, (2 / 3) * np.eye(3), atol=1e-15)
        np.testing.assert_allclose(m.c, 0, atol=1e-15)


class TestChannelToAffine:
    def test_identity(self):
        m = channel_to_affine(identity_channel())
        np.testing.assert_array_equal(m.M, np.eye(3))
        np.testing.assert_array_equal(m.c, np.zeros(3))

    @pytest.mark.parametrize("gamma", GAMMAS)
    def test_damping_closed_form(self, gamma):
        m = channel_to_affine(amplitude_damping(gamma))
        s = np.sqrt(1 - gamma)
        np.testing.assert_allclose(m.M, np.diag([s, s, 1 - gamma]), atol=1e-15)
        np.testing.assert_allclose(m.c, [0, 0, gamma], atol=1e-15)
        ref = amplitude_damping_affine(gamma)
        np.testing.assert_allclose(m.M, ref.M, atol=1e-15)

    @pytest.mark.parametrize("gamma", GAMMAS)
    def test_affine_equals_kraus(self, gamma, rng):
        ch = amplitude_damping(gamma)
        m = channel_to_affine(ch)
        for a in random_bloch(rng, 1000):
            np.testing.assert_allclose(m(a), density_to_bloch(apply_channel(ch, bloch_to_density(a))), atol=1e-12)

    def test_then_composes_in_order(self):
        shift = AffineBlochMap(np.eye(3), [0, 0, 0.3])
        scale = AffineBlochMap(0.5 * np.eye(3), np.zeros(3))
        np.testing.assert_allclose(shift.then(scale)(np.zeros(3)), [0, 0, 0.15])
        np.testing.assert_allclose(scale.then(shift)(np.zeros(3)), [0, 0, 0.3])
