"""
Unit tests for the network description and the dynamics matrices.
"""

import math
import unittest
import sys
from pathlib import Path

import numpy as np

sys.path.append(str(Path(__file__).parent.parent))

from model.exceptions import ConfigError
from model.matrices import (
    build_matrices,
    drive_frequency,
    excitation_number,
    excitation_numbers,
    symplectic_form
)
from model.network import (
    BathSpec,
    NetworkSpec,
    OscillatorSpec,
    build_network,
    chain_coupling,
    thermal_occupation
)
from dynamics.integrator import initial_gibbs

G_HALF = math.sqrt(0.5)


def one_oscillator(theta=math.pi / 200, omega_c=0.2, omega_h=0.5, beta_c=10.0, beta_h=5.0, g=G_HALF):
    return build_network(
        [OscillatorSpec(omega0=1.0, delta_omega=0.5, theta=theta)],
        [BathSpec(omega_c, beta_c, (g,)), BathSpec(omega_h, beta_h, (g,))]
    )


def two_oscillators(lam=math.sqrt(2), theta=math.pi, omega2=1.0):
    return build_network(
        [OscillatorSpec(1.0, 0.5, theta), OscillatorSpec(omega2, 0.5 * omega2, theta)],
        [BathSpec(0.1, 10.0, (G_HALF, 0.0)), BathSpec(0.3, 5.0, (0.0, G_HALF))],
        [[0.0, lam], [lam, 0.0]]
    )


class TestThermalOccupation(unittest.TestCase):
    """Bose-Einstein occupation."""

    def test_caption_values(self):
        self.assertAlmostEqual(thermal_occupation(10.0, 0.2), 0.15652, places=5)
        self.assertAlmostEqual(thermal_occupation(5.0, 0.5), 0.08940, places=5)

    def test_large_argument_does_not_overflow(self):
        n = thermal_occupation(1000.0, 1.0)
        self.assertGreaterEqual(n, 0.0)
        self.assertLess(n, 1e-300)


class TestOscillatorSpec(unittest.TestCase):
    """Oscillator validation and period."""

    def test_period(self):
        osc = OscillatorSpec(1.0, 0.5, math.pi / 20)
        self.assertTrue(osc.is_driven)
        self.assertAlmostEqual(osc.period, 40.0)

    def test_static_oscillator(self):
        self.assertIsNone(OscillatorSpec(1.0).period)
        self.assertFalse(OscillatorSpec(1.0, 0.5, 0.0).is_driven)

    def test_rejects_invalid_parameters(self):
        with self.assertRaises(ConfigError):
            OscillatorSpec(1.0, -0.1, 1.0)
        with self.assertRaises(ConfigError):
            OscillatorSpec(1.0, 1.0, 1.0)
        with self.assertRaises(ConfigError):
            OscillatorSpec(0.0)
        with self.assertRaises(ConfigError):
            OscillatorSpec(float('nan'))

    def test_config_error_is_value_error(self):
        with self.assertRaises(ValueError):
            OscillatorSpec(-1.0)


class TestBathSpec(unittest.TestCase):
    """Bath validation and occupations."""

    def test_rejects_invalid_bath(self):
        with self.assertRaises(ConfigError):
            BathSpec(0.2, 0.0, (1.0,))
        with self.assertRaises(ConfigError):
            BathSpec(-0.2, 1.0, (1.0,))
        with self.assertRaises(ConfigError):
            BathSpec(0.2, 1.0, (1.0,), squeeze_r=-0.1)

    def test_unsqueezed_effective_values(self):
        bath = BathSpec(0.5, 5.0, (1.0,))
        self.assertEqual(bath.effective_occupation, bath.occupation)
        self.assertEqual(bath.effective_beta, 5.0)

    def test_squeezing_raises_occupation(self):
        bath = BathSpec(0.5, 5.0, (1.0,), squeeze_r=0.3)
        self.assertGreater(bath.effective_occupation, bath.occupation)
        self.assertLess(bath.effective_beta, 5.0)


class TestNetworkSpec(unittest.TestCase):
    """Network validation and derived quantities."""

    def test_rejects_asymmetric_coupling(self):
        with self.assertRaises(ConfigError):
            build_network(
                [OscillatorSpec(1.0), OscillatorSpec(1.0)],
                [BathSpec(1.0, 1.0, (1.0, 0.0))],
                [[0.0, 1.0], [0.5, 0.0]]
            )

    def test_rejects_self_coupling(self):
        with self.assertRaises(ConfigError):
            build_network(
                [OscillatorSpec(1.0), OscillatorSpec(1.0)],
                [BathSpec(1.0, 1.0, (1.0, 0.0))],
                [[0.1, 1.0], [1.0, 0.0]]
            )

    def test_rejects_wrong_coupling_count(self):
        with self.assertRaises(ConfigError) as ctx:
            build_network([OscillatorSpec(1.0)], [BathSpec(1.0, 1.0, (1.0, 1.0))])
        self.assertIn("couplings", str(ctx.exception))

    def test_damping(self):
        net = one_oscillator()
        np.testing.assert_allclose(net.damping, [1.0])
        np.testing.assert_allclose(net.coupling_squared, [[0.5, 0.5]])

    def test_common_period(self):
        self.assertAlmostEqual(one_oscillator(theta=math.pi / 20).common_period(), 40.0)
        self.assertIsNone(one_oscillator(theta=0.0).common_period())

        net = build_network(
            [OscillatorSpec(1.0, 0.1, 1.0), OscillatorSpec(1.0, 0.1, 2.0)],
            [BathSpec(1.0, 1.0, (1.0, 0.0)), BathSpec(1.0, 1.0, (0.0, 1.0))]
        )
        self.assertAlmostEqual(net.common_period(), 2 * math.pi)

        net = build_network(
            [OscillatorSpec(1.0, 0.1, 2.0), OscillatorSpec(1.0, 0.1, 3.0)],
            [BathSpec(1.0, 1.0, (1.0, 0.0)), BathSpec(1.0, 1.0, (0.0, 1.0))]
        )
        self.assertAlmostEqual(net.common_period(), 2 * math.pi)

    def test_incommensurate_frequencies(self):
        net = build_network(
            [OscillatorSpec(1.0, 0.1, 1.0), OscillatorSpec(1.0, 0.1, math.sqrt(2))],
            [BathSpec(1.0, 1.0, (1.0, 0.0)), BathSpec(1.0, 1.0, (0.0, 1.0))]
        )
        with self.assertRaises(ConfigError):
            net.common_period()

    def test_cold_hot_labels(self):
        self.assertEqual(one_oscillator().cold_hot_indices(), (0, 1))

        swapped = build_network(
            [OscillatorSpec(1.0)],
            [BathSpec(0.5, 5.0, (1.0,)), BathSpec(0.2, 10.0, (1.0,))]
        )
        self.assertEqual(swapped.cold_hot_indices(), (1, 0))

    def test_squeezed_bath_can_become_hot(self):
        net = build_network(
            [OscillatorSpec(1.0)],
            [BathSpec(1.0, 5.0, (1.0,), squeeze_r=1.5), BathSpec(1.0, 4.0, (1.0,))]
        )
        self.assertEqual(net.cold_hot_indices(), (1, 0))

    def test_equal_temperatures_keep_order(self):
        net = build_network([OscillatorSpec(1.0)], [BathSpec(1.0, 5.0, (1.0,)), BathSpec(1.0, 5.0, (1.0,))])
        self.assertEqual(net.cold_hot_indices(), (0, 1))

    def test_attached_bath(self):
        net = two_oscillators()
        self.assertEqual(net.attached_bath(0), 0)
        self.assertEqual(net.attached_bath(1), 1)
        with self.assertRaises(ConfigError):
            one_oscillator().attached_bath(0)

    def test_chain_coupling(self):
        matrix = np.array(chain_coupling(4, 0.7))
        self.assertTrue(np.array_equal(matrix, matrix.T))
        self.assertEqual(matrix[0, 1], 0.7)
        self.assertEqual(matrix[0, 2], 0.0)
        self.assertEqual(np.count_nonzero(matrix), 6)

    def test_squeeze_correlations_noise(self):
        bath = BathSpec(0.5, 5.0, (1.0,), squeeze_r=0.4)
        plain = NetworkSpec((OscillatorSpec(1.0),), np.zeros((1, 1)), (bath,))
        correlated = NetworkSpec((OscillatorSpec(1.0),), np.zeros((1, 1)), (bath,), squeeze_correlations=True)

        wx, wp = plain.noise_weights
        self.assertAlmostEqual(wx[0], 0.5 * (2 * bath.effective_occupation + 1))
        self.assertAlmostEqual(wx[0], wp[0])

        wx, wp = correlated.noise_weights
        n = bath.occupation
        self.assertAlmostEqual(wx[0], 0.5 * (2 * n + 1) * math.exp(-0.8))
        self.assertAlmostEqual(wp[0], 0.5 * (2 * n + 1) * math.exp(0.8))
        # Same mean excitation injected per unit time
        self.assertAlmostEqual((wx[0] + wp[0]) / 2, plain.noise_weights[0][0])


class TestMatrices(unittest.TestCase):
    """Dynamics matrices."""

    def test_drive_frequency(self):
        osc = OscillatorSpec(1.0, 0.5, math.pi)
        omega, omega_dot = drive_frequency(osc, 0.5)
        self.assertAlmostEqual(omega, 1.5)
        self.assertAlmostEqual(omega_dot, 0.0)
        omega, omega_dot = drive_frequency(osc, 0.0)
        self.assertAlmostEqual(omega, 1.0)
        self.assertAlmostEqual(omega_dot, 0.5 * math.pi)

    def test_one_oscillator_blocks(self):
        net = one_oscillator(theta=math.pi)
        m = build_matrices(net, 0.5)
        np.testing.assert_allclose(m.a_s, np.diag([2.25, 1.0]))
        np.testing.assert_allclose(m.dissipation, 0.5 * np.eye(2))

        nbar = 0.5 * (thermal_occupation(10.0, 0.2) + thermal_occupation(5.0, 0.5))
        expected_noise = 0.5 * (2 * nbar + 1) * np.diag([1 / 1.5, 1.5])
        np.testing.assert_allclose(m.noise, expected_noise)

    def test_drift_eigenvalues(self):
        net = one_oscillator(theta=0.0)
        m = build_matrices(net, 0.0)
        eig = np.sort_complex(np.linalg.eigvals(m.drift))
        np.testing.assert_allclose(eig.real, [-0.5, -0.5], atol=1e-12)
        np.testing.assert_allclose(np.abs(eig.imag), [1.0, 1.0], atol=1e-12)

    def test_coupling_blocks(self):
        net = two_oscillators(lam=0.3, omega2=0.5)
        m = build_matrices(net, 0.0)
        root = math.sqrt(1.0 * 0.5)
        self.assertAlmostEqual(m.a_s[0, 2], 0.3 * root)
        self.assertAlmostEqual(m.a_s[1, 3], 0.3 / root)
        self.assertEqual(m.a_s[0, 3], 0.0)
        np.testing.assert_allclose(m.a_s, m.a_s.T)

    def test_a_s_dot_matches_finite_difference(self):
        net = two_oscillators(lam=0.3, omega2=0.5)
        t, h = 0.37, 1e-6
        numeric = (build_matrices(net, t + h).a_s - build_matrices(net, t - h).a_s) / (2 * h)
        np.testing.assert_allclose(build_matrices(net, t).a_s_dot, numeric, atol=1e-7)

    def test_symplectic_form(self):
        s = symplectic_form(2)
        np.testing.assert_allclose(s @ s, -np.eye(4))
        self.assertFalse(s.flags.writeable)

    def test_excitation_number_of_gibbs_state(self):
        net = one_oscillator()
        state = initial_gibbs(net, 2.0)
        self.assertAlmostEqual(excitation_number(state, net, 0), thermal_occupation(2.0, 1.0))

        net = two_oscillators()
        state = initial_gibbs(net, 2.0)
        np.testing.assert_allclose(excitation_numbers(state, net), [thermal_occupation(2.0, 1.0)] * 2)


if __name__ == '__main__':
    unittest.main()
