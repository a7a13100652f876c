"""
Unit tests for squeezed baths and the logarithmic negativity.
"""

import math
import unittest
import sys
from pathlib import Path

import numpy as np

sys.path.append(str(Path(__file__).parent.parent))

from config.simulation_config import load_preset
from dynamics.integrator import initial_gibbs, steady_state
from dynamics.limit_cycle import find_limit_cycle
from dynamics.state import symplectic_eigenvalues
from entanglement.log_negativity import closed_form_nu_minus, log_negativity, symplectic_spectrum
from entanglement.squeezed_bath import effective_beta, effective_occupation
from model.exceptions import PhysicalityError
from model.network import BathSpec, OscillatorSpec, build_network, thermal_occupation


def two_mode_squeezed_vacuum(r):
    c, s = math.cosh(2 * r), math.sinh(2 * r)
    z = np.diag([1.0, -1.0])
    scaled = np.block([[c * np.eye(2), s * z], [s * z, c * np.eye(2)]])
    return scaled / 2


class TestSqueezedBath(unittest.TestCase):
    """Squeezed thermal bath as a hotter thermal bath."""

    def test_no_squeezing(self):
        self.assertAlmostEqual(effective_occupation(0.3, 0.0), 0.3)
        self.assertEqual(effective_beta(5.0, 0.5, 0.0), 5.0)

    def test_squeezed_vacuum(self):
        self.assertAlmostEqual(effective_occupation(0.0, 0.5), math.sinh(0.5) ** 2)

    def test_effective_beta_reproduces_occupation(self):
        for beta, omega, r in [(5.0, 0.5, 0.3), (10.0, 1.5, 0.3), (40.7, 0.244, 1.3), (1.0, 2.0, 0.05)]:
            n_eff = effective_occupation(thermal_occupation(beta, omega), r)
            beta_eff = effective_beta(beta, omega, r)
            self.assertLess(beta_eff, beta)
            self.assertAlmostEqual(thermal_occupation(beta_eff, omega) / n_eff, 1.0, places=9)

    def test_large_argument(self):
        beta_eff = effective_beta(1000.0, 1.0, 0.3)
        self.assertTrue(math.isfinite(beta_eff))
        self.assertAlmostEqual(beta_eff, -2 * math.log(math.tanh(0.3)), places=9)


class TestLogNegativity(unittest.TestCase):
    """Partially transposed symplectic spectrum."""

    def test_product_vacuum(self):
        sigma = 0.5 * np.eye(4)
        spectrum = symplectic_spectrum(sigma)
        self.assertAlmostEqual(spectrum.nu_tilde_minus, 1.0)
        self.assertEqual(log_negativity(sigma), 0.0)

    def test_two_mode_squeezed_vacuum(self):
        for r in (0.1, 0.5, 1.2):
            self.assertAlmostEqual(log_negativity(two_mode_squeezed_vacuum(r)), 2 * r, places=9)

    def test_thermal_product_state(self):
        sigma = np.diag([1.5, 1.5, 2.5, 2.5])
        self.assertEqual(log_negativity(sigma), 0.0)
        self.assertAlmostEqual(symplectic_spectrum(sigma).nu_tilde_minus, 3.0)

    def test_unphysical_state(self):
        with self.assertRaises(PhysicalityError):
            symplectic_spectrum(0.1 * np.eye(4))

    def test_wrong_shape(self):
        with self.assertRaises(ValueError):
            symplectic_spectrum(np.eye(2))


class TestClosedForm(unittest.TestCase):
    """Resonant slow-driving states are never entangled."""

    def test_ground_state(self):
        self.assertAlmostEqual(closed_form_nu_minus(0.7, 1.3, 0.0, 0.0), 1.0)

    def test_strong_coupling(self):
        value = closed_form_nu_minus(0.7, 1e4, 0.2, 0.05)
        self.assertAlmostEqual(value, 1.25, places=6)

    def test_random_grid(self):
        rng = np.random.default_rng(7)
        samples = rng.uniform([0.01, 0.0, 0.0, 0.0], [2.0, 5.0, 5.0, 5.0], size=(10_000, 4))
        values = [closed_form_nu_minus(*row) for row in samples]
        self.assertGreaterEqual(min(values), 1 - 1e-9)


class TestSqueezedSteadyState(unittest.TestCase):
    """Entanglement between a cold and a squeezed-hot oscillator."""

    @classmethod
    def setUpClass(cls):
        cls.config = load_preset('fig9a')
        cls.r_grid = np.linspace(0.0, 3.0, 31)
        cls.curve = np.array([cls._e_n(r) for r in cls.r_grid])

    @classmethod
    def _e_n(cls, r):
        config = cls.config.with_overrides({'network.baths.1.squeeze_r': float(r)})
        return log_negativity(steady_state(config.network_spec()))

    def test_thermal_baths_do_not_entangle(self):
        self.assertAlmostEqual(self.curve[0], 0.0, places=9)

    def test_squeezing_entangles(self):
        self.assertGreater(self._e_n(1.3), 0.0)

    def test_curve_is_unimodal(self):
        """Test that E_N(r) rises to one peak and dies out again."""
        peak = int(np.argmax(self.curve))
        self.assertGreater(self.curve[peak], 0.1)
        self.assertTrue(0 < peak < len(self.curve) - 1)
        self.assertTrue(np.all(np.diff(self.curve[:peak + 1]) >= -1e-12))
        self.assertTrue(np.all(np.diff(self.curve[peak:]) <= 1e-12))
        self.assertLess(self.curve[-1], 1e-9)

    def test_driving_raises_peak_entanglement(self):
        config = load_preset('fig9b')
        net = config.network_spec()
        traj = find_limit_cycle(net, initial_gibbs(net, config.beta_init()), samples_per_period=100)
        driven = max(log_negativity(state) for state in traj.states)
        self.assertGreater(driven, float(np.max(self.curve)))


class TestNoThermalEntanglement(unittest.TestCase):
    """Thermal baths never entangle the pair."""

    def test_cold_pair_is_physical(self):
        net = build_network(
            [OscillatorSpec(2.652), OscillatorSpec(1.044)],
            [BathSpec(2.652, 30.8, (0.5, 0.0)), BathSpec(1.044, 37.5, (0.0, 0.5))],
            [[0.0, 1.146], [1.146, 0.0]]
        )
        state = steady_state(net)
        np.testing.assert_allclose(symplectic_eigenvalues(state.sigma), [0.5, 0.5], atol=1e-9)
        self.assertLess(log_negativity(state), 1e-9)

    def test_random_thermal_networks(self):
        rng = np.random.default_rng(3)
        for draw in range(500):
            symmetric = draw % 2 == 0
            omega_1 = rng.uniform(0.2, 3.0)
            omega_2 = omega_1 if symmetric else rng.uniform(0.2, 3.0)
            g_c = rng.uniform(0.2, 1.0)
            g_h = g_c if symmetric else rng.uniform(0.2, 1.0)
            lam = rng.uniform(0.05, 1.5)
            net = build_network(
                [OscillatorSpec(omega_1), OscillatorSpec(omega_2)],
                [
                    BathSpec(rng.uniform(0.1, 3.0), rng.uniform(0.5, 40.0), (g_c, 0.0)),
                    BathSpec(rng.uniform(0.1, 3.0), rng.uniform(0.5, 40.0), (0.0, g_h))
                ],
                [[0.0, lam], [lam, 0.0]]
            )
            self.assertLess(log_negativity(steady_state(net)), 1e-9)


if __name__ == '__main__':
    unittest.main()
