"""
Unit tests for the slow-driving closed forms.
"""

import math
import unittest
import sys
from pathlib import Path

import numpy as np

sys.path.append(str(Path(__file__).parent.parent))

from analytic.slow_driving import (
    delta_cop,
    delta_eta,
    is_resonant,
    large_coupling_limit,
    slow_cop,
    slow_cycle_average,
    slow_efficiency,
    slow_flows,
    slow_flows_1osc,
    slow_flows_2osc,
    slow_regime,
    slow_state_1osc
)
from dynamics.integrator import initial_gibbs, steady_state
from dynamics.limit_cycle import find_limit_cycle
from model.exceptions import ConfigError, RegimeError
from model.network import BathSpec, OscillatorSpec, build_network, thermal_occupation
from thermo.flows import heat_currents, power, power_two_oscillator
from thermo.performance import Regime, cop_instant, cycle_average, entropy_production, reference_metrics

G_HALF = math.sqrt(0.5)
SLOW = math.pi / 200


def one_oscillator(omega_c=0.2, omega_h=0.5, beta_c=10.0, beta_h=5.0, g=G_HALF, theta=SLOW, squeeze_r=0.0):
    return build_network(
        [OscillatorSpec(1.0, 0.5, theta)],
        [BathSpec(omega_c, beta_c, (g,)), BathSpec(omega_h, beta_h, (g,), squeeze_r=squeeze_r)]
    )


def two_oscillators(lam=math.sqrt(2), omega2=1.0, theta=math.pi / 20, g_c=G_HALF, g_h=G_HALF):
    return build_network(
        [OscillatorSpec(1.0, 0.5, theta), OscillatorSpec(omega2, 0.5 * omega2, theta)],
        [BathSpec(0.1, 10.0, (g_c, 0.0)), BathSpec(0.3, 5.0, (0.0, g_h))],
        [[0.0, lam], [lam, 0.0]]
    )


def sample_times(net, n=16):
    return np.arange(n) * net.common_period() / n


class TestOneOscillator(unittest.TestCase):
    """One oscillator between two baths."""

    def test_caption_values(self):
        sol = slow_flows(one_oscillator())
        self.assertAlmostEqual(sol.q_dot_c / 3.355e-3, 1.0, delta=1e-3)
        self.assertAlmostEqual(sol.q_dot_h / -8.387e-3, 1.0, delta=1e-3)
        self.assertAlmostEqual(sol.avg_w / 5.032e-3, 1.0, delta=1e-3)

    def test_weighted_occupation(self):
        sol = slow_flows_1osc(one_oscillator())
        expected = 0.5 * (thermal_occupation(10.0, 0.2) + thermal_occupation(5.0, 0.5))
        self.assertAlmostEqual(sol.nbar, expected)

    def test_slow_state(self):
        sxx, sxp, spp = slow_state_1osc(2.0, 0.5)
        self.assertAlmostEqual(sxx, 0.5)
        self.assertEqual(sxp, 0.0)
        self.assertAlmostEqual(spp, 2.0)

    def test_matches_instantaneous_steady_state(self):
        net = one_oscillator()
        sol = slow_flows(net)
        for t in sample_times(net):
            state = steady_state(net, t)
            np.testing.assert_allclose(state.sigma, sol.sigma_slow(t), rtol=1e-10)
            np.testing.assert_allclose(heat_currents(state, net), sol.heat(t), rtol=1e-10)
            self.assertAlmostEqual(power(state, net), sol.w_dot(t), places=12)

    def test_oscillating_power_averages_out(self):
        net = one_oscillator()
        summary = slow_cycle_average(net)
        self.assertAlmostEqual(summary.avg_w, slow_flows(net).avg_w, places=14)
        self.assertAlmostEqual(summary.energy_balance, 0.0, places=14)

    def test_wrong_network(self):
        with self.assertRaises(ConfigError):
            slow_flows_1osc(two_oscillators())


class TestTwoOscillators(unittest.TestCase):
    """Two coupled oscillators, each attached to its own bath."""

    def test_is_resonant(self):
        self.assertTrue(is_resonant(two_oscillators()))
        self.assertFalse(is_resonant(two_oscillators(omega2=0.5)))

    def test_heat_matches_steady_state(self):
        for net in (two_oscillators(), two_oscillators(omega2=0.5), two_oscillators(lam=0.2, omega2=0.7)):
            sol = slow_flows(net)
            for t in sample_times(net, 8):
                np.testing.assert_allclose(
                    heat_currents(steady_state(net, t), net), sol.heat(t), rtol=1e-8
                )

    def test_resonant_power_matches_steady_state(self):
        net = two_oscillators()
        sol = slow_flows(net)
        for t in sample_times(net):
            state = steady_state(net, t)
            self.assertAlmostEqual(sol.w_dot(t), power(state, net), places=10)
            self.assertAlmostEqual(sol.w_dot(t), power_two_oscillator(state, net), places=10)

    def test_suppression_factor(self):
        single = slow_flows_1osc(build_network(
            [OscillatorSpec(1.0, 0.5, math.pi / 20)],
            [BathSpec(0.1, 10.0, (G_HALF,)), BathSpec(0.3, 5.0, (G_HALF,))]
        ))
        for lam in (0.1, 0.5, 2.0):
            sol = slow_flows_2osc(two_oscillators(lam=lam))
            factor = 1 + 0.25 / (4 * lam ** 2)
            self.assertAlmostEqual(sol.q_dot_c * factor / single.q_dot_c, 1.0, places=10)
            self.assertAlmostEqual(sol.q_dot_h * factor / single.q_dot_h, 1.0, places=10)

    def test_suppression_in_static_steady_state(self):
        single_net = build_network(
            [OscillatorSpec(1.0)],
            [BathSpec(0.1, 10.0, (G_HALF,)), BathSpec(0.3, 5.0, (G_HALF,))]
        )
        single = heat_currents(steady_state(single_net), single_net)
        net = two_oscillators(lam=0.3, theta=0.0)
        coupled = heat_currents(steady_state(net), net)
        np.testing.assert_allclose(coupled * (1 + 0.25 / (4 * 0.09)), single, rtol=1e-8)

    def test_strong_coupling_recovers_one_oscillator(self):
        single = slow_flows_1osc(build_network(
            [OscillatorSpec(1.0, 0.5, math.pi / 20)],
            [BathSpec(0.1, 10.0, (G_HALF,)), BathSpec(0.3, 5.0, (G_HALF,))]
        ))
        sol = slow_flows_2osc(two_oscillators(lam=100.0))
        self.assertAlmostEqual(sol.q_dot_c / single.q_dot_c, 1.0, delta=1e-3)
        self.assertAlmostEqual(sol.q_dot_h / single.q_dot_h, 1.0, delta=1e-3)

    def test_large_coupling_limit(self):
        net = two_oscillators(lam=1e4)
        limit = large_coupling_limit(net)
        sol = slow_flows_2osc(net)
        self.assertAlmostEqual(limit.q_dot_c / sol.q_dot_c, 1.0, places=6)
        for t in sample_times(net):
            self.assertAlmostEqual(limit.w_dot(t), sol.w_dot(t), places=8)

    def test_large_coupling_drives_both_oscillators(self):
        net = two_oscillators(lam=1e4)
        limit = large_coupling_limit(net)
        t = 0.0
        modulation = limit.w_dot(t) - limit.avg_w
        omega_dot = 0.5 * math.pi / 20
        self.assertAlmostEqual(modulation, (2 * limit.nbar + 1) * omega_dot)

    def test_uncoupled_oscillators_carry_no_heat(self):
        sol = slow_flows_2osc(two_oscillators(lam=0.0))
        self.assertEqual(sol.heat(3.0), (0.0, 0.0))

    def test_shared_bath_is_rejected(self):
        net = build_network(
            [OscillatorSpec(1.0), OscillatorSpec(1.0)],
            [BathSpec(0.1, 10.0, (G_HALF, G_HALF)), BathSpec(0.3, 5.0, (0.0, 0.0))],
            [[0.0, 0.5], [0.5, 0.0]]
        )
        with self.assertRaises(ConfigError):
            slow_flows(net)

    def test_no_closed_form_for_three_oscillators(self):
        net = build_network(
            [OscillatorSpec(1.0)] * 3,
            [BathSpec(0.1, 10.0, (G_HALF, 0.0, 0.0)), BathSpec(0.3, 5.0, (0.0, 0.0, G_HALF))]
        )
        with self.assertRaises(ConfigError):
            slow_flows(net)


class TestEfficiencyCorrections(unittest.TestCase):
    """Oscillating efficiency and COP corrections."""

    def test_first_order_efficiency_identity(self):
        net = one_oscillator(omega_c=0.05, omega_h=0.08, beta_c=20.0, beta_h=10.0, g=0.5)
        sol = slow_flows(net)
        for t in sample_times(net):
            _, q_h = sol.heat(t)
            self.assertAlmostEqual(slow_efficiency(net, t), -sol.w_dot(t) / q_h, places=10)

    def test_first_order_cop_identity(self):
        net = one_oscillator()
        sol = slow_flows(net)
        for t in sample_times(net):
            q_c, _ = sol.heat(t)
            self.assertAlmostEqual(slow_cop(net, t), q_c / sol.w_dot(t), places=10)

    def test_second_order_efficiency_identity(self):
        net = two_oscillators(lam=0.4)
        sol = slow_flows(net)
        for t in sample_times(net):
            _, q_h = sol.heat(t)
            self.assertAlmostEqual(slow_efficiency(net, t, order=2), -sol.w_dot(t) / q_h, places=10)

    def test_corrections_average_to_zero(self):
        net = one_oscillator()
        times = sample_times(net, 64)
        self.assertAlmostEqual(float(np.mean([delta_eta(net, t) for t in times])), 0.0, places=12)

        net = two_oscillators(lam=0.4)
        times = sample_times(net, 64)
        self.assertAlmostEqual(float(np.mean([delta_eta(net, t, order=2) for t in times])), 0.0, places=12)

    def test_cop_correction_infinite_at_turning_points(self):
        net = one_oscillator()
        quarter = net.common_period() / 4
        self.assertLess(abs(1 / delta_cop(net, quarter)), 1e-12)
        self.assertAlmostEqual(slow_cop(net, quarter), reference_metrics(net).cop_otto)

    def test_carnot_point(self):
        net = one_oscillator(omega_c=0.05, omega_h=0.1, beta_c=20.0, beta_h=10.0, g=0.5)
        with self.assertRaises(RegimeError):
            delta_eta(net, 0.0)

    def test_invalid_orders(self):
        with self.assertRaises(ConfigError):
            delta_eta(one_oscillator(), 0.0, order=3)
        with self.assertRaises(ConfigError):
            delta_eta(two_oscillators(omega2=0.5), 0.0, order=2)
        with self.assertRaises(RegimeError):
            delta_eta(two_oscillators(lam=0.0), 0.0, order=2)


class TestRegimes(unittest.TestCase):
    """Slow-driving regimes against the hot bath frequency."""

    @staticmethod
    def _net(omega_h):
        return one_oscillator(omega_c=0.05, omega_h=omega_h, beta_c=20.0, beta_h=10.0, g=0.5)

    def test_regime_sequence(self):
        self.assertEqual(slow_regime(self._net(0.03)), Regime.ACCELERATOR)
        self.assertEqual(slow_regime(self._net(0.08)), Regime.ENGINE)
        self.assertEqual(slow_regime(self._net(0.2)), Regime.REFRIGERATOR)

    def test_carnot_point_is_idle(self):
        self.assertEqual(slow_regime(self._net(0.1)), Regime.IDLE)

    def test_otto_averages(self):
        engine = slow_cycle_average(self._net(0.08))
        self.assertAlmostEqual(engine.avg_efficiency, 1 - 0.05 / 0.08, delta=1e-3)

        fridge = slow_cycle_average(self._net(0.2))
        self.assertAlmostEqual(fridge.avg_cop, 0.05 / 0.15, delta=1e-3)

    def test_random_condition_table(self):
        """Test the regime table and the second law on random slow machines."""
        rng = np.random.default_rng(11)
        checked = 0
        while checked < 1000:
            beta_c = rng.uniform(2.0, 10.0)
            beta_h = rng.uniform(0.5, 0.95 * beta_c)
            omega_c, omega_h = rng.uniform(0.05, 1.0, size=2)
            g_c, g_h = rng.uniform(0.2, 1.0, size=2)
            n_c = thermal_occupation(beta_c, omega_c)
            n_h = thermal_occupation(beta_h, omega_h)
            if abs(n_c - n_h) < 1e-4 or abs(omega_c - omega_h) < 1e-2:
                continue

            net = build_network(
                [OscillatorSpec(1.0, 0.5, SLOW)],
                [BathSpec(omega_c, beta_c, (g_c,)), BathSpec(omega_h, beta_h, (g_h,))]
            )
            if n_h < n_c:
                expected = Regime.REFRIGERATOR
            elif omega_h > omega_c:
                expected = Regime.ENGINE
            else:
                expected = Regime.ACCELERATOR

            summary = slow_cycle_average(net, n_samples=8)
            self.assertEqual(summary.regime, expected)
            self.assertGreaterEqual(entropy_production(summary, net), 0.0)
            checked += 1

    def test_curzon_ahlborn_at_maximum_power(self):
        grid = np.linspace(0.1, 0.2, 101)
        output = [-slow_cycle_average(one_oscillator(omega_c=0.1, omega_h=w)).avg_w for w in grid]
        best = int(np.argmax(output))
        self.assertLessEqual(abs(grid[best] - math.sqrt(2) * 0.1), 0.001 + 1e-12)

        summary = slow_cycle_average(one_oscillator(omega_c=0.1, omega_h=grid[best]))
        self.assertEqual(summary.regime, Regime.ENGINE)
        self.assertAlmostEqual(summary.avg_efficiency, 1 - math.sqrt(0.5), delta=1e-2)


class TestNumericSlowDriving(unittest.TestCase):
    """Integrated limit cycles under slow driving against the closed forms."""

    def test_two_oscillator_limit_cycle(self):
        net = two_oscillators(theta=SLOW)
        traj = find_limit_cycle(net, initial_gibbs(net, 10.0), samples_per_period=400)
        numeric = cycle_average(traj)
        closed = slow_cycle_average(net)
        self.assertEqual(numeric.regime, closed.regime)
        self.assertAlmostEqual(numeric.avg_q_c / closed.avg_q_c, 1.0, delta=0.01)
        self.assertAlmostEqual(numeric.avg_q_h / closed.avg_q_h, 1.0, delta=0.01)
        self.assertAlmostEqual(numeric.avg_w / closed.avg_w, 1.0, delta=0.01)

    def test_reconstructed_cop_follows_numeric_cop(self):
        net = one_oscillator(omega_c=0.1, omega_h=2.0)
        traj = find_limit_cycle(net, initial_gibbs(net, 10.0), samples_per_period=200)
        compared = 0
        for rec in traj.records:
            cop = cop_instant(rec)
            if cop is None:
                continue
            self.assertAlmostEqual(slow_cop(net, rec.t) / cop, 1.0, delta=0.01)
            compared += 1
        self.assertGreater(compared, 100)


class TestSqueezedHotBath(unittest.TestCase):
    """Engines beyond the thermal Carnot bound."""

    def test_engine_conditions(self):
        exceeded = False
        for omega_h in np.linspace(1.05, 4.0, 60):
            net = one_oscillator(omega_c=1.0, omega_h=omega_h, squeeze_r=0.3)
            summary = slow_cycle_average(net)
            metrics = reference_metrics(net)
            if summary.regime != Regime.ENGINE:
                continue
            hot = net.baths[1]
            self.assertLess(hot.effective_beta * omega_h, 10.0 * 1.0)
            self.assertLess(summary.avg_efficiency, metrics.eta_carnot_eff)
            exceeded = exceeded or summary.avg_efficiency > metrics.eta_carnot
        self.assertTrue(exceeded)

    def test_thermal_bath_is_no_engine_beyond_carnot(self):
        net = one_oscillator(omega_c=1.0, omega_h=2.2)
        self.assertNotEqual(slow_regime(net), Regime.ENGINE)

        squeezed = one_oscillator(omega_c=1.0, omega_h=2.2, squeeze_r=0.3)
        self.assertEqual(slow_regime(squeezed), Regime.ENGINE)
        self.assertGreater(reference_metrics(squeezed).eta_otto, reference_metrics(squeezed).eta_carnot)


if __name__ == '__main__':
    unittest.main()
