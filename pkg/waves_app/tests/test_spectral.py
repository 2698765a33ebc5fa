import math

import numpy as np
from django.test import SimpleTestCase, override_settings

from waves_app.exceptions import BlowUp, ConfigError, InvalidDelta1, InvalidGrid, InvalidNu, WrongRegion
from waves_app.families import (
    FifthOrderParams,
    ThirdOrderParams,
    fifth_order_soliton,
    solve_constraint_mu2,
    third_order_periodic,
    third_order_soliton,
)
from waves_app.spectral import (
    GridState,
    build_fifth_order_operator,
    build_third_order_operator,
    energies,
    energy_balance_error,
    evolve,
    grid_points,
    initial_state,
    propagate_and_compare,
    pulse_state,
    reality_residual,
    shape_error,
    step,
)

HAMILTONIAN = 1.0 / 12.0


def soliton_setup(N=1024):
    w = third_order_soliton(ThirdOrderParams(nu=-1.0), 2.0)
    L = 40.0 / w.wavenumber
    return w, build_third_order_operator(-1.0, L, N), initial_state(w, L, N)


class OperatorTests(SimpleTestCase):
    def test_third_order_symbol(self):
        op = build_third_order_operator(0.0, 2.0 * math.pi, 16)
        self.assertEqual(op.phi[0], 0.0)
        self.assertEqual(op.psi[0], 0.0)
        self.assertAlmostEqual(op.phi[1], 6.0 / 7.0, places=14)
        self.assertAlmostEqual(op.psi[1], 0.75 * 6.0 / 7.0, places=14)

    def test_fifth_order_symbol(self):
        op = build_fifth_order_operator(FifthOrderParams(), 2.0 * math.pi, 16)
        self.assertEqual(op.phi[0], 0.0)
        self.assertAlmostEqual(op.phi[1], 6.0 / 13.0, places=14)
        self.assertAlmostEqual(op.psi[1], 6.0 / 13.0, places=14)

    def test_invalid_parameters(self):
        with self.assertRaises(InvalidNu):
            build_third_order_operator(1.0 / 6.0, 10.0, 64)
        with self.assertRaises(InvalidDelta1):
            build_fifth_order_operator(FifthOrderParams(delta1=0.0), 10.0, 64)
        with self.assertRaises(InvalidGrid):
            build_third_order_operator(0.0, 10.0, 100)
        with self.assertRaises(InvalidGrid):
            build_third_order_operator(0.0, 0.0, 64)
        with self.assertRaises(InvalidGrid):
            GridState(10.0, 8, np.zeros(8))


class EvolutionTests(SimpleTestCase):
    def test_zero_state_stays_zero(self):
        op = build_third_order_operator(0.0, 20.0, 64)
        final = evolve(GridState(20.0, 64, np.zeros(64)), op, 0.1, 1.0)
        self.assertEqual(final.max_abs, 0.0)
        self.assertEqual(reality_residual(final), 0.0)
        report = energies(final, nu=0.0, p=FifthOrderParams())
        self.assertEqual((report.E3, report.E5, report.flux), (0.0, 0.0, 0.0))

    def test_single_mode_follows_the_dispersion_relation(self):
        L, N = 2.0 * math.pi, 16
        op = build_third_order_operator(0.0, L, N)
        state = GridState(L, N, 1e-8 * np.cos(grid_points(L, N)))
        final = evolve(state, op, 0.1, 1.0)
        ratio = final.spectrum[1] / state.spectrum[1]
        self.assertLess(abs(ratio - np.exp(-1j * op.phi[1])), 1e-10)

    def test_observer_schedule(self):
        op = build_third_order_operator(0.0, 20.0, 64)
        calls = []
        final = evolve(GridState(20.0, 64, np.zeros(64)), op, 0.1, 1.0, record_every=3,
                       observer=lambda s, n: calls.append((n, s.t)))
        self.assertEqual([n for n, _ in calls], [0, 3, 6, 9, 10])
        self.assertAlmostEqual(calls[-1][1], 1.0, places=14)
        self.assertAlmostEqual(final.t, 1.0, places=14)

    def test_step_matches_one_evolve_step(self):
        _, op, state = soliton_setup(N=256)
        one = step(state, op, 0.01, equation='third')
        self.assertAlmostEqual(one.t, 0.01, places=15)
        np.testing.assert_array_equal(one.u, evolve(state, op, 0.01, 0.01).u)

    def test_step_checks_its_arguments(self):
        op = build_third_order_operator(0.0, 20.0, 64)
        state = GridState(20.0, 64, np.zeros(64))
        with self.assertRaises(ConfigError):
            step(state, op, 0.1, equation='fifth')
        with self.assertRaises(ConfigError):
            step(state, op, 0.0)
        with self.assertRaises(ConfigError):
            evolve(state, op, 0.1, -1.0)

    def test_third_order_soliton_translates(self):
        w, op, state = soliton_setup()
        e_start = energies(state, nu=-1.0).E3
        final = evolve(state, op, 0.01, 10.0)
        e_end = energies(final, nu=-1.0).E3
        self.assertLess(abs(e_end - e_start) / e_start, 1e-6)
        self.assertLess(shape_error(final, w), 1e-4)
        self.assertLess(reality_residual(final), 1e-12)

    def test_soliton_energy_matches_closed_form(self):
        # u = 2 sech^2(kx), k = sqrt(3)/4: integral of u^2 is 16/(3k), of u_x^2 is 64k/15.
        _, _, state = soliton_setup()
        k = math.sqrt(3.0) / 4.0
        want = 0.5 * (16.0 / (3.0 * k) + (1.0 / 6.0 + 1.0) * 64.0 * k / 15.0)
        self.assertAlmostEqual(want, 7.2361, delta=1e-4)
        got = energies(state, nu=-1.0).E3
        self.assertLessEqual(abs(got - want), 1e-8 * want)

    def test_fifth_order_soliton_translates(self):
        c = 1.44
        mu2 = solve_constraint_mu2(FifthOrderParams(gamma=HAMILTONIAN), c, 'plus/minus', (0.25, 0.4))
        p = FifthOrderParams.on_curve(HAMILTONIAN, mu2, c)
        w = fifth_order_soliton(p, mu2, c, 'plus/minus')
        L = 40.0 / w.wavenumber
        op = build_fifth_order_operator(p, L, 1024)
        state = initial_state(w, L, 1024)
        e_start = energies(state, p=p).E5
        final = evolve(state, op, 0.01, 5.0)
        self.assertLess(abs(energies(final, p=p).E5 - e_start) / e_start, 1e-6)
        self.assertLess(shape_error(final, w), 1e-3)

    def test_time_step_convergence(self):
        w, op, state = soliton_setup(N=256)
        reference = evolve(state, op, 0.005, 2.0).u
        errors = [np.max(np.abs(evolve(state, op, dt, 2.0).u - reference)) for dt in (0.1, 0.05, 0.025)]
        for coarse, fine in zip(errors, errors[1:]):
            self.assertGreater(coarse / fine, 8.0)
            self.assertLess(coarse / fine, 32.0)

    def test_propagate_and_compare(self):
        w, op, _ = soliton_setup(N=512)
        self.assertLess(propagate_and_compare(w, op, 1.0, 0.05), 1e-4)
        periodic = third_order_periodic(ThirdOrderParams(nu=0.0), 0.5)
        with self.assertRaises(WrongRegion):
            propagate_and_compare(periodic, op, 1.0, 0.05)

    @override_settings(KDV_WAVES={'BLOWUP_GUARD': 1.0})
    def test_blow_up_keeps_the_last_finite_state(self):
        w, op, state = soliton_setup(N=256)
        with self.assertRaises(BlowUp) as ctx:
            evolve(state, op, 0.01, 1.0)
        self.assertAlmostEqual(ctx.exception.t, 0.01, places=14)
        self.assertGreater(ctx.exception.max_abs, 1.0)
        self.assertIs(ctx.exception.state, state)


class EnergyBalanceTests(SimpleTestCase):
    def run_pulse(self, gamma):
        p = FifthOrderParams(gamma=gamma)
        op = build_fifth_order_operator(p, 40.0, 256)
        series = []

        def observe(state, n):
            report = energies(state, p=p)
            series.append((state.t, report.E5, report.flux))

        evolve(pulse_state(40.0, 256), op, 0.01, 5.0, observer=observe)
        return np.array(series).T

    def test_flux_matches_energy_rate(self):
        times, e5, flux = self.run_pulse(1.0 / 6.0)
        self.assertGreater(np.max(np.abs(flux)), 1e-4)
        self.assertLess(energy_balance_error(times, e5, flux), 1e-4)

    def test_hamiltonian_flux_vanishes(self):
        times, e5, flux = self.run_pulse(HAMILTONIAN)
        self.assertEqual(np.max(np.abs(flux)), 0.0)
        self.assertLess((e5.max() - e5.min()) / e5[0], 1e-6)

    def test_balance_on_exact_series(self):
        times = np.linspace(0.0, 1.0, 11)
        self.assertLess(energy_balance_error(times, times ** 3, 3.0 * times ** 2), 1e-12)
        with self.assertRaises(ConfigError):
            energy_balance_error(times[:4], times[:4], times[:4])
