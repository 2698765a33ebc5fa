import dataclasses
import math

import numpy as np
from django.test import SimpleTestCase

from waves_app.elliptic import CubicCoeffs
from waves_app.exceptions import SingularSample
from waves_app.families import (
    ThirdOrderParams,
    elliptic_transform,
    evaluate_wave,
    third_order_periodic,
    third_order_soliton,
)
from waves_app.oracles import (
    ResidualReport,
    central_weights,
    default_samples,
    fd_derivative,
    residual_elliptic,
    residual_third_order,
)


class StencilTests(SimpleTestCase):
    def test_central_weights(self):
        self.assertEqual(central_weights(1, 2), ((-1, -0.5), (1, 0.5)))
        self.assertEqual(central_weights(2, 2), ((-1, 1.0), (0, -2.0), (1, 1.0)))
        self.assertEqual(central_weights(3, 2), ((-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)))
        self.assertEqual([w for _, w in central_weights(4, 2)], [1.0, -4.0, 6.0, -4.0, 1.0])

    def test_weights_annihilate_constants(self):
        for order in (1, 2, 3, 4):
            for accuracy in (2, 4, 8):
                self.assertAlmostEqual(sum(w for _, w in central_weights(order, accuracy)), 0.0, places=12)

    def test_odd_accuracy_is_rejected(self):
        with self.assertRaises(ValueError):
            central_weights(1, 3)


class FiniteDifferenceTests(SimpleTestCase):
    def test_quadratic_is_exact(self):
        self.assertEqual(fd_derivative(lambda x: x * x, 3.0, 1, h=0.5), 6.0)

    def test_sech2_curvature(self):
        k = 0.5 * math.sqrt(0.75)

        def profile(x):
            return 2.0 / math.cosh(k * x) ** 2

        self.assertAlmostEqual(fd_derivative(profile, 0.0, 2), -4.0 * k * k, delta=1e-6)

    def test_second_order_refinement(self):
        errors = [abs(fd_derivative(math.sin, 0.7, 2, h=h) + math.sin(0.7)) for h in (0.1, 0.05, 0.025, 0.0125)]
        for coarse, fine in zip(errors, errors[1:]):
            self.assertGreater(coarse / fine, 3.5)
            self.assertLess(coarse / fine, 4.5)

    def test_high_orders(self):
        self.assertAlmostEqual(fd_derivative(math.exp, 0.3, 3, h=0.05, accuracy=8), math.exp(0.3), places=7)
        self.assertAlmostEqual(fd_derivative(math.sin, 0.3, 4, h=0.05, accuracy=8), math.sin(0.3), places=7)

    def test_singular_sample(self):
        with self.assertRaises(SingularSample):
            fd_derivative(lambda x: 1.0 / x, 0.0, 2)
        w = third_order_periodic(ThirdOrderParams(nu=1.0), 2.0)
        pole = 0.5 * math.pi / w.wavenumber
        with self.assertRaises(SingularSample):
            fd_derivative(lambda s: evaluate_wave(w, s), pole, 2, h=0.1)

    def test_invalid_arguments(self):
        with self.assertRaises(ValueError):
            fd_derivative(math.sin, 0.0, 5)
        with self.assertRaises(ValueError):
            fd_derivative(math.sin, 0.0, 1, h=0.0)


class ResidualReportTests(SimpleTestCase):
    def test_validity(self):
        self.assertFalse(ResidualReport(0.0, 0.0, samples=9, skipped=0).valid)
        report = ResidualReport(1e-9, 1e-10, samples=50, skipped=0)
        self.assertTrue(report.passes(1e-6))
        self.assertFalse(report.passes(1e-11))

    def test_zero_wave(self):
        w = third_order_soliton(ThirdOrderParams(nu=-1.0), 1.0)
        xis = default_samples(w)
        self.assertEqual(residual_elliptic(w, xis).max_abs, 0.0)
        self.assertEqual(residual_third_order(w, -1.0, w.context, xis).max_abs, 0.0)

    def test_corrupted_coefficient_is_detected(self):
        w = third_order_soliton(ThirdOrderParams(nu=-1.0), 2.0)
        broken = dataclasses.replace(w, coeffs=w.coeffs.replace(a2=w.coeffs.a2 + 0.1))
        xis = default_samples(w)
        self.assertLess(residual_elliptic(w, xis).max_rel, 1e-6)
        self.assertGreater(residual_elliptic(broken, xis).max_rel, 1e-2)

    def assertSensitive(self, w, xis, names, eps=1e-3):
        for name in names:
            with self.subTest(coefficient=name):
                scaled = w.coeffs.replace(**{name: getattr(w.coeffs, name) * (1.0 + eps)})
                report = residual_elliptic(dataclasses.replace(w, coeffs=scaled), xis)
                self.assertTrue(report.valid)
                self.assertGreaterEqual(report.max_rel, eps / 10.0)

    def test_small_coefficient_scaling_is_detected_on_solitons(self):
        w = third_order_soliton(ThirdOrderParams(nu=-1.0), 2.0)
        self.assertSensitive(w, default_samples(w), ('a2', 'a3'))

    def test_small_coefficient_scaling_is_detected_on_all_terms(self):
        # q3 = (1 + u)(1 + u**2); around the half period u stays within [-1, 1].
        w = elliptic_transform(CubicCoeffs(1.0, 1.0, 1.0, 1.0))
        half = 0.5 * w.pole_spacing
        xis = [x for x in np.linspace(0.5 * half, 1.5 * half, 61) if abs(evaluate_wave(w, x)) <= 1.0]
        self.assertLess(residual_elliptic(w, xis).max_rel, 1e-8)
        self.assertSensitive(w, xis, ('a0', 'a1', 'a2', 'a3'))

    def test_samples_near_poles_are_skipped(self):
        w = third_order_periodic(ThirdOrderParams(nu=1.0), 2.0)
        pole = 0.5 * math.pi / w.wavenumber
        report = residual_elliptic(w, [pole, pole + 1e-3, 0.0, 0.2, 0.4])
        self.assertEqual(report.skipped, 2)
        self.assertEqual(report.samples, 3)
        self.assertFalse(report.valid)

    def test_default_windows_avoid_poles(self):
        w = third_order_periodic(ThirdOrderParams(nu=1.0), 2.0)
        h = 0.01 * w.length_scale
        self.assertTrue(all(w.pole_distance(float(x)) > 10 * h for x in default_samples(w)))
