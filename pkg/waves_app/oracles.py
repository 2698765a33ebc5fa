"""
Numerical oracles: finite-difference derivatives and residual reports for
the traveling-wave equations.

Derivatives are taken from scalar evaluations only; no closed-form
derivative of any family is used here.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .conf import wave_settings
from .exceptions import SingularPoint, SingularSample, WaveError
from .families import ThirdOrderParams, WaveFamily, evaluate_wave

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ResidualReport:
    max_abs: float
    max_rel: float
    samples: int
    skipped: int

    @property
    def valid(self):
        return self.samples >= wave_settings.MIN_REPORT_SAMPLES

    def passes(self, tolerance):
        return self.valid and self.max_rel < tolerance


def _fornberg(offsets, order):
    # Exact weights for the derivative of the given order at 0.
    n = len(offsets)
    delta = [[[Fraction(0)] * n for _ in range(n)] for _ in range(order + 1)]
    delta[0][0][0] = Fraction(1)
    c1 = Fraction(1)
    for i in range(1, n):
        c2 = Fraction(1)
        for j in range(i):
            c3 = Fraction(offsets[i] - offsets[j])
            c2 *= c3
            for m in range(min(i, order) + 1):
                prev = m * delta[m - 1][i - 1][j] if m else 0
                delta[m][i][j] = (offsets[i] * delta[m][i - 1][j] - prev) / c3
        for m in range(min(i, order) + 1):
            prev = m * delta[m - 1][i - 1][i - 1] if m else 0
            delta[m][i][i] = c1 / c2 * (prev - offsets[i - 1] * delta[m][i - 1][i - 1])
        c1 = c2
    return delta[order][n - 1]


@lru_cache(maxsize=None)
def central_weights(order, accuracy=2):
    """(offset, weight) pairs of the central stencil, zero weights dropped."""
    if accuracy < 2 or accuracy % 2:
        raise ValueError('Stencil accuracy must be a positive even integer.')
    half = (order + 1) // 2 - 1 + accuracy // 2
    offsets = list(range(-half, half + 1))
    weights = _fornberg(offsets, order)
    return tuple((k, float(w)) for k, w in zip(offsets, weights) if w != 0)


def fd_derivative(f, x, order, h=None, accuracy=2):
    if order not in (1, 2, 3, 4):
        raise ValueError('Derivative order must be 1..4, got %r' % order)
    if h is None:
        base = 1e-4 if order <= 2 else 1e-3
        h = max(base, base * abs(x))
    if not h > 0.0:
        raise ValueError('Step h must be positive.')

    values = []
    for k, w in central_weights(order, accuracy):
        try:
            fx = f(x + k * h)
        except (WaveError, ArithmeticError, ValueError) as exc:
            raise SingularSample('f failed at %r: %s' % (x + k * h, exc)) from exc
        if not math.isfinite(fx):
            raise SingularSample('f is not finite at %r' % (x + k * h))
        values.append(w * fx)
    return math.fsum(values) / h ** order


def default_samples(w, count=50):
    """Nonsingular sample points suited to the family's length scale."""
    scale = w.length_scale
    if w.family == WaveFamily.SECH2:
        return np.linspace(-3.0 * scale, 3.0 * scale, count)
    if w.family == WaveFamily.TRIG_PERIODIC_UNBOUNDED:
        half = 0.5 * math.pi / w.wavenumber
        return np.linspace(-0.8 * half, 0.8 * half, count)
    # Stay short of the half period, where the next real pole of wp comes into view.
    return np.linspace(0.3 * scale, min(1.5 * scale, 0.5 * w.pole_spacing), count)


def _report(w, xis, terms_at):
    h = wave_settings.FD_STEP_FRACTION * w.length_scale
    exclusion = wave_settings.POLE_EXCLUSION_STEPS * h
    accuracy = wave_settings.FD_ACCURACY

    def u(s):
        return evaluate_wave(w, s)

    def d(xi, order):
        return fd_derivative(u, xi, order, h=h, accuracy=accuracy)

    max_abs = 0.0
    largest = 0.0
    samples = skipped = 0
    for xi in xis:
        xi = float(xi)
        if w.pole_distance(xi) <= exclusion:
            skipped += 1
            continue
        try:
            terms = terms_at(u(xi), lambda order: d(xi, order))
        except (SingularSample, SingularPoint):
            skipped += 1
            continue
        max_abs = max(max_abs, abs(math.fsum(terms)))
        largest = max(largest, max(abs(t) for t in terms))
        samples += 1
    if skipped:
        logger.debug('residual report skipped %d samples near singularities', skipped)
    return ResidualReport(max_abs=max_abs, max_rel=max_abs / max(1.0, largest),
                          samples=samples, skipped=skipped)


def residual_elliptic(w, xis):
    a = w.coeffs

    def terms(u, d):
        du = d(1)
        return (du * du, -a.a0, -a.a1 * u, -a.a2 * u * u, -a.a3 * u * u * u)

    return _report(w, xis, terms)


def residual_third_order(w, nu, ctx, xis):
    c = ctx.c
    mu1 = ctx.mu1 if ctx.mu1 is not None else ThirdOrderParams(nu).mu1(c)

    def terms(u, d):
        return (mu1 * d(2), 0.75 * u * u, -(c - 1.0) * u, -ctx.A1)

    return _report(w, xis, terms)


def residual_fifth_order(w, p, ctx, xis):
    c, gamma = ctx.c, p.gamma
    mu2 = ctx.mu2 if ctx.mu2 is not None else p.mu2(c)

    def terms(u, d):
        du, d2u = d(1), d(2)
        return (
            mu2 * d(4),
            c * d2u / 6.0,
            (2.0 * gamma - 1.0 / 12.0) * du * du,
            2.0 * gamma * u * d2u,
            -0.25 * u ** 3,
            0.75 * u * u,
            (1.0 - c) * u,
            -ctx.B1,
        )

    return _report(w, xis, terms)
