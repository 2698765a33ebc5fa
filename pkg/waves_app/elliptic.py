"""
Weierstrass elliptic core.

Germs and discriminant of the cubic q3(u) = a0 + a1*u + a2*u**2 + a3*u**3,
roots of the normal-form cubic p3(t) = 4t**3 - g2*t - g3, classification of
the solution family, and real-line evaluation of the Weierstrass function.
"""
import enum
import logging
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
from scipy.special import elliprf

from .conf import wave_settings
from .exceptions import NonFiniteInput, PoleProximity, WrongClass

logger = logging.getLogger(__name__)


class SolutionClass(str, enum.Enum):
    GENERIC_ELLIPTIC = 'generic_elliptic'
    DEGENERATE_HYPERBOLIC = 'degenerate_hyperbolic'
    DEGENERATE_TRIGONOMETRIC = 'degenerate_trigonometric'
    DEGENERATE_RATIONAL = 'degenerate_rational'
    DEGENERATE_QUADRATIC = 'degenerate_quadratic'

    @property
    def is_degenerate(self):
        return self in (
            SolutionClass.DEGENERATE_HYPERBOLIC,
            SolutionClass.DEGENERATE_TRIGONOMETRIC,
            SolutionClass.DEGENERATE_RATIONAL,
        )


def check_finite(*values):
    for value in values:
        if not math.isfinite(value):
            raise NonFiniteInput('Non-finite input: %r' % (value,))


@dataclass(frozen=True)
class CubicCoeffs:
    a0: float
    a1: float
    a2: float
    a3: float

    def q3(self, u):
        return self.a0 + u * (self.a1 + u * (self.a2 + u * self.a3))

    def terms(self, u):
        return (self.a0, self.a1 * u, self.a2 * u * u, self.a3 * u * u * u)

    def as_tuple(self):
        return (self.a0, self.a1, self.a2, self.a3)

    def replace(self, **changes):
        values = dict(zip(('a0', 'a1', 'a2', 'a3'), self.as_tuple()))
        values.update(changes)
        return CubicCoeffs(**values)


@dataclass(frozen=True)
class EllipticInvariants:
    g2: float
    g3: float
    delta: float
    roots: tuple
    solution_class: SolutionClass

    @property
    def real_roots(self):
        return tuple(r.real for r in self.roots if r.imag == 0.0)

    @property
    def repeated_root(self):
        """Double root of p3 for the hyperbolic and trigonometric reductions."""
        if self.solution_class == SolutionClass.DEGENERATE_RATIONAL:
            return 0.0
        if self.solution_class in (SolutionClass.DEGENERATE_HYPERBOLIC,
                                   SolutionClass.DEGENERATE_TRIGONOMETRIC):
            return -3.0 * self.g3 / (2.0 * self.g2)
        return None

    @cached_property
    def real_half_period(self):
        """
        Half of the real period of wp, so real poles sit at 2k times this value.

        Infinite when wp has a single real pole (hyperbolic and rational classes).
        """
        if self.solution_class == SolutionClass.GENERIC_ELLIPTIC:
            # integral of dt / sqrt(p3(t)) from the largest real root to infinity
            e1, e2, e3 = self.roots
            return float(np.real(elliprf(0.0, e1 - e2, e1 - e3)))
        if self.solution_class == SolutionClass.DEGENERATE_TRIGONOMETRIC:
            e = self.repeated_root
            if e < 0.0:
                return 0.5 * math.pi / math.sqrt(-3.0 * e)
        return math.inf

    def delta_from_roots(self):
        e1, e2, e3 = self.roots
        product = (e1 - e2) * (e1 - e3) * (e2 - e3)
        return (16.0 * product * product).real


def germs(coeffs):
    a0, a1, a2, a3 = coeffs.as_tuple()
    g2 = (a2 * a2 - 3.0 * a1 * a3) / 12.0
    g3 = (9.0 * a1 * a2 * a3 - 27.0 * a0 * a3 * a3 - 2.0 * a2 ** 3) / 432.0
    return g2, g3


def discriminant(g2, g3):
    return g2 ** 3 - 27.0 * g3 * g3


def _p3(t, g2, g3):
    return 4.0 * t ** 3 - g2 * t - g3


def _polish(t, g2, g3):
    # Newton on p3, kept only while the residual shrinks.
    best, best_res = t, abs(_p3(t, g2, g3))
    for _ in range(3):
        slope = 12.0 * best * best - g2
        if slope == 0.0 or best_res == 0.0:
            break
        cand = best - _p3(best, g2, g3) / slope
        res = abs(_p3(cand, g2, g3))
        if res >= best_res:
            break
        best, best_res = cand, res
    return best


def cubic_roots(g2, g3):
    """
    Roots of 4t**3 - g2*t - g3.

    Real roots come first in descending order; a complex pair follows with
    the positive imaginary part first. Values are returned as Python complex.
    """
    check_finite(g2, g3)
    if g2 == 0.0 and g3 == 0.0:
        return (0j, 0j, 0j)

    delta = discriminant(g2, g3)
    if delta >= 0.0 and g2 > 0.0:
        radius = math.sqrt(g2 / 3.0)
        scale = g2 ** 1.5
        cos_theta = float(np.clip(3.0 * math.sqrt(3.0) * g3 / scale, -1.0, 1.0)) if scale > 0.0 else 0.0
        theta = math.acos(cos_theta)
        roots = [radius * math.cos((theta - 2.0 * math.pi * k) / 3.0) for k in range(3)]
        roots = sorted((_polish(r, g2, g3) for r in roots), reverse=True)
        return tuple(complex(r) for r in roots)

    q_half = g2 / 12.0
    r_half = -g3 / 8.0
    big_a = -math.copysign(np.cbrt(abs(r_half) + math.sqrt(max(-delta, 0.0) / 1728.0)), r_half)
    big_b = q_half / big_a if big_a != 0.0 else 0.0
    e1 = _polish(big_a + big_b, g2, g3)
    imag_sq = 0.75 * e1 * e1 - 0.25 * g2
    if imag_sq <= 0.0:
        # Roundoff put a numerically real pair on the wrong side of the test.
        rest = sorted((-0.5 * e1 + s * math.sqrt(-imag_sq) for s in (1.0, -1.0)), reverse=True)
        roots = sorted([e1] + rest, reverse=True)
        return tuple(complex(r) for r in roots)
    imag = math.sqrt(imag_sq)
    return (complex(e1), complex(-0.5 * e1, imag), complex(-0.5 * e1, -imag))


def classify_germs(g2, g3, delta=None):
    if delta is None:
        delta = discriminant(g2, g3)
    atol = wave_settings.CLASSIFY_GERM_ATOL
    if abs(g2) < atol and abs(g3) < atol:
        return SolutionClass.DEGENERATE_RATIONAL
    threshold = wave_settings.CLASSIFY_DELTA_RTOL * max(1.0, abs(g2) ** 3, g3 * g3)
    if abs(delta) >= threshold:
        return SolutionClass.GENERIC_ELLIPTIC
    if g3 < 0.0:
        return SolutionClass.DEGENERATE_HYPERBOLIC
    return SolutionClass.DEGENERATE_TRIGONOMETRIC


def classify(inv):
    if inv.solution_class == SolutionClass.DEGENERATE_QUADRATIC:
        return inv.solution_class
    return classify_germs(inv.g2, inv.g3, inv.delta)


def invariants_from_cubic(coeffs):
    check_finite(*coeffs.as_tuple())
    g2, g3 = germs(coeffs)
    delta = discriminant(g2, g3)
    roots = cubic_roots(g2, g3)
    if coeffs.a3 == 0.0:
        solution_class = SolutionClass.DEGENERATE_QUADRATIC
    else:
        solution_class = classify_germs(g2, g3, delta)
    return EllipticInvariants(g2=g2, g3=g3, delta=delta, roots=roots,
                              solution_class=solution_class)


def trust_radius(g2, g3):
    scale = max(abs(g2) ** 0.25, abs(g3) ** (1.0 / 6.0))
    if scale == 0.0:
        return math.inf
    return wave_settings.WP_TRUST_FACTOR / scale


@lru_cache(maxsize=256)
def laurent_coefficients(g2, g3, max_terms):
    """c_k of wp(z) = z**-2 + sum_{k>=2} c_k z**(2k-2)."""
    coeffs = {2: g2 / 20.0, 3: g3 / 28.0}
    for k in range(4, max_terms + 2):
        acc = sum(coeffs[m] * coeffs[k - m] for m in range(2, k - 1))
        coeffs[k] = 3.0 * acc / ((2 * k + 1) * (k - 3))
    return tuple(coeffs[k] for k in range(2, max_terms + 2))


def _laurent(z, g2, g3):
    w = z * z
    total = 1.0 / w
    power = 1.0
    rtol = wave_settings.WP_SERIES_RTOL
    for c in laurent_coefficients(g2, g3, wave_settings.WP_SERIES_MAX_TERMS):
        power *= w
        term = c * power
        total += term
        if abs(term) < rtol * abs(total):
            break
    return total


def _duplicate(p, g2, g3):
    den = 4.0 * _p3(p, g2, g3)
    if den == 0.0:
        raise PoleProximity()
    num = 6.0 * p * p - 0.5 * g2
    return num * num / den - 2.0 * p


def wp_eval(z, g2, g3):
    """Weierstrass wp(z; g2, g3) for real z by Laurent series plus duplication."""
    check_finite(z, g2, g3)
    z = abs(z)
    guard = wave_settings.WP_OVERFLOW_GUARD
    if z == 0.0 or z < guard ** -0.5:
        raise PoleProximity('wp evaluated at z=%r' % z)
    if g2 == 0.0 and g3 == 0.0:
        return 1.0 / (z * z)

    radius = trust_radius(g2, g3)
    halvings = 0
    while z > radius:
        z *= 0.5
        halvings += 1

    p = _laurent(z, g2, g3)
    for _ in range(halvings):
        p = _duplicate(p, g2, g3)
        if not math.isfinite(p) or abs(p) > guard:
            raise PoleProximity('wp exceeds the overflow guard')
    return p


def wp_eval_degenerate(z, solution_class, repeated_root):
    solution_class = SolutionClass(solution_class)
    if not solution_class.is_degenerate:
        raise WrongClass('No closed form for %s' % solution_class.value)
    check_finite(z, repeated_root)
    z = abs(z)
    if z == 0.0:
        raise PoleProximity('wp evaluated at z=0')

    e = repeated_root
    if solution_class == SolutionClass.DEGENERATE_RATIONAL:
        return 1.0 / (z * z)
    if solution_class == SolutionClass.DEGENERATE_HYPERBOLIC:
        if e <= 0.0:
            raise WrongClass('Hyperbolic reduction needs a positive double root.')
        x = math.sqrt(3.0 * e) * z
        if x > wave_settings.WP_SINH_CUTOFF:
            return e
        s = math.sinh(x)
        return e + 3.0 * e / (s * s)
    if e >= 0.0:
        raise WrongClass('Trigonometric reduction needs a negative double root.')
    s = math.sin(math.sqrt(-3.0 * e) * z)
    value = -3.0 * e / (s * s) if s != 0.0 else math.inf
    if not math.isfinite(value) or value > wave_settings.WP_OVERFLOW_GUARD:
        raise PoleProximity('csc^2 pole at z=%r' % z)
    return e + value
