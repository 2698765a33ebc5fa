"""
Traveling-wave families of the third- and fifth-order KdV-BBM equations.

Every family is written as a solution of the elliptic equation
u_xi**2 = a0 + a1*u + a2*u**2 + a3*u**3. Bounded waves are sech^2 profiles,
their analytic continuation gives sec^2 waves with poles, and the general
case is the Weierstrass form u = (4/a3) wp(xi) - a2/(3 a3).
"""
import enum
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import OptimizeResult, brentq

from .conf import wave_settings
from .elliptic import (
    CubicCoeffs,
    SolutionClass,
    check_finite,
    invariants_from_cubic,
    wp_eval,
    wp_eval_degenerate,
)
from .exceptions import (
    ComplexDiscriminant,
    ConstraintViolated,
    DegenerateCubic,
    DegenerateMu,
    NoConvergence,
    NoRootInBracket,
    PoleProximity,
    SingularPoint,
    WrongRegion,
)

logger = logging.getLogger(__name__)


class WaveFamily(str, enum.Enum):
    SECH2 = 'sech2'
    TRIG_PERIODIC_UNBOUNDED = 'trig_periodic_unbounded'
    WEIERSTRASS = 'weierstrass'


class RegionTag(str, enum.Enum):
    BOUNDED_BRIGHT = 'bounded_bright'
    BOUNDED_DARK = 'bounded_dark'
    UNBOUNDED = 'unbounded'
    BOUNDARY = 'boundary'

    @property
    def is_bounded(self):
        return self in (RegionTag.BOUNDED_BRIGHT, RegionTag.BOUNDED_DARK)


class Sign(enum.IntEnum):
    PLUS = 1
    MINUS = -1

    @property
    def label(self):
        return 'plus' if self is Sign.PLUS else 'minus'

    @classmethod
    def parse(cls, value):
        if isinstance(value, Sign):
            return value
        if isinstance(value, str):
            key = value.strip().lower()
            if key in ('plus', '+', 'p'):
                return cls.PLUS
            if key in ('minus', '-', 'm'):
                return cls.MINUS
            raise ValueError('Unknown branch sign: %r' % value)
        return cls(int(value))


@dataclass(frozen=True)
class Branch:
    """Signs taken in front of the square roots for a2 and for a3."""

    a2: Sign = Sign.PLUS
    a3: Sign = Sign.PLUS

    @classmethod
    def uniform(cls, sign):
        sign = Sign.parse(sign)
        return cls(sign, sign)

    @classmethod
    def coerce(cls, value):
        if isinstance(value, Branch):
            return value
        if isinstance(value, str) and '/' in value:
            a2, a3 = value.split('/', 1)
            return cls(Sign.parse(a2), Sign.parse(a3))
        return cls.uniform(value)

    @property
    def label(self):
        if self.a2 == self.a3:
            return self.a2.label
        return '%s/%s' % (self.a2.label, self.a3.label)


ALL_BRANCHES = tuple(Branch(s2, s3) for s2 in Sign for s3 in Sign)


@dataclass(frozen=True)
class ThirdOrderParams:
    nu: float = 0.0

    def mu1(self, c):
        return (1.0 - c) * self.nu + c / 6.0


@dataclass(frozen=True)
class FifthOrderParams:
    gamma: float = 1.0 / 12.0
    delta1: float = 1.0
    delta2: float = 0.0

    def mu2(self, c):
        return self.delta2 - c * self.delta1

    @classmethod
    def on_curve(cls, gamma, mu2, c, delta1=1.0):
        """Parameters whose mu2 = delta2 - c*delta1 equals the requested value."""
        return cls(gamma=gamma, delta1=delta1, delta2=mu2 + c * delta1)


@dataclass(frozen=True)
class WaveContext:
    c: float
    A0: float = 0.0
    A1: float = 0.0
    B1: float = 0.0
    mu1: float = None
    mu2: float = None

    @classmethod
    def third_order(cls, p, c, A0=0.0, A1=0.0):
        return cls(c=c, A0=A0, A1=A1, mu1=p.mu1(c))

    @classmethod
    def fifth_order(cls, p, c, B1=0.0, mu2=None):
        return cls(c=c, B1=B1, mu2=p.mu2(c) if mu2 is None else mu2)


@dataclass(frozen=True)
class TravelingWave:
    family: WaveFamily
    coeffs: CubicCoeffs
    invariants: object
    context: WaveContext = None
    amplitude: float = 0.0
    wavenumber: float = 0.0
    offset: float = 0.0
    scale: float = 0.0

    @property
    def is_bounded(self):
        return self.family == WaveFamily.SECH2

    @property
    def is_trivial(self):
        return self.family == WaveFamily.SECH2 and self.amplitude == 0.0

    @property
    def length_scale(self):
        if self.family == WaveFamily.WEIERSTRASS:
            s = max(abs(self.invariants.g2) ** 0.25, abs(self.invariants.g3) ** (1.0 / 6.0))
            return 1.0 / s if s > 0.0 else 1.0
        return 1.0 / self.wavenumber if self.wavenumber > 0.0 else 1.0

    @property
    def pole_spacing(self):
        """Distance between neighbouring real poles (infinite for a lone pole at 0)."""
        if self.family == WaveFamily.SECH2:
            return math.inf
        if self.family == WaveFamily.WEIERSTRASS:
            return 2.0 * self.invariants.real_half_period
        return math.pi / self.wavenumber

    def pole_distance(self, xi):
        if self.family == WaveFamily.SECH2:
            return math.inf
        if self.family == WaveFamily.WEIERSTRASS:
            period = self.pole_spacing
            if not math.isfinite(period):
                return abs(xi)
            return abs(xi - period * round(xi / period))
        t = self.wavenumber * xi - 0.5 * math.pi
        return abs(t - math.pi * round(t / math.pi)) / self.wavenumber

    def poles_in(self, lo, hi):
        if self.family == WaveFamily.SECH2:
            return []
        period = self.pole_spacing
        if self.family == WaveFamily.WEIERSTRASS:
            if not math.isfinite(period):
                return [0.0] if lo <= 0.0 <= hi else []
            return [n * period for n in range(math.ceil(lo / period), math.floor(hi / period) + 1)]
        first = math.ceil((lo - 0.5 * period) / period)
        last = math.floor((hi - 0.5 * period) / period)
        return [(n + 0.5) * period for n in range(first, last + 1)]


def _sech2_wave(coeffs, ctx):
    return TravelingWave(
        family=WaveFamily.SECH2,
        coeffs=coeffs,
        invariants=invariants_from_cubic(coeffs),
        context=ctx,
        amplitude=-coeffs.a2 / coeffs.a3,
        wavenumber=0.5 * math.sqrt(coeffs.a2),
    )


def _trig_wave(coeffs, ctx):
    return TravelingWave(
        family=WaveFamily.TRIG_PERIODIC_UNBOUNDED,
        coeffs=coeffs,
        invariants=invariants_from_cubic(coeffs),
        context=ctx,
        amplitude=-coeffs.a2 / coeffs.a3,
        wavenumber=0.5 * math.sqrt(-coeffs.a2),
    )


def _trivial_wave(coeffs, ctx):
    return TravelingWave(family=WaveFamily.SECH2, coeffs=coeffs,
                         invariants=invariants_from_cubic(coeffs), context=ctx)


# Third order

def third_order_coeffs(p, ctx):
    mu1 = ctx.mu1 if ctx.mu1 is not None else p.mu1(ctx.c)
    check_finite(mu1, ctx.c, ctx.A0, ctx.A1)
    if mu1 == 0.0:
        raise DegenerateMu('mu1 = (1-c)nu + c/6 vanishes at c=%r, nu=%r' % (ctx.c, p.nu))
    return CubicCoeffs(
        a0=ctx.A0 / mu1,
        a1=2.0 * ctx.A1 / mu1,
        a2=(ctx.c - 1.0) / mu1,
        a3=-1.0 / (2.0 * mu1),
    )


def region_classify_third(c, nu):
    mu1 = (1.0 - c) * nu + c / 6.0
    if mu1 == 0.0 or c == 1.0:
        return RegionTag.BOUNDARY
    ratio = (c - 1.0) / mu1
    if ratio > 0.0:
        return RegionTag.BOUNDED_BRIGHT if c > 1.0 else RegionTag.BOUNDED_DARK
    if ratio < 0.0:
        return RegionTag.UNBOUNDED
    return RegionTag.BOUNDARY


def third_order_soliton(p, c):
    ctx = WaveContext.third_order(p, c)
    coeffs = third_order_coeffs(p, ctx)
    if c == 1.0:
        return _trivial_wave(coeffs, ctx)
    if coeffs.a2 <= 0.0:
        raise WrongRegion('(c-1)/mu1 = %r is not positive; use the periodic family' % coeffs.a2)
    return _sech2_wave(coeffs, ctx)


def third_order_periodic(p, c):
    ctx = WaveContext.third_order(p, c)
    coeffs = third_order_coeffs(p, ctx)
    if coeffs.a2 >= 0.0:
        raise WrongRegion('(c-1)/mu1 = %r is not negative; use the soliton family' % coeffs.a2)
    return _trig_wave(coeffs, ctx)


def third_order_weierstrass(p, ctx):
    coeffs = third_order_coeffs(p, ctx)
    return elliptic_transform(coeffs, context=ctx)


# Fifth order, zero boundary conditions

def _mu2_for(p, c, mu2):
    mu2 = p.mu2(c) if mu2 is None else mu2
    check_finite(mu2, c, p.gamma)
    if mu2 == 0.0:
        raise DegenerateMu('mu2 = delta2 - c*delta1 vanishes')
    return mu2


def _zero_bc_pair(gamma, mu2, c, branch):
    rad2 = c * c + 144.0 * mu2 * (c - 1.0)
    rad3 = (1.0 - 60.0 * gamma) ** 2 + 1080.0 * mu2
    if rad2 < 0.0 or rad3 < 0.0:
        raise ComplexDiscriminant(
            'Negative radicand at mu2=%r, c=%r (a2: %r, a3: %r)' % (mu2, c, rad2, rad3))
    a2 = (-c + branch.a2 * math.sqrt(rad2)) / (12.0 * mu2)
    a3 = (1.0 - 60.0 * gamma + branch.a3 * math.sqrt(rad3)) / (180.0 * mu2)
    return a2, a3


def _constraint(gamma, mu2, c, a2, a3):
    return 7.5 * mu2 * a2 * a3 + (4.0 * gamma - 1.0 / 12.0) * a2 + 0.25 * c * a3 + 0.75


def fifth_order_coeffs_zero_bc(p, c, branch, mu2=None):
    branch = Branch.coerce(branch)
    mu2 = _mu2_for(p, c, mu2)
    a2, a3 = _zero_bc_pair(p.gamma, mu2, c, branch)
    coeffs = CubicCoeffs(0.0, 0.0, a2, a3)
    return coeffs, _constraint(p.gamma, mu2, c, a2, a3)


def fifth_order_constraint(p, mu2, c, branch):
    branch = Branch.coerce(branch)
    mu2 = _mu2_for(p, c, mu2)
    a2, a3 = _zero_bc_pair(p.gamma, mu2, c, branch)
    return _constraint(p.gamma, mu2, c, a2, a3)


def solve_constraint_mu2(p, c, branch, bracket):
    """Root of h(mu2, c) = 0 in mu2 on a bracket that excludes mu2 = 0."""
    branch = Branch.coerce(branch)
    lo, hi = sorted(float(b) for b in bracket)
    check_finite(lo, hi, c)
    if lo <= 0.0 <= hi:
        raise NoRootInBracket('Bracket [%r, %r] contains mu2 = 0' % (lo, hi))

    def h(mu2):
        return fifth_order_constraint(p, mu2, c, branch)

    h_lo, h_hi = h(lo), h(hi)
    if h_lo == 0.0:
        return lo
    if h_hi == 0.0:
        return hi
    if h_lo * h_hi > 0.0:
        raise NoRootInBracket(
            'h(%r)=%r and h(%r)=%r have the same sign' % (lo, h_lo, hi, h_hi))

    root = brentq(h, lo, hi, xtol=1e-16, rtol=4.0 * np.finfo(float).eps, maxiter=200)
    residual = h(root)
    logger.debug('constraint root mu2=%r at c=%r branch=%s, h=%r', root, c, branch.label, residual)
    if abs(residual) >= wave_settings.CONSTRAINT_TOL:
        raise NoRootInBracket('Sign change at mu2=%r is not a root (h=%r)' % (root, residual))
    return root


def _checked_zero_bc(p, mu2, c, branch):
    coeffs, h = fifth_order_coeffs_zero_bc(p, c, branch, mu2=mu2)
    if abs(h) > wave_settings.CONSTRUCTION_H_TOL:
        raise ConstraintViolated('h(mu2=%r, c=%r) = %r' % (mu2, c, h))
    return coeffs, WaveContext.fifth_order(p, c, mu2=mu2)


def fifth_order_soliton(p, mu2, c, branch):
    coeffs, ctx = _checked_zero_bc(p, mu2, c, branch)
    if coeffs.a2 == 0.0:
        return _trivial_wave(coeffs, ctx)
    if coeffs.a2 < 0.0:
        raise WrongRegion('Width radicand a2=%r is negative; use the periodic family' % coeffs.a2)
    return _sech2_wave(coeffs, ctx)


def fifth_order_periodic(p, mu2, c, branch):
    coeffs, ctx = _checked_zero_bc(p, mu2, c, branch)
    if coeffs.a2 >= 0.0:
        raise WrongRegion('Width radicand a2=%r is not negative; use the soliton family' % coeffs.a2)
    return _trig_wave(coeffs, ctx)


def region_classify_fifth(p, mu2, c, branch):
    coeffs, _ = fifth_order_coeffs_zero_bc(p, c, branch, mu2=mu2)
    if coeffs.a2 > 0.0:
        amplitude = -coeffs.a2 / coeffs.a3
        return RegionTag.BOUNDED_BRIGHT if amplitude > 0.0 else RegionTag.BOUNDED_DARK
    if coeffs.a2 < 0.0:
        return RegionTag.UNBOUNDED
    return RegionTag.BOUNDARY


@dataclass(frozen=True)
class ConstraintRoot:
    c: float
    mu2: float
    branch: Branch
    h: float
    width_radicand: float
    region: RegionTag

    @property
    def family(self):
        if self.region == RegionTag.UNBOUNDED:
            return WaveFamily.TRIG_PERIODIC_UNBOUNDED
        return WaveFamily.SECH2


def scan_constraint_roots(p, c_values, branches=ALL_BRANCHES, mu2_range=(-0.1, 2.0), samples=400):
    """
    Locate zeros of h(., c) by sampling mu2 and refining each sign change.

    Samples where a radicand is negative are skipped; intervals containing
    mu2 = 0 are never bracketed.
    """
    grid = np.linspace(mu2_range[0], mu2_range[1], samples)
    grid = grid[grid != 0.0]
    roots = []
    for c in c_values:
        c = float(c)
        for branch in branches:
            branch = Branch.coerce(branch)
            values = []
            for mu2 in grid:
                try:
                    values.append((float(mu2), fifth_order_constraint(p, float(mu2), c, branch)))
                except (ComplexDiscriminant, DegenerateMu):
                    values.append((float(mu2), None))
            found = []
            for (m0, h0), (m1, h1) in zip(values, values[1:]):
                if h0 is None or h1 is None or (m0 < 0.0 < m1):
                    continue
                if h0 == 0.0:
                    found.append(m0)
                elif h0 * h1 < 0.0:
                    try:
                        found.append(solve_constraint_mu2(p, c, branch, (m0, m1)))
                    except NoRootInBracket:
                        logger.debug('discarded bracket [%r, %r] at c=%r', m0, m1, c)
            if values and values[-1][1] == 0.0:
                found.append(values[-1][0])
            for mu2 in found:
                coeffs, h = fifth_order_coeffs_zero_bc(p, c, branch, mu2=mu2)
                roots.append(ConstraintRoot(
                    c=c, mu2=mu2, branch=branch, h=h, width_radicand=coeffs.a2,
                    region=region_classify_fifth(p, mu2, c, branch)))
    logger.info('constraint scan found %d roots over %d speeds', len(roots), len(c_values))
    return roots


# Fifth order, nonzero boundary conditions

def _sys2_terms(gamma, mu2, c, B1, a):
    a0, a1, a2, a3 = a
    return (
        (7.5 * mu2 * a3 * a3, (5.0 * gamma - 1.0 / 12.0) * a3, -0.25),
        (7.5 * mu2 * a2 * a3, (4.0 * gamma - 1.0 / 12.0) * a2, 0.25 * c * a3, 0.75),
        (mu2 * a2 * a2, 4.5 * mu2 * a1 * a3, (3.0 * gamma - 1.0 / 12.0) * a1,
         c * a2 / 6.0, -(c - 1.0)),
        (0.5 * mu2 * a1 * a2, 3.0 * mu2 * a0 * a3, (2.0 * gamma - 1.0 / 12.0) * a0,
         c * a1 / 12.0, -B1),
    )


def _sys2_vector(gamma, mu2, c, B1, a):
    return np.array([math.fsum(row) for row in _sys2_terms(gamma, mu2, c, B1, a)])


def _sys2_jacobian(gamma, mu2, c, a):
    a0, a1, a2, a3 = a
    return np.array([
        [0.0, 0.0, 0.0, 15.0 * mu2 * a3 + 5.0 * gamma - 1.0 / 12.0],
        [0.0, 0.0, 7.5 * mu2 * a3 + 4.0 * gamma - 1.0 / 12.0, 7.5 * mu2 * a2 + 0.25 * c],
        [0.0, 4.5 * mu2 * a3 + 3.0 * gamma - 1.0 / 12.0, 2.0 * mu2 * a2 + c / 6.0, 4.5 * mu2 * a1],
        [3.0 * mu2 * a3 + 2.0 * gamma - 1.0 / 12.0, 0.5 * mu2 * a2 + c / 12.0,
         0.5 * mu2 * a1, 3.0 * mu2 * a0],
    ])


def sys2_residuals(p, ctx, coeffs):
    """Residual of each coefficient equation relative to its largest term, floored at one."""
    mu2 = _mu2_for(p, ctx.c, ctx.mu2)
    out = []
    for row in _sys2_terms(p.gamma, mu2, ctx.c, ctx.B1, coeffs.as_tuple()):
        largest = max(abs(t) for t in row)
        out.append(abs(math.fsum(row)) / max(1.0, largest))
    return np.array(out)


def fifth_order_coeffs_triangular(p, ctx, branch=Branch()):
    """
    Direct solution of the coefficient system.

    The equations are triangular in (a3, a2, a1, a0): a quadratic for a3,
    then one linear equation for each remaining coefficient.
    """
    branch = Branch.coerce(branch)
    mu2 = _mu2_for(p, ctx.c, ctx.mu2)
    gamma, c = p.gamma, ctx.c
    rad3 = (1.0 - 60.0 * gamma) ** 2 + 1080.0 * mu2
    if rad3 < 0.0:
        raise ComplexDiscriminant('Negative a3 radicand %r' % rad3)
    a3 = (1.0 - 60.0 * gamma + branch.a3 * math.sqrt(rad3)) / (180.0 * mu2)

    pivots = (
        7.5 * mu2 * a3 + 4.0 * gamma - 1.0 / 12.0,
        4.5 * mu2 * a3 + 3.0 * gamma - 1.0 / 12.0,
        3.0 * mu2 * a3 + 2.0 * gamma - 1.0 / 12.0,
    )
    if any(piv == 0.0 for piv in pivots):
        raise NoConvergence('Singular pivot in the triangular solve')
    a2 = -(0.25 * c * a3 + 0.75) / pivots[0]
    a1 = (c - 1.0 - mu2 * a2 * a2 - c * a2 / 6.0) / pivots[1]
    a0 = (ctx.B1 - 0.5 * mu2 * a1 * a2 - c * a1 / 12.0) / pivots[2]
    return CubicCoeffs(a0, a1, a2, a3)


def newton_sys2(p, ctx, seed):
    """
    Damped Newton iteration on the four coefficient equations.

    Returns a scipy OptimizeResult with x, fun, jac, nit and success.
    """
    mu2 = _mu2_for(p, ctx.c, ctx.mu2)
    gamma, c, B1 = p.gamma, ctx.c, ctx.B1
    x = np.array(seed.as_tuple(), dtype=float)
    fx = _sys2_vector(gamma, mu2, c, B1, x)
    jx = None
    tol = wave_settings.NEWTON_TOL
    for i in range(wave_settings.NEWTON_MAX_ITER):
        norm = np.max(np.abs(fx))
        logger.debug('newton iteration %d: max residual %.3e', i, norm)
        if norm < tol:
            return OptimizeResult(x=x, fun=fx, jac=jx, nit=i, success=True)
        jx = _sys2_jacobian(gamma, mu2, c, x)
        try:
            step = np.linalg.solve(jx, -fx)
        except np.linalg.LinAlgError:
            return OptimizeResult(x=x, fun=fx, jac=jx, nit=i, success=False)
        t = 1.0
        for _ in range(wave_settings.NEWTON_MAX_HALVINGS):
            cand = x + t * step
            f_cand = _sys2_vector(gamma, mu2, c, B1, cand)
            if np.max(np.abs(f_cand)) < norm:
                break
            t *= 0.5
        else:
            return OptimizeResult(x=x, fun=fx, jac=jx, nit=i, success=False)
        x, fx = cand, f_cand
    return OptimizeResult(x=x, fun=fx, jac=jx, nit=wave_settings.NEWTON_MAX_ITER,
                          success=bool(np.max(np.abs(fx)) < tol))


def fifth_order_coeffs_nonzero_bc(p, ctx, seed):
    result = newton_sys2(p, ctx, seed)
    if not result.success:
        raise NoConvergence('Newton stopped after %d iterations, residual %r'
                            % (result.nit, np.max(np.abs(result.fun))))
    coeffs = CubicCoeffs(*(float(v) for v in result.x))
    if np.max(sys2_residuals(p, ctx, coeffs)) >= 1e-10:
        raise NoConvergence('Converged point fails the relative residual check')
    return coeffs


def fifth_order_weierstrass(p, ctx, branch=Branch(), seed=None):
    if seed is None:
        seed = fifth_order_coeffs_triangular(p, ctx, branch)
    coeffs = fifth_order_coeffs_nonzero_bc(p, ctx, seed)
    return elliptic_transform(coeffs, context=ctx)


# Weierstrass form

def elliptic_transform(coeffs, context=None):
    if coeffs.a3 == 0.0:
        raise DegenerateCubic()
    return TravelingWave(
        family=WaveFamily.WEIERSTRASS,
        coeffs=coeffs,
        invariants=invariants_from_cubic(coeffs),
        context=context,
        offset=-coeffs.a2 / (3.0 * coeffs.a3),
        scale=4.0 / coeffs.a3,
    )


def evaluate_wave(w, xi):
    check_finite(xi)
    if w.family == WaveFamily.SECH2:
        if w.amplitude == 0.0:
            return 0.0
        q = math.exp(-2.0 * abs(w.wavenumber * xi))
        return w.amplitude * 4.0 * q / ((1.0 + q) * (1.0 + q))

    if w.pole_distance(xi) <= wave_settings.SINGULAR_RADIUS * w.length_scale:
        raise SingularPoint('Pole of the %s wave at xi=%r' % (w.family.value, xi))

    if w.family == WaveFamily.TRIG_PERIODIC_UNBOUNDED:
        cosine = math.cos(w.wavenumber * xi)
        return w.amplitude / (cosine * cosine)

    inv = w.invariants
    try:
        if inv.solution_class.is_degenerate:
            p = wp_eval_degenerate(xi, inv.solution_class, inv.repeated_root)
        else:
            period = w.pole_spacing
            if math.isfinite(period):
                xi -= period * round(xi / period)
            p = wp_eval(xi, inv.g2, inv.g3)
    except PoleProximity as exc:
        raise SingularPoint(str(exc)) from exc
    return w.scale * p + w.offset
