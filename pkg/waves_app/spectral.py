"""
Fourier pseudospectral solver for the third- and fifth-order KdV-BBM
equations on a periodic interval.

Both equations are written as  u_t = -i phi(D) u - i psi(D) N(u)  in Fourier
space. The linear part is propagated exactly and the nonlinear part by the
fourth-order exponential Runge-Kutta scheme (ETDRK4). Products are formed on
a zero-padded grid of 2N points and truncated to |k| < N/3, so quadratic and
cubic terms carry no aliasing error.
"""
import enum
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .conf import wave_settings
from .elliptic import check_finite
from .exceptions import BlowUp, ConfigError, InvalidDelta1, InvalidGrid, InvalidNu, WrongRegion
from .families import evaluate_wave
from .oracles import central_weights

logger = logging.getLogger(__name__)


class Equation(str, enum.Enum):
    THIRD = 'third'
    FIFTH = 'fifth'


def check_grid(L, N):
    if not (isinstance(L, (int, float)) and math.isfinite(L) and L > 0.0):
        raise InvalidGrid('Domain length must be positive, got %r' % (L,))
    if int(N) != N or N < 16 or int(N) & (int(N) - 1):
        raise InvalidGrid('N must be a power of two >= 16, got %r' % (N,))


def wavenumbers(L, N):
    return 2.0 * np.pi * np.arange(N // 2 + 1) / L


def dealias_mask(N):
    return 3 * np.arange(N // 2 + 1) < N


@dataclass(frozen=True, eq=False)
class SpectralOperator:
    equation: Equation
    length: float
    modes: int
    wavenumbers: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    denominator: np.ndarray
    dealias: np.ndarray
    nu: float = None
    params: object = None

    @property
    def gamma(self):
        return self.params.gamma if self.params is not None else None


def build_third_order_operator(nu, L, N):
    check_finite(nu)
    if nu >= 1.0 / 6.0:
        raise InvalidNu('nu=%r; the solver needs nu < 1/6' % nu)
    check_grid(L, N)
    xi = wavenumbers(L, N)
    den = (1.0 / 6.0 - nu) * xi ** 2 + 1.0
    return SpectralOperator(
        equation=Equation.THIRD, length=float(L), modes=int(N), wavenumbers=xi,
        phi=xi * (1.0 - nu * xi ** 2) / den, psi=0.75 * xi / den,
        denominator=den, dealias=dealias_mask(N), nu=nu,
    )


def build_fifth_order_operator(p, L, N):
    check_finite(p.gamma, p.delta1, p.delta2)
    if p.delta1 <= 0.0:
        raise InvalidDelta1('delta1=%r; the solver needs delta1 > 0' % p.delta1)
    check_grid(L, N)
    xi = wavenumbers(L, N)
    den = 1.0 + xi ** 2 / 6.0 + p.delta1 * xi ** 4
    return SpectralOperator(
        equation=Equation.FIFTH, length=float(L), modes=int(N), wavenumbers=xi,
        phi=xi * (1.0 + p.delta2 * xi ** 4) / den, psi=xi / den,
        denominator=den, dealias=dealias_mask(N), params=p,
    )


@dataclass(frozen=True, eq=False)
class GridState:
    length: float
    modes: int
    u: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        check_grid(self.length, self.modes)

    @property
    def x(self):
        return grid_points(self.length, self.modes)

    @property
    def spectrum(self):
        return to_spectrum(self.u)

    @property
    def max_abs(self):
        return float(np.max(np.abs(self.u)))


def grid_points(L, N):
    return -0.5 * L + L * np.arange(N) / N


def to_spectrum(u):
    v = np.fft.rfft(u)
    v[-1] = 0.0
    return v


def from_spectrum(v, N):
    return np.fft.irfft(v, n=N)


def reality_residual(state):
    """Imaginary part left by a full complex inverse transform, relative to max|u|."""
    v = np.fft.rfft(state.u)
    full = np.concatenate([v, np.conj(v[-2:0:-1])])
    peak = state.max_abs
    if peak == 0.0:
        return 0.0
    return float(np.max(np.abs(np.fft.ifft(full).imag))) / peak


class _PaddedProducts:
    def __init__(self, N):
        self.N = N
        self.M = 2 * N

    def physical(self, v):
        padded = np.zeros(self.M // 2 + 1, dtype=complex)
        padded[:v.size] = v
        return np.fft.irfft(padded, n=self.M) * (self.M / self.N)

    def spectral(self, f):
        return np.fft.rfft(f)[:self.N // 2 + 1] * (self.N / self.M)


class ExponentialIntegrator:
    """ETDRK4 coefficients for one operator and time step."""

    def __init__(self, op, dt, contour_points=None):
        self.op = op
        self.dt = dt
        self.products = _PaddedProducts(op.modes)
        contour_points = contour_points or wave_settings.CONTOUR_POINTS

        z = -1j * op.phi * dt
        self.exp_full = np.exp(z)
        self.exp_half = np.exp(0.5 * z)
        # Cauchy means over a full circle; z is imaginary so nothing is real-valued here.
        roots = np.exp(2j * np.pi * (np.arange(contour_points) + 0.5) / contour_points)
        lr = z[:, None] + roots[None, :]
        exp_lr = np.exp(lr)
        lr_cub = lr ** 3
        self.coeff_f0 = dt * ((np.exp(0.5 * lr) - 1.0) / lr).mean(axis=1)
        self.coeff_f1 = dt * ((-4.0 - lr + exp_lr * (4.0 - 3.0 * lr + lr ** 2)) / lr_cub).mean(axis=1)
        self.coeff_f2 = dt * ((2.0 + lr + exp_lr * (lr - 2.0)) / lr_cub).mean(axis=1)
        self.coeff_f3 = dt * ((-4.0 - 3.0 * lr - lr ** 2 + exp_lr * (4.0 - lr)) / lr_cub).mean(axis=1)

    def nonlinear(self, v):
        op = self.op
        vd = np.where(op.dealias, v, 0.0)
        u = self.products.physical(vd)
        if op.equation == Equation.THIRD:
            term = self.products.spectral(u * u)
        else:
            ux = self.products.physical(1j * op.wavenumbers * vd)
            u2 = self.products.spectral(u * u)
            term = ((0.75 - op.gamma * op.wavenumbers ** 2) * u2
                    - self.products.spectral(ux * ux) / 12.0
                    - 0.25 * self.products.spectral(u * u * u))
        return np.where(op.dealias, -1j * op.psi * term, 0.0)

    def advance(self, v):
        n_0 = self.nonlinear(v)
        v_1 = self.exp_half * v + self.coeff_f0 * n_0
        n_1 = self.nonlinear(v_1)
        v_2 = self.exp_half * v + self.coeff_f0 * n_1
        n_2 = self.nonlinear(v_2)
        v_3 = self.exp_half * v_1 + self.coeff_f0 * (2.0 * n_2 - n_0)
        n_3 = self.nonlinear(v_3)
        out = (self.exp_full * v + self.coeff_f1 * n_0
               + 2.0 * self.coeff_f2 * (n_1 + n_2) + self.coeff_f3 * n_3)
        out[0] = out[0].real
        out[-1] = 0.0
        return out


@lru_cache(maxsize=32)
def exponential_integrator(op, dt):
    return ExponentialIntegrator(op, dt)


def _guarded_state(v, state, t, current):
    u = from_spectrum(v, state.modes)
    peak = float(np.max(np.abs(u)))
    if not math.isfinite(peak) or peak > wave_settings.BLOWUP_GUARD:
        logger.warning('blow-up at t=%.6g, max|u|=%.3e', t, peak)
        raise BlowUp('max|u| = %.3e exceeds the guard at t = %.6g' % (peak, t),
                     t=t, max_abs=peak, state=current)
    return GridState(state.length, state.modes, u, t)


def step(state, op, dt, equation=None):
    if equation is not None and Equation(equation) != op.equation:
        raise ConfigError('Operator is built for the %s-order equation' % op.equation.value)
    if not dt > 0.0:
        raise ConfigError('Time step must be positive.')
    v = exponential_integrator(op, float(dt)).advance(to_spectrum(state.u))
    return _guarded_state(v, state, state.t + dt, state)


def evolve(state, op, dt, t_end, record_every=1, observer=None):
    """
    Advance ``state`` to ``state.t + t_end`` in equal steps close to ``dt``.

    ``observer(state, n)`` receives the step count and is called at the start,
    every ``record_every`` steps and at the end. BlowUp carries the last
    finite state.
    """
    if not dt > 0.0 or t_end < 0.0:
        raise ConfigError('Need dt > 0 and T >= 0.')
    steps = int(round(t_end / dt)) if t_end > 0.0 else 0
    if t_end > 0.0:
        steps = max(steps, 1)
    dt_eff = t_end / steps if steps else dt
    integrator = exponential_integrator(op, float(dt_eff))
    logger.info('evolving %s-order equation: N=%d, L=%.6g, dt=%.6g, steps=%d',
                op.equation.value, op.modes, op.length, dt_eff, steps)

    current = state
    if observer is not None:
        observer(current, 0)
    v = to_spectrum(state.u)
    for n in range(1, steps + 1):
        v = integrator.advance(v)
        current = _guarded_state(v, state, state.t + n * dt_eff, current)
        if observer is not None and (n % record_every == 0 or n == steps):
            observer(current, n)
    return current


def default_time_step(state, op):
    dx = op.length / op.modes
    rate = float(np.max(np.abs(op.psi))) * state.max_abs
    return wave_settings.CFL * dx / max(1.0, rate)


def default_length(w):
    return wave_settings.DOMAIN_WIDTHS * w.length_scale


def initial_state(w, L, N, shift=0.0):
    x = grid_points(L, N)
    wrapped = np.mod(x - shift + 0.5 * L, L) - 0.5 * L
    u = np.array([evaluate_wave(w, float(s)) for s in wrapped])
    return GridState(float(L), int(N), u, 0.0)


def pulse_state(L, N, amplitude=0.5, width=1.0, skew=0.5):
    """Asymmetric sech^2 pulse; its u_x**3 integral does not vanish."""
    x = grid_points(L, N) / width
    u = amplitude * (1.0 + skew * np.tanh(x)) / np.cosh(x) ** 2
    return GridState(float(L), int(N), u, 0.0)


@dataclass(frozen=True)
class EnergyReport:
    E3: float = None
    E5: float = None
    flux: float = None


def energies(state, nu=None, p=None):
    N, L = state.modes, state.length
    v = to_spectrum(state.u)
    xi = wavenumbers(L, N)
    weights = np.full(v.size, 2.0)
    weights[0] = weights[-1] = 1.0

    def integral_sq(coef):
        return float(L / N ** 2 * np.sum(weights * np.abs(coef) ** 2))

    i0 = integral_sq(v)
    i1 = integral_sq(xi * v)
    e3 = e5 = flux = None
    if nu is not None:
        e3 = 0.5 * (i0 + (1.0 / 6.0 - nu) * i1)
    if p is not None:
        e5 = 0.5 * (i0 + i1 / 6.0 + p.delta1 * integral_sq(xi ** 2 * v))
        ux = from_spectrum(np.where(dealias_mask(N), 1j * xi * v, 0.0), N)
        flux = (p.gamma - 1.0 / 12.0) * L * float(np.mean(ux ** 3))
    return EnergyReport(E3=e3, E5=e5, flux=flux)


def shape_error(state, w):
    """Relative L2 distance to the exact wave translated by c*t (periodic wrap)."""
    exact = initial_state(w, state.length, state.modes, shift=w.context.c * state.t).u
    diff = np.linalg.norm(state.u - exact)
    scale = np.linalg.norm(exact)
    if scale == 0.0:
        return float(diff)
    return float(diff / scale)


def propagate_and_compare(w, op, T, dt):
    if not w.is_bounded:
        raise WrongRegion('Only bounded waves translate rigidly on a periodic grid.')
    state = initial_state(w, op.length, op.modes)
    final = evolve(state, op, dt, T)
    return shape_error(final, w)


def energy_balance_error(times, e5, flux):
    """
    Compare a fourth-order finite-difference dE5/dt with the flux series.

    Samples must be equally spaced. Returns the largest mismatch relative to
    max|flux| (absolute when the flux vanishes).
    """
    times, e5, flux = (np.asarray(a, dtype=float) for a in (times, e5, flux))
    if times.size < 5:
        raise ConfigError('Need at least five samples for the balance check.')
    tau = times[1] - times[0]
    stencil = central_weights(1, 4)
    interior = range(2, times.size - 2)
    rate = np.array([sum(w * e5[i + k] for k, w in stencil) / tau for i in interior])
    mismatch = np.max(np.abs(rate - flux[2:-2]))
    scale = np.max(np.abs(flux))
    return float(mismatch / scale) if scale > 0.0 else float(mismatch)
