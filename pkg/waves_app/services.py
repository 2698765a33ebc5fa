"""
Run services behind the management commands and the API views.

Each ``run_*`` function takes a validated run configuration (the
``validated_data`` of RunConfigSerializer) and returns tables or report
payloads; writing them out is left to the caller.
"""
import dataclasses
import logging
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import BlowUp, ComplexDiscriminant, ConfigError, DegenerateMu, SingularPoint, WaveError
from .families import (
    ALL_BRANCHES,
    Branch,
    FifthOrderParams,
    RegionTag,
    Sign,
    ThirdOrderParams,
    WaveContext,
    WaveFamily,
    evaluate_wave,
    fifth_order_coeffs_zero_bc,
    fifth_order_periodic,
    fifth_order_soliton,
    fifth_order_weierstrass,
    region_classify_fifth,
    region_classify_third,
    scan_constraint_roots,
    solve_constraint_mu2,
    sys2_residuals,
    third_order_periodic,
    third_order_soliton,
    third_order_weierstrass,
)
from .oracles import default_samples, residual_elliptic, residual_fifth_order, residual_third_order
from .output import Table
from .serializers import ResidualReportSerializer, TravelingWaveSerializer
from .spectral import (
    Equation,
    GridState,
    build_fifth_order_operator,
    build_third_order_operator,
    default_length,
    default_time_step,
    energies,
    evolve,
    initial_state,
    pulse_state,
    shape_error,
)

logger = logging.getLogger(__name__)

ELLIPTIC_TOLERANCE = 1e-6
ODE_TOLERANCE = {Equation.THIRD: 1e-6, Equation.FIFTH: 1e-5}
SYS2_TOLERANCE = 1e-10


@dataclass
class WaveBuild:
    wave: object
    equation: Equation
    nu: float = None
    params: FifthOrderParams = None
    branch: Branch = None


@dataclass
class SimulationResult:
    diagnostics: Table
    snapshots: Table
    final: GridState
    blowup: BlowUp = None


def branch_from(cfg):
    a3 = cfg.get('a3_branch') or cfg['branch']
    return Branch(Sign.parse(cfg['branch']), Sign.parse(a3))


def fifth_params(cfg, branch=None):
    """Model parameters, moved onto mu2 when mu2 or a mu2 bracket is given."""
    base = FifthOrderParams(gamma=cfg['gamma'], delta1=cfg['delta1'], delta2=cfg['delta2'])
    c = cfg['c']
    if cfg.get('mu2_bracket'):
        mu2 = solve_constraint_mu2(base, c, branch or branch_from(cfg), cfg['mu2_bracket'])
    elif cfg.get('mu2') is not None:
        mu2 = cfg['mu2']
    else:
        return base
    return FifthOrderParams.on_curve(cfg['gamma'], mu2, c, cfg['delta1'])


def _axis(lo, hi, steps, point):
    if steps == 1:
        return [float(point)]
    return [float(v) for v in np.linspace(lo, hi, steps)]


def build_wave(cfg):
    c, family = cfg['c'], cfg['family']
    if cfg['equation'] == Equation.THIRD.value:
        p = ThirdOrderParams(nu=cfg['nu'])
        zero_bc = cfg['a0'] == 0.0 and cfg['a1'] == 0.0
        if family == 'auto':
            if not zero_bc:
                family = 'weierstrass'
            elif region_classify_third(c, p.nu) == RegionTag.UNBOUNDED:
                family = 'periodic'
            else:
                family = 'soliton'
        if family != 'weierstrass' and not zero_bc:
            raise ConfigError('The %s family needs A0 = A1 = 0.' % family)
        if family == 'soliton':
            wave = third_order_soliton(p, c)
        elif family == 'periodic':
            wave = third_order_periodic(p, c)
        else:
            wave = third_order_weierstrass(p, WaveContext.third_order(p, c, cfg['a0'], cfg['a1']))
        return WaveBuild(wave=wave, equation=Equation.THIRD, nu=p.nu)

    branch = branch_from(cfg)
    p = fifth_params(cfg, branch)
    mu2 = p.mu2(c)
    zero_bc = cfg['b1'] == 0.0
    if family == 'auto':
        if not zero_bc:
            family = 'weierstrass'
        elif region_classify_fifth(p, mu2, c, branch) == RegionTag.UNBOUNDED:
            family = 'periodic'
        else:
            family = 'soliton'
    if family != 'weierstrass' and not zero_bc:
        raise ConfigError('The %s family needs B1 = 0.' % family)
    if family == 'soliton':
        wave = fifth_order_soliton(p, mu2, c, branch)
    elif family == 'periodic':
        wave = fifth_order_periodic(p, mu2, c, branch)
    else:
        wave = fifth_order_weierstrass(p, WaveContext.fifth_order(p, c, cfg['b1'], mu2), branch)
    return WaveBuild(wave=wave, equation=Equation.FIFTH, params=p, branch=branch)


def model_metadata(cfg, build=None):
    meta = {'command': cfg['command'], 'equation': cfg['equation']}
    if cfg['equation'] == Equation.THIRD.value:
        meta['nu'] = cfg['nu']
    else:
        p = build.params if build is not None else fifth_params(cfg)
        meta.update(gamma=p.gamma, delta1=p.delta1, delta2=p.delta2)
        if build is not None:
            meta['mu2'] = p.mu2(build.wave.context.c)
            meta['branch'] = build.branch.label
    return meta


def wave_metadata(build):
    w = build.wave
    ctx = w.context
    data = TravelingWaveSerializer(w).data
    data['context'] = {'c': ctx.c, 'A0': ctx.A0, 'A1': ctx.A1, 'B1': ctx.B1}
    return data


def run_classify(cfg):
    c_values = _axis(cfg['c_min'], cfg['c_max'], cfg['c_steps'], cfg['c'])
    if cfg['equation'] == Equation.THIRD.value:
        nu_values = _axis(cfg['nu_min'], cfg['nu_max'], cfg['nu_steps'], cfg['nu'])
        table = Table(columns=('c', 'nu', 'mu1', 'region'))
        for c in c_values:
            for nu in nu_values:
                table.append(c, nu, ThirdOrderParams(nu).mu1(c), region_classify_third(c, nu))
        table.metadata = {'command': 'classify', 'equation': 'third',
                          'c_values': len(c_values), 'nu_values': len(nu_values)}
        return table

    p = FifthOrderParams(gamma=cfg['gamma'], delta1=cfg['delta1'], delta2=cfg['delta2'])
    branch = branch_from(cfg)
    mu2_values = [float(v) for v in np.linspace(cfg['mu2_min'], cfg['mu2_max'], cfg['mu2_steps'])]
    table = Table(columns=('c', 'mu2', 'h', 'width_radicand', 'region'))
    for c in c_values:
        for mu2 in mu2_values:
            try:
                coeffs, h = fifth_order_coeffs_zero_bc(p, c, branch, mu2=mu2)
            except ComplexDiscriminant:
                table.append(c, mu2, None, None, 'complex')
                continue
            except DegenerateMu:
                table.append(c, mu2, None, None, 'degenerate')
                continue
            table.append(c, mu2, h, coeffs.a2, region_classify_fifth(p, mu2, c, branch))
    table.metadata = {'command': 'classify', 'equation': 'fifth', 'gamma': p.gamma,
                      'branch': branch.label, 'c_values': len(c_values),
                      'mu2_values': len(mu2_values)}
    return table


def run_solve(cfg):
    build = build_wave(cfg)
    w = build.wave
    half = 10.0 * w.length_scale
    lo = cfg['xi_min'] if cfg['xi_min'] is not None else -half
    hi = cfg['xi_max'] if cfg['xi_max'] is not None else half
    if lo >= hi:
        raise ConfigError('Empty profile window [%r, %r].' % (lo, hi))

    table = Table(columns=('xi', 'u'))
    masked = 0
    for xi in np.linspace(lo, hi, cfg['samples']):
        xi = float(xi)
        try:
            table.append(xi, evaluate_wave(w, xi))
        except SingularPoint:
            table.append(xi, None)
            masked += 1
    table.metadata = model_metadata(cfg, build)
    table.metadata.update(wave_metadata(build))
    table.metadata.update(xi_min=lo, xi_max=hi, samples=cfg['samples'], masked=masked,
                          poles=w.poles_in(lo, hi))
    logger.info('solve: %s wave, %d samples, %d masked', w.family.value, cfg['samples'], masked)
    return table, build


def _report_payload(report, tolerance):
    data = dict(ResidualReportSerializer(report).data)
    data['threshold'] = tolerance
    data['passed'] = report.passes(tolerance)
    return data


def run_verify(cfg):
    build = build_wave(cfg)
    w = build.wave
    if cfg['corrupt_a2']:
        w = dataclasses.replace(w, coeffs=w.coeffs.replace(a2=w.coeffs.a2 + cfg['corrupt_a2']))
    xis = default_samples(w, cfg['checks'])

    elliptic = residual_elliptic(w, xis)
    if build.equation == Equation.THIRD:
        ode = residual_third_order(w, build.nu, w.context, xis)
    else:
        ode = residual_fifth_order(w, build.params, w.context, xis)

    metadata = model_metadata(cfg, build)
    metadata['corrupt_a2'] = cfg['corrupt_a2']
    payload = {
        'metadata': metadata,
        'wave': wave_metadata(dataclasses.replace(build, wave=w)),
        'elliptic': _report_payload(elliptic, ELLIPTIC_TOLERANCE),
        'ode': _report_payload(ode, ODE_TOLERANCE[build.equation]),
    }
    if build.equation == Equation.FIFTH:
        residuals = [float(r) for r in sys2_residuals(build.params, w.context, w.coeffs)]
        payload['coefficient_system'] = {
            'residuals': residuals,
            'threshold': SYS2_TOLERANCE,
            'passed': max(residuals) < SYS2_TOLERANCE,
        }
    checks = [payload[k]['passed'] for k in ('elliptic', 'ode', 'coefficient_system') if k in payload]
    payload['passed'] = all(checks)
    logger.info('verify: %s wave, passed=%s', w.family.value, payload['passed'])
    return payload


def _initial(cfg, equation):
    """Initial state, the wave build it came from (if any) and the model parameters."""
    L, N = cfg['L'], cfg['N']
    if cfg['initial'] == 'wave':
        build = build_wave(cfg)
        w = build.wave
        if not w.is_bounded and not cfg['allow_unbounded']:
            raise ConfigError('The %s wave is unbounded; pass --allow-unbounded to simulate it.'
                              % w.family.value)
        if w.family == WaveFamily.TRIG_PERIODIC_UNBOUNDED:
            period = math.pi / w.wavenumber
            L = L or period * max(1, round(default_length(w) / period))
        L = L or default_length(w)
        # Unbounded profiles are sampled half a cell off the grid so no node sits on a pole.
        shift = 0.0 if w.is_bounded else 0.5 * L / N
        return initial_state(w, L, N, shift=shift), build, build.nu, build.params

    nu = cfg['nu'] if equation == Equation.THIRD else None
    p = fifth_params(cfg) if equation == Equation.FIFTH else None
    L = L or 40.0
    if cfg['initial'] == 'zero':
        return GridState(float(L), int(N), np.zeros(N), 0.0), None, nu, p
    return pulse_state(L, N, amplitude=cfg['amplitude'], width=cfg['width']), None, nu, p


def run_simulate(cfg):
    equation = Equation(cfg['equation'])
    state, build, nu, p = _initial(cfg, equation)
    w = build.wave if build is not None else None
    if equation == Equation.THIRD:
        op = build_third_order_operator(nu, state.length, state.modes)
    else:
        op = build_fifth_order_operator(p, state.length, state.modes)
    dt = cfg['dt'] or default_time_step(state, op)

    track_shape = w is not None and w.is_bounded
    columns = ['t', 'E3', 'E5', 'flux', 'max_abs']
    if track_shape:
        columns.append('shape_error')
    diagnostics = Table(columns=tuple(columns))
    snapshots = Table(columns=('t', 'x', 'u'))
    x = state.x
    seen = {'diag': None, 'snap': None}

    def diag(s):
        report = energies(s, nu=nu, p=p)
        row = [s.t, report.E3, report.E5, report.flux, s.max_abs]
        if track_shape:
            row.append(shape_error(s, w))
        diagnostics.append(*row)
        seen['diag'] = s.t

    def snap(s):
        for xj, uj in zip(x, s.u):
            snapshots.append(s.t, float(xj), float(uj))
        seen['snap'] = s.t

    def observe(s, n):
        if n % cfg['record_every'] == 0:
            diag(s)
        if n % cfg['snapshot_every'] == 0:
            snap(s)

    blowup = None
    every = math.gcd(cfg['record_every'], cfg['snapshot_every'])
    try:
        final = evolve(state, op, dt, cfg['T'], record_every=every, observer=observe)
    except BlowUp as exc:
        blowup, final = exc, exc.state
    if seen['diag'] != final.t:
        diag(final)
    if seen['snap'] != final.t:
        snap(final)

    metadata = model_metadata(cfg, build)
    metadata.update(initial=cfg['initial'], L=state.length, N=state.modes, dt=dt, T=cfg['T'])
    if w is not None:
        metadata['family'] = w.family.value
        metadata['c'] = w.context.c
    metadata['status'] = 'blowup' if blowup is not None else 'ok'
    if blowup is not None:
        metadata['blowup_t'] = blowup.t
    diagnostics.metadata = dict(metadata)
    snapshots.metadata = dict(metadata)
    logger.info('simulate: %s-order run finished at t=%.6g (%s)',
                equation.value, final.t, metadata['status'])
    return SimulationResult(diagnostics=diagnostics, snapshots=snapshots, final=final, blowup=blowup)


def run_sweep(cfg):
    c_values = _axis(cfg['c_min'], cfg['c_max'], cfg['c_steps'], cfg['c'])
    if cfg['equation'] == Equation.FIFTH.value:
        p = FifthOrderParams(gamma=cfg['gamma'], delta1=cfg['delta1'], delta2=cfg['delta2'])
        roots = scan_constraint_roots(p, c_values, ALL_BRANCHES,
                                      (cfg['mu2_min'], cfg['mu2_max']), cfg['mu2_steps'])
        table = Table(columns=('c', 'branch', 'mu2', 'h', 'width_radicand', 'region', 'family'))
        for root in roots:
            table.append(root.c, root.branch.label, root.mu2, root.h, root.width_radicand,
                         root.region, root.family)
        unbounded = sum(1 for r in roots if r.region == RegionTag.UNBOUNDED)
        table.metadata = {'command': 'sweep', 'equation': 'fifth', 'gamma': p.gamma,
                          'mu2_min': cfg['mu2_min'], 'mu2_max': cfg['mu2_max'],
                          'mu2_steps': cfg['mu2_steps'], 'c_values': len(c_values),
                          'roots': len(roots), 'unbounded': unbounded}
        return table

    nu_values = _axis(cfg['nu_min'], cfg['nu_max'], cfg['nu_steps'], cfg['nu'])
    table = Table(columns=('c', 'nu', 'region', 'family', 'amplitude', 'wavenumber', 'error'))
    for c in c_values:
        for nu in nu_values:
            region = region_classify_third(c, nu)
            p = ThirdOrderParams(nu)
            try:
                if region == RegionTag.UNBOUNDED:
                    w = third_order_periodic(p, c)
                else:
                    w = third_order_soliton(p, c)
            except WaveError as exc:
                table.append(c, nu, region, None, None, None, exc.code)
                continue
            table.append(c, nu, region, w.family, w.amplitude, w.wavenumber, None)
    table.metadata = {'command': 'sweep', 'equation': 'third',
                      'c_values': len(c_values), 'nu_values': len(nu_values)}
    return table
