'''
The computations behind each subcommand, registered by name.

A runner takes the resolved `RunConfig` and returns a `RunReport`: the result tables, the pass/fail identity checks
and any metadata the run decided on (calibration choices, curve conventions).
'''
from __future__ import annotations

import math
import sys
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from logging import getLogger
from typing import Any

import numpy as np
from tqdm import tqdm

from . import zeta_engine as ze
from .config import RunConfig
from .errors import DomainError, FractalZetaError, TruncationError
from .hyperfunction import Side, bilateral_partial, boundary_value, delta_R, delta_T, geometric_tail_bound, substitute_gamma
from .ifs_measure import build_grid, make_constants
from .sg_decimation import (
    MAX_DIRECT_DIMENSION,
    decimation_spectrum,
    eigensolve_direct,
    forward_decimation_misses,
    infinite_sg_spectrum,
    interior_dimension,
    scaling_closure_residual,
)
from .spectrum import SpectrumList
from .sturm_liouville import (
    GeneratingSet,
    defining_condition_residuals,
    eigenfunction_extend,
    eigensolve_H0_oracle,
    generating_set,
    invariant_curve_residual,
    oracle_eigenfunction,
    phi_convention_residuals,
    rayleigh_quotient,
    self_similar_rescaling_check,
    spectrum_Hn,
)
from .values import Agreement, complex_record

__all__ = (
    'CheckResult',
    'RunReport',
    'get_check',
    'register_check',
    'registered_subcommands',
)

log = getLogger(__name__)

ORACLE_LEVEL = 12
ORACLE_COUNT = 20
EXTENSION_POWER = 1
ANCHOR_ROOTS = 10
DEFINING_ROOTS = 50
CURVE_SAMPLES = 50
CLOSURE_TOLERANCE = 1e-10
DIVERGENCE_MAGNITUDE = 1e6
REFERENCE_ACCURACY = 1e-10
SHIFT_LAW_TOLERANCE = 1e-14
BRANCH_TOLERANCE = 1e-12
SG_RELATIVE_BOUND = 1e-3
BILATERAL_TERMS = 60
BILATERAL_POINTS = (0.3, 0.7, 1.5, 4.0)
INFINITE_SG_SEEDS = (0.75, 1.25)


@dataclass(frozen=True, slots=True)
class CheckResult:
    name: str
    passed: bool
    detail: dict[str, Any] = field(default_factory=dict)

    def record(self) -> dict[str, Any]:
        return {'name': self.name, 'passed': self.passed, **self.detail}


@dataclass(slots=True, kw_only=True)
class RunReport:
    subcommand: str
    tables: dict[str, list[dict[str, Any]]] = field(default_factory=dict)
    checks: list[CheckResult] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)

    def check(self, name: str, passed: bool, **detail: Any) -> bool:  # noqa: FBT001
        passed = bool(passed)
        self.checks.append(CheckResult(name, passed, detail))
        if not passed:
            log.warning('Check failed: %s %s', name, detail)
        return passed

    def agreement(self, name: str, agreement: Agreement, tol: float, **params: Any) -> dict[str, Any]:
        '''Record an agreement as a check and return its table row.'''
        row = agreement.record(tol, **params)
        self.check(name, row['passed'], s=row['s'], residual=row['residual'], bound=row['bound'], tolerance=tol)
        return row

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [check for check in self.checks if not check.passed]


type CheckRunner = Callable[[RunConfig], RunReport]

_registered_checks: dict[str, CheckRunner] = {}


def register_check(subcommand: str) -> Callable[[CheckRunner], CheckRunner]:
    def decorator(fn: CheckRunner) -> CheckRunner:
        if subcommand in _registered_checks:
            log.warning('Replacing already-registered runner for %s', subcommand)
        _registered_checks[subcommand] = fn
        log.debug('Registered runner for %s: %s', subcommand, fn.__name__)
        return fn

    return decorator


def get_check(subcommand: str) -> CheckRunner:
    try:
        return _registered_checks[subcommand]
    except KeyError:
        raise KeyError(f'No runner registered for {subcommand}') from None


def registered_subcommands() -> tuple[str, ...]:
    return tuple(_registered_checks)


def progress[T](items: Sequence[T], desc: str) -> Iterable[T]:
    source = tqdm(
        items,
        desc=desc.ljust(10),
        disable=None,
        file=sys.stdout,
        unit='',
        dynamic_ncols=True,
    )
    if source.disable:
        print(f'  {desc}...')
    return source


def _label(s: complex) -> str:
    '''
    >>> _label(4 + 0j), _label(3 - 1j)
    ('4', '3-1j')
    '''
    z = complex(s)
    return f'{z.real:g}' if z.imag == 0 else f'{z.real:g}{z.imag:+g}j'


def _spectrum_rows(spectrum: SpectrumList, **extra: Any) -> list[dict[str, Any]]:
    return [{**extra, **row} for row in spectrum.rows()]


@register_check('sg-spectrum')
def run_sg_spectrum(config: RunConfig) -> RunReport:
    '''Decimation against the dense oracle, level by level, and the forward check R(λ_{m+1}) ∈ σ_m.'''
    report = RunReport(subcommand=config.subcommand)
    top = config.level or 5
    grouping, tol = config.tol('grouping'), config.tol('decimation')
    rows: list[dict[str, Any]] = []

    for m in progress(range(1, top + 1), 'Levels'):
        decimated = decimation_spectrum(m, verify=False, tol=grouping)
        oracle = eigensolve_direct(m, tol=grouping) if interior_dimension(m) <= MAX_DIRECT_DIMENSION else None
        for i, entry in enumerate(decimated):
            paired = oracle.entries[i] if oracle is not None and i < len(oracle) else None
            rows.append({
                'level': m,
                'decimation_value': entry.value,
                'decimation_multiplicity': entry.multiplicity,
                'oracle_value': None if paired is None else paired.value,
                'oracle_multiplicity': None if paired is None else paired.multiplicity,
            })
        if oracle is None:
            log.info('Level %d exceeds the oracle dimension limit; decimation only', m)
            continue

        offending = decimated.mismatch(oracle, tol)
        report.check(f'decimation-equivalence/{m}', offending is None, level=m,
                     first_mismatch=None if offending is None else offending.value)
        if m > 1:
            misses = forward_decimation_misses(m - 1, tol=tol)
            report.check(f'forward-decimation/{m}', not misses, level=m, misses=misses[:10])

    report.tables['spectrum'] = rows
    return report


@register_check('sg-zeta')
def run_sg_zeta(config: RunConfig) -> RunReport:
    '''The gasket zeta function as a direct sum over renormalized eigenvalues and through the birth-table factorization.'''
    report = RunReport(subcommand=config.subcommand)
    level = config.level or 8
    tol = config.tol('zeta')

    calibration = ze.calibrate_sg_zeta(level=level)
    report.metadata['calibration'] = calibration.record()

    rows = []
    for s in progress(config.s, 's-grid'):
        agreement = ze.sg_zeta_check(s, calibration, level)
        row = report.agreement(f'sg-zeta/{_label(s)}', agreement, tol, level=level)
        row['relative_bound'] = agreement.bound / abs(agreement.right)
        rows.append(row)
        if complex(s) == 4:
            report.check('sg-zeta-bound/4', row['relative_bound'] < SG_RELATIVE_BOUND,
                         relative_bound=row['relative_bound'])
    report.tables['sums'] = rows
    return report


def _bilateral_row(w: complex, terms: int, tol: float, report: RunReport, name: str, **extra: Any) -> dict[str, Any]:
    side = Side.Inside if abs(w) < 1 else Side.Outside
    hyper = delta_T()
    limit = hyper.upper(w) if side is Side.Inside else hyper.lower(w)
    partial_sum = bilateral_partial(w, terms, side)
    bound = geometric_tail_bound(w, terms, side)
    residual = abs(partial_sum - limit)
    passed = report.check(name, residual <= bound + tol, residual=residual, bound=bound)
    return {
        **extra,
        'w': complex_record(w),
        'side': str(side),
        'partial_sum': complex_record(partial_sum),
        'limit': complex_record(limit),
        'residual': residual,
        'bound': bound,
        'passed': passed,
    }


@register_check('sg-infinite')
def run_sg_infinite(config: RunConfig) -> RunReport:
    '''A scale window of the infinite gasket spectrum, its 5-scaling closure, and the δ_T factor on both half-planes.'''
    report = RunReport(subcommand=config.subcommand)
    reach = config.level or 3
    j_max = config.terms or 4
    tol = config.tol('zeta')

    spectrum_rows: list[dict[str, Any]] = []
    for z0 in INFINITE_SG_SEEDS:
        window = infinite_sg_spectrum(-reach, reach, j_max, z0)
        spectrum_rows.extend(_spectrum_rows(window, z0=z0))
        residual = scaling_closure_residual(-reach, reach, j_max, z0)
        report.check(f'scaling-closure/{z0}', residual <= CLOSURE_TOLERANCE, z0=z0, residual=residual)
    report.tables['spectrum'] = spectrum_rows

    calibration = ze.calibrate_sg_zeta()
    report.metadata['calibration'] = calibration.record()
    factor_rows = []
    for s in progress(config.s, 's-grid'):
        value = ze.infinite_sg_zeta(s, calibration.table)
        row = value.record('infinite-sg', table=calibration.table.name)
        w = 5 ** (-complex(s) / 2)
        series = _bilateral_row(w, BILATERAL_TERMS, tol, report, f'infinite-sg-factor/{_label(s)}')
        factor_rows.append({**row, 'series_partial_sum': series['partial_sum'], 'series_bound': series['bound']})
    report.tables['factors'] = factor_rows
    return report


def _sl_setup(config: RunConfig, default_terms: int) -> GeneratingSet:
    c = make_constants(config.alpha)
    return generating_set(config.terms or default_terms, c, config.level or 14)


@register_check('sl-spectrum')
def run_sl_spectrum(config: RunConfig) -> RunReport:
    '''The generating set, the spectra of H_<n> built from it, and the checks against the finite-element oracle.'''
    report = RunReport(subcommand=config.subcommand)
    S = _sl_setup(config, 200)  # noqa: N806
    c = S.constants
    gamma = float(c.gamma)
    report.metadata['generating_set'] = {'count': S.count, 'level': S.level, 'scan_bound': S.scan_bound}
    report.tables['generating_set'] = [{'index': k, 'lambda': v} for k, v in enumerate(S.values.tolist(), start=1)]

    if float(c.alpha) == 0.5:
        count = min(ANCHOR_ROOTS, S.count)
        expected = np.pi**2 * (2 * np.arange(1, count + 1) - 1) ** 2
        error = float(np.max(np.abs(S.values[:count] - expected) / expected))
        report.check('odd-squares', error < config.tol('root'), roots=count, relative_error=error)

    grid = build_grid(ORACLE_LEVEL, c)
    oracle = eigensolve_H0_oracle(ORACLE_COUNT, grid)
    report.check('oracle-simple-positive', bool(np.all(oracle.multiplicities == 1) and np.all(oracle.values > 0)),
                 level=ORACLE_LEVEL, count=len(oracle))
    layers = math.ceil(math.log(S.values[-1] / S.values[0]) / math.log(gamma)) + 1
    union = spectrum_Hn(0, (0, layers), S).values
    union = union[union <= S.values[-1]][:ORACLE_COUNT]
    count = min(len(union), len(oracle))
    relative = np.abs(oracle.values[:count] - union[:count]) / union[:count]
    report.check('oracle-union', float(np.max(relative)) < config.tol('oracle'), compared=count,
                 max_relative_error=float(np.max(relative)))
    report.tables['oracle'] = [
        {'index': k, 'oracle': o, 'renormalized': u, 'relative_error': r}
        for k, (o, u, r) in enumerate(zip(oracle.values.tolist(), union.tolist(), relative.tolist(), strict=False), 1)
    ]

    report.tables['h1'] = _spectrum_rows(spectrum_Hn(1, (-1, 2), S.first(min(S.count, 50))), n=1)

    samples = np.linspace(0, 50, CURVE_SAMPLES)
    curve = invariant_curve_residual(samples, c, config.level or 14)
    report.check('invariant-curve', float(np.max(curve)) < config.tol('curve'), max_residual=float(np.max(curve)))
    report.tables['curve'] = [{'lambda': lam, 'residual': r} for lam, r in zip(samples.tolist(), curve.tolist(),
                                                                               strict=True)]
    report.metadata['curve_conventions'] = {str(k): v for k, v in phi_convention_residuals(c).items()}

    defining = defining_condition_residuals(S.first(min(S.count, DEFINING_ROOTS)))
    worst = defining.max(axis=1).tolist()
    report.check('defining-condition', max(worst) < config.tol('curve'), per_p=worst)

    eigenvalue, f = oracle_eigenfunction(0, grid)
    extended = rayleigh_quotient(eigenfunction_extend(f, EXTENSION_POWER, c))
    stretched_grid = build_grid(ORACLE_LEVEL + EXTENSION_POWER, c).blow_up(EXTENSION_POWER, c)
    stretched = float(eigensolve_H0_oracle(1, stretched_grid).values[0])
    extension_error = abs(extended - stretched) / stretched
    report.check('eigenfunction-extension', extension_error < config.tol('oracle'), eigenvalue=eigenvalue,
                 extended=extended, stretched_oracle=stretched, renormalized=float(gamma**-EXTENSION_POWER * S.values[0]),
                 relative_error=extension_error)
    report.metadata['rescaling_residual'] = self_similar_rescaling_check(S.values[0], 1, c, ORACLE_LEVEL)
    return report


@register_check('sl-zeta')
def run_sl_zeta(config: RunConfig) -> RunReport:
    '''
    ζ_S, ζ_ρ and ζ of H_<n> and of the half-line operator: closed forms against double sums.

    An s at which a series cannot be summed (at or left of its abscissa) is recorded as a failed check and the
    remaining grid points are still evaluated.
    '''
    report = RunReport(subcommand=config.subcommand)
    S = _sl_setup(config, 2000)  # noqa: N806

    rows: list[dict[str, Any]] = []
    for s in progress(config.s, 's-grid'):
        try:
            _sl_zeta_at(report, rows, S, s, config)
        except (DomainError, TruncationError) as e:
            log.warning('Zeta functions cannot be evaluated at s=%s: %s', s, e)
            report.check(f'convergence/{_label(s)}', False, error=str(e))

    report.tables['zeta'] = rows
    return report


def _sl_zeta_at(report: RunReport, rows: list[dict[str, Any]], S: GeneratingSet, s: complex,  # noqa: N803
                config: RunConfig) -> None:
    gamma = float(S.constants.gamma)
    tol = config.tol('zeta')
    half_line = ze.zeta_Hinf(S, s)
    rows.append(half_line.record('zeta-H-inf', alpha=config.alpha))
    if s.real <= 0:
        return

    rows.append(ze.zeta_S(S, s).record('zeta-S', alpha=config.alpha))
    rho = ze.zeta_rho(S, s)
    rows.append(rho.record('zeta-rho', alpha=config.alpha))
    for n in (0, 1):
        closed = ze.zeta_Hn_closed(S, n, s)
        direct = ze.zeta_Hn_direct(S, n, s)
        agreement = Agreement(obj=f'zeta-H{n}', s=s, left=direct.best, right=closed.best,
                              bound=direct.tail_estimate + closed.tail_estimate)
        report.agreement(f'zeta-H{n}/{_label(s)}', agreement, tol, alpha=config.alpha)
        rows.append(closed.record(f'zeta-H{n}', alpha=config.alpha))
        rows.append(direct.record(f'zeta-H{n}', alpha=config.alpha))

    shifted = ze.zeta_Hn_closed(S, 1, s).value
    expected = complex(gamma) ** (s / 2) * ze.zeta_Hn_closed(S, 0, s).value
    report.check(f'spectral-shift/{_label(s)}', abs(shifted - expected) <= SHIFT_LAW_TOLERANCE * abs(expected),
                 difference=abs(shifted - expected))
    assert half_line.value is not None
    report.check(f'half-line-branch/{_label(s)}', abs(half_line.value - rho.best) <= BRANCH_TOLERANCE * abs(rho.best),
                 difference=abs(half_line.value - rho.best))


@register_check('riemann-check')
def run_riemann_check(config: RunConfig) -> RunReport:
    '''π^s·ζ_ρ(s) at α = 1/2 against Riemann's zeta, with the polynomial route as an extra column.'''
    report = RunReport(subcommand=config.subcommand)
    S = _sl_setup(config, 2000)  # noqa: N806

    rows = []
    for s in progress(config.s, 's-grid'):
        reference = ze.riemann_reference(s)
        independent = ze.riemann_mpmath(s)
        report.check(f'reference/{_label(s)}', abs(reference - independent) < REFERENCE_ACCURACY,
                     difference=abs(reference - independent))
        residual = ze.riemann_identity_check(S, s)
        tolerance = config.riemann_tolerance(s)
        passed = report.check(f'riemann-identity/{_label(s)}', residual < tolerance, residual=residual, tolerance=tolerance)
        try:
            polynomial: complex | None = ze.riemann_via_polynomial(s).best
        except FractalZetaError as e:
            log.warning('Polynomial route unavailable at s=%s: %s', s, e)
            polynomial = None
        rows.append({
            's': complex_record(s),
            'reference': complex_record(reference),
            'mpmath': complex_record(independent),
            'renormalized': complex_record(math.pi ** complex(s) * ze.zeta_rho(S, s).best),
            'residual': residual,
            'tolerance': tolerance,
            'passed': passed,
            'polynomial': complex_record(polynomial),
            'polynomial_residual': None if polynomial is None else abs(polynomial - reference),
        })
    report.tables['residuals'] = rows
    return report


@register_check('string-zeta')
def run_string_zeta(config: RunConfig) -> RunReport:
    '''Fractal string spectra against π^(-s)·ζ(s)·ζ_𝓛(s), for the unit interval and the Cantor string.'''
    report = RunReport(subcommand=config.subcommand)
    depth = config.level or 30
    terms = config.terms or 2000
    tol = config.tol('zeta')

    interval = ze.string_spectrum([1.0], (math.pi * (terms + 0.5)) ** 2)
    rows = []
    for s in progress(config.s, 's-grid'):
        rows.append(report.agreement(f'unit-interval/{_label(s)}', ze.string_factorization(interval, [1.0], s), tol))

        cantor = ze.cantor_string_zeta(s, depth, terms)
        agreement = Agreement(obj='cantor-string', s=complex(s), left=cantor.best, right=ze.cantor_string_closed(s),
                              bound=cantor.tail_estimate)
        rows.append(report.agreement(f'cantor-string/{_label(s)}', agreement, tol, depth=depth, terms=terms))
        if complex(s) == 2:
            report.check('cantor-string-bound/2', cantor.tail_estimate < config.tol('string'),
                         tail_estimate=cantor.tail_estimate)
    report.tables['strings'] = rows
    return report


@register_check('hyperfunction-demo')
def run_hyperfunction_demo(config: RunConfig) -> RunReport:
    '''Partial sums of Σ_p w^p on both sides of the unit circle, and δ_T at w = 5^(-s/2).'''
    report = RunReport(subcommand=config.subcommand)
    terms = config.terms or 60
    tol = config.tol('zeta')

    rows = []
    for w in BILATERAL_POINTS:
        row = _bilateral_row(w, terms, tol, report, f'bilateral/{w}')
        wrong_side = Side.Outside if row['side'] == str(Side.Inside) else Side.Inside
        magnitude = abs(bilateral_partial(w, terms, wrong_side))
        row['mismatched_magnitude'] = magnitude
        report.check(f'bilateral-diverges/{w}', magnitude > DIVERGENCE_MAGNITUDE, magnitude=magnitude)
        rows.append(row)
    report.tables['bilateral'] = rows

    factor_rows = []
    for s in progress(config.s, 's-grid'):
        w = 5 ** (-complex(s) / 2)
        row = _bilateral_row(w, terms, tol, report, f'delta-T/{_label(s)}', s=complex_record(s))
        row['factor'] = complex_record(substitute_gamma(delta_T(), 5, s))
        factor_rows.append(row)
    report.tables['factors'] = factor_rows

    report.tables['delta_r'] = [
        {'x': x, 'eps': eps, 'boundary_value': boundary_value(delta_R(), x, eps),
         'poisson_kernel': eps / (math.pi * (x * x + eps * eps))}
        for x in (0.0, 0.5) for eps in (0.1, 0.01, 0.001)
    ]
    return report
