'''
Spectral zeta functions, their closed forms and factorizations, and the identity checks between them.

Direct sums report the partial sum as `value`, an integral-comparison or geometric estimate of the remainder as
`tail_estimate`, and the partial sum plus the signed remainder as `extrapolated`.
'''
from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field
from functools import cache, partial
from logging import getLogger
from typing import TYPE_CHECKING

import mpmath
import numpy as np
from scipy.special import bernoulli

from . import poly_zeta
from .errors import DomainError, ParameterError, PoleError, TruncationError
from .hyperfunction import HalfPlaneFactorization, HalfPlaneValue, delta_T
from .poly_zeta import INTERVAL_POLY, SG_POLY
from .sg_decimation import renormalized_spectrum
from .spectrum import Provenance, SpectrumList
from .values import Agreement, ZetaMethod, ZetaValue

if TYPE_CHECKING:
    import numpy.typing as npt

    from .sturm_liouville import GeneratingSet

__all__ = (
    'DIRICHLET',
    'STATED',
    'BirthTable',
    'BirthTerm',
    'SGCalibration',
    'calibrate_sg_zeta',
    'cantor_geometric_zeta',
    'cantor_string_closed',
    'cantor_string_lengths',
    'cantor_string_zeta',
    'geometric_factor',
    'infinite_sg_zeta',
    'riemann_identity_check',
    'riemann_mpmath',
    'riemann_reference',
    'riemann_via_polynomial',
    'sg_zeta_check',
    'sg_zeta_direct',
    'sg_zeta_factorized',
    'string_factorization',
    'string_spectrum',
    'zeta_Hinf',
    'zeta_Hn_closed',
    'zeta_Hn_direct',
    'zeta_S',
    'zeta_rho',
    'zeta_spectral',
)

log = getLogger(__name__)

MIN_FIT_TERMS = 20
POLE_DISTANCE = 1e-12
SG_ABSCISSA = math.log(9) / math.log(5)
EM_TERMS = 10
EM_CUTOFF = 10


def _power(values: npt.NDArray[np.float64], s: complex) -> npt.NDArray[np.complex128]:
    return np.power(values.astype(complex), -complex(s) / 2)


def _fitted_tail(kappa: npt.NDArray[np.float64], s: complex) -> complex:
    '''
    Signed remainder Σ_{j>N} κ_j^(-s/2) under κ_j ≈ C·j^p, fitted on the last decade of terms.
    '''
    count = len(kappa)
    j = np.arange(1, count + 1)
    window = slice(max(0, count // 10 - 1), count)
    p, log_c = np.polyfit(np.log(j[window]), np.log(kappa[window]), 1)
    exponent = p * complex(s) / 2
    if exponent.real <= 1:
        raise TruncationError(f'Tail bound diverges at s={s}: fitted growth exponent {p:.4g} gives Re(ps/2) <= 1')
    log.debug('Fitted growth kappa_j ~ %.4g j^%.4f over %d terms', math.exp(log_c), p, count)
    return complex(np.exp(-complex(s) / 2 * log_c) * (count + 0.5) ** (1 - exponent) / (exponent - 1))


def _direct_sum(kappa: npt.NDArray[np.float64], s: complex, *, require_tail: bool) -> ZetaValue:
    if len(kappa) and np.min(kappa) <= 0:
        raise ParameterError('eigenvalue', float(np.min(kappa)), 'eigenvalues > 0')
    partial_sum = complex(np.sum(_power(kappa, s)))
    if len(kappa) >= MIN_FIT_TERMS:
        tail = _fitted_tail(kappa, s)
    elif require_tail:
        raise TruncationError(f'{len(kappa)} terms are too few to fit a tail (need {MIN_FIT_TERMS})')
    else:
        tail = 0j
    return ZetaValue(s=complex(s), value=partial_sum, terms_used=len(kappa), tail_estimate=abs(tail),
                     method=ZetaMethod.DirectSum, extrapolated=partial_sum + tail)


def zeta_spectral(spec: SpectrumList, s: complex, cutoff: int | None = None) -> ZetaValue:
    '''
    Σ κ^(-s/2) over the spectrum with multiplicities, optionally over the first `cutoff` eigenvalues only.

    Doctests:
    >>> from fractal_zeta.spectrum import Provenance, SpectrumEntry, SpectrumList
    >>> single = SpectrumList(entries=(SpectrumEntry(4.0, 1),), provenance=Provenance.Analytic)
    >>> abs(zeta_spectral(single, 2).value - 0.25) < 1e-15
    True
    >>> one = SpectrumList(entries=(SpectrumEntry(9.0, 2),), provenance=Provenance.Analytic)
    >>> abs(zeta_spectral(one, 2).value - 2 / 9) < 1e-15
    True
    '''
    kappa = spec.expanded()
    if cutoff is not None:
        kappa = kappa[:cutoff]
    return _direct_sum(kappa, s, require_tail=False)


def zeta_S(S: GeneratingSet, s: complex) -> ZetaValue:  # noqa: N802, N803
    '''Geometric zeta function Σ λ^(-s/2) of the generating set.'''
    return _direct_sum(S.values, s, require_tail=True)


def geometric_factor(gamma: float, s: complex) -> complex:
    '''
    1/(1 - γ^(-s/2)).

    Doctests:
    >>> geometric_factor(4, 2)
    (1.3333333333333333+0j)
    '''
    w = complex(gamma) ** (-complex(s) / 2)
    if abs(1 - w) < POLE_DISTANCE:
        raise PoleError('1/(1 - gamma^(-s/2))', s)
    return 1 / (1 - w)


def zeta_rho(S: GeneratingSet, s: complex) -> ZetaValue:  # noqa: N803
    '''Zeta function of the renormalization map, in closed form (1 - γ^(-s/2))^-1·ζ_S(s).'''
    factor = geometric_factor(float(S.constants.gamma), s)
    if complex(s).real <= 0:
        raise DomainError(f'Re(s)={complex(s).real:g} must be positive')
    inner = zeta_S(S, s)
    return ZetaValue(s=complex(s), value=factor * inner.value, terms_used=inner.terms_used,
                     tail_estimate=abs(factor) * inner.tail_estimate, method=ZetaMethod.ClosedForm,
                     extrapolated=factor * inner.best)


def zeta_Hn_closed(S: GeneratingSet, n: int, s: complex) -> ZetaValue:  # noqa: N802, N803
    '''ζ of H_<n> in closed form, γ^(ns/2)·ζ_ρ(s).'''
    rho = zeta_rho(S, s)
    scale = complex(float(S.constants.gamma)) ** (n * complex(s) / 2)
    return ZetaValue(s=rho.s, value=scale * rho.value, terms_used=rho.terms_used,
                     tail_estimate=abs(scale) * rho.tail_estimate, method=ZetaMethod.ClosedForm,
                     extrapolated=scale * rho.best)


def zeta_Hn_direct(S: GeneratingSet, n: int, s: complex, p_max: int | None = None) -> ZetaValue:  # noqa: N802, N803
    '''
    The double sum Σ_{p=-n}^{p_max} Σ_{λ∈S} (γ^p λ)^(-s/2).

    The remainder combines the fitted tail of S in every layer with the exact geometric tail of the layers past p_max.
    By default p_max is taken large enough that the geometric tail is below 1e-16 relative.
    '''
    s = complex(s)
    if s.real <= 0:
        raise DomainError(f'Re(s)={s.real:g} must be positive')
    gamma = float(S.constants.gamma)
    w = complex(gamma) ** (-s / 2)
    if p_max is None:
        p_max = max(0, math.ceil(16 * math.log(10) / (s.real / 2 * math.log(gamma))))

    layers = np.arange(-n, p_max + 1)
    grid = np.outer(gamma**layers.astype(float), S.values)
    partial_sum = complex(np.sum(_power(grid, s)))

    inner = zeta_S(S, s)
    weights = complex(np.sum(w**layers))
    layer_tail = w ** (p_max + 1) / (1 - w) * inner.best
    remainder = weights * (inner.best - inner.value) + layer_tail
    return ZetaValue(s=s, value=partial_sum, terms_used=grid.size,
                     tail_estimate=abs(weights) * inner.tail_estimate + abs(layer_tail),
                     method=ZetaMethod.DirectSum, extrapolated=partial_sum + remainder)


def zeta_Hinf(S: GeneratingSet, s: complex) -> HalfPlaneValue:  # noqa: N802, N803
    '''ζ of the half-line operator as δ_T(γ^(-s/2))·ζ_S(s), tagged with the half-plane of s.'''
    factorization = HalfPlaneFactorization(hyper=delta_T(), scalar=partial(zeta_S, S), gamma=float(S.constants.gamma))
    return factorization.evaluate(s)


@dataclass(frozen=True, slots=True)
class BirthTerm:
    z0: float
    weight: Callable[[complex], complex]
    description: str


@dataclass(frozen=True, slots=True)
class BirthTable:
    '''ζ_D(s) = Σ weight(5^(-s/2))·ζ_{R,z0}(s) over the terms.'''
    name: str
    terms: tuple[BirthTerm, ...] = field(repr=False)


def _check_sg_factor(x: complex, s: complex):
    if abs(1 - 3 * x) < POLE_DISTANCE:
        raise PoleError('1/(1 - 3·5^(-s/2))', s)
    if abs(1 - x) < POLE_DISTANCE:
        raise PoleError('1/(1 - 5^(-s/2))', s)


STATED = BirthTable('stated', (
    BirthTerm(0.75, lambda x: x / 2 * (1 / (1 - 3 * x) + 3 / (1 - x)), 'x/2 (1/(1-3x) + 3/(1-x))'),
    BirthTerm(1.25, lambda x: x * x / 2 * (3 / (1 - 3 * x) - 1 / (1 - x)), 'x^2/2 (3/(1-3x) - 1/(1-x))'),
))
'''The combination with the (3^(m-1)+3)/2 weights on the 3/4 family.'''

DIRICHLET = BirthTable('dirichlet', (
    BirthTerm(0.5, lambda x: x, 'x'),
    BirthTerm(1.25, lambda x: x / 2 * (1 / (1 - 3 * x) + 3 / (1 - x)), 'x/2 (1/(1-3x) + 3/(1-x))'),
    BirthTerm(0.75, lambda x: x**3 / 2 * (9 / (1 - 3 * x) - 3 / (1 - x)), 'x^3/2 (9/(1-3x) - 3/(1-x))'),
))
'''The combination generated by the Dirichlet birth table of `sg_decimation.births`.'''

TABLES = (STATED, DIRICHLET)
NORMALIZATIONS = (1.0, 1.5)


def sg_zeta_factorized(s: complex, table: BirthTable = DIRICHLET, *, tol: float = 1e-12) -> ZetaValue:
    '''
    The gasket zeta function as a combination of polynomial zeta functions with geometric weights.

    Raises:
        PoleError: 3·5^(-s/2) = 1.
        DomainError: Re(s) at or below log 9/log 5.
    '''
    s = complex(s)
    x = 5 ** (-s / 2)
    _check_sg_factor(x, s)
    if s.real <= SG_ABSCISSA:
        raise DomainError(f'Re(s)={s.real:g} must exceed log 9/log 5 = {SG_ABSCISSA:.6g}')

    value = extrapolated = 0j
    tail = 0.0
    terms = 0
    for term in table.terms:
        weight = term.weight(x)
        inner = poly_zeta.zeta_poly(SG_POLY, term.z0, s, tol=tol)
        value += weight * inner.value
        extrapolated += weight * inner.best
        tail += abs(weight) * inner.tail_estimate
        terms += inner.terms_used
    return ZetaValue(s=s, value=value, terms_used=terms, tail_estimate=tail, method=ZetaMethod.Factorized,
                     extrapolated=extrapolated)


def _sg_partial(s: complex, level: int, normalization: float) -> tuple[complex, int]:
    spectrum = renormalized_spectrum(level)
    terms = _power(normalization * spectrum.values, s)
    return complex(np.sum(spectrum.multiplicities * terms)), spectrum.total


def sg_zeta_direct(s: complex, level: int = 8, normalization: float = 1.0) -> ZetaValue:
    '''
    Σ (κ·5^m·𝓡(v))^(-s/2) over the level-m decimation spectrum (3/2 excluded), with κ the normalization.

    The eigenvalues born above `level` are estimated from the geometric decay of the last two level increments.
    '''
    if level < 3:
        raise ParameterError('level', level, 'level >= 3')
    s = complex(s)
    partials = [_sg_partial(s, m, normalization) for m in (level - 2, level - 1, level)]
    (oldest, _), (older, _), (latest, terms) = partials
    first, second = older - oldest, latest - older
    if first == 0:
        remainder = 0j
    else:
        ratio = second / first
        if abs(ratio) >= 1:
            raise TruncationError(f'Level increments are not decaying at s={s} (ratio {abs(ratio):.3g})')
        remainder = second * ratio / (1 - ratio)
    log.debug('Gasket direct sum at s=%s: increments %.3g, %.3g', s, abs(first), abs(second))
    return ZetaValue(s=s, value=latest, terms_used=terms, tail_estimate=abs(remainder), method=ZetaMethod.DirectSum,
                     extrapolated=latest + remainder)


@dataclass(frozen=True, slots=True, kw_only=True)
class SGCalibration:
    table: BirthTable
    normalization: float
    residuals: dict[str, float]

    def record(self) -> dict[str, object]:
        return {'table': self.table.name, 'normalization': self.normalization, 'residuals': dict(self.residuals)}


@cache
def calibrate_sg_zeta(s: complex = 4, level: int = 8) -> SGCalibration:
    '''
    Compare every (birth table, eigenvalue normalization) pair against the direct sum at s and adopt the closest.
    '''
    residuals: dict[str, float] = {}
    best: tuple[float, BirthTable, float] | None = None
    factorized = {table.name: sg_zeta_factorized(s, table) for table in TABLES}
    for normalization in NORMALIZATIONS:
        direct = sg_zeta_direct(s, level, normalization)
        for table in TABLES:
            residual = abs(factorized[table.name].best - direct.best) / abs(direct.best)
            residuals[f'{table.name}/{normalization:g}'] = residual
            log.debug('Calibration %s, normalization %g: relative residual %.3g', table.name, normalization, residual)
            if best is None or residual < best[0]:
                best = (residual, table, normalization)

    assert best is not None
    _, table, normalization = best
    log.info('Adopted gasket zeta convention: %s table, normalization %g', table.name, normalization)
    return SGCalibration(table=table, normalization=normalization, residuals=residuals)


def sg_zeta_check(s: complex, calibration: SGCalibration | None = None, level: int = 8) -> Agreement:
    '''Direct sum against the factorization under the calibrated convention.'''
    calibration = calibration or calibrate_sg_zeta(level=level)
    direct = sg_zeta_direct(s, level, calibration.normalization)
    factorized = sg_zeta_factorized(s, calibration.table)
    return Agreement(obj='sg-zeta', s=complex(s), left=direct.best, right=factorized.best,
                     bound=direct.tail_estimate + factorized.tail_estimate,
                     right_method=str(ZetaMethod.Factorized))


def infinite_sg_zeta(s: complex, table: BirthTable = DIRICHLET) -> HalfPlaneValue:
    '''ζ of the infinite gasket as δ_T(5^(-s/2)) times the finite gasket zeta function.'''
    factorization = HalfPlaneFactorization(hyper=delta_T(), scalar=partial(sg_zeta_factorized, table=table), gamma=5.0)
    return factorization.evaluate(s)


def riemann_reference(s: complex) -> complex:
    '''
    Riemann's zeta function by Euler-Maclaurin summation: nine terms, the integral tail, and ten Bernoulli corrections.

    Doctests:
    >>> abs(riemann_reference(2) - math.pi ** 2 / 6) < 1e-12
    True
    >>> riemann_reference(1)
    Traceback (most recent call last):
    ...
    fractal_zeta.errors.DomainError: Re(s)=1 is outside the summation region Re(s) > 1
    '''
    s = complex(s)
    if s.real <= 1:
        raise DomainError(f'Re(s)={s.real:g} is outside the summation region Re(s) > 1')

    n = EM_CUTOFF
    head = sum(k**-s for k in range(1, n))
    tail = n ** (1 - s) / (s - 1) + n**-s / 2
    numbers = bernoulli(2 * EM_TERMS)
    rising = s
    for k in range(1, EM_TERMS + 1):
        tail += numbers[2 * k] / math.factorial(2 * k) * rising * n ** (-s - 2 * k + 1)
        rising *= (s + 2 * k - 1) * (s + 2 * k)
    return head + tail


def riemann_mpmath(s: complex) -> complex:
    '''Independent reference value from mpmath.'''
    return complex(mpmath.zeta(complex(s)))


def riemann_identity_check(S: GeneratingSet, s: complex) -> float:  # noqa: N803
    '''|π^s·ζ_ρ(s) - ζ(s)| with ζ_ρ built from the computed α = 1/2 generating set.'''
    if float(S.constants.alpha) != 0.5:
        raise ParameterError('alpha', S.constants.alpha, 'alpha = 1/2')
    if complex(s).real < 2:
        raise DomainError(f'Re(s)={complex(s).real:g} must be at least 2')
    residual = abs(math.pi ** complex(s) * zeta_rho(S, s).best - riemann_reference(s))
    log.info('Riemann identity at s=%s: residual %.3g', s, residual)
    return residual


def riemann_via_polynomial(s: complex, *, max_level: int = 20) -> ZetaValue:
    '''ζ(s) = ½·(√2·π)^s·ζ_{R,0}(s) for the interval polynomial R(z) = 2z(2 - z).'''
    inner = poly_zeta.zeta_poly(INTERVAL_POLY, 0, s, max_level=max_level)
    scale = 0.5 * (math.sqrt(2) * math.pi) ** complex(s)
    return ZetaValue(s=complex(s), value=scale * inner.value, terms_used=inner.terms_used,
                     tail_estimate=abs(scale) * inner.tail_estimate, method=ZetaMethod.Factorized,
                     extrapolated=scale * inner.best)


def string_spectrum(lengths: npt.ArrayLike, cutoff: float) -> SpectrumList:
    '''
    Every Dirichlet eigenvalue (πj/ℓ)² ≤ cutoff of the disjoint intervals of the given lengths.

    Doctests:
    >>> [round(v / math.pi ** 2, 9) for v in string_spectrum([1.0, 0.5], 20 * math.pi ** 2).values]
    [1.0, 4.0, 9.0, 16.0]
    >>> string_spectrum([1.0, 0.5], 20 * math.pi ** 2).multiplicities.tolist()
    [1, 2, 1, 2]
    '''
    values = []
    for length in np.asarray(lengths, dtype=float).tolist():
        if length <= 0:
            raise ParameterError('length', length, 'lengths > 0')
        count = math.floor(length * math.sqrt(cutoff) / math.pi)
        values.append((math.pi * np.arange(1, count + 1) / length) ** 2)
    return SpectrumList.from_values(np.concatenate(values) if values else [], Provenance.Analytic)


def string_factorization(spec: SpectrumList, lengths: npt.ArrayLike, s: complex) -> Agreement:
    '''
    The direct spectral sum of a string against π^(-s)·ζ(s)·Σ ℓ^s.

    `spec` must hold the complete spectrum below some cutoff, as produced by `string_spectrum`.
    '''
    direct = zeta_spectral(spec, s)
    geometric = complex(np.sum(np.asarray(lengths, dtype=float).astype(complex) ** complex(s)))
    closed = math.pi ** -complex(s) * riemann_reference(s) * geometric
    return Agreement(obj='string', s=complex(s), left=direct.best, right=closed, bound=direct.tail_estimate)


def cantor_geometric_zeta(s: complex) -> complex:
    '''
    Σ ℓ^s over the Cantor string, 1/(3^s - 2).

    Doctests:
    >>> cantor_geometric_zeta(2)
    (0.14285714285714285+0j)
    '''
    denominator = 3 ** complex(s) - 2
    if abs(denominator) < POLE_DISTANCE:
        raise PoleError('1/(3^s - 2)', s)
    return 1 / denominator


def cantor_string_lengths(depth: int) -> npt.NDArray[np.float64]:
    '''
    Lengths 3^-n with multiplicity 2^(n-1), for n = 1..depth.

    Doctests:
    >>> (cantor_string_lengths(2) * 9).round().tolist()
    [3.0, 1.0, 1.0]
    '''
    return np.concatenate([np.full(2 ** (n - 1), 3.0**-n) for n in range(1, depth + 1)])


def cantor_string_closed(s: complex) -> complex:
    '''π^(-s)·ζ(s)·ζ_𝓛(s) for the Cantor string.'''
    return math.pi ** -complex(s) * riemann_reference(s) * cantor_geometric_zeta(s)


def cantor_string_zeta(s: complex, depth: int = 30, terms: int = 2000) -> ZetaValue:
    '''
    Direct spectral sum of the Cantor string, Σ_{n≤depth} 2^(n-1) Σ_{j≤terms} (πj·3^n)^(-s).

    The remainder is the integral tail in j for every depth plus the exact sum over deeper lengths.
    '''
    s = complex(s)
    if s.real <= 1:
        raise DomainError(f'Re(s)={s.real:g} must exceed 1')
    if depth < 1 or terms < 1:
        raise ParameterError('depth/terms', (depth, terms), 'depth >= 1 and terms >= 1')

    n = np.arange(1, depth + 1)
    j = np.arange(1, terms + 1)
    multiplicity = 2.0 ** (n - 1)
    frequencies = np.pi * np.outer(3.0**n, j)
    partial_sum = complex(np.sum(multiplicity[:, None] * frequencies.astype(complex) ** -s))

    level_weights = complex(np.sum(multiplicity * (np.pi * 3.0**n).astype(complex) ** -s))
    frequency_tail = level_weights * (terms + 0.5) ** (1 - s) / (s - 1)
    depth_tail = (math.pi ** -s * riemann_reference(s) * 2.0**depth * 3 ** (-(depth + 1) * s)
                  / (1 - 2 * 3**-s))
    return ZetaValue(s=s, value=partial_sum, terms_used=depth * terms,
                     tail_estimate=abs(frequency_tail) + abs(depth_tail), method=ZetaMethod.DirectSum,
                     extrapolated=partial_sum + frequency_tail + depth_tail)
