'''
Hyperfunctions as pairs of analytic representatives on complementary regions.

Only what the zeta factorizations need is provided: the Dirac hyperfunction on the unit circle, its bilateral geometric
series, and the substitution w = γ^(-s/2) that turns Σ_p (γ^p)^(-s/2) into δ_T(γ^(-s/2)).

Doctests:
>>> h = delta_R()
>>> abs(boundary_value(h, 0.5, 0.1) - 0.1 / (math.pi * (0.25 + 0.01))) < 1e-15
True
'''
from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum
from logging import getLogger
from typing import Any

from .errors import BoundaryError, DomainError, NumericError, ParameterError, TruncationError
from .values import ZetaValue, complex_record

__all__ = (
    'HalfPlaneFactorization',
    'HalfPlaneValue',
    'Hyperfunction',
    'Representative',
    'Side',
    'bilateral_partial',
    'boundary_value',
    'delta_R',
    'delta_T',
    'geometric_tail_bound',
    'substitute_gamma',
)

log = getLogger(__name__)


class Side(Enum):
    Inside = 'inside'
    Outside = 'outside'

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True, slots=True)
class Representative:
    formula: Callable[[complex], complex]
    region: Callable[[complex], bool]
    region_name: str

    def __call__(self, z: complex) -> complex:
        z = complex(z)
        if not self.region(z):
            raise DomainError(f'z={z!r} lies outside the region {self.region_name}')
        try:
            return complex(self.formula(z))
        except ZeroDivisionError as e:
            raise DomainError(f'Representative is singular at z={z!r}') from e


@dataclass(frozen=True, slots=True)
class Hyperfunction:
    upper: Representative
    lower: Representative
    description: str

    def __str__(self) -> str:
        return self.description


def delta_T() -> Hyperfunction:
    '''
    The Dirac hyperfunction on the unit circle, [1/(1-z), 1/(z-1)].

    Doctests:
    >>> h = delta_T()
    >>> h.upper(0), h.lower(2)
    ((1+0j), (1+0j))
    >>> h.upper(1)
    Traceback (most recent call last):
    ...
    fractal_zeta.errors.DomainError: z=(1+0j) lies outside the region |z| < 1
    '''
    return Hyperfunction(
        upper=Representative(lambda z: 1 / (1 - z), lambda z: abs(z) < 1, '|z| < 1'),
        lower=Representative(lambda z: 1 / (z - 1), lambda z: abs(z) > 1, '|z| > 1'),
        description='delta_T',
    )


def delta_R() -> Hyperfunction:
    '''The Dirac hyperfunction on the real line, [-1/(2πiz), -1/(2πiz)] on the upper and lower half-planes.'''
    def formula(z: complex) -> complex:
        return -1 / (2j * math.pi * z)

    return Hyperfunction(
        upper=Representative(formula, lambda z: z.imag > 0, 'Im(z) > 0'),
        lower=Representative(formula, lambda z: z.imag < 0, 'Im(z) < 0'),
        description='delta_R',
    )


def boundary_value(h: Hyperfunction, x: float, eps: float) -> float:
    '''F+(x + iε) - F-(x - iε), returned as a real number when the imaginary part vanishes.'''
    if eps <= 0:
        raise ParameterError('eps', eps, 'eps > 0')
    value = h.upper(complex(x, eps)) - h.lower(complex(x, -eps))
    return value.real if abs(value.imag) <= 1e-15 * max(1.0, abs(value)) else value  # type: ignore[return-value]


def _check_off_circle(w: complex):
    if abs(abs(w) - 1) < 1e-15:
        raise DomainError(f'|w| = 1 at w={w!r}: the bilateral series converges on neither side')


def bilateral_partial(w: complex, P: int, side: Side) -> complex:  # noqa: N803
    '''
    Partial sums of Σ_p w^p: p = 0..P inside the circle, p = -P..-1 outside.

    Doctests:
    >>> bilateral_partial(0.5, 20, Side.Inside) == 2 - 2 ** -20
    True
    >>> abs(bilateral_partial(2, 20, Side.Outside) - 1) < 1e-6
    True
    '''
    w = complex(w)
    _check_off_circle(w)
    if P < 1:
        raise ParameterError('P', P, 'P >= 1')

    match side:
        case Side.Inside:
            return sum((w**p for p in range(P + 1)), 0j)
        case Side.Outside:
            return sum((w**-p for p in range(1, P + 1)), 0j)


def geometric_tail_bound(w: complex, P: int, side: Side) -> float:
    '''
    Exact bound on the distance from a partial sum to its limit: |w|^(P+1)/(1-|w|) inside, the mirror image outside.

    Doctests:
    >>> geometric_tail_bound(0.5, 3, Side.Inside)
    0.125
    '''
    r = abs(complex(w))
    if side is Side.Outside:
        r = 1 / r
    if r >= 1:
        raise DomainError(f'The {side} series diverges at |w|={abs(complex(w)):g}')
    return r ** (P + 1) / (1 - r)


def _side_of(s: complex) -> Side:
    re = complex(s).real
    if re == 0:
        raise BoundaryError(s)
    return Side.Inside if re > 0 else Side.Outside


def substitute_gamma(h: Hyperfunction, gamma: float, s: complex) -> complex:
    '''
    Evaluate h at w = γ^(-s/2) on the representative matching the sign of Re(s).

    Doctests:
    >>> substitute_gamma(delta_T(), 4, 2)
    (1.3333333333333333+0j)
    >>> abs(substitute_gamma(delta_T(), 5, -2) - 0.25) < 1e-15
    True
    '''
    if gamma <= 1:
        raise ParameterError('gamma', gamma, 'gamma > 1')
    side = _side_of(s)
    w = complex(gamma) ** (-complex(s) / 2)
    return h.upper(w) if side is Side.Inside else h.lower(w)


@dataclass(frozen=True, slots=True, kw_only=True)
class HalfPlaneValue:
    '''
    A factor times a scalar zeta value, tagged with the half-plane it was evaluated on.

    `scalar` is None when the scalar series does not converge at s; the value is then formal.
    '''
    s: complex
    side: Side
    factor: complex
    scalar: ZetaValue | None

    @property
    def formal(self) -> bool:
        return self.scalar is None

    @property
    def value(self) -> complex | None:
        return None if self.scalar is None else self.factor * self.scalar.best

    @property
    def tail_estimate(self) -> float | None:
        return None if self.scalar is None else abs(self.factor) * self.scalar.tail_estimate

    def record(self, obj: str, **params: Any) -> dict[str, Any]:
        return {
            'object': obj,
            's': complex_record(self.s),
            'side': str(self.side),
            'factor': complex_record(self.factor),
            'value': complex_record(self.value),
            'formal': self.formal,
            'tail_estimate': self.tail_estimate,
            'params': params,
        }


@dataclass(frozen=True, slots=True)
class HalfPlaneFactorization:
    '''The formal product hyper(γ^(-s/2)) · scalar(s).'''
    hyper: Hyperfunction
    scalar: Callable[[complex], ZetaValue]
    gamma: float

    def evaluate(self, s: complex) -> HalfPlaneValue:
        side = _side_of(s)
        factor = substitute_gamma(self.hyper, self.gamma, s)
        try:
            scalar: ZetaValue | None = self.scalar(s)
        except (DomainError, TruncationError, NumericError) as e:
            log.debug('Scalar factor is formal at s=%s: %s', s, e)
            scalar = None
        return HalfPlaneValue(s=complex(s), side=side, factor=factor, scalar=scalar)
