from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any

__all__ = (
    'Agreement',
    'ZetaMethod',
    'ZetaValue',
    'complex_record',
)


class ZetaMethod(Enum):
    DirectSum = 'direct-sum'
    ClosedForm = 'closed-form'
    Factorized = 'factorized'

    def __str__(self) -> str:
        return str(self.value)


def complex_record(z: complex | None) -> float | list[float] | None:
    '''
    JSON-friendly form of a complex number: a float when it is real, else [re, im].

    Doctests:
    >>> complex_record(2 + 0j)
    2.0
    >>> complex_record(1 - 2j)
    [1.0, -2.0]
    '''
    if z is None:
        return None
    z = complex(z)
    if z.imag == 0:
        return z.real
    return [z.real, z.imag]


@dataclass(frozen=True, slots=True, kw_only=True)
class ZetaValue:
    '''
    One evaluation of a zeta function.

    `value` is the truncated sum (or closed form). `tail_estimate` bounds what the truncation left out, and `extrapolated`
    adds a signed estimate of that remainder for direct sums.
    '''
    s: complex
    value: complex
    terms_used: int
    tail_estimate: float
    method: ZetaMethod
    extrapolated: complex | None = None

    def __post_init__(self):
        if not self.tail_estimate >= 0 or self.tail_estimate == float('inf'):
            raise ValueError(f'Tail estimate must be finite and nonnegative, got {self.tail_estimate}')

    @property
    def best(self) -> complex:
        '''The extrapolated value when there is one, else the plain value.'''
        return self.value if self.extrapolated is None else self.extrapolated

    def record(self, obj: str, **params: Any) -> dict[str, Any]:
        return {
            'object': obj,
            's': complex_record(self.s),
            'value': complex_record(self.value),
            'extrapolated': complex_record(self.extrapolated),
            'method': str(self.method),
            'terms_used': self.terms_used,
            'tail_estimate': self.tail_estimate,
            'params': params,
        }


@dataclass(frozen=True, slots=True, kw_only=True)
class Agreement:
    '''
    Two evaluations of the same quantity and the error bound they are expected to agree within.

    Doctests:
    >>> check = Agreement(obj='demo', s=2, left=1.0, right=1.0 + 1e-9, bound=1e-8)
    >>> check.passed(0.0)
    True
    '''
    obj: str
    s: complex
    left: complex
    right: complex
    bound: float
    left_method: str = str(ZetaMethod.DirectSum)
    right_method: str = str(ZetaMethod.ClosedForm)

    @property
    def residual(self) -> float:
        return abs(complex(self.left) - complex(self.right))

    def passed(self, tol: float) -> bool:
        '''Agreement within the reported bound plus an absolute tolerance.'''
        return self.residual <= self.bound + tol

    def record(self, tol: float, **params: Any) -> dict[str, Any]:
        return {
            'object': self.obj,
            's': complex_record(self.s),
            'left': complex_record(self.left),
            'left_method': self.left_method,
            'right': complex_record(self.right),
            'right_method': self.right_method,
            'residual': self.residual,
            'bound': self.bound,
            'tolerance': tol,
            'passed': self.passed(tol),
            'params': params,
        }
