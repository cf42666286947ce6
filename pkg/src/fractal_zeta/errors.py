'''Exceptions raised by the spectral and zeta computations.'''
from __future__ import annotations

__all__ = (
    'BoundaryError',
    'ConsistencyError',
    'DomainError',
    'ExhaustionError',
    'FractalZetaError',
    'IndeterminacyError',
    'NumericError',
    'ParameterError',
    'PoleError',
    'ResourceError',
    'TruncationError',
)


class FractalZetaError(Exception):
    pass


class ParameterError(FractalZetaError, ValueError):
    def __init__(self, name: str, value: object, bound: str):
        self.name = name
        self.value = value
        self.bound = bound
        super().__init__(f'{name}={value!r} violates {bound}')


class DomainError(FractalZetaError, ValueError):
    pass


class BoundaryError(DomainError):
    def __init__(self, s: complex):
        self.s = s
        super().__init__(f'Re(s) = 0 at s={s!r}: the factorization is only defined on the open half-planes')


class PoleError(FractalZetaError, ArithmeticError):
    def __init__(self, what: str, where: object):
        self.what = what
        self.where = where
        super().__init__(f'{what} has a pole at {where!r}')


class ResourceError(FractalZetaError):
    def __init__(self, level: int, dimension: int, limit: int):
        self.level = level
        self.dimension = dimension
        self.limit = limit
        super().__init__(f'Level {level} needs a matrix of dimension {dimension} (limit {limit})')


class NumericError(FractalZetaError, ArithmeticError):
    pass


class ConsistencyError(FractalZetaError):
    def __init__(self, value: float, detail: str):
        self.value = value
        super().__init__(f'Eigenvalue {value!r}: {detail}')


class TruncationError(FractalZetaError):
    pass


class ExhaustionError(FractalZetaError):
    def __init__(self, found: int, wanted: int, bound: float):
        self.found = found
        self.wanted = wanted
        self.bound = bound
        super().__init__(f'Found {found} of {wanted} roots below the scan bound {bound:g}')


class IndeterminacyError(FractalZetaError):
    def __init__(self, coords: tuple[complex, ...], step: int = 0):
        self.coords = coords
        self.step = step
        super().__init__(f'Renormalization map is indeterminate at {coords!r} (step {step})')
