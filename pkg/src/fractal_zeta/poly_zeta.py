'''
Zeta functions of quadratic polynomials with R(0) = 0 and c = R'(0) > 1.

For a starting point z0 the zeta function is the limit of the sums of (c^n z)^(-s/2) over the n-th preimage set of z0.
Two evaluations are provided: `zeta_poly_truncated` sums over the full preimage tree at a fixed depth, and
`zeta_poly` regroups the tree into minus-branch chains, each replaced by its branch limit 𝓡.
'''
from __future__ import annotations

import math
from dataclasses import dataclass
from logging import getLogger
from typing import TYPE_CHECKING, Any

import numpy as np

from .errors import DomainError, NumericError, ParameterError, TruncationError
from .values import ZetaMethod, ZetaValue

if TYPE_CHECKING:
    import numpy.typing as npt

__all__ = (
    'INTERVAL_POLY',
    'SG_POLY',
    'Poly1',
    'PreimageLevel',
    'branch_inverse',
    'preimages',
    'scaled_branch_limit',
    'zeta_poly',
    'zeta_poly_truncated',
)

log = getLogger(__name__)

MAX_TREE_LEVEL = 22
ZERO_LEAF = 1e-14
ROUND_TRIP_TOLERANCE = 1e-9


@dataclass(frozen=True, slots=True)
class Poly1:
    '''
    R(z) = a1·z + a2·z², stored as the coefficient list [0, a1, a2].

    Doctests:
    >>> SG_POLY.c, SG_POLY.degree
    (5.0, 2)
    >>> round(SG_POLY.d_R, 4)
    0.8614
    >>> SG_POLY(1.25)
    0.0
    '''
    coefficients: tuple[float, ...]

    def __post_init__(self):
        coefficients = tuple(float(a) for a in self.coefficients)
        object.__setattr__(self, 'coefficients', coefficients)
        if coefficients[0] != 0:
            raise ParameterError('R(0)', coefficients[0], 'R(0) = 0')
        if len(coefficients) < 2 or coefficients[1] <= 1:
            raise ParameterError('c', coefficients[1:2], "c = R'(0) > 1")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def c(self) -> float:
        return self.coefficients[1]

    @property
    def d_R(self) -> float:  # noqa: N802 - conventional name
        return 2 * math.log(self.degree) / math.log(self.c)

    def __call__(self, z: Any) -> Any:
        result = 0.0
        for a in reversed(self.coefficients):
            result = result * z + a
        return result

    def iterate(self, z: Any, n: int) -> Any:
        for _ in range(n):
            z = self(z)
        return z

    def _quadratic(self) -> tuple[float, float]:
        if self.degree != 2:
            raise ParameterError('degree', self.degree, 'degree == 2 (quadratic preimage solver)')
        return self.coefficients[1], self.coefficients[2]

    def minus_branch(self, z: Any) -> Any:
        '''The inverse branch through the origin, written without cancellation near z = 0.'''
        a1, a2 = self._quadratic()
        return 2 * z / (a1 + np.emath.sqrt(a1 * a1 + 4 * a2 * z))

    def plus_branch(self, z: Any) -> Any:
        a1, a2 = self._quadratic()
        return -a1 / a2 - self.minus_branch(z)


SG_POLY = Poly1((0, 5, -4))
'''The decimation polynomial of the Sierpinski gasket, R(z) = z(5 - 4z).'''

INTERVAL_POLY = Poly1((0, 4, -2))
'''The decimation polynomial of the unit interval, R(z) = 2z(2 - z).'''


@dataclass(frozen=True, slots=True, eq=False)
class PreimageLevel:
    level: int
    points: npt.NDArray[np.complex128]

    def __len__(self) -> int:
        return len(self.points)


def preimages(p: Poly1, z0: complex, n: int) -> PreimageLevel:
    '''
    All points of R^-n{z0}, counted with multiplicity.

    Doctests:
    >>> sorted(preimages(SG_POLY, 0, 1).points.real.tolist())
    [0.0, 1.25]
    >>> len(preimages(SG_POLY, 0.75, 3))
    8
    '''
    if n < 0:
        raise ParameterError('n', n, 'n >= 0')
    if n > MAX_TREE_LEVEL:
        raise TruncationError(f'A depth-{n} preimage tree has 2^{n} leaves; the limit is depth {MAX_TREE_LEVEL}')
    p._quadratic()

    points = np.array([z0], dtype=complex)
    for _ in range(n):
        points = np.concatenate((p.minus_branch(points), p.plus_branch(points)))

    residual = float(np.max(np.abs(p.iterate(points, n) - z0)))
    if residual >= ROUND_TRIP_TOLERANCE * max(1.0, abs(z0)):
        raise NumericError(f'Preimage round trip at depth {n} misses z0={z0} by {residual:.3g}')
    return PreimageLevel(level=n, points=points)


def branch_inverse(p: Poly1, z: Any, m: int) -> Any:
    '''
    The m-fold minus-branch inverse R_-^-m(z) for real z.

    Doctests:
    >>> branch_inverse(SG_POLY, 0.0, 7)
    0.0
    >>> round(branch_inverse(SG_POLY, 0.75, 1), 5)
    0.17431
    '''
    a1, a2 = p._quadratic()
    discriminant = a1 * a1 + 4 * a2 * np.asarray(z, dtype=float)
    if np.any(discriminant < 0):
        raise DomainError(f'The minus branch is not real at z={z!r}')

    w = np.asarray(z, dtype=float)
    for _ in range(m):
        w = p.minus_branch(w)
    return float(w) if w.ndim == 0 else w


def scaled_branch_limit(p: Poly1, z: Any, *, tol: float = 1e-12, max_iter: int = 200) -> Any:
    '''
    𝓡(z), the limit of c^m · R_-^-m(z).

    Iteration stops once every increment is below `tol` (relative for values above 1).

    Doctests:
    >>> scaled_branch_limit(SG_POLY, 0.0)
    0.0
    >>> abs(scaled_branch_limit(SG_POLY, 1e-6) / 1e-6 - 1) < 1e-4
    True
    '''
    z_arr = np.asarray(z)
    dtype = complex if np.iscomplexobj(z_arr) else float
    if dtype is float:
        a1, a2 = p._quadratic()
        if np.any(a1 * a1 + 4 * a2 * z_arr < 0):
            raise DomainError(f'The minus branch is not real at z={z!r}')

    w = z_arr.astype(dtype)
    scaled = w.copy()
    for m in range(1, max_iter + 1):
        w = p.minus_branch(w)
        updated = p.c**m * w
        increment = np.abs(updated - scaled)
        scaled = updated
        if np.all(increment < tol * np.maximum(1.0, np.abs(scaled))):
            log.debug('Branch limit converged after %d steps', m)
            break
    else:
        raise NumericError(f'Branch limit did not converge within {max_iter} steps')

    if scaled.ndim == 0:
        return complex(scaled) if dtype is complex else float(scaled)
    return scaled


def _check_half_plane(p: Poly1, s: complex):
    if complex(s).real <= p.d_R:
        raise DomainError(f'Re(s)={complex(s).real:g} must exceed d_R={p.d_R:.6g}')


def _powers(values: npt.NDArray[np.complex128], s: complex) -> npt.NDArray[np.complex128]:
    return np.power(values.astype(complex), -complex(s) / 2)


def _level_sum(p: Poly1, z0: complex, s: complex, n: int) -> tuple[complex, int]:
    leaves = preimages(p, z0, n).points
    nonzero = np.abs(leaves) >= ZERO_LEAF
    excluded = int(np.count_nonzero(~nonzero))
    if excluded:
        log.info('Excluded %d zero leaves at depth %d', excluded, n)
    return complex(np.sum(_powers(p.c**n * leaves[nonzero], s))), int(np.count_nonzero(nonzero))


def zeta_poly_truncated(p: Poly1, z0: complex, s: complex, n: int) -> ZetaValue:
    '''
    The level-n partial sum of ζ_{R,z0}(s), with |level n - level n-1| as the convergence estimate.

    Doctests:
    >>> abs(zeta_poly_truncated(SG_POLY, 0.75, 4, 0).value - 0.75 ** -2) < 1e-12
    True
    '''
    _check_half_plane(p, s)
    value, terms = _level_sum(p, z0, s, n)
    increment = abs(value - _level_sum(p, z0, s, n - 1)[0]) if n > 0 else 0.0
    return ZetaValue(s=complex(s), value=value, terms_used=terms, tail_estimate=increment, method=ZetaMethod.DirectSum)


def zeta_poly(p: Poly1, z0: complex, s: complex, *, tol: float = 1e-10, max_level: int = 40) -> ZetaValue:
    '''
    ζ_{R,z0}(s) by summing branch limits over plus-branch heads.

    Each leaf of the preimage tree descends from a unique head: z0 itself, or a plus-branch preimage at some depth j,
    followed by minus-branch steps. The leaves of one chain converge to c^j·𝓡(head), so the limit is the sum over heads of
    (c^j·𝓡(head))^(-s/2).

    Args:
        p: The polynomial.
        z0: Starting point.
        s: Evaluation point, Re(s) > d_R.
        tol: Stop at the first depth (from 2 on) whose head contribution is below this.
        max_level: Deepest head level; also capped by the preimage-tree leaf budget.

    Returns:
        The truncated sum, the geometric tail estimate of the remaining depths, and the extrapolated value.
    '''
    _check_half_plane(p, s)
    max_level = min(max_level, MAX_TREE_LEVEL)

    points = np.array([z0], dtype=complex)
    heads = points
    total = 0j
    terms = 0
    contributions: list[complex] = []
    for depth in range(max_level + 1):
        if depth > 0:
            heads = p.plus_branch(points)
            points = np.concatenate((p.minus_branch(points), heads))
        live = heads[np.abs(heads) >= ZERO_LEAF]
        if len(live) < len(heads):
            log.info('Excluded %d zero heads at depth %d', len(heads) - len(live), depth)
        if len(live):
            limits = scaled_branch_limit(p, _real_if_possible(live))
            contribution = complex(np.sum(_powers(np.asarray(p.c**depth * limits), s)))
        else:
            contribution = 0j
        contributions.append(contribution)
        total += contribution
        terms += len(live)
        log.debug('Depth %d head contribution %.3g', depth, abs(contribution))
        if depth >= 2 and abs(contribution) < tol:
            break

    last, previous = contributions[-1], contributions[-2] if len(contributions) > 1 else 0j
    if previous == 0:
        remainder = 0j
    else:
        ratio = last / previous
        if abs(ratio) >= 1:
            raise TruncationError(f'Head contributions are not decaying at s={s} (ratio {abs(ratio):.3g})')
        remainder = last * ratio / (1 - ratio)
    return ZetaValue(
        s=complex(s),
        value=total,
        terms_used=terms,
        tail_estimate=abs(remainder),
        method=ZetaMethod.DirectSum,
        extrapolated=total + remainder,
    )


def _real_if_possible(points: npt.NDArray[np.complex128]) -> npt.NDArray[Any]:
    if np.all(np.abs(points.imag) <= 1e-13 * np.maximum(1.0, np.abs(points.real))):
        return points.real
    return points
