'''
The renormalization map on the complex projective plane,

    ρ([x, y, z]) = [x(x + y/δ) - z²/δ, δy(x + y/δ) - δz², z²],

and the set D = {x + y/δ = 0} whose pullbacks along the invariant curve give the Sturm-Liouville spectrum.
'''
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from logging import getLogger
from typing import TYPE_CHECKING, Any

import numpy as np

from .errors import IndeterminacyError, ParameterError
from .ifs_measure import SLConstants
from .values import complex_record

if TYPE_CHECKING:
    import numpy.typing as npt

__all__ = (
    'FIXED_X0',
    'Orbit',
    'OrbitReport',
    'ProjPoint',
    'basin_probe',
    'chordal_distance',
    'in_D',
    'projective_distance',
    'rho_apply',
    'rho_coords',
    'rho_iterate',
)

log = getLogger(__name__)

CONVERGENCE_DISTANCE = 1e-8
FIXED_DISTANCE = 1e-12
MAX_CYCLE = 8
INDETERMINACY_SCALE = 1e-14


@dataclass(frozen=True, slots=True)
class ProjPoint:
    '''
    A point [x, y, z] of the complex projective plane, stored with its largest-modulus coordinate scaled to 1.

    Doctests:
    >>> ProjPoint.of(0, 2, 1)
    ProjPoint(coords=(0j, (1+0j), (0.5+0j)))
    >>> ProjPoint.of(2, 4, 6) == ProjPoint.of(1, 2, 3)
    True
    '''
    coords: tuple[complex, complex, complex]

    @classmethod
    def of(cls, x: complex, y: complex, z: complex) -> ProjPoint:
        raw = (complex(x), complex(y), complex(z))
        lead = max(raw, key=abs)
        if lead == 0:
            raise ValueError('[0, 0, 0] is not a point of the projective plane')
        return cls(tuple(c / lead for c in raw))  # type: ignore[arg-type]

    @property
    def x(self) -> complex:
        return self.coords[0]

    @property
    def y(self) -> complex:
        return self.coords[1]

    @property
    def z(self) -> complex:
        return self.coords[2]

    def scaled(self, factor: complex) -> tuple[complex, complex, complex]:
        '''Another set of homogeneous coordinates for the same point.'''
        return tuple(factor * c for c in self.coords)  # type: ignore[return-value]

    def record(self) -> list[Any]:
        return [complex_record(c) for c in self.coords]


FIXED_X0 = ProjPoint.of(0, 1, 0)


def chordal_distance(u: npt.ArrayLike, v: npt.ArrayLike) -> npt.NDArray[np.float64]:
    '''
    Fubini-Study chordal distance |u ∧ v|/(|u||v|) between homogeneous coordinate arrays of shape (..., 3).

    Doctests:
    >>> float(chordal_distance([1, 2, 3], [-2, -4, -6]))
    0.0
    >>> float(chordal_distance([1, 0, 0], [0, 1, 0]))
    1.0
    '''
    u_arr = np.asarray(u, dtype=complex)
    v_arr = np.asarray(v, dtype=complex)
    wedge = sum(
        np.abs(u_arr[..., i] * v_arr[..., j] - u_arr[..., j] * v_arr[..., i]) ** 2
        for i, j in ((0, 1), (0, 2), (1, 2))
    )
    norms = np.sqrt(np.sum(np.abs(u_arr) ** 2, axis=-1) * np.sum(np.abs(v_arr) ** 2, axis=-1))
    return np.sqrt(wedge) / norms


def projective_distance(a: ProjPoint, b: ProjPoint) -> float:
    return float(chordal_distance(a.coords, b.coords))


def rho_coords(coords: npt.ArrayLike, delta: float) -> npt.NDArray[np.complex128]:
    '''ρ on raw homogeneous coordinates of shape (..., 3), without normalization.'''
    arr = np.asarray(coords, dtype=complex)
    x, y, z = arr[..., 0], arr[..., 1], arr[..., 2]
    shared = x + y / delta
    return np.stack((x * shared - z * z / delta, delta * y * shared - delta * z * z, z * z), axis=-1)


def rho_apply(pt: ProjPoint, c: SLConstants, *, step: int = 0) -> ProjPoint:
    '''
    Apply ρ once.

    Doctests:
    >>> from fractal_zeta.ifs_measure import make_constants
    >>> rho_apply(ProjPoint.of(1, 1, 1), make_constants(0.5))
    ProjPoint(coords=((1+0j), (1+0j), (1+0j)))
    >>> rho_apply(FIXED_X0, make_constants(0.25)) == FIXED_X0
    True
    '''
    image = rho_coords(pt.coords, float(c.delta))
    if np.max(np.abs(image)) < INDETERMINACY_SCALE:
        raise IndeterminacyError(pt.coords, step)
    return ProjPoint.of(*image.tolist())


def rho_iterate(pt: ProjPoint, p: int, c: SLConstants) -> ProjPoint:
    '''ρ^p(pt), renormalizing after every step.'''
    if p < 0:
        raise ParameterError('p', p, 'p >= 0')
    for step in range(p):
        pt = rho_apply(pt, c, step=step)
    return pt


def in_D(pt: ProjPoint, c: SLConstants, tol: float = 1e-8) -> bool:  # noqa: N802
    '''
    Membership in D = {x + y/δ = 0}, tested on the normalized representative.

    Doctests:
    >>> from fractal_zeta.ifs_measure import make_constants
    >>> in_D(ProjPoint.of(1, -1, 0), make_constants(0.5))
    True
    >>> in_D(ProjPoint.of(1, 1, 1), make_constants(0.5))
    False
    >>> in_D(ProjPoint.of(1, -0.5, 3), make_constants(1 / 3))
    True
    '''
    return abs(pt.x + pt.y / float(c.delta)) < tol


class Orbit(Enum):
    Converged = 'converged'
    Fixed = 'fixed'
    Cycle = 'cycle'
    Exhausted = 'exhausted'

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True, slots=True, kw_only=True)
class OrbitReport:
    start: ProjPoint
    steps: int
    classification: Orbit
    terminal: ProjPoint
    period: int | None = None

    def record(self) -> dict[str, Any]:
        return {
            'start': self.start.record(),
            'steps': self.steps,
            'classification': str(self.classification),
            'terminal': self.terminal.record(),
            'period': self.period,
        }


def basin_probe(pt: ProjPoint, c: SLConstants, max_iter: int = 200) -> OrbitReport:
    '''
    Follow the orbit of pt under ρ and classify it.

    The orbit is `converged` once it is within 1e-8 of [0, 1, 0], `fixed` when it stalls at another fixed point,
    `cycle` when it returns to a point visited at most 8 steps earlier, and `exhausted` otherwise.

    Doctests:
    >>> from fractal_zeta.ifs_measure import make_constants
    >>> basin_probe(FIXED_X0, make_constants(0.5)).classification
    <Orbit.Converged: 'converged'>
    >>> basin_probe(ProjPoint.of(1, 1, 1), make_constants(0.5)).classification
    <Orbit.Fixed: 'fixed'>
    '''
    if max_iter < 1:
        raise ParameterError('max_iter', max_iter, 'max_iter >= 1')

    history = [pt]
    current = pt
    for step in range(max_iter + 1):
        if projective_distance(current, FIXED_X0) < CONVERGENCE_DISTANCE:
            log.debug('Orbit reached [0, 1, 0] after %d steps', step)
            return OrbitReport(start=pt, steps=step, classification=Orbit.Converged, terminal=current)
        if step == max_iter:
            break

        following = rho_apply(current, c, step=step)
        if projective_distance(following, current) < FIXED_DISTANCE:
            return OrbitReport(start=pt, steps=step, classification=Orbit.Fixed, terminal=current)
        for period in range(2, min(MAX_CYCLE, len(history)) + 1):
            if projective_distance(following, history[-period]) < FIXED_DISTANCE:
                return OrbitReport(start=pt, steps=step + 1, classification=Orbit.Cycle, terminal=following,
                                   period=period)
        history.append(following)
        current = following

    return OrbitReport(start=pt, steps=max_iter, classification=Orbit.Exhausted, terminal=current)
