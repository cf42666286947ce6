'''
The two-map iterated function system on [0, 1] and atomic approximations of its self-similar measure.

The maps are Ψ1(x) = αx and Ψ2(x) = 1 - (1-α)(1-x). The measure gives weight b = 1-α to Ψ1(I) and 1-b = α to Ψ2(I).
'''
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import product
from logging import getLogger
from typing import TYPE_CHECKING

import numpy as np

from .errors import ParameterError

if TYPE_CHECKING:
    from collections.abc import Sequence

    import numpy.typing as npt

__all__ = (
    'CellWord',
    'MeasureGrid',
    'SLConstants',
    'build_grid',
    'cell_interval',
    'cell_mass',
    'make_constants',
    'words_of_length',
)

log = getLogger(__name__)

type Real = float | Fraction
type CellWord = tuple[int, ...]


@dataclass(frozen=True, slots=True)
class SLConstants:
    alpha: Real
    b: Real
    delta: Real
    gamma: Real

    @property
    def beta(self) -> Real:
        '''Length ratio of the second map, 1 - α.'''
        return 1 - self.alpha


def make_constants(alpha: Real, *, diagnostic: bool = False) -> SLConstants:
    '''
    Derive the constants of the Sturm-Liouville family from α.

    Args:
        alpha: Contraction ratio of Ψ1; must satisfy 0 < α ≤ 1/2 (δ ≤ 1).
        diagnostic: Allow 1/2 < α < 1 (δ > 1), for renormalization-map experiments only.

    Returns:
        The constants (α, b, δ, γ), computed in the arithmetic of `alpha` (exact for Fractions).

    Doctests:
    >>> make_constants(0.5)
    SLConstants(alpha=0.5, b=0.5, delta=1.0, gamma=4.0)
    >>> make_constants(Fraction(1, 3))
    SLConstants(alpha=Fraction(1, 3), b=Fraction(2, 3), delta=Fraction(1, 2), gamma=Fraction(9, 2))
    >>> make_constants(0.6)
    Traceback (most recent call last):
    ...
    fractal_zeta.errors.ParameterError: alpha=0.6 violates 0 < alpha <= 1/2 (delta <= 1)
    '''
    if not 0 < alpha < 1:
        raise ParameterError('alpha', alpha, '0 < alpha < 1')
    if alpha > Fraction(1, 2) and not diagnostic:
        raise ParameterError('alpha', alpha, '0 < alpha <= 1/2 (delta <= 1)')

    beta = 1 - alpha
    return SLConstants(alpha=alpha, b=beta, delta=alpha / beta, gamma=1 / (alpha * beta))


def _check_word(word: CellWord):
    if any(letter not in (1, 2) for letter in word):
        raise ValueError(f'Cell words use the letters 1 and 2: {word}')


def cell_mass(word: CellWord, c: SLConstants) -> Real:
    '''
    Measure of the cell Ψ_w(I).

    Doctests:
    >>> cell_mass((), make_constants(0.5))
    1
    >>> cell_mass((1, 2), make_constants(0.5))
    0.25
    >>> cell_mass((1,), make_constants(Fraction(1, 3)))
    Fraction(2, 3)
    '''
    _check_word(word)
    weights = {1: c.b, 2: 1 - c.b}
    return reduce(lambda mass, letter: mass * weights[letter], word, 1)


def cell_interval(word: CellWord, c: SLConstants) -> tuple[Real, Real]:
    '''
    Endpoints of Ψ_w(I), applying the innermost map first.

    Doctests:
    >>> cell_interval((2, 1), make_constants(Fraction(1, 3)))
    (Fraction(1, 3), Fraction(5, 9))
    '''
    _check_word(word)
    left: Real = 0
    right: Real = 1
    for letter in reversed(word):
        if letter == 1:
            left, right = c.alpha * left, c.alpha * right
        else:
            left, right = 1 - c.beta * (1 - left), 1 - c.beta * (1 - right)
    return left, right


@dataclass(frozen=True, slots=True, eq=False)
class MeasureGrid:
    '''
    Level-n atomic approximation of the self-similar measure.

    Every level-n cell of mass w puts w/2 on each of its endpoints. Interior points shared by two cells collect both halves,
    and the end points 0 and 1 keep a half-cell each, so the masses sum to 1.
    '''
    level: int
    points: npt.NDArray[np.float64]
    masses: npt.NDArray[np.float64]
    cell_lengths: npt.NDArray[np.float64] = field(repr=False)
    cell_masses: npt.NDArray[np.float64] = field(repr=False)

    @property
    def interior_masses(self) -> npt.NDArray[np.float64]:
        return self.masses[1:-1]

    @property
    def length(self) -> float:
        return float(self.points[-1] - self.points[0])

    def blow_up(self, p: int, c: SLConstants) -> MeasureGrid:
        '''The same grid stretched onto I_<p> = [0, α^-p], with the measure scaled by (1-α)^-p.'''
        stretch = float(c.alpha) ** -p
        weight = float(c.beta) ** -p
        return MeasureGrid(
            level=self.level,
            points=self.points * stretch,
            masses=self.masses * weight,
            cell_lengths=self.cell_lengths * stretch,
            cell_masses=self.cell_masses * weight,
        )

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(('point', 'mass'))
        writer.writerows((repr(float(x)), repr(float(m))) for x, m in zip(self.points, self.masses, strict=True))
        return buffer.getvalue()


def build_grid(n: int, c: SLConstants) -> MeasureGrid:
    '''
    Build the level-n grid: all images of {0, 1} under words of length n, with lumped masses.

    Cells are generated left to right: the level-(k+1) cells are Ψ1 of the level-k cells followed by Ψ2 of them.

    Doctests:
    >>> build_grid(1, make_constants(0.5)).points.tolist()
    [0.0, 0.5, 1.0]
    >>> build_grid(1, make_constants(0.5)).masses.tolist()
    [0.25, 0.5, 0.25]
    >>> bool(build_grid(1, make_constants(1 / 3)).points[1] == 1 / 3)
    True
    '''
    if n < 0:
        raise ParameterError('n', n, 'n >= 0')

    alpha = float(c.alpha)
    b = float(c.b)
    lengths = np.ones(1)
    cell_masses = np.ones(1)
    for _ in range(n):
        lengths = np.concatenate((alpha * lengths, (1 - alpha) * lengths))
        cell_masses = np.concatenate((b * cell_masses, (1 - b) * cell_masses))

    points = np.concatenate(([0.0], np.cumsum(lengths)))
    points[-1] = 1.0
    masses = np.zeros(len(points))
    masses[:-1] += cell_masses / 2
    masses[1:] += cell_masses / 2

    log.debug('Built level-%d grid with %d cells (alpha=%s)', n, len(lengths), c.alpha)
    return MeasureGrid(level=n, points=points, masses=masses, cell_lengths=lengths, cell_masses=cell_masses)


def words_of_length(n: int) -> Sequence[CellWord]:
    '''
    All cell words of length n, in the left-to-right order of their cells.

    Doctests:
    >>> words_of_length(2)
    [(1, 1), (1, 2), (2, 1), (2, 2)]
    '''
    return list(product((1, 2), repeat=n))
