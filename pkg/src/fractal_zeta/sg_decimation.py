'''
Sierpinski pre-gaskets, their Dirichlet graph Laplacians, and spectral decimation with R(z) = z(5 - 4z).

Vertices are kept on the integer lattice spanned by the corners (1, 0) and (1/2, √3/2) at scale 2^-m, so the three
contractions act by integer shifts and no floating point deduplication is needed.
'''
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cache
from logging import getLogger
from typing import TYPE_CHECKING, Any

import numpy as np
import scipy.linalg as la

from . import poly_zeta
from .errors import ConsistencyError, DomainError, NumericError, ParameterError, ResourceError
from .poly_zeta import SG_POLY
from .spectrum import GROUPING_TOLERANCE, Provenance, SpectrumEntry, SpectrumList, group_values

if TYPE_CHECKING:
    import numpy.typing as npt

__all__ = (
    'FORBIDDEN',
    'GraphLaplacianMatrix',
    'PreGasket',
    'births',
    'branch_inverse',
    'build_pregasket',
    'decimation_spectrum',
    'eigensolve_direct',
    'forward_decimation_misses',
    'infinite_sg_spectrum',
    'interior_dimension',
    'laplacian_matrix',
    'renormalized_spectrum',
    'scaled_branch_limit',
    'scaling_closure_residual',
)

log = getLogger(__name__)

FORBIDDEN = (1.25, 0.5, 1.5)
BRANCH_DOMAIN = 25 / 16
MAX_GRAPH_LEVEL = 8
MAX_DIRECT_DIMENSION = 3280
SQRT3_2 = math.sqrt(3) / 2


def vertex_count(m: int) -> int:
    '''
    |V_m| = 3(3^m + 1)/2.

    Doctests:
    >>> [vertex_count(m) for m in range(4)]
    [3, 6, 15, 42]
    '''
    return 3 * (3**m + 1) // 2


def interior_dimension(m: int) -> int:
    '''
    Number of interior vertices, (3^(m+1) - 3)/2.

    Doctests:
    >>> [interior_dimension(m) for m in range(1, 5)]
    [3, 12, 39, 120]
    '''
    return (3 ** (m + 1) - 3) // 2


@dataclass(frozen=True, slots=True, eq=False)
class PreGasket:
    level: int
    lattice: npt.NDArray[np.int64] = field(repr=False)
    boundary: tuple[int, int, int]
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def vertices(self) -> npt.NDArray[np.float64]:
        '''Plane coordinates of V_m.'''
        a, b = self.lattice[:, 0], self.lattice[:, 1]
        scale = 2.0**-self.level
        return np.column_stack(((a + b / 2) * scale, b * SQRT3_2 * scale))

    @property
    def interior(self) -> tuple[int, ...]:
        corners = set(self.boundary)
        return tuple(i for i in range(len(self.adjacency)) if i not in corners)

    def __len__(self) -> int:
        return len(self.adjacency)


def build_pregasket(m: int) -> PreGasket:
    '''
    Build the level-m pre-gasket from the three contractions.

    Doctests:
    >>> g = build_pregasket(1)
    >>> len(g), len(g.interior)
    (6, 3)
    >>> sorted(len(g.adjacency[i]) for i in g.interior)
    [4, 4, 4]
    '''
    if m < 0:
        raise ParameterError('m', m, 'm >= 0')
    if m > MAX_GRAPH_LEVEL:
        raise ResourceError(m, interior_dimension(m), MAX_DIRECT_DIMENSION)

    lattice = np.array([[0, 0], [1, 0], [0, 1]], dtype=np.int64)
    edges = np.array([[0, 1], [1, 2], [0, 2]], dtype=np.int64)
    for k in range(m):
        shift = 2**k
        count = len(lattice)
        images = np.concatenate((lattice, lattice + (shift, 0), lattice + (0, shift)))
        image_edges = np.concatenate((edges, edges + count, edges + 2 * count))
        lattice, inverse = np.unique(images, axis=0, return_inverse=True)
        edges = inverse.reshape(-1)[image_edges]

    edges = np.unique(np.sort(edges, axis=1), axis=0)
    neighbours: list[list[int]] = [[] for _ in range(len(lattice))]
    for u, v in edges.tolist():
        neighbours[u].append(v)
        neighbours[v].append(u)

    index = {(int(a), int(b)): i for i, (a, b) in enumerate(lattice.tolist())}
    side = 2**m
    boundary = (index[0, 0], index[side, 0], index[0, side])

    gasket = PreGasket(level=m, lattice=lattice, boundary=boundary,
                       adjacency=tuple(tuple(sorted(n)) for n in neighbours))
    if len(gasket) != vertex_count(m):
        raise NumericError(f'Level {m} pre-gasket has {len(gasket)} vertices, expected {vertex_count(m)}')
    log.debug('Built level-%d pre-gasket: %d vertices, %d edges', m, len(gasket), len(edges))
    return gasket


@dataclass(frozen=True, slots=True, eq=False)
class GraphLaplacianMatrix:
    '''I - A/4 on the interior vertices (Dirichlet condition on the three corners).'''
    level: int
    entries: npt.NDArray[np.float64] = field(repr=False)
    interior: tuple[int, ...] = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.interior)


def laplacian_matrix(g: PreGasket) -> GraphLaplacianMatrix:
    '''
    Doctests:
    >>> laplacian_matrix(build_pregasket(1)).entries.tolist()
    [[1.0, -0.25, -0.25], [-0.25, 1.0, -0.25], [-0.25, -0.25, 1.0]]
    '''
    interior = g.interior
    position = {vertex: i for i, vertex in enumerate(interior)}
    entries = np.eye(len(interior))
    for vertex, i in position.items():
        for neighbour in g.adjacency[vertex]:
            j = position.get(neighbour)
            if j is not None:
                entries[i, j] -= 0.25
    return GraphLaplacianMatrix(level=g.level, entries=entries, interior=interior)


def eigensolve_direct(m: int, *, tol: float = GROUPING_TOLERANCE) -> SpectrumList:
    '''
    The oracle: full dense eigensolve of the level-m Dirichlet graph Laplacian.

    Doctests:
    >>> list(eigensolve_direct(1))
    [SpectrumEntry(value=0.5, multiplicity=1), SpectrumEntry(value=1.25, multiplicity=2)]
    '''
    if m < 1:
        raise ParameterError('m', m, 'm >= 1')
    dimension = interior_dimension(m)
    if dimension > MAX_DIRECT_DIMENSION:
        raise ResourceError(m, dimension, MAX_DIRECT_DIMENSION)

    matrix = laplacian_matrix(build_pregasket(m))
    try:
        eigenvalues = la.eigh(matrix.entries, eigvals_only=True)
    except la.LinAlgError as e:
        raise NumericError(f'Dense eigensolve failed at level {m}') from e

    spectrum = SpectrumList.from_values(np.round(eigenvalues, 12), Provenance.Oracle, level=m, tol=tol)
    if spectrum.total != dimension:
        raise NumericError(f'Oracle returned {spectrum.total} eigenvalues for dimension {dimension}')
    log.info('Level %d oracle: %d eigenvalues, %d distinct', m, dimension, len(spectrum))
    return spectrum


def births(m: int) -> dict[float, int]:
    '''
    Eigenvalues that appear at level m without a level m-1 parent, with their multiplicities.

    Doctests:
    >>> births(1)
    {0.5: 1, 1.25: 2}
    >>> births(3)
    {1.25: 6, 1.5: 12}
    '''
    if m < 1:
        return {}
    if m == 1:
        return {0.5: 1, 1.25: 2}
    return {1.25: (3 ** (m - 1) + 3) // 2, 1.5: (3**m - 3) // 2}


def _is_forbidden(values: npt.NDArray[np.float64]) -> npt.NDArray[np.bool_]:
    return np.any(np.abs(values[:, None] - np.array(FORBIDDEN)[None, :]) < 1e-12, axis=1)


@cache
def _decimated(m: int) -> tuple[tuple[float, ...], tuple[int, ...]]:
    if m == 1:
        born = births(1)
        return tuple(born), tuple(born.values())

    parent_values, parent_mults = (np.array(part) for part in _decimated(m - 1))
    values = np.concatenate((SG_POLY.minus_branch(parent_values), SG_POLY.plus_branch(parent_values)))
    mults = np.concatenate((parent_mults, parent_mults))
    keep = ~_is_forbidden(values)
    values, mults = values[keep], mults[keep]

    born = births(m)
    values = np.concatenate((values, list(born)))
    mults = np.concatenate((mults, list(born.values())))
    return tuple(values.tolist()), tuple(int(k) for k in mults)


def decimation_spectrum(m: int, *, verify: bool | None = None, tol: float = GROUPING_TOLERANCE) -> SpectrumList:
    '''
    The level-m spectrum generated from level 1 by inverse images of R plus the births at each level.

    Args:
        m: Level, at least 1.
        verify: Compare against `eigensolve_direct(m)` and raise `ConsistencyError` on the first mismatch.
            Defaults to comparing whenever level m is within the dense eigensolver's dimension limit.
        tol: Grouping and comparison tolerance.

    Doctests:
    >>> list(decimation_spectrum(1))
    [SpectrumEntry(value=0.5, multiplicity=1), SpectrumEntry(value=1.25, multiplicity=2)]
    >>> decimation_spectrum(4).total == interior_dimension(4)
    True
    '''
    if m < 1:
        raise ParameterError('m', m, 'm >= 1')

    values, mults = _decimated(m)
    entries = _merge(values, mults, tol)
    spectrum = SpectrumList(entries=tuple(entries), provenance=Provenance.Decimation, level=m)
    if spectrum.total != interior_dimension(m):
        raise ConsistencyError(float('nan'), f'level {m} decimation produced {spectrum.total} eigenvalues, '
                                             f'expected {interior_dimension(m)}')

    if verify is None:
        verify = interior_dimension(m) <= MAX_DIRECT_DIMENSION
    if verify:
        oracle = eigensolve_direct(m, tol=tol)
        offending = spectrum.mismatch(oracle, tol)
        if offending is not None:
            raise ConsistencyError(offending.value, f'decimation and oracle disagree at level {m} '
                                                    f'(multiplicity {offending.multiplicity})')
        log.info('Level %d decimation matches the oracle', m)
    return spectrum


def _merge(values: tuple[float, ...], mults: tuple[int, ...], tol: float) -> list[SpectrumEntry]:
    order = np.argsort(values)
    merged: list[SpectrumEntry] = []
    for i in order.tolist():
        value, mult = values[i], mults[i]
        if merged and value - merged[-1].value <= tol * max(1.0, abs(value)):
            merged[-1] = SpectrumEntry(merged[-1].value, merged[-1].multiplicity + mult)
        else:
            merged.append(SpectrumEntry(value, mult))
    return merged


def forward_decimation_misses(m: int, *, tol: float = GROUPING_TOLERANCE) -> list[float]:
    '''
    Level-(m+1) oracle eigenvalues outside B whose image under R is not a level-m oracle eigenvalue.
    '''
    upper = eigensolve_direct(m + 1, tol=tol).values
    lower = eigensolve_direct(m, tol=tol).values
    candidates = upper[~_is_forbidden(upper)]
    images = SG_POLY(candidates)
    distance = np.min(np.abs(images[:, None] - lower[None, :]), axis=1)
    return candidates[distance > tol].tolist()


def _check_branch_domain(z: Any):
    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr < 0) or np.any(z_arr > BRANCH_DOMAIN):
        raise DomainError(f'z={z!r} lies outside [0, 25/16] where the minus branch is real')


def branch_inverse(z: Any, m: int) -> Any:
    '''
    R_-^-m(z) for the gasket polynomial.

    Doctests:
    >>> round(branch_inverse(0.75, 1), 5)
    0.17431
    '''
    _check_branch_domain(z)
    return poly_zeta.branch_inverse(SG_POLY, z, m)


def scaled_branch_limit(z: Any) -> Any:
    '''
    𝓡(z) = lim 5^m R_-^-m(z).

    Doctests:
    >>> scaled_branch_limit(0.0)
    0.0
    >>> scaled_branch_limit(0.3) < scaled_branch_limit(0.8)
    True
    '''
    _check_branch_domain(z)
    return poly_zeta.scaled_branch_limit(SG_POLY, z)


@cache
def renormalized_spectrum(m: int) -> SpectrumList:
    '''
    Eigenvalues of the gasket Laplacian whose minus-branch chains start at or below level m: 5^m·𝓡(v) for every level-m
    decimation value v except 3/2, which continues only through the plus branch.
    '''
    spectrum = decimation_spectrum(m)
    keep = np.abs(spectrum.values - 1.5) > 1e-12
    limits = np.atleast_1d(scaled_branch_limit(spectrum.values[keep])) * 5.0**m
    entries = tuple(SpectrumEntry(float(v), int(k)) for v, k in zip(limits, spectrum.multiplicities[keep], strict=True))
    return SpectrumList(entries=entries, provenance=Provenance.Renormalized, level=m)


def infinite_sg_spectrum(n_min: int, n_max: int, j_max: int, z0: float) -> SpectrumList:
    '''
    A window of the infinite-gasket eigenvalue set: 5^n·𝓡(w) for w in R^-j{z0}, j ≤ j_max and n_min ≤ n ≤ n_max.

    The set is reported with multiplicity 1 per distinct value.

    Doctests:
    >>> window = infinite_sg_spectrum(0, 0, 0, 0.75)
    >>> window.values.tolist() == [scaled_branch_limit(0.75)]
    True
    '''
    if z0 not in (0.75, 1.25):
        raise ParameterError('z0', z0, 'z0 in {3/4, 5/4}')
    if n_min > n_max:
        raise ParameterError('n_min', n_min, f'n_min <= n_max = {n_max}')
    if j_max < 0:
        raise ParameterError('j_max', j_max, 'j_max >= 0')

    seeds = np.concatenate([poly_zeta.preimages(SG_POLY, z0, j).points.real for j in range(j_max + 1)])
    limits = np.atleast_1d(scaled_branch_limit(seeds))
    values = np.concatenate([5.0**n * limits for n in range(n_min, n_max + 1)])
    entries = tuple(SpectrumEntry(entry.value, 1) for entry in group_values(values, 1e-12))
    log.debug('Infinite gasket window n=[%d, %d], j<=%d: %d values', n_min, n_max, j_max, len(entries))
    return SpectrumList(entries=entries, provenance=Provenance.Renormalized)


def scaling_closure_residual(n_min: int, n_max: int, j_max: int, z0: float) -> float:
    '''
    Largest relative distance between 5·W(n_min, n_max - 1) and W(n_min + 1, n_max), W being `infinite_sg_spectrum`.

    Infinite when the two windows differ in size.

    Doctests:
    >>> scaling_closure_residual(-1, 2, 2, 1.25) < 1e-12
    True
    '''
    if n_max - n_min < 1:
        raise ParameterError('n_max', n_max, f'n_max > n_min = {n_min}')
    scaled = 5 * infinite_sg_spectrum(n_min, n_max - 1, j_max, z0).values
    shifted = infinite_sg_spectrum(n_min + 1, n_max, j_max, z0).values
    if len(scaled) != len(shifted):
        return math.inf
    return float(np.max(np.abs(scaled - shifted) / shifted))
