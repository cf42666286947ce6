'''
The fractal Sturm-Liouville operator -(d/dm)(d/dx) on [0, 1] and its blow-ups.

The self-similar measure is replaced by the atoms of a `MeasureGrid`, so eigenfunctions are piecewise linear and the
propagator over [0, 1] is an exact product of drift (1, h; 0, 1) and kick (1, 0; -λw, 1) matrices. On the self-similar
grids the level-(n+1) propagator is built from two conjugated copies of the level-n propagator at λ/γ, which is how the
invariant curve and the generating set are evaluated.
'''
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from enum import Enum
from logging import getLogger
from typing import TYPE_CHECKING, Any

import numpy as np
import scipy.linalg as la
from scipy.optimize import brentq

from .errors import ExhaustionError, NumericError, ParameterError, PoleError
from .ifs_measure import MeasureGrid, SLConstants, build_grid
from .renorm_dynamics import ProjPoint, chordal_distance, rho_coords, rho_iterate
from .spectrum import GROUPING_TOLERANCE, Provenance, SpectrumList

if TYPE_CHECKING:
    import numpy.typing as npt

__all__ = (
    'CurveConvention',
    'GeneratingSet',
    'Propagator',
    'SampledFunction',
    'TraceForm',
    'defining_condition_residuals',
    'eigenfunction_extend',
    'eigensolve_H0_oracle',
    'generating_indicator',
    'generating_set',
    'invariant_curve_residual',
    'oracle_eigenfunction',
    'phi',
    'phi_convention_residuals',
    'phi_level',
    'propagator',
    'rayleigh_quotient',
    'self_similar_propagator',
    'self_similar_rescaling_check',
    'spectrum_Hn',
    'trace_form',
)

log = getLogger(__name__)

type Quad = tuple[Any, Any, Any, Any]

MIN_ORACLE_LEVEL = 8
POLE_THRESHOLD = 1e-12
SCAN_POINTS_PER_DECADE = 400
SCAN_SQRT_STEP = 0.25
SCAN_START = 1e-6
SCAN_FIRST_BOUND = 100.0
ROOT_RTOL = 1e-10
COUNT_CHECK_MAX_LEVEL = 16
COUNT_CHECK_MARGIN = 0.25


@dataclass(frozen=True, slots=True, eq=False)
class Propagator:
    '''
    The matrix (A, B; C, D) taking (f(s), f'(s)) to (f(t), f'(t)); `entries` may carry leading batch axes.
    '''
    entries: npt.NDArray[np.complex128]

    @classmethod
    def from_quad(cls, quad: Quad) -> Propagator:
        a, b, c, d = (np.asarray(x, dtype=complex) for x in quad)
        return cls(np.stack((np.stack((a, b), axis=-1), np.stack((c, d), axis=-1)), axis=-2))

    @property
    def A(self) -> Any:  # noqa: N802
        return self.entries[..., 0, 0]

    @property
    def B(self) -> Any:  # noqa: N802
        return self.entries[..., 0, 1]

    @property
    def C(self) -> Any:  # noqa: N802
        return self.entries[..., 1, 0]

    @property
    def D(self) -> Any:  # noqa: N802
        return self.entries[..., 1, 1]

    @property
    def determinant(self) -> Any:
        return self.A * self.D - self.B * self.C


def _propagate(lam: Any, grid: MeasureGrid) -> Quad:
    '''Row-by-row kick and drift over the grid, broadcasting over lam.'''
    lam = np.asarray(lam, dtype=complex)
    a, b = np.ones_like(lam), np.zeros_like(lam)
    c, d = np.zeros_like(lam), np.ones_like(lam)
    masses = grid.masses.tolist()
    for mass, length in zip(masses[:-1], grid.cell_lengths.tolist(), strict=True):
        c, d = c - lam * mass * a, d - lam * mass * b
        a, b = a + length * c, b + length * d
    last = masses[-1]
    c, d = c - lam * last * a, d - lam * last * b
    return a, b, c, d


def propagator(lam: Any, grid: MeasureGrid) -> Propagator:
    '''
    The propagator over the whole grid, a direct product of one kick per point and one drift per cell.

    Doctests:
    >>> from fractal_zeta.ifs_measure import build_grid, make_constants
    >>> propagator(0, build_grid(3, make_constants(0.5))).entries.real.tolist()
    [[1.0, 1.0], [0.0, 1.0]]
    '''
    return Propagator.from_quad(_propagate(lam, grid))


def _self_similar_quad(lam: Any, c: SLConstants, level: int) -> Quad:
    alpha, beta = float(c.alpha), float(c.beta)
    gamma = float(c.gamma)
    mu = lam / gamma**level
    # a and d hold A - 1 and D - 1
    a, b, cc, d = -mu / 2, mu * 0 + 1, mu * mu / 4 - mu, -mu / 2
    for _ in range(level):
        bc = b * cc
        a, b, cc, d = (
            2 * a + a * a + (beta / alpha) * bc,
            b * (1 + alpha * a + beta * d),
            cc * (gamma + a / beta + d / alpha),
            2 * d + d * d + (alpha / beta) * bc,
        )
    return 1 + a, b, cc, 1 + d


def self_similar_propagator(lam: Any, c: SLConstants, level: int) -> Propagator:
    '''
    The level-n propagator of `build_grid(n, c)`, evaluated in n steps of the self-similar recursion.

    Doctests:
    >>> from fractal_zeta.ifs_measure import build_grid, make_constants
    >>> c = make_constants(1 / 3)
    >>> direct = propagator(2.5, build_grid(6, c)).entries
    >>> bool(np.allclose(self_similar_propagator(2.5, c, 6).entries, direct, rtol=1e-12, atol=1e-12))
    True
    '''
    if level < 0:
        raise ParameterError('level', level, 'level >= 0')
    return Propagator.from_quad(_self_similar_quad(np.asarray(lam, dtype=complex), c, level))


@dataclass(frozen=True, slots=True)
class TraceForm:
    '''q(f0, f1) = q00·f0² + q11·f1² + 2·q01·f0·f1.'''
    q00: complex
    q11: complex
    q01: complex

    def __call__(self, f0: complex, f1: complex) -> complex:
        return self.q00 * f0 * f0 + self.q11 * f1 * f1 + 2 * self.q01 * f0 * f1


def trace_form(lam: complex, grid: MeasureGrid) -> TraceForm:
    '''
    The boundary reduction (A/B, D/B, -1/B) of the eigenvalue-shifted energy.

    Doctests:
    >>> from fractal_zeta.ifs_measure import build_grid, make_constants
    >>> form = trace_form(0, build_grid(2, make_constants(0.5)))
    >>> (form.q00, form.q11, form.q01) == (1, 1, -1)
    True
    '''
    prop = propagator(lam, grid)
    b = complex(prop.B)
    if abs(b) < POLE_THRESHOLD:
        raise PoleError('trace form', lam)
    return TraceForm(q00=complex(prop.A) / b, q11=complex(prop.D) / b, q01=-1 / b)


def phi(lam: complex, grid: MeasureGrid) -> ProjPoint:
    '''
    The invariant curve point [A(λ), D(λ), 1].

    Doctests:
    >>> from fractal_zeta.ifs_measure import build_grid, make_constants
    >>> phi(0, build_grid(4, make_constants(0.5)))
    ProjPoint(coords=((1+0j), (1+0j), (1+0j)))
    '''
    prop = propagator(lam, grid)
    return ProjPoint.of(complex(prop.A), complex(prop.D), 1)


def phi_level(lam: complex, c: SLConstants, level: int) -> ProjPoint:
    '''`phi` on `build_grid(level, c)`, through the self-similar recursion.'''
    a, _, _, d = _self_similar_quad(complex(lam), c, level)
    return ProjPoint.of(a, d, 1)


class CurveConvention(Enum):
    AD1 = '[A, D, 1]'
    AdD1 = '[A, δD, 1]'
    ADB = '[A, D, B]'
    AdDB = '[A, δD, B]'

    def __str__(self) -> str:
        return str(self.value)

    def coords(self, quad: Quad, delta: float) -> npt.NDArray[np.complex128]:
        a, b, _, d = (np.asarray(x, dtype=complex) for x in quad)
        one = np.ones_like(a)
        match self:
            case CurveConvention.AD1:
                return np.stack((a, d, one), axis=-1)
            case CurveConvention.AdD1:
                return np.stack((a, delta * d, one), axis=-1)
            case CurveConvention.ADB:
                return np.stack((a, d, b), axis=-1)
            case CurveConvention.AdDB:
                return np.stack((a, delta * d, b), axis=-1)


def phi_convention_residuals(c: SLConstants, level: int = 12,
                             samples: npt.ArrayLike | None = None) -> dict[CurveConvention, float]:
    '''
    Worst projective distance between ρ(ψ(λ)) and ψ(γλ) for each candidate coordinate convention ψ.

    The convention with the smallest residual is logged as the one in use.
    '''
    lam = np.asarray(np.linspace(0.25, 5.0, 20) if samples is None else samples, dtype=complex)
    delta, gamma = float(c.delta), float(c.gamma)
    here = _self_similar_quad(lam, c, level)
    there = _self_similar_quad(gamma * lam, c, level + 1)

    residuals = {
        convention: float(np.max(chordal_distance(rho_coords(convention.coords(here, delta), delta),
                                                  convention.coords(there, delta))))
        for convention in CurveConvention
    }
    chosen = min(residuals, key=residuals.__getitem__)
    for convention, residual in residuals.items():
        log.debug('Curve convention %s: residual %.3g', convention, residual)
    log.info('Invariant curve convention for alpha=%s: %s', c.alpha, chosen)
    return residuals


def invariant_curve_residual(lam: Any, c: SLConstants, level: int) -> Any:
    '''
    Projective distance between ρ(φ(λ)) at `level` and φ(γλ) at `level + 1`.

    Doctests:
    >>> from fractal_zeta.ifs_measure import make_constants
    >>> invariant_curve_residual(3.0, make_constants(0.4), 10) < 1e-12
    True
    '''
    lam_arr = np.asarray(lam, dtype=complex)
    delta = float(c.delta)
    here = CurveConvention.AD1.coords(_self_similar_quad(lam_arr, c, level), delta)
    there = CurveConvention.AD1.coords(_self_similar_quad(float(c.gamma) * lam_arr, c, level + 1), delta)
    residual = chordal_distance(rho_coords(here, delta), there)
    return float(residual) if residual.ndim == 0 else residual


def generating_indicator(lam: Any, c: SLConstants, level: int) -> Any:
    '''
    g(λ) = x + y/δ at φ(λ/γ); its zeros form the generating set.

    Doctests:
    >>> from fractal_zeta.ifs_measure import make_constants
    >>> abs(generating_indicator(math.pi ** 2, make_constants(0.5), 30)) < 1e-10
    True
    '''
    a, _, _, d = _self_similar_quad(lam / float(c.gamma), c, level)
    value = a + d / float(c.delta)
    return value.real if isinstance(value, complex | np.ndarray) else value


@dataclass(frozen=True, slots=True, kw_only=True, eq=False)
class GeneratingSet:
    values: npt.NDArray[np.float64] = field(repr=False)
    constants: SLConstants
    level: int
    scan_bound: float

    @property
    def count(self) -> int:
        return len(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def first(self, count: int) -> GeneratingSet:
        return GeneratingSet(values=self.values[:count], constants=self.constants, level=self.level,
                             scan_bound=self.scan_bound)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(('index', 'lambda'))
        writer.writerows((k, repr(float(v))) for k, v in enumerate(self.values, start=1))
        return buffer.getvalue()


def _effective_level(bound: float, c: SLConstants, level: int, resolution: float) -> int:
    return max(level, math.ceil(math.log(bound / resolution) / math.log(float(c.gamma))))


def _scan_points(lo: float, hi: float) -> npt.NDArray[np.float64]:
    count = max(2, math.ceil(math.log10(hi / lo) * SCAN_POINTS_PER_DECADE) + 1)
    geometric = np.geomspace(lo, hi, count)
    root_lo = math.ceil(math.sqrt(lo) / SCAN_SQRT_STEP) * SCAN_SQRT_STEP
    uniform = np.arange(root_lo, math.sqrt(hi), SCAN_SQRT_STEP) ** 2
    return np.unique(np.concatenate((geometric, uniform, [hi])))


def _roots_in(lo: float, hi: float, c: SLConstants, level: int) -> list[float]:
    points = _scan_points(lo, hi)
    values = generating_indicator(points.astype(complex), c, level)

    def g(x: float) -> float:
        return float(generating_indicator(x, c, level))

    roots = [float(x) for x, v in zip(points[1:], values[1:], strict=True) if v == 0]
    for i in np.flatnonzero(values[:-1] * values[1:] < 0).tolist():
        roots.append(brentq(g, float(points[i]), float(points[i + 1]), rtol=ROOT_RTOL, xtol=1e-300))
    return sorted(roots)


def _check_root_count(values: npt.NDArray[np.float64], c: SLConstants, level: int) -> None:
    '''
    Compare the H_<0> spectrum implied by the roots with the oracle eigenvalue count, below a cutoff the oracle resolves.

    Every cell of a level-L grid has length times mass γ^-L, so the oracle lowers an eigenvalue λ by about λ²·γ^-L/12.
    The cutoff sits halfway, by index, to the first gap that shift could close.
    '''
    gamma = float(c.gamma)
    top = float(values[-1])
    layers = []
    scale = 1.0
    while scale * values[0] <= top:
        layers.append(scale * values[scale * values <= top])
        scale *= gamma
    implied = np.sort(np.concatenate(layers))

    oracle_level = min(max(level, MIN_ORACLE_LEVEL), COUNT_CHECK_MAX_LEVEL)
    shift = implied[1:] ** 2 * gamma**-oracle_level
    unresolved = np.flatnonzero(shift >= COUNT_CHECK_MARGIN * np.diff(implied))
    first_unresolved = int(unresolved[0]) if len(unresolved) else len(implied) - 1
    if first_unresolved == 0:
        log.debug('Root count check skipped: the level-%d oracle resolves no gap', oracle_level)
        return

    cut = first_unresolved // 2
    cutoff = float(implied[cut] + implied[cut + 1]) / 2
    diagonal, off_diagonal = _oracle_tridiagonal(build_grid(oracle_level, c))
    try:
        oracle = la.eigh_tridiagonal(diagonal, off_diagonal, eigvals_only=True, select='v', select_range=(0, cutoff))
    except (la.LinAlgError, ValueError) as e:
        raise NumericError(f'Tridiagonal eigensolve failed at level {oracle_level}') from e

    if len(oracle) != cut + 1:
        raise ExhaustionError(cut + 1, len(oracle), cutoff)
    log.debug('Root count agrees with the level-%d oracle: %d eigenvalues below %.6g', oracle_level, cut + 1, cutoff)


def generating_set(k: int, c: SLConstants, level: int = 14, *, resolution: float = 1e-9,
                   max_lambda: float = 1e13, verify: bool = True) -> GeneratingSet:
    '''
    The first k points of S = {λ : φ(λ/γ) ∈ D}, by scanning g for sign changes and refining each with Brent's method.

    The scan proceeds over [1e-6, 100] and then over successive intervals four times longer. Each interval is
    evaluated at a level fine enough that λ/γ^level stays below `resolution` across it.

    Args:
        k: Number of roots wanted.
        c: Constants of the operator.
        level: Minimum discretization level.
        resolution: Bound on λ/γ^level for every scanned λ.
        max_lambda: Give up beyond this bound.
        verify: Compare the number of roots with the oracle eigenvalue count where the oracle resolves the spectrum.

    Raises:
        ExhaustionError: Fewer than k roots below `max_lambda`, or a root count that disagrees with the oracle.
    '''
    if k < 1:
        raise ParameterError('k', k, 'k >= 1')

    roots: list[float] = []
    lo, hi = SCAN_START, SCAN_FIRST_BOUND
    used_level = level
    while len(roots) < k:
        if lo >= max_lambda:
            raise ExhaustionError(len(roots), k, max_lambda)
        hi = min(hi, max_lambda)
        used_level = _effective_level(hi, c, level, resolution)
        found = _roots_in(lo, hi, c, used_level)
        log.debug('Scanned [%.3g, %.3g] at level %d: %d roots', lo, hi, used_level, len(found))
        roots.extend(found)
        lo, hi = hi, hi * 4

    values = np.array(roots[:k])
    if np.any(np.diff(values) <= 0) or values[0] <= 0:
        raise NumericError('Generating set roots are not positive and strictly increasing')
    if verify:
        _check_root_count(values, c, level)
    log.info('Found %d generating set roots for alpha=%s (max %.6g, level %d)', k, c.alpha, values[-1], used_level)
    return GeneratingSet(values=values, constants=c, level=used_level, scan_bound=hi)


def spectrum_Hn(n: int | None, window: tuple[int, int], S: GeneratingSet) -> SpectrumList:  # noqa: N802, N803
    '''
    γ^p·λ for every λ in S and every p in the window, each with multiplicity 1.

    Args:
        n: Blow-up index of H_<n>, or None for the operator on the half-line.
        window: (p_min, p_max); for finite n, p_min must be at least -n.
        S: The generating set.
    '''
    p_min, p_max = window
    if p_min > p_max:
        raise ParameterError('window', window, 'p_min <= p_max')
    if n is not None and p_min < -n:
        raise ParameterError('window', window, f'p_min >= -n = {-n}')

    gamma = float(S.constants.gamma)
    values = np.concatenate([gamma**p * S.values for p in range(p_min, p_max + 1)])
    return SpectrumList.from_values(values, Provenance.Renormalized, level=n)


def _oracle_tridiagonal(grid: MeasureGrid) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    '''Diagonal and off-diagonal of M^-1/2 K M^-1/2 on the interior points.'''
    h = grid.cell_lengths
    m = grid.interior_masses
    diagonal = (1 / h[:-1] + 1 / h[1:]) / m
    off_diagonal = -(1 / h[1:-1]) / np.sqrt(m[:-1] * m[1:])
    return diagonal, off_diagonal


def eigensolve_H0_oracle(k: int, grid: MeasureGrid) -> SpectrumList:  # noqa: N802
    '''
    The k smallest eigenvalues of K u = λ M u: second differences on the grid, lumped masses, Dirichlet ends.
    '''
    if grid.level < MIN_ORACLE_LEVEL:
        raise ParameterError('level', grid.level, f'level >= {MIN_ORACLE_LEVEL}')
    dimension = len(grid.points) - 2
    if not 1 <= k <= dimension:
        raise ParameterError('k', k, f'1 <= k <= {dimension}')

    diagonal, off_diagonal = _oracle_tridiagonal(grid)
    try:
        eigenvalues = la.eigh_tridiagonal(diagonal, off_diagonal, eigvals_only=True,
                                          select='i', select_range=(0, k - 1))
    except (la.LinAlgError, ValueError) as e:
        raise NumericError(f'Tridiagonal eigensolve failed at level {grid.level}') from e

    log.info('Oracle: %d eigenvalues at level %d, smallest %.10g', k, grid.level, eigenvalues[0])
    return SpectrumList.from_values(eigenvalues, Provenance.Oracle, level=grid.level, tol=GROUPING_TOLERANCE)


@dataclass(frozen=True, slots=True, eq=False)
class SampledFunction:
    grid: MeasureGrid
    values: npt.NDArray[np.float64]

    def __post_init__(self):
        if len(self.values) != len(self.grid.points):
            raise ValueError(f'{len(self.values)} samples for {len(self.grid.points)} grid points')


def oracle_eigenfunction(index: int, grid: MeasureGrid) -> tuple[float, SampledFunction]:
    '''The index-th (from 0) oracle eigenpair, with the eigenvector sampled on every grid point.'''
    diagonal, off_diagonal = _oracle_tridiagonal(grid)
    try:
        eigenvalues, vectors = la.eigh_tridiagonal(diagonal, off_diagonal, select='i', select_range=(index, index))
    except (la.LinAlgError, ValueError) as e:
        raise NumericError(f'Tridiagonal eigensolve failed at level {grid.level}') from e
    values = np.zeros(len(grid.points))
    values[1:-1] = vectors[:, 0] / np.sqrt(grid.interior_masses)
    return float(eigenvalues[0]), SampledFunction(grid, values)


def eigenfunction_extend(f: SampledFunction, p: int, c: SLConstants) -> SampledFunction:
    '''
    Stretch f from [0, 1] onto [0, α^-p], keeping its samples: grid points move by α^-p, masses by (1-α)^-p.

    An eigenfunction with eigenvalue λ on [0, 1] becomes one with eigenvalue γ^-p·λ on the stretched interval.
    '''
    if p < 0:
        raise ParameterError('p', p, 'p >= 0')
    return SampledFunction(f.grid.blow_up(p, c), f.values.copy())


def rayleigh_quotient(f: SampledFunction) -> float:
    '''
    Σ (Δf)²/h over cells divided by Σ w·f² over points.

    Doctests:
    >>> from fractal_zeta.ifs_measure import build_grid, make_constants
    >>> grid = build_grid(10, make_constants(0.5))
    >>> abs(rayleigh_quotient(SampledFunction(grid, np.sin(np.pi * grid.points))) / np.pi ** 2 - 1) < 1e-5
    True
    '''
    energy = np.sum(np.diff(f.values) ** 2 / f.grid.cell_lengths)
    mass = np.sum(f.grid.masses * f.values**2)
    if mass == 0:
        raise ValueError('Rayleigh quotient of the zero function')
    return float(energy / mass)


def self_similar_rescaling_check(lam: complex, n: int, c: SLConstants, level: int, *,
                                 reference_level: int | None = None) -> float:
    '''
    Frobenius distance between the propagator of H_<n> and diag(1, α^n)·Γ(γ^n λ)·diag(1, α^-n).

    The left side is the generic product over the level grid carried to [0, α^-n]; the right side uses the self-similar
    propagator at `reference_level` (default `level + 12`), so the residual measures the discretization error of `level`.
    '''
    if n < 1:
        raise ParameterError('n', n, 'n >= 1')
    reference_level = level + 12 if reference_level is None else reference_level

    lhs = propagator(lam, build_grid(level, c).blow_up(n, c)).entries
    scale = float(c.alpha) ** n
    rhs = self_similar_propagator(float(c.gamma) ** n * complex(lam), c, reference_level).entries.copy()
    rhs[0, 1] /= scale
    rhs[1, 0] *= scale
    residual = float(np.linalg.norm(lhs - rhs))
    log.debug('Rescaling residual at lambda=%s, n=%d, level=%d: %.3g', lam, n, level, residual)
    return residual


def defining_condition_residuals(S: GeneratingSet, p_max: int = 4) -> npt.NDArray[np.float64]:  # noqa: N803
    '''
    |x + y/δ| at ρ^p(φ(γ^-(p+1)·λ)) for every λ in S and p = 0..p_max; rows are p, columns follow S.
    '''
    c = S.constants
    delta, gamma = float(c.delta), float(c.gamma)
    residuals = np.empty((p_max + 1, len(S)))
    for p in range(p_max + 1):
        for j, lam in enumerate(S.values.tolist()):
            pt = rho_iterate(phi_level(lam * gamma ** -(p + 1), c, S.level), p, c)
            residuals[p, j] = abs(pt.x + pt.y / delta)
    return residuals
