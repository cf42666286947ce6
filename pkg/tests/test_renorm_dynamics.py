from fractions import Fraction

import numpy as np
import pytest

from fractal_zeta.errors import IndeterminacyError, ParameterError
from fractal_zeta.ifs_measure import make_constants
from fractal_zeta.renorm_dynamics import (
    FIXED_X0,
    Orbit,
    ProjPoint,
    basin_probe,
    chordal_distance,
    in_D,
    projective_distance,
    rho_apply,
    rho_coords,
    rho_iterate,
)


def test_zero_vector_is_not_a_point():
    with pytest.raises(ValueError, match='projective plane'):
        ProjPoint.of(0, 0, 0)


def test_distance_ignores_scaling():
    a = ProjPoint.of(1, 2 - 1j, 3)
    b = ProjPoint.of(*a.scaled(-4j))
    assert projective_distance(a, b) == pytest.approx(0, abs=1e-15)


@pytest.mark.parametrize('alpha', [0.5, 0.25, Fraction(1, 3)])
def test_x0_is_fixed(alpha: float):
    assert rho_iterate(FIXED_X0, 5, make_constants(alpha)) == FIXED_X0


@pytest.mark.parametrize(('alpha', 'y'), [(0.5, -1), (Fraction(2, 3), -2)])
def test_points_of_D_at_infinity_are_indeterminate(alpha: float, y: float):
    c = make_constants(alpha, diagnostic=True)
    pt = ProjPoint.of(1, y, 0)
    assert in_D(pt, c)
    with pytest.raises(IndeterminacyError):
        rho_apply(pt, c)


def test_negative_power():
    with pytest.raises(ParameterError):
        rho_iterate(FIXED_X0, -1, make_constants(0.5))


def test_orbit_is_attracted_to_x0_when_delta_exceeds_one():
    report = basin_probe(ProjPoint.of(1, -2, 1), make_constants(Fraction(2, 3), diagnostic=True))
    assert report.classification is Orbit.Converged
    assert report.steps < 20
    assert report.record()['classification'] == 'converged'


def test_basin_orbit_needs_iterations():
    with pytest.raises(ParameterError):
        basin_probe(FIXED_X0, make_constants(0.5), max_iter=0)


@pytest.fixture(scope='module')
def random_points() -> np.ndarray:
    rng = np.random.default_rng(20240518)
    return rng.uniform(-1, 1, (50, 3)) + 1j * rng.uniform(-1, 1, (50, 3))


@pytest.mark.parametrize('beta', [2, 1j, -3])
@pytest.mark.parametrize('alpha', [0.5, Fraction(1, 3)])
def test_rho_is_homogeneous_of_degree_two(random_points: np.ndarray, beta: complex, alpha: float):
    delta = float(make_constants(alpha).delta)
    image = rho_coords(random_points, delta)
    scaled = rho_coords(beta * random_points, delta)
    np.testing.assert_allclose(scaled, beta**2 * image, rtol=1e-12, atol=1e-12)
    assert np.max(chordal_distance(scaled, image)) < 1e-12


@pytest.mark.parametrize('beta', [2, 1j, -3])
def test_rho_apply_ignores_representative(random_points: np.ndarray, beta: complex):
    c = make_constants(Fraction(1, 3))
    for coords in random_points[:10]:
        a = rho_apply(ProjPoint.of(*coords), c)
        b = rho_apply(ProjPoint.of(*(beta * coords)), c)
        assert projective_distance(a, b) < 1e-12


def test_rho_at_delta_one_matches_the_closed_form(random_points: np.ndarray):
    x, y, z = random_points.T
    expected = np.stack((x * (x + y) - z * z, y * (x + y) - z * z, z * z), axis=-1)
    np.testing.assert_allclose(rho_coords(random_points, 1.0), expected, rtol=0, atol=1e-14)

    c = make_constants(0.5)
    for coords, target in zip(random_points, expected, strict=True):
        assert projective_distance(rho_apply(ProjPoint.of(*coords), c), ProjPoint.of(*target)) < 1e-14
