import math

import numpy as np
import pytest

from fractal_zeta.errors import DomainError, ParameterError, TruncationError
from fractal_zeta.poly_zeta import (
    INTERVAL_POLY,
    SG_POLY,
    Poly1,
    branch_inverse,
    preimages,
    scaled_branch_limit,
    zeta_poly,
    zeta_poly_truncated,
)


def test_polynomial_must_fix_the_origin():
    with pytest.raises(ParameterError):
        Poly1((1, 5, -4))
    with pytest.raises(ParameterError):
        Poly1((0, 0.5, 1))


@pytest.mark.parametrize('z', [0.1, 0.6, 1.5])
def test_branches_invert_the_polynomial(z: float):
    assert SG_POLY(SG_POLY.minus_branch(z)) == pytest.approx(z, abs=1e-13)
    assert SG_POLY(SG_POLY.plus_branch(z)) == pytest.approx(z, abs=1e-13)


def test_preimage_tree_size():
    level = preimages(SG_POLY, 0.75, 6)
    assert len(level) == 2**6
    np.testing.assert_allclose(SG_POLY.iterate(level.points, 6), 0.75, atol=1e-9)


def test_preimage_tree_is_capped():
    with pytest.raises(TruncationError):
        preimages(SG_POLY, 0.75, 23)


def test_interval_branch_limit_is_half_the_squared_angle():
    # R(1 - cos t) = 1 - cos 2t for the interval polynomial
    theta = 1.2
    assert scaled_branch_limit(INTERVAL_POLY, 1 - math.cos(theta)) == pytest.approx(theta**2 / 2, rel=1e-10)


def test_zeta_needs_the_convergence_half_plane():
    with pytest.raises(DomainError, match='d_R'):
        zeta_poly(SG_POLY, 0.75, 0.5)


def test_truncated_sums_approach_the_limit():
    limit = zeta_poly(SG_POLY, 0.75, 4).best
    truncated = zeta_poly_truncated(SG_POLY, 0.75, 4, 12)
    assert abs(truncated.value - limit) < 1e-6 * abs(limit)


def test_interval_polynomial_gives_riemann_zeta():
    value = zeta_poly(INTERVAL_POLY, 0, 4)
    assert 0.5 * (math.sqrt(2) * math.pi) ** 4 * value.best.real == pytest.approx(math.pi**4 / 90, rel=1e-8)
    assert value.tail_estimate < 1e-9


@pytest.mark.parametrize('poly', [SG_POLY, INTERVAL_POLY])
@pytest.mark.parametrize('z0', [0.3, 0.75, 1.0])
def test_leftmost_leaf_is_the_minus_branch_inverse(poly: Poly1, z0: float):
    for depth in (1, 4, 9):
        leaf = preimages(poly, z0, depth).points[0]
        assert leaf.imag == 0
        assert leaf.real == pytest.approx(branch_inverse(poly, z0, depth), rel=1e-12, abs=1e-15)
