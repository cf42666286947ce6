import math

import pytest

from fractal_zeta.errors import BoundaryError, DomainError, ParameterError
from fractal_zeta.hyperfunction import (
    HalfPlaneFactorization,
    Side,
    bilateral_partial,
    boundary_value,
    delta_R,
    delta_T,
    geometric_tail_bound,
    substitute_gamma,
)
from fractal_zeta.values import ZetaMethod, ZetaValue


@pytest.mark.parametrize('w', [0.3, 0.7, 1.5, 4.0, 0.5j, -3 + 1j])
def test_bilateral_series_converges_to_delta_T(w: complex):
    side = Side.Inside if abs(w) < 1 else Side.Outside
    h = delta_T()
    limit = h.upper(w) if side is Side.Inside else h.lower(w)
    assert abs(bilateral_partial(w, 60, side) - limit) <= geometric_tail_bound(w, 60, side) * (1 + 1e-9) + 1e-15


@pytest.mark.parametrize(('w', 'side'), [(1.5, Side.Inside), (4.0, Side.Inside), (0.3, Side.Outside), (0.7, Side.Outside)])
def test_bilateral_series_diverges_on_the_other_side(w: float, side: Side):
    assert abs(bilateral_partial(w, 60, side)) > 1e6
    with pytest.raises(DomainError):
        geometric_tail_bound(w, 60, side)


def test_unit_circle_is_rejected():
    with pytest.raises(DomainError):
        bilateral_partial(1.0, 10, Side.Inside)
    with pytest.raises(DomainError):
        bilateral_partial(1j, 10, Side.Outside)


def test_representatives_check_their_regions():
    with pytest.raises(DomainError):
        delta_T().lower(0.5)
    with pytest.raises(DomainError):
        delta_R().upper(1 - 1j)


@pytest.mark.parametrize('x', [-1.0, 0.0, 0.3])
def test_delta_R_boundary_value_is_a_poisson_kernel(x: float):
    eps = 0.05
    assert boundary_value(delta_R(), x, eps) == pytest.approx(eps / (math.pi * (x * x + eps * eps)), rel=1e-12)


def test_boundary_value_needs_positive_eps():
    with pytest.raises(ParameterError):
        boundary_value(delta_R(), 0.0, 0.0)


def test_gamma_substitution():
    assert substitute_gamma(delta_T(), 5, 4) == pytest.approx(25 / 24)
    assert substitute_gamma(delta_T(), 4, -2) == pytest.approx(1 / 3)
    with pytest.raises(BoundaryError):
        substitute_gamma(delta_T(), 4, 3j)
    with pytest.raises(ParameterError):
        substitute_gamma(delta_T(), 1, 2)


def _unit_zeta(s: complex) -> ZetaValue:
    if complex(s).real <= 1:
        raise DomainError('diverges')
    return ZetaValue(s=s, value=2.0, terms_used=1, tail_estimate=0.5, method=ZetaMethod.ClosedForm)


def test_factorization_is_formal_where_the_scalar_diverges():
    product = HalfPlaneFactorization(delta_T(), _unit_zeta, 4)
    left = product.evaluate(-2)
    assert left.side is Side.Outside
    assert left.formal
    assert left.value is None
    assert left.record('demo')['formal'] is True

    right = product.evaluate(2)
    assert not right.formal
    assert right.value == pytest.approx(8 / 3)
    assert right.tail_estimate == pytest.approx(2 / 3)


def test_factorization_on_the_imaginary_axis():
    with pytest.raises(BoundaryError):
        HalfPlaneFactorization(delta_T(), _unit_zeta, 4).evaluate(0)
