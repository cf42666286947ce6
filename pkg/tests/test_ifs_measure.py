from fractions import Fraction

import numpy as np
import pytest

from fractal_zeta.errors import ParameterError
from fractal_zeta.ifs_measure import build_grid, cell_interval, cell_mass, make_constants, words_of_length


def test_constants_at_one_half():
    c = make_constants(0.5)
    assert (c.alpha, c.b, c.delta, c.gamma) == (0.5, 0.5, 1.0, 4.0)


def test_constants_are_exact_for_fractions():
    c = make_constants(Fraction(1, 3))
    assert c.gamma == Fraction(9, 2)
    assert c.delta == Fraction(1, 2)
    assert c.beta == Fraction(2, 3)


@pytest.mark.parametrize('alpha', [0, -0.1, 1, 1.5])
def test_alpha_outside_unit_interval_is_rejected(alpha: float):
    with pytest.raises(ParameterError):
        make_constants(alpha, diagnostic=True)


def test_alpha_above_one_half_needs_diagnostic_mode():
    with pytest.raises(ParameterError, match='delta <= 1'):
        make_constants(0.7)
    assert make_constants(Fraction(2, 3), diagnostic=True).delta == 2


@pytest.mark.parametrize('alpha', [0.5, 1 / 3, 0.4])
def test_grid_masses_sum_to_one(alpha: float):
    grid = build_grid(8, make_constants(alpha))
    assert len(grid.points) == 2**8 + 1
    assert np.all(np.diff(grid.points) > 0)
    assert grid.masses.sum() == pytest.approx(1.0, abs=1e-14)
    assert grid.cell_masses.sum() == pytest.approx(1.0, abs=1e-14)
    assert grid.masses[0] == pytest.approx(grid.cell_masses[0] / 2)


def test_grid_is_union_of_its_two_images():
    c = make_constants(0.4)
    coarse = build_grid(5, c).points
    fine = build_grid(6, c).points
    expected = np.concatenate((0.4 * coarse, 0.4 + 0.6 * coarse[1:]))
    np.testing.assert_allclose(fine, expected, rtol=0, atol=1e-13)


def test_cells_follow_word_order():
    c = make_constants(Fraction(1, 3))
    grid = build_grid(3, c)
    for i, word in enumerate(words_of_length(3)):
        left, right = cell_interval(word, c)
        assert float(left) == pytest.approx(grid.points[i], abs=1e-13)
        assert float(right) == pytest.approx(grid.points[i + 1], abs=1e-13)
        assert float(cell_mass(word, c)) == pytest.approx(grid.cell_masses[i], rel=1e-14)


def test_cell_masses_of_a_level_sum_to_one():
    c = make_constants(Fraction(1, 3))
    assert sum(cell_mass(word, c) for word in words_of_length(4)) == 1


def test_bad_cell_word():
    with pytest.raises(ValueError, match='letters 1 and 2'):
        cell_mass((1, 3), make_constants(0.5))


def test_blow_up_scales_length_and_mass():
    c = make_constants(1 / 3)
    grid = build_grid(6, c).blow_up(2, c)
    assert grid.length == pytest.approx(9.0)
    assert grid.masses.sum() == pytest.approx(1.5**2)


def test_negative_level():
    with pytest.raises(ParameterError):
        build_grid(-1, make_constants(0.5))


def test_grid_csv():
    text = build_grid(1, make_constants(0.5)).to_csv()
    assert text.splitlines() == ['point,mass', '0.0,0.25', '0.5,0.5', '1.0,0.25']
