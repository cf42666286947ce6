import math

import numpy as np
import pytest

from fractal_zeta.errors import BoundaryError, DomainError, ParameterError, PoleError
from fractal_zeta.ifs_measure import make_constants
from fractal_zeta.spectrum import Provenance, SpectrumList
from fractal_zeta.sturm_liouville import GeneratingSet, generating_set
from fractal_zeta.zeta_engine import (
    DIRICHLET,
    SGCalibration,
    calibrate_sg_zeta,
    cantor_geometric_zeta,
    cantor_string_closed,
    cantor_string_lengths,
    cantor_string_zeta,
    geometric_factor,
    infinite_sg_zeta,
    riemann_identity_check,
    riemann_mpmath,
    riemann_reference,
    riemann_via_polynomial,
    sg_zeta_check,
    sg_zeta_factorized,
    string_factorization,
    string_spectrum,
    zeta_Hinf,
    zeta_Hn_closed,
    zeta_Hn_direct,
    zeta_rho,
    zeta_S,
    zeta_spectral,
)


@pytest.fixture(scope='module')
def half() -> GeneratingSet:
    return generating_set(2000, make_constants(0.5))


@pytest.fixture(scope='module')
def third() -> GeneratingSet:
    return generating_set(300, make_constants(1 / 3))


def test_spectral_zeta_of_the_interval():
    spec = SpectrumList.from_values((math.pi * np.arange(1, 2001)) ** 2, Provenance.Analytic)
    value = zeta_spectral(spec, 2)
    assert value.best.real == pytest.approx(1 / 6, abs=1e-8)
    assert value.value.real < 1 / 6


def test_spectral_zeta_partial_sums_increase():
    spec = SpectrumList.from_values((math.pi * np.arange(1, 101)) ** 2, Provenance.Analytic)
    partials = [zeta_spectral(spec, 3, cutoff=k).value.real for k in (10, 20, 50, 100)]
    assert partials == sorted(partials)


def test_spectral_zeta_needs_positive_eigenvalues():
    with pytest.raises(ParameterError):
        zeta_spectral(SpectrumList.from_values([0.0, 1.0], Provenance.Analytic), 2)


def test_generating_set_zeta_at_one_half(half: GeneratingSet):
    # S = {π²(2k-1)²}, so ζ_S(2) = 1/8 and ζ_S(4) = 1/96
    z2 = zeta_S(half, 2)
    assert z2.best.real == pytest.approx(1 / 8, abs=1e-6)
    assert abs(z2.value.real + z2.tail_estimate - 1 / 8) < 1e-6
    assert zeta_S(half, 4).best.real == pytest.approx(1 / 96, rel=1e-9)


def test_renormalization_zeta_at_one_half(half: GeneratingSet):
    assert zeta_rho(half, 2).best.real == pytest.approx(1 / 6, abs=1e-6)
    assert zeta_rho(half, 4).best.real == pytest.approx(1 / 90, rel=1e-9)


def test_first_blow_up_at_one_half(half: GeneratingSet):
    assert zeta_Hn_closed(half, 1, 2).best.real == pytest.approx(2 / 3, abs=1e-5)


@pytest.mark.parametrize('s', [2, 3, 4.5])
def test_blow_ups_shift_by_powers_of_gamma(third: GeneratingSet, s: float):
    gamma = float(third.constants.gamma)
    for n in (1, 2, 3):
        ratio = zeta_Hn_closed(third, n, s).value / zeta_rho(third, s).value
        assert ratio.real == pytest.approx(gamma ** (n * s / 2), rel=1e-14)


@pytest.mark.parametrize('n', [0, 1, 2])
def test_double_sum_matches_the_closed_form(third: GeneratingSet, n: int):
    direct = zeta_Hn_direct(third, n, 4)
    closed = zeta_Hn_closed(third, n, 4)
    assert abs(direct.best - closed.best) < 1e-8 * abs(closed.best)


def test_half_line_zeta(third: GeneratingSet):
    right = zeta_Hinf(third, 4)
    assert not right.formal
    assert right.value == pytest.approx(zeta_rho(third, 4).best, rel=1e-12)

    left = zeta_Hinf(third, -2)
    assert left.formal
    assert left.factor == pytest.approx(1 / (float(third.constants.gamma) - 1))

    with pytest.raises(BoundaryError):
        zeta_Hinf(third, 1j)


def test_geometric_factor_pole(half: GeneratingSet):
    with pytest.raises(PoleError):
        geometric_factor(4, 0)
    with pytest.raises(PoleError):
        zeta_rho(half, 0)
    with pytest.raises(DomainError):
        zeta_rho(half, -1)


def test_geometric_factor_is_the_layer_sum():
    layers = sum(4.0 ** (-p * 3 / 2) for p in range(60))
    assert geometric_factor(4, 3) == pytest.approx(layers, rel=1e-14)


@pytest.mark.parametrize('s', [2, 3, 4])
def test_riemann_identity(half: GeneratingSet, s: int):
    tolerance = {2: 1e-4, 4: 1e-6}.get(s, 1e-5)
    assert riemann_identity_check(half, s) < tolerance


def test_riemann_identity_is_only_for_one_half(third: GeneratingSet, half: GeneratingSet):
    with pytest.raises(ParameterError):
        riemann_identity_check(third, 2)
    with pytest.raises(DomainError):
        riemann_identity_check(half, 1.5)


@pytest.mark.parametrize('s', [2, 3, 4, 6.5, 3 + 2j])
def test_riemann_reference_agrees_with_mpmath(s: complex):
    assert abs(riemann_reference(s) - riemann_mpmath(s)) < 1e-10


def test_riemann_reference_values():
    assert riemann_reference(4).real == pytest.approx(math.pi**4 / 90, rel=1e-13)
    assert riemann_reference(3).real == pytest.approx(1.2020569031595942, rel=1e-13)


def test_riemann_from_the_interval_polynomial():
    assert riemann_via_polynomial(4).best.real == pytest.approx(math.pi**4 / 90, rel=1e-8)


def test_sg_factorization_pole_and_abscissa():
    with pytest.raises(PoleError):
        sg_zeta_factorized(2 * math.log(3) / math.log(5))
    with pytest.raises(DomainError):
        sg_zeta_factorized(1.0)


@pytest.fixture(scope='module')
def calibration() -> SGCalibration:
    return calibrate_sg_zeta()


def test_sg_calibration_adopts_the_dirichlet_table(calibration: SGCalibration):
    assert calibration.table is DIRICHLET
    assert calibration.normalization == 1.0


@pytest.mark.parametrize('s', [3, 4, 5])
def test_sg_direct_sum_matches_the_factorization(calibration: SGCalibration, s: int):
    agreement = sg_zeta_check(s, calibration)
    assert agreement.passed(1e-8)
    assert agreement.residual < 1e-3 * abs(agreement.right)


def test_infinite_sg_factor():
    right = infinite_sg_zeta(4)
    assert right.factor == pytest.approx(25 / 24)
    assert right.value == pytest.approx(25 / 24 * sg_zeta_factorized(4).best, rel=1e-12)

    left = infinite_sg_zeta(-4)
    assert left.factor == pytest.approx(1 / 24)
    assert left.formal


def test_string_spectrum_needs_positive_lengths():
    with pytest.raises(ParameterError):
        string_spectrum([1.0, 0.0], 100.0)


def test_unit_interval_string():
    lengths = [1.0]
    spec = string_spectrum(lengths, (2000.5 * math.pi) ** 2)
    assert spec.total == 2000
    agreement = string_factorization(spec, lengths, 2)
    assert agreement.right.real == pytest.approx(1 / 6, rel=1e-12)
    assert agreement.passed(1e-4)


def test_cantor_string():
    assert cantor_string_closed(2).real == pytest.approx(1 / 42, rel=1e-12)
    direct = cantor_string_zeta(2)
    assert direct.tail_estimate < 1e-4
    assert abs(direct.best - 1 / 42) <= direct.tail_estimate + 1e-10


def test_cantor_string_lengths_add_up_to_one():
    assert cantor_string_lengths(20).sum() == pytest.approx(1 - (2 / 3) ** 20, rel=1e-12)


def test_cantor_geometric_pole():
    with pytest.raises(PoleError):
        cantor_geometric_zeta(math.log(2) / math.log(3))
