import numpy as np
import pytest

from fractal_zeta import sg_decimation
from fractal_zeta.errors import ConsistencyError, DomainError, ParameterError, ResourceError
from fractal_zeta.sg_decimation import (
    branch_inverse,
    build_pregasket,
    decimation_spectrum,
    eigensolve_direct,
    forward_decimation_misses,
    infinite_sg_spectrum,
    interior_dimension,
    renormalized_spectrum,
    scaled_branch_limit,
    scaling_closure_residual,
    vertex_count,
)
from fractal_zeta.spectrum import Provenance, SpectrumEntry, SpectrumList


def test_counts():
    assert [vertex_count(m) for m in range(4)] == [3, 6, 15, 42]
    assert [interior_dimension(m) for m in range(4)] == [0, 3, 12, 39]


@pytest.mark.parametrize('m', [0, 1, 2, 3])
def test_pregasket_vertices(m: int):
    gasket = build_pregasket(m)
    assert len(gasket) == vertex_count(m)
    assert len(gasket.interior) == interior_dimension(m)


@pytest.mark.parametrize('m', [1, 2, 3, 4, 5])
def test_decimation_matches_oracle(m: int):
    decimated = decimation_spectrum(m, verify=True)
    oracle = eigensolve_direct(m)
    assert decimated.mismatch(oracle) is None
    assert oracle.total == interior_dimension(m)


@pytest.mark.parametrize('m', [1, 2, 3, 4])
def test_every_new_eigenvalue_maps_to_an_old_one(m: int):
    assert forward_decimation_misses(m) == []


@pytest.mark.parametrize('m', [8, 9])
def test_decimation_counts_beyond_the_oracle(m: int):
    assert decimation_spectrum(m).total == interior_dimension(m)


def test_oracle_refuses_large_levels():
    with pytest.raises(ResourceError):
        eigensolve_direct(8)


def test_oracle_needs_a_positive_level():
    with pytest.raises(ParameterError):
        eigensolve_direct(0)


def test_decimation_checks_the_oracle_by_default(monkeypatch: pytest.MonkeyPatch):
    def shifted(m: int, *, tol: float) -> SpectrumList:
        oracle = eigensolve_direct(m, tol=tol)
        entries = tuple(SpectrumEntry(e.value + 1e-3, e.multiplicity) for e in oracle)
        return SpectrumList(entries=entries, provenance=Provenance.Oracle, level=m)

    monkeypatch.setattr(sg_decimation, 'eigensolve_direct', shifted)
    with pytest.raises(ConsistencyError):
        decimation_spectrum(3)
    assert decimation_spectrum(3, verify=False).total == interior_dimension(3)


def test_decimation_skips_the_oracle_beyond_its_limit(monkeypatch: pytest.MonkeyPatch):
    def refuse(m: int, **_: float) -> SpectrumList:
        raise AssertionError(f'oracle called at level {m}')

    monkeypatch.setattr(sg_decimation, 'eigensolve_direct', refuse)
    assert decimation_spectrum(8).total == interior_dimension(8)


def test_level_one_spectrum():
    assert eigensolve_direct(1).values == pytest.approx([0.5, 1.25])
    assert eigensolve_direct(1).multiplicities.tolist() == [1, 2]


def test_branch_limit_domain():
    with pytest.raises(DomainError):
        scaled_branch_limit(2.0)
    with pytest.raises(DomainError):
        scaled_branch_limit(-0.1)


def test_branch_limit_is_increasing():
    values = scaled_branch_limit(np.linspace(0.1, 1.5, 15))
    assert np.all(np.diff(values) > 0)


def test_renormalized_values_persist_to_the_next_level():
    coarse = renormalized_spectrum(3).values
    fine = renormalized_spectrum(4).values
    distance = np.min(np.abs(coarse[:, None] - fine[None, :]) / coarse[:, None], axis=1)
    assert distance.max() < 1e-9


def test_renormalized_spectrum_leaves_out_three_halves():
    decimated = decimation_spectrum(3)
    pairs = zip(decimated.values, decimated.multiplicities, strict=True)
    three_halves = sum(int(k) for v, k in pairs if abs(v - 1.5) < 1e-12)
    assert three_halves > 0
    assert renormalized_spectrum(3).total == decimated.total - three_halves


@pytest.mark.parametrize('z0', [0.75, 1.25])
def test_infinite_window_is_closed_under_scaling(z0: float):
    assert scaling_closure_residual(-2, 3, 3, z0) < 1e-10


def test_infinite_window_parameters():
    with pytest.raises(ParameterError):
        infinite_sg_spectrum(0, 1, 1, 0.5)
    with pytest.raises(ParameterError):
        infinite_sg_spectrum(2, 1, 1, 0.75)
    with pytest.raises(ParameterError):
        scaling_closure_residual(1, 1, 1, 0.75)


def test_branch_inverse_lands_in_the_preimage():
    z = np.linspace(0, 25 / 16, 11)
    w = branch_inverse(z, 1)
    np.testing.assert_allclose(w * (5 - 4 * w), z, atol=1e-14)
    assert np.all((w >= 0) & (w <= 5 / 8))
    assert branch_inverse(0.75, 3) == pytest.approx(branch_inverse(branch_inverse(0.75, 2), 1), rel=1e-14)


def test_branch_limit_scales_under_the_minus_branch():
    z = np.linspace(0, 25 / 16, 26)
    np.testing.assert_allclose(5 * scaled_branch_limit(branch_inverse(z, 1)), scaled_branch_limit(z),
                               rtol=1e-10, atol=1e-12)
