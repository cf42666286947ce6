import pytest

from fractal_zeta.spectrum import Provenance, SpectrumEntry, SpectrumList, group_values


def test_grouping_merges_close_values():
    entries = group_values([2.0, 1.0, 2.0 + 1e-12, 3.0])
    assert [entry.multiplicity for entry in entries] == [1, 2, 1]


def test_grouping_is_relative_above_one():
    assert len(group_values([1e8, 1e8 + 0.01])) == 1
    assert len(group_values([1e8, 1e8 + 1.0])) == 2


def test_spectrum_requires_increasing_values():
    with pytest.raises(ValueError, match='strictly increasing'):
        SpectrumList(entries=(SpectrumEntry(2.0, 1), SpectrumEntry(1.0, 1)), provenance=Provenance.Oracle)


def test_spectrum_requires_positive_multiplicities():
    with pytest.raises(ValueError, match='positive'):
        SpectrumList(entries=(SpectrumEntry(1.0, 0),), provenance=Provenance.Oracle)


def test_expanded_and_total():
    spectrum = SpectrumList.from_values([1.0, 2.0, 2.0, 3.0], Provenance.Analytic)
    assert spectrum.total == 4
    assert spectrum.expanded().tolist() == [1.0, 2.0, 2.0, 3.0]


def test_first_cuts_through_a_multiplicity():
    spectrum = SpectrumList.from_values([1.0, 2.0, 2.0, 2.0, 3.0], Provenance.Analytic)
    first = spectrum.first(3)
    assert list(first) == [SpectrumEntry(1.0, 1), SpectrumEntry(2.0, 2)]


def test_mismatch():
    a = SpectrumList.from_values([1.0, 2.0, 2.0], Provenance.Oracle)
    b = SpectrumList.from_values([1.0, 2.0], Provenance.Decimation)
    assert a.mismatch(a) is None
    assert a.mismatch(b) == SpectrumEntry(2.0, 2)
    assert b.mismatch(a) == SpectrumEntry(2.0, 1)


def test_rows_carry_provenance():
    rows = SpectrumList.from_values([1.0], Provenance.Oracle, level=3).rows()
    assert rows == [{'value': 1.0, 'multiplicity': 1, 'level': 3, 'provenance': 'oracle'}]
