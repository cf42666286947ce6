from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np
import numpy.typing as npt

__all__ = (
    'Provenance',
    'SpectrumEntry',
    'SpectrumList',
    'group_values',
)

GROUPING_TOLERANCE = 1e-9


class Provenance(Enum):
    Oracle = 'oracle'
    Decimation = 'decimation'
    Renormalized = 'renormalized'
    Analytic = 'analytic'

    def __str__(self) -> str:
        return str(self.value)


class SpectrumEntry(NamedTuple):
    value: float
    multiplicity: int


def group_values(values: Iterable[float], tol: float = GROUPING_TOLERANCE) -> list[SpectrumEntry]:
    '''
    Sort values and merge runs that agree within `tol * max(1, |value|)`.

    Args:
        values: Raw values, in any order, with repeats.
        tol: Merge tolerance; absolute below 1, relative above.

    Returns:
        Entries with strictly increasing values and the size of each run as multiplicity.

    Doctests:
    >>> group_values([1.25, 0.5, 1.25])
    [SpectrumEntry(value=0.5, multiplicity=1), SpectrumEntry(value=1.25, multiplicity=2)]
    >>> [entry.multiplicity for entry in group_values([1e6, 1e6 * (1 + 1e-11), 2e6])]
    [2, 1]
    >>> group_values([])
    []
    '''
    ordered = np.sort(np.asarray(list(values), dtype=float))
    entries: list[SpectrumEntry] = []
    start = 0
    for i in range(1, len(ordered) + 1):
        if i < len(ordered) and ordered[i] - ordered[i - 1] <= tol * max(1.0, abs(ordered[i - 1])):
            continue
        run = ordered[start:i]
        entries.append(SpectrumEntry(float(run.mean()), len(run)))
        start = i
    return entries


@dataclass(frozen=True, slots=True, kw_only=True)
class SpectrumList:
    '''Sorted eigenvalues with multiplicities, tagged with where they came from.'''
    entries: tuple[SpectrumEntry, ...]
    provenance: Provenance
    level: int | None = None

    def __post_init__(self):
        for prev, entry in zip(self.entries, self.entries[1:], strict=False):
            if entry.value <= prev.value:
                raise ValueError(f'Spectrum values must be strictly increasing: {prev.value} then {entry.value}')
        if any(entry.multiplicity < 1 for entry in self.entries):
            raise ValueError('Multiplicities must be positive')

    @classmethod
    def from_values(cls, values: Iterable[float], provenance: Provenance, *,
                    level: int | None = None, tol: float = GROUPING_TOLERANCE) -> SpectrumList:
        return cls(entries=tuple(group_values(values, tol)), provenance=provenance, level=level)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[SpectrumEntry]:
        return iter(self.entries)

    @property
    def values(self) -> npt.NDArray[np.float64]:
        return np.array([entry.value for entry in self.entries], dtype=float)

    @property
    def multiplicities(self) -> npt.NDArray[np.int64]:
        return np.array([entry.multiplicity for entry in self.entries], dtype=np.int64)

    @property
    def total(self) -> int:
        '''Number of eigenvalues counted with multiplicity.'''
        return int(sum(entry.multiplicity for entry in self.entries))

    def expanded(self) -> npt.NDArray[np.float64]:
        '''All eigenvalues repeated according to multiplicity, nondecreasing.'''
        return np.repeat(self.values, self.multiplicities)

    def first(self, count: int) -> SpectrumList:
        '''Truncate to the smallest `count` eigenvalues counted with multiplicity.'''
        kept: list[SpectrumEntry] = []
        remaining = count
        for entry in self.entries:
            if remaining <= 0:
                break
            kept.append(SpectrumEntry(entry.value, min(entry.multiplicity, remaining)))
            remaining -= entry.multiplicity
        return SpectrumList(entries=tuple(kept), provenance=self.provenance, level=self.level)

    def mismatch(self, other: SpectrumList, tol: float = GROUPING_TOLERANCE) -> SpectrumEntry | None:
        '''
        Find the first entry that differs between two spectra.

        Returns:
            The offending entry of `self` (or of `other` when `self` is exhausted), or None when values and
            multiplicities agree within `tol`.
        '''
        for mine, theirs in zip(self.entries, other.entries, strict=False):
            close = abs(mine.value - theirs.value) <= tol * max(1.0, abs(mine.value))
            if not close or mine.multiplicity != theirs.multiplicity:
                return mine
        if len(self.entries) > len(other.entries):
            return self.entries[len(other.entries)]
        if len(other.entries) > len(self.entries):
            return other.entries[len(self.entries)]
        return None

    def rows(self) -> list[dict[str, object]]:
        return [
            {
                'value': entry.value,
                'multiplicity': entry.multiplicity,
                'level': self.level,
                'provenance': str(self.provenance),
            }
            for entry in self.entries
        ]
