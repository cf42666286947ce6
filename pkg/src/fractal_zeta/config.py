'''
Run configuration: defaults per subcommand, an optional TOML file, and command-line overrides, in that order.
'''
from __future__ import annotations

import math
import tomllib
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace
from logging import getLogger
from pathlib import Path
from typing import Any

from .errors import FractalZetaError, ParameterError
from .exporters.tables import FormatType
from .ifs_measure import make_constants

__all__ = (
    'DEFAULT_TOLERANCES',
    'SUBCOMMAND_DEFAULTS',
    'ConfigError',
    'RunConfig',
    'load_config_file',
    'parse_s_grid',
    'parse_tolerances',
    'resolve_config',
)

log = getLogger(__name__)

DEFAULT_TOLERANCES: Mapping[str, float] = {
    'grouping': 1e-9,
    'decimation': 1e-9,
    'root': 1e-5,
    'curve': 1e-6,
    'zeta': 1e-8,
    'riemann_s2': 1e-4,
    'riemann_s4': 1e-6,
    'riemann': 1e-5,
    'string': 1e-4,
    'oracle': 5e-3,
}

SUBCOMMAND_DEFAULTS: Mapping[str, Mapping[str, Any]] = {
    'sg-spectrum': {'level': 5},
    'sg-zeta': {'level': 8, 's': (3, 4, 5)},
    'sg-infinite': {'level': 3, 'terms': 4, 's': (-4, 3, 4, 5)},
    'sl-spectrum': {'level': 14, 'terms': 200},
    'sl-zeta': {'level': 14, 'terms': 2000, 's': (2, 3, 4)},
    'riemann-check': {'level': 14, 'terms': 2000, 's': (2, 3, 4)},
    'string-zeta': {'level': 30, 'terms': 2000, 's': (2, 3)},
    'hyperfunction-demo': {'terms': 60, 's': (-4, -2, 2, 4)},
}

FILE_KEYS = frozenset(('alpha', 'level', 'terms', 's', 'format', 'out', 'tolerances'))


class ConfigError(FractalZetaError, ValueError):
    pass


@dataclass(frozen=True, slots=True, kw_only=True)
class RunConfig:
    subcommand: str
    alpha: float = 0.5
    level: int | None = None
    terms: int | None = None
    s: tuple[complex, ...] = ()
    out: Path | None = None
    format: FormatType = FormatType.Csv
    tolerances: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))

    def tol(self, name: str) -> float:
        return self.tolerances[name]

    def riemann_tolerance(self, s: complex) -> float:
        '''The identity tolerance for one point of the s-grid.'''
        match complex(s):
            case 2:
                return self.tol('riemann_s2')
            case 4:
                return self.tol('riemann_s4')
            case _:
                return self.tol('riemann')

    def record(self) -> dict[str, Any]:
        return {
            'subcommand': self.subcommand,
            'alpha': self.alpha,
            'level': self.level,
            'terms': self.terms,
            's': [complex(s) for s in self.s],
            'out': None if self.out is None else str(self.out),
            'format': str(self.format),
            'tolerances': dict(self.tolerances),
        }


def parse_s_grid(text: str | Iterable[Any]) -> tuple[complex, ...]:
    '''
    Parse a comma-separated s-grid; entries may be complex literals.

    >>> parse_s_grid('2, 3,4')
    ((2+0j), (3+0j), (4+0j))
    >>> parse_s_grid('3+1j')
    ((3+1j),)
    >>> parse_s_grid([2, 4.5])
    ((2+0j), (4.5+0j))
    '''
    items = text.split(',') if isinstance(text, str) else list(text)
    grid: list[complex] = []
    for item in items:
        try:
            value = complex(item.replace(' ', '') if isinstance(item, str) else item)
        except (TypeError, ValueError) as e:
            raise ConfigError(f'Invalid s value: {item!r}') from e
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise ConfigError(f'Invalid s value: {item!r}')
        grid.append(value)
    if not grid:
        raise ConfigError('The s-grid is empty')
    return tuple(grid)


def parse_tolerances(items: Iterable[str] | Mapping[str, Any]) -> dict[str, float]:
    '''
    Parse NAME=VAL tolerance overrides.

    >>> parse_tolerances(['zeta=1e-6', 'root = 2e-5'])
    {'zeta': 1e-06, 'root': 2e-05}
    >>> parse_tolerances(['speed=1'])  # doctest: +ELLIPSIS
    Traceback (most recent call last):
    ...
    fractal_zeta.config.ConfigError: Unknown tolerance 'speed' (known: curve, ...)
    '''
    pairs: list[tuple[str, Any]]
    if isinstance(items, Mapping):
        pairs = list(items.items())
    else:
        pairs = []
        for item in items:
            name, sep, value = item.partition('=')
            if not sep:
                raise ConfigError(f'Tolerance override must be NAME=VAL: {item!r}')
            pairs.append((name.strip(), value.strip()))

    parsed: dict[str, float] = {}
    for name, value in pairs:
        if name not in DEFAULT_TOLERANCES:
            known = ', '.join(sorted(DEFAULT_TOLERANCES))
            raise ConfigError(f'Unknown tolerance {name!r} (known: {known})')
        try:
            number = float(value)
        except (TypeError, ValueError) as e:
            raise ConfigError(f'Tolerance {name} is not a number: {value!r}') from e
        if not number > 0 or math.isinf(number):
            raise ConfigError(f'Tolerance {name} must be positive and finite, got {value!r}')
        parsed[name] = number
    return parsed


def load_config_file(path: Path) -> dict[str, Any]:
    '''Read a TOML run configuration; only the keys a run understands are accepted.'''
    try:
        with path.open('rb') as f:
            data = tomllib.load(f)
    except OSError as e:
        raise ConfigError(f'Cannot read config file {path}: {e.strerror}') from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f'Config file {path} is not valid TOML: {e}') from e

    unknown = set(data) - FILE_KEYS
    if unknown:
        raise ConfigError(f'Unknown keys in {path}: {", ".join(sorted(unknown))}')
    log.debug('Loaded config file %s: %s', path, sorted(data))
    return data


def _positive_int(name: str, value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(f'{name} must be a positive integer, got {value!r}')
    return value


def resolve_config(subcommand: str, file_values: Mapping[str, Any], flags: Mapping[str, Any]) -> RunConfig:
    '''
    Merge subcommand defaults, file values and flags (later wins; flags that are None are not set) and validate.

    >>> resolve_config('riemann-check', {'terms': 500}, {'s': '2,4', 'terms': None}).terms
    500
    >>> resolve_config('sl-zeta', {}, {'alpha': 0.7})
    Traceback (most recent call last):
    ...
    fractal_zeta.config.ConfigError: alpha=0.7 violates 0 < alpha <= 1/2 (delta <= 1)
    '''
    if subcommand not in SUBCOMMAND_DEFAULTS:
        raise ConfigError(f'Unknown subcommand: {subcommand}')

    merged: dict[str, Any] = dict(SUBCOMMAND_DEFAULTS[subcommand])
    merged.update(file_values)
    merged.update({key: value for key, value in flags.items() if value is not None and key != 'tolerances'})

    tolerances = dict(DEFAULT_TOLERANCES)
    tolerances.update(parse_tolerances(file_values.get('tolerances', {})))
    tolerances.update(parse_tolerances(flags.get('tolerances') or []))

    config = RunConfig(subcommand=subcommand, tolerances=tolerances)
    if 'alpha' in merged:
        try:
            alpha = float(merged['alpha'])
        except (TypeError, ValueError) as e:
            raise ConfigError(f'alpha must be a number, got {merged["alpha"]!r}') from e
        config = replace(config, alpha=alpha)
    try:
        make_constants(config.alpha)
    except ParameterError as e:
        raise ConfigError(str(e)) from e
    if subcommand == 'riemann-check' and config.alpha != 0.5:
        raise ConfigError(f'riemann-check runs at alpha = 1/2, got alpha={config.alpha!r}')
    if 'level' in merged:
        config = replace(config, level=_positive_int('level', merged['level']))
    if 'terms' in merged:
        config = replace(config, terms=_positive_int('terms', merged['terms']))
    if 's' in merged:
        config = replace(config, s=parse_s_grid(merged['s']))
    if 'out' in merged:
        config = replace(config, out=Path(merged['out']))
    if 'format' in merged:
        try:
            config = replace(config, format=FormatType(str(merged['format'])))
        except ValueError as e:
            raise ConfigError(f'Unknown format: {merged["format"]!r}') from e
    return config
