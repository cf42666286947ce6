from pathlib import Path

import pytest

from fractal_zeta.config import (
    DEFAULT_TOLERANCES,
    ConfigError,
    load_config_file,
    parse_s_grid,
    parse_tolerances,
    resolve_config,
)
from fractal_zeta.exporters.tables import FormatType


def test_defaults_per_subcommand():
    config = resolve_config('sl-zeta', {}, {})
    assert (config.alpha, config.level, config.terms) == (0.5, 14, 2000)
    assert config.s == (2, 3, 4)
    assert config.format is FormatType.Csv
    assert config.out is None
    assert config.tolerances == DEFAULT_TOLERANCES


def test_flags_override_file_values():
    config = resolve_config('sg-zeta', {'level': 6, 's': [4], 'format': 'json'}, {'level': 7, 's': None})
    assert config.level == 7
    assert config.s == (4,)
    assert config.format is FormatType.Json


def test_tolerance_precedence():
    config = resolve_config('string-zeta', {'tolerances': {'zeta': 1e-6, 'root': 1e-3}}, {'tolerances': ['zeta=1e-7']})
    assert config.tol('zeta') == 1e-7
    assert config.tol('root') == 1e-3
    assert config.tol('string') == DEFAULT_TOLERANCES['string']


@pytest.mark.parametrize('alpha', [0.7, 0.0, 'half'])
def test_bad_alpha(alpha: object):
    with pytest.raises(ConfigError, match='alpha'):
        resolve_config('sl-spectrum', {}, {'alpha': alpha})


def test_riemann_check_is_pinned_to_one_half():
    with pytest.raises(ConfigError, match='alpha = 1/2'):
        resolve_config('riemann-check', {}, {'alpha': 0.4})


@pytest.mark.parametrize('key', ['level', 'terms'])
@pytest.mark.parametrize('value', [0, -3, 2.5, True])
def test_counts_must_be_positive_integers(key: str, value: object):
    with pytest.raises(ConfigError, match=key):
        resolve_config('sl-spectrum', {key: value}, {})


def test_unknown_subcommand_and_format():
    with pytest.raises(ConfigError):
        resolve_config('sg-everything', {}, {})
    with pytest.raises(ConfigError, match='format'):
        resolve_config('sg-zeta', {'format': 'xml'}, {})


def test_riemann_tolerance_depends_on_s():
    config = resolve_config('riemann-check', {}, {})
    assert config.riemann_tolerance(2) == 1e-4
    assert config.riemann_tolerance(4) == 1e-6
    assert config.riemann_tolerance(3) == 1e-5


@pytest.mark.parametrize('text', ['', '2,,3', 'two', 'inf'])
def test_bad_s_grid(text: str):
    with pytest.raises(ConfigError):
        parse_s_grid(text)


@pytest.mark.parametrize('item', ['zeta', 'zeta=0', 'zeta=-1', 'zeta=inf', 'zeta=fast'])
def test_bad_tolerance(item: str):
    with pytest.raises(ConfigError, match='zeta|NAME=VAL'):
        parse_tolerances([item])


def test_config_file(tmp_path: Path):
    path = tmp_path / 'run.toml'
    path.write_text('alpha = 0.25\nlevel = 12\ns = "2, 5"\n\n[tolerances]\nzeta = 1e-7\n', encoding='utf-8')
    config = resolve_config('sl-zeta', load_config_file(path), {})
    assert config.alpha == 0.25
    assert config.level == 12
    assert config.s == (2, 5)
    assert config.tol('zeta') == 1e-7


def test_config_file_errors(tmp_path: Path):
    with pytest.raises(ConfigError, match='Cannot read'):
        load_config_file(tmp_path / 'missing.toml')

    broken = tmp_path / 'broken.toml'
    broken.write_text('alpha = \n', encoding='utf-8')
    with pytest.raises(ConfigError, match='not valid TOML'):
        load_config_file(broken)

    unknown = tmp_path / 'unknown.toml'
    unknown.write_text('speed = 3\n', encoding='utf-8')
    with pytest.raises(ConfigError, match='speed'):
        load_config_file(unknown)


def test_record_is_plain_data():
    record = resolve_config('hyperfunction-demo', {}, {'out': 'results'}).record()
    assert record['out'] == 'results'
    assert record['format'] == 'csv'
    assert record['s'] == [-4, -2, 2, 4]
