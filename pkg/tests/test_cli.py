import json
import sys
from pathlib import Path

import pytest

from fractal_zeta.cli import main


def run_cli(monkeypatch: pytest.MonkeyPatch, *argv: str) -> int:
    monkeypatch.setattr(sys, 'argv', ['fractal_zeta', *argv])
    try:
        main()
    except SystemExit as e:
        return 0 if e.code is None else int(e.code)
    return 0


def test_hyperfunction_demo_writes_tables(monkeypatch: pytest.MonkeyPatch, tmp_path: Path):
    out = tmp_path / 'run'
    assert run_cli(monkeypatch, 'hyperfunction-demo', '--out', str(out)) == 0

    folder = out / 'hyperfunction-demo'
    assert sorted(p.name for p in folder.iterdir()) == ['bilateral.csv', 'delta_r.csv', 'factors.csv', 'metadata.json']
    metadata = json.loads((folder / 'metadata.json').read_text(encoding='utf-8'))
    assert metadata['passed'] is True
    assert metadata['config']['terms'] == 60
    assert metadata['tables'] == [
        'hyperfunction-demo/bilateral.csv',
        'hyperfunction-demo/factors.csv',
        'hyperfunction-demo/delta_r.csv',
    ]


def test_json_tables_in_a_zip(monkeypatch: pytest.MonkeyPatch, tmp_path: Path):
    import zipfile

    out = tmp_path / 'run.zip'
    assert run_cli(monkeypatch, 'string-zeta', '--s', '2', '--terms', '500', '--level', '20', '-f', 'json',
                   '--out', str(out)) == 0
    with zipfile.ZipFile(out) as archive:
        rows = json.loads(archive.read('string-zeta/strings.json'))
    assert [row['object'] for row in rows] == ['string', 'cantor-string']


def test_runs_are_reproducible(monkeypatch: pytest.MonkeyPatch, tmp_path: Path):
    outputs = []
    for name in ('a', 'b'):
        workdir = tmp_path / name
        workdir.mkdir()
        monkeypatch.chdir(workdir)
        assert run_cli(monkeypatch, 'sg-spectrum', '--level', '3', '--out', 'run') == 0
        folder = workdir / 'run' / 'sg-spectrum'
        outputs.append({p.name: p.read_bytes() for p in folder.iterdir()})
    assert outputs[0] == outputs[1]


def test_config_file_and_tolerance_flags(monkeypatch: pytest.MonkeyPatch, tmp_path: Path):
    config = tmp_path / 'run.toml'
    config.write_text('level = 3\n[tolerances]\ndecimation = 1e-8\n', encoding='utf-8')
    out = tmp_path / 'run'
    assert run_cli(monkeypatch, 'sg-spectrum', '-c', str(config), '--tol', 'grouping=1e-10', '--out', str(out)) == 0
    metadata = json.loads((out / 'sg-spectrum' / 'metadata.json').read_text(encoding='utf-8'))
    assert metadata['config']['level'] == 3
    assert metadata['config']['tolerances']['decimation'] == 1e-8
    assert metadata['config']['tolerances']['grouping'] == 1e-10


@pytest.mark.parametrize('argv', [
    ['sl-zeta', '--alpha', '0.7'],
    ['riemann-check', '--alpha', '0.25'],
    ['hyperfunction-demo', '--tol', 'speed=1'],
    ['hyperfunction-demo', '--s', 'two'],
    ['sg-spectrum', '--level', '0'],
])
def test_invalid_input_exits_with_2(monkeypatch: pytest.MonkeyPatch, argv: list[str]):
    assert run_cli(monkeypatch, *argv) == 2


def test_non_empty_output_directory(monkeypatch: pytest.MonkeyPatch, tmp_path: Path):
    (tmp_path / 'existing.txt').write_text('x', encoding='utf-8')
    assert run_cli(monkeypatch, 'hyperfunction-demo', '--out', str(tmp_path)) == 2
    assert run_cli(monkeypatch, 'hyperfunction-demo', '--out', str(tmp_path), '--allow-existing') == 0


def test_existing_archive(monkeypatch: pytest.MonkeyPatch, tmp_path: Path):
    out = tmp_path / 'run.zip'
    out.write_bytes(b'')
    assert run_cli(monkeypatch, 'hyperfunction-demo', '--out', str(out)) == 2


def test_summary_is_printed(monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]):
    assert run_cli(monkeypatch, 'hyperfunction-demo') == 0
    assert 'hyperfunction-demo: ' in capsys.readouterr().out


def test_riemann_check_end_to_end(monkeypatch: pytest.MonkeyPatch, tmp_path: Path):
    out = tmp_path / 'riemann.zip'
    assert run_cli(monkeypatch, 'riemann-check', '--terms', '600', '--s', '2,4', '--out', str(out)) == 0
    assert out.stat().st_size > 0


def test_sg_zeta_end_to_end(monkeypatch: pytest.MonkeyPatch, tmp_path: Path):
    out = tmp_path / 'run'
    assert run_cli(monkeypatch, 'sg-zeta', '--level', '6', '--s', '4', '--out', str(out)) == 0
    metadata = json.loads((out / 'sg-zeta' / 'metadata.json').read_text(encoding='utf-8'))
    assert metadata['calibration']['table'] == 'dirichlet'
    assert (out / 'sg-zeta' / 'sums.csv').exists()
