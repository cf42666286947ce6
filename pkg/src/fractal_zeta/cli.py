# ruff: noqa: UP007 (typed_argparse only treats Optional[...] arguments as optional)
import importlib.util
from logging import getLogger
from pathlib import Path
from typing import Any, Optional, cast

import typed_argparse as tap

from .checks import RunReport, get_check
from .config import ConfigError, RunConfig, load_config_file, resolve_config
from .errors import DomainError, FractalZetaError, ParameterError
from .exporters.location import metadata_path, table_path
from .exporters.output import OutputManager
from .exporters.tables import FormatType, encode_json, encode_table

log = getLogger('fractal_zeta')


class CommonArgs(tap.TypedArgs):
    alpha: Optional[float] = tap.arg(help='contraction ratio of the first similitude, 0 < alpha <= 1/2')
    level: Optional[int] = tap.arg(help='discretization or decimation level')
    terms: Optional[int] = tap.arg(help='number of terms (generating-set roots, frequencies or series terms)')
    s: Optional[str] = tap.arg(help='comma-separated s-grid, e.g. "2,3,4"')
    out: Optional[Path] = tap.arg('-o', help='output directory, or a .zip/.7z archive')
    tol: list[str] = tap.arg(nargs='*', default=cast(list[str], []), help='tolerance overrides, NAME=VAL')
    format: Optional[FormatType] = tap.arg('-f', '--format', help='table format (default: csv)')
    config: Optional[Path] = tap.arg('-c', help='TOML file with defaults for any of the above')
    allow_existing: bool = tap.arg(help='do not complain if the output exists or is not empty')


class SgSpectrumArgs(CommonArgs):
    pass

class SgZetaArgs(CommonArgs):
    pass

class SgInfiniteArgs(CommonArgs):
    pass

class SlSpectrumArgs(CommonArgs):
    pass

class SlZetaArgs(CommonArgs):
    pass

class RiemannCheckArgs(CommonArgs):
    pass

class StringZetaArgs(CommonArgs):
    pass

class HyperfunctionDemoArgs(CommonArgs):
    pass


class UserError(Exception):
    pass


def build_config(subcommand: str, args: CommonArgs) -> RunConfig:
    file_values: dict[str, Any] = load_config_file(args.config) if args.config else {}
    flags = {
        'alpha': args.alpha,
        'level': args.level,
        'terms': args.terms,
        's': args.s,
        'out': args.out,
        'format': args.format,
        'tolerances': args.tol,
    }
    return resolve_config(subcommand, file_values, flags)


def validate_output(config: RunConfig, *, allow_existing: bool):
    out = config.out
    if out is None:
        return

    ext = out.suffix.lower()
    match ext:
        case '.zip':
            pass
        case '.7z':
            if not importlib.util.find_spec('py7zr'):
                raise UserError("7zip format is unavailable because the 'py7zr' module is not installed")
        case _:
            # Anything else is a directory, which must be empty unless overridden
            if out.exists():
                if not out.is_dir():
                    raise UserError(f'Output path {out} is not a directory')
                if not allow_existing and any(not p.name.startswith('.') for p in out.iterdir()):
                    raise UserError(f'Output directory {out} is not empty')
            return

    if not allow_existing and out.exists():
        raise UserError(f'Output file {out} already exists')


def choose_output_manager(out: Path) -> OutputManager:
    match out.suffix.lower():
        case '.zip':
            from .exporters.out_zip import ZipOutput
            return ZipOutput(out)
        case '.7z':
            from .exporters.out_7z import SevenZipOutput
            return SevenZipOutput(out)
        case _:
            from .exporters.out_dir import DirOutput
            return DirOutput(out)


def perform_export(config: RunConfig, report: RunReport):
    assert config.out is not None
    with choose_output_manager(config.out) as output:
        for name, rows in report.tables.items():
            output.write_file(encode_table(rows, config.format), table_path(config.subcommand, name, str(config.format)))

        metadata = {
            'config': config.record(),
            'passed': report.passed,
            'checks': [check.record() for check in report.checks],
            'tables': [str(path) for path in output.written],
            **report.metadata,
        }
        output.write_file(encode_json(metadata), metadata_path(config.subcommand))
    log.info('Wrote %d tables to %s', len(report.tables), config.out)


def display_summary(report: RunReport):
    failures = report.failures
    print(f'{report.subcommand}: {len(report.checks)} checks, {len(failures)} failed')
    for check in failures:
        print(f'  FAILED {check.name}: {check.detail}')


def execute(subcommand: str, args: CommonArgs):
    '''Resolve the configuration, run the subcommand, write its artifacts and exit with its status.'''
    log.info('Beginning %s', subcommand)
    try:
        config = build_config(subcommand, args)
        validate_output(config, allow_existing=args.allow_existing)
    except (UserError, ConfigError) as e:
        log.error('%s', e)  # noqa: TRY400
        raise SystemExit(2) from e

    try:
        report = get_check(subcommand)(config)
    except (ParameterError, DomainError) as e:
        log.exception('Invalid input for %s', subcommand, exc_info=e)
        raise SystemExit(2) from e
    except FractalZetaError as e:
        log.exception('%s failed', subcommand, exc_info=e)
        raise SystemExit(1) from e

    display_summary(report)
    if config.out is not None:
        perform_export(config, report)
    if not report.passed:
        raise SystemExit(1)


def run_sg_spectrum(args: SgSpectrumArgs):
    execute('sg-spectrum', args)

def run_sg_zeta(args: SgZetaArgs):
    execute('sg-zeta', args)

def run_sg_infinite(args: SgInfiniteArgs):
    execute('sg-infinite', args)

def run_sl_spectrum(args: SlSpectrumArgs):
    execute('sl-spectrum', args)

def run_sl_zeta(args: SlZetaArgs):
    execute('sl-zeta', args)

def run_riemann_check(args: RiemannCheckArgs):
    execute('riemann-check', args)

def run_string_zeta(args: StringZetaArgs):
    execute('string-zeta', args)

def run_hyperfunction_demo(args: HyperfunctionDemoArgs):
    execute('hyperfunction-demo', args)


def main():
    try:
        tap.Parser(
            tap.SubParserGroup(
                tap.SubParser('sg-spectrum', SgSpectrumArgs, help='gasket decimation against the dense oracle'),
                tap.SubParser('sg-zeta', SgZetaArgs, help='gasket zeta function, direct and factorized'),
                tap.SubParser('sg-infinite', SgInfiniteArgs, help='infinite gasket window and delta_T factors'),
                tap.SubParser('sl-spectrum', SlSpectrumArgs, help='generating set and Sturm-Liouville spectra'),
                tap.SubParser('sl-zeta', SlZetaArgs, help='Sturm-Liouville zeta functions and their closed forms'),
                tap.SubParser('riemann-check', RiemannCheckArgs, help="Riemann's zeta from the alpha = 1/2 operator"),
                tap.SubParser('string-zeta', StringZetaArgs, help='fractal string zeta factorizations'),
                tap.SubParser('hyperfunction-demo', HyperfunctionDemoArgs, help='bilateral series of delta_T'),
            ),
            prog='fractal_zeta',
            description='Spectral zeta functions of fractal Laplacians and their factorizations.',
        ).bind(
            run_sg_spectrum,
            run_sg_zeta,
            run_sg_infinite,
            run_sl_spectrum,
            run_sl_zeta,
            run_riemann_check,
            run_string_zeta,
            run_hyperfunction_demo,
        ).run()
    except KeyboardInterrupt:
        print('Interrupted')
