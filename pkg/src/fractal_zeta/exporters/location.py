from __future__ import annotations

import re
from pathlib import PurePosixPath

_NAME = re.compile(r'[a-z0-9][a-z0-9_-]*')


def table_path(subcommand: str, table: str, fmt: str) -> PurePosixPath:
    '''
    Convert a subcommand, table name and format to the path of the table within the output.

    >>> table_path('sg-zeta', 'sums', 'csv')
    PurePosixPath('sg-zeta/sums.csv')
    >>> table_path('riemann-check', 'residuals', 'json')
    PurePosixPath('riemann-check/residuals.json')
    >>> table_path('sg-zeta', '../escape', 'csv')
    Traceback (most recent call last):
    ...
    ValueError: Table name must be lowercase letters, digits, '-' or '_': ../escape
    '''
    for kind, name in (('Subcommand', subcommand), ('Table', table)):
        if not _NAME.fullmatch(name):
            raise ValueError(f"{kind} name must be lowercase letters, digits, '-' or '_': {name}")

    match fmt:
        case 'csv' | 'json':
            return PurePosixPath(subcommand) / f'{table}.{fmt}'
        case _:
            raise ValueError(f'Unknown table format: {fmt}')


def metadata_path(subcommand: str) -> PurePosixPath:
    '''
    >>> metadata_path('sl-zeta')
    PurePosixPath('sl-zeta/metadata.json')
    '''
    return table_path(subcommand, 'metadata', 'json')
