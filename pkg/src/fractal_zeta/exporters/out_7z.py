from __future__ import annotations

from typing import TYPE_CHECKING

import py7zr

from .output import OutputManager

if TYPE_CHECKING:
    from pathlib import PurePosixPath


class SevenZipOutput(OutputManager):
    '''Writes into a .7z archive; needs the optional `7zip` extra.'''
    archive: py7zr.SevenZipFile

    def _open(self) -> None:
        self.archive = py7zr.SevenZipFile(self.path, 'w')

    def _store(self, data: str, path: PurePosixPath) -> None:
        self.archive.writestr(data.encode('utf-8'), path.as_posix())

    def _close(self) -> None:
        self.archive.close()
