from __future__ import annotations

import zipfile
from typing import TYPE_CHECKING

from .output import OutputManager

if TYPE_CHECKING:
    from pathlib import PurePosixPath

# Fixed member timestamp, so identical runs give identical archives
MEMBER_TIMESTAMP = (1980, 1, 1, 0, 0, 0)


class ZipOutput(OutputManager):
    archive: zipfile.ZipFile

    def _open(self) -> None:
        self.archive = zipfile.ZipFile(self.path, 'w', compression=zipfile.ZIP_DEFLATED)

    def _store(self, data: str, path: PurePosixPath) -> None:
        member = zipfile.ZipInfo(path.as_posix(), date_time=MEMBER_TIMESTAMP)
        member.compress_type = zipfile.ZIP_DEFLATED
        self.archive.writestr(member, data.encode('utf-8'))

    def _close(self) -> None:
        self.archive.close()
