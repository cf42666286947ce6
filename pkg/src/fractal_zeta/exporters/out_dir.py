from __future__ import annotations

from typing import TYPE_CHECKING

from .output import OutputManager

if TYPE_CHECKING:
    from pathlib import PurePosixPath


class DirOutput(OutputManager):
    def _open(self) -> None:
        self.path.mkdir(parents=True, exist_ok=True)

    def _store(self, data: str, path: PurePosixPath) -> None:
        file = self.path.joinpath(*path.parts)
        file.parent.mkdir(parents=True, exist_ok=True)
        # '\n' line endings on every platform
        file.write_text(data, encoding='utf-8', newline='\n')
