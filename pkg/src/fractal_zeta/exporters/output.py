from __future__ import annotations

from contextlib import AbstractContextManager
from logging import getLogger
from typing import TYPE_CHECKING, Self

if TYPE_CHECKING:
    from pathlib import Path, PurePosixPath
    from types import TracebackType

log = getLogger(__name__)


class OutputManager(AbstractContextManager['OutputManager']):
    '''
    Destination for the artifacts of one run, rooted at `path`.

    Subclasses provide `_store` and optionally `_open`/`_close`. A path can only be written once per run.
    '''
    def __init__(self, path: Path):
        self.path = path
        self.written: list[PurePosixPath] = []

    def __enter__(self) -> Self:
        self._open()
        return self

    def __exit__(self, exc_type: type[BaseException] | None,
                 exc_value: BaseException | None,
                 traceback: TracebackType | None) -> None:
        self._close()
        log.debug('Closed %s with %d files', self.path, len(self.written))

    def write_file(self, data: str, path: PurePosixPath) -> None:
        if path in self.written:
            raise ValueError(f'{path} has already been written in this run')
        self._store(data, path)
        self.written.append(path)

    def _open(self) -> None:
        pass

    def _store(self, data: str, path: PurePosixPath) -> None:
        raise NotImplementedError

    def _close(self) -> None:
        pass
