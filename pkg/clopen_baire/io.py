"""Output sinks for Clopen Baire commands."""

import sys
import threading
from pathlib import Path
from typing import List, Optional, TextIO


class IOInterface:
    """Basic output contract shared by stdout, stderr, files and tests."""

    def write(self, message: str) -> None:  # pragma: no cover - simple wrapper
        raise NotImplementedError

    def close(self) -> None:
        pass


class ConsoleIO(IOInterface):
    """Stream implementation, stdout unless told otherwise."""

    def __init__(self, stream: Optional[TextIO] = None) -> None:
        self.stream = stream

    def write(self, message: str) -> None:
        stream = self.stream or sys.stdout
        stream.write(message if message.endswith("\n") else message + "\n")
        stream.flush()


class FileIO(IOInterface):
    """Collects a document and writes it to `path` on close.

    Nothing touches the file until close, so a failing command leaves no
    partial artifact behind.
    """

    def __init__(self, path: str) -> None:
        self.path = Path(path)
        self._chunks: List[str] = []
        self._lock = threading.Lock()

    def write(self, message: str) -> None:
        with self._lock:
            self._chunks.append(message if message.endswith("\n") else message + "\n")

    def close(self) -> None:
        with self._lock:
            if self.path.parent and not self.path.parent.exists():
                self.path.parent.mkdir(parents=True)
            self.path.write_text("".join(self._chunks), encoding="utf-8")
            self._chunks = []


class BufferIO(IOInterface):
    """In-memory sink, used for reports and tests."""

    def __init__(self) -> None:
        self.lines: List[str] = []

    def write(self, message: str) -> None:
        self.lines.append(message)

    def getvalue(self) -> str:
        return "".join(line if line.endswith("\n") else line + "\n" for line in self.lines)
