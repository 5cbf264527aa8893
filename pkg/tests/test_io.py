"""Tests for IO interfaces."""

import io
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

from clopen_baire.io import BufferIO, ConsoleIO, FileIO


class TestIOInterfaces(unittest.TestCase):
    """Test IO interface classes."""

    def test_console_io_write(self):
        stream = io.StringIO()
        ConsoleIO(stream).write("test message")
        self.assertEqual(stream.getvalue(), "test message\n")

    def test_console_io_keeps_trailing_newline(self):
        stream = io.StringIO()
        ConsoleIO(stream).write("done\n")
        self.assertEqual(stream.getvalue(), "done\n")

    def test_console_io_defaults_to_stdout(self):
        stream = io.StringIO()
        with patch("sys.stdout", stream):
            ConsoleIO().write("to stdout")
        self.assertEqual(stream.getvalue(), "to stdout\n")

    def test_buffer_io(self):
        buffer = BufferIO()
        buffer.write("one")
        buffer.write("two\n")
        self.assertEqual(buffer.lines, ["one", "two\n"])
        self.assertEqual(buffer.getvalue(), "one\ntwo\n")


class TestFileIO(unittest.TestCase):
    """Test FileIO."""

    def setUp(self):
        self.temp_dir = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.temp_dir.cleanup()

    def test_writes_only_on_close(self):
        path = Path(self.temp_dir.name) / "out.json"
        sink = FileIO(str(path))
        sink.write("{}")
        self.assertFalse(path.exists())
        sink.close()
        self.assertEqual(path.read_text(encoding="utf-8"), "{}\n")

    def test_creates_parent_directories(self):
        path = Path(self.temp_dir.name) / "nested" / "deeper" / "out.dot"
        sink = FileIO(str(path))
        sink.write("graph g {}")
        sink.close()
        self.assertTrue(path.exists())


if __name__ == "__main__":
    unittest.main()
