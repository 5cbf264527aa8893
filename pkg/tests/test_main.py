"""Tests for the command-line entry point."""

import io
import json
import os
import unittest
from contextlib import redirect_stderr, redirect_stdout
from unittest.mock import patch

from clopen_baire.__main__ import build_parser, main
from clopen_baire.constants import EXIT_OK, EXIT_USAGE, SEED_ENV


def run_main(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


class TestMain(unittest.TestCase):
    """Test main() end to end."""

    def test_decide_prints_json(self):
        code, out, _ = run_main(["decide", "--x", "0,(1)*", "--y", "(1|in)*"])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out)["verdict"], "in")

    def test_environment_seed_matches_flag(self):
        with patch.dict(os.environ, {SEED_ENV: "7"}):
            from_env = run_main(["decide", "--random"])
        from_flag = run_main(["decide", "--random", "--seed", "7"])
        self.assertEqual(from_env[0], EXIT_OK)
        self.assertEqual(from_env[1], from_flag[1])

    def test_invalid_seed(self):
        code, out, err = run_main(["decide", "--random", "--seed", "-1"])
        self.assertEqual(code, EXIT_USAGE)
        self.assertEqual(out, "")
        self.assertIn("invalid configuration", err)

    def test_unknown_suite_is_a_usage_error(self):
        with self.assertRaises(SystemExit) as caught:
            run_main(["verify", "--suite", "nope"])
        self.assertEqual(caught.exception.code, EXIT_USAGE)

    def test_no_command(self):
        code, _, err = run_main([])
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("Choose a command", err)

    def test_parser_defaults(self):
        args = build_parser().parse_args(["game", "--gamma", "3"])
        self.assertEqual(args.alpha, "w^2")
        self.assertEqual(args.challenger, "greedy")
        self.assertIsNone(args.seed)


if __name__ == "__main__":
    unittest.main()
