"""The test suite for cli.py"""
import sys
sys.path.insert(1, ".")
from anisopy import *
from anisopy.cli import COMMANDS, EXIT_ERROR, EXIT_FAIL, EXIT_PASS, build_parser, main

import csv
import json
import os
import tempfile
import unittest


def write_config(directory: str, obj: dict) -> str:
    """Writes the config document and returns its path"""
    path = os.path.join(directory, "config.json")
    with open(path, "w") as f:
        json.dump(obj, f)
    return path


class TestParser(unittest.TestCase):
    """Test suite for the argument parser"""

    def test_commands(self):
        self.assertEqual(COMMANDS["sweep-h"], "sweep-h-uniform")
        self.assertEqual(set(COMMANDS.values()), set(KINDS))

    def test_limit_only_on_solve(self):
        args = build_parser().parse_args(["solve", "--config", "c.json", "--limit"])
        self.assertTrue(args.limit)
        with self.assertRaises(SystemExit):
            build_parser().parse_args(["sweep-eps", "--config", "c.json", "--limit"])

    def test_config_required(self):
        with self.assertRaises(SystemExit):
            build_parser().parse_args(["validate"])


class TestMain(unittest.TestCase):
    """Test suite for running commands"""

    def test_validate(self):
        with tempfile.TemporaryDirectory() as tmp:
            config = write_config(
                tmp, {"kind": "validate", "diffusion": {"name": "variable-offdiag"}, "source": {"name": "one"}, "mesh": {"uniform": 4}}
            )
            out = os.path.join(tmp, "out")
            self.assertEqual(main(["validate", "--config", config, "--out", out]), EXIT_PASS)
            self.assertTrue(os.path.exists(os.path.join(out, "summary.txt")))
            with open(os.path.join(out, "validate.csv")) as f:
                rows = list(csv.reader(f))
        self.assertEqual(rows[-1], ["pass", "true"])

    def test_command_overrides_kind(self):
        with tempfile.TemporaryDirectory() as tmp:
            config = write_config(
                tmp,
                {
                    "kind": "validate",
                    "diffusion": {"name": "identity"},
                    "source": {"name": "one"},
                    "mesh": {"uniform": 2},
                    "output": os.path.join(tmp, "from-config"),
                },
            )
            code = main(["solve", "--config", config, "--limit", "--dump-fields"])
            out = os.path.join(tmp, "from-config")
            self.assertEqual(code, EXIT_PASS)
            self.assertTrue(os.path.exists(os.path.join(out, "solve.csv")))
            self.assertTrue(os.path.exists(os.path.join(out, "solve_field_0.csv")))
            self.assertTrue(os.path.exists(os.path.join(out, "solve_matrix_0.mtx")))
            with open(os.path.join(out, "solve.csv")) as f:
                rows = list(csv.reader(f))
        self.assertEqual(rows[-1], ["pass", "skipped"])

    def test_failed_check(self):
        with tempfile.TemporaryDirectory() as tmp:
            config = write_config(
                tmp,
                {
                    "kind": "validate",
                    "diffusion": {"entries": [[1, 2], [2, 1]], "lambda": 1},
                    "source": {"name": "one"},
                    "mesh": {"uniform": 2},
                },
            )
            self.assertEqual(main(["validate", "--config", config, "--out", tmp]), EXIT_FAIL)

    def test_error(self):
        with tempfile.TemporaryDirectory() as tmp:
            missing = os.path.join(tmp, "missing.json")
            self.assertEqual(main(["solve", "--config", missing, "--out", tmp]), EXIT_ERROR)
            config = write_config(tmp, {"kind": "solve", "diffusion": {"name": "identity"}, "source": {"name": "one"}})
            self.assertEqual(main(["solve", "--config", config, "--out", tmp]), EXIT_ERROR)

    def test_threads_override(self):
        with tempfile.TemporaryDirectory() as tmp:
            config = write_config(
                tmp,
                {
                    "kind": "sweep-eps",
                    "diffusion": {"name": "identity"},
                    "source": {"name": "sine-product"},
                    "mesh": {"uniform": 8},
                    "eps": [0.5, 0.25, 0.125],
                },
            )
            self.assertEqual(main(["sweep-eps", "--config", config, "--out", tmp, "--threads", "2"]), EXIT_PASS)
            self.assertTrue(os.path.exists(os.path.join(tmp, "sweep-eps.csv")))


if __name__ == "__main__":
    unittest.main()
