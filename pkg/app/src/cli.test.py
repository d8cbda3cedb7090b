import json
import unittest
from unittest import TestCase
from unittest.mock import patch

from click.testing import CliRunner

from cli import EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE, cli, run
from errors import PivotError


class TestCli(TestCase):
    def setUp(self):
        self.runner = CliRunner()

    def run_cli(self, *args: str):
        return self.runner.invoke(cli, list(args))

    def test_verify(self):
        result = self.run_cli("verify")
        self.assertEqual(result.exit_code, EXIT_OK, result.output)
        self.assertIn("checks passed", result.output)

    def test_reduce(self):
        result = self.run_cli("reduce", "--power", "2")
        self.assertEqual(result.exit_code, EXIT_OK, result.output)
        self.assertIn("Bbar{1} → B{-1} → R{-2}", result.output)

    def test_reduce_json_is_deterministic(self):
        first = self.run_cli("reduce", "--power", "2", "--inverse", "--json")
        second = self.run_cli("reduce", "--power", "2", "--inverse", "--json")
        self.assertEqual(first.exit_code, EXIT_OK)
        self.assertEqual(first.output, second.output)
        report = json.loads(first.output)
        self.assertTrue(report["shape"]["passed"])
        self.assertEqual(report["text"], "R{2} → Bbar{1} → B{-1}")

    def test_hom(self):
        result = self.run_cli("hom", "--source", "B", "--target", "R", "--max-degree", "9")
        self.assertEqual(result.exit_code, EXIT_OK, result.output)
        self.assertEqual(result.output.strip(), "1@1, 2@5, 3@9")

    def test_hom_check(self):
        result = self.run_cli("hom", "--source", "B", "--target", "Bbar", "--max-degree", "8", "--check")
        self.assertEqual(result.exit_code, EXIT_OK, result.output)
        self.assertIn("agrees", result.output)

    def test_k0(self):
        result = self.run_cli("k0", "--expr", "b*b")
        self.assertEqual(result.exit_code, EXIT_OK, result.output)
        self.assertEqual(result.output.strip(), "q^-1*b + q*bc")
        result = self.run_cli("k0", "--expr", "form(b,1)", "--series", "9")
        self.assertEqual(result.output.splitlines(), ["q/(1 - q^4)^2", "1@1, 2@5, 3@9"])

    def test_obstruct_small_degree_fails(self):
        result = self.run_cli("obstruct", "--max-degree", "4", "--json")
        self.assertEqual(result.exit_code, EXIT_CHECK_FAILED)
        self.assertIn('"insufficient_degree": true', result.output)

    def test_usage_errors(self):
        cases = [
            ("reduce", "--power", "0"),
            ("reduce",),
            ("hom", "--source", "C", "--target", "R"),
            ("k0", "--expr", "b +"),
            ("k0", "--expr", "b*b", "--series", "4"),
            ("verify", "--colour"),
            ("frobnicate",),
        ]
        for args in cases:
            self.assertEqual(self.run_cli(*args).exit_code, EXIT_USAGE, args)

    def test_run_returns_exit_codes(self):
        self.assertEqual(run(["k0", "--expr", "c*c"]), EXIT_OK)
        self.assertEqual(run(["obstruct", "--max-degree", "4"]), EXIT_CHECK_FAILED)
        self.assertEqual(run(["reduce", "--power", "-1"]), EXIT_USAGE)

    def test_usage_error_json(self):
        result = self.run_cli("hom", "--source", "B{", "--target", "R", "--json")
        self.assertEqual(result.exit_code, EXIT_USAGE)
        self.assertEqual(json.loads(result.output)["type"], "usage")

    def test_failed_reduction_is_a_check_failure(self):
        runner = CliRunner(mix_stderr=False)
        with patch("cli.reduce_power", side_effect=PivotError("pivot is not invertible")):
            result = runner.invoke(cli, ["reduce", "--power", "2", "--json"])
        self.assertEqual(result.exit_code, EXIT_CHECK_FAILED)
        self.assertEqual(json.loads(result.stderr)["detail"], "pivot is not invertible")

    def test_k0_exits_cleanly(self):
        self.assertEqual(run(["k0", "--expr", "b*b", "--json"]), EXIT_OK)


if __name__ == "__main__":
    unittest.main()
