"""
Tests for the certify and tighten management commands.
"""

import json
import tempfile
from io import StringIO
from pathlib import Path
from unittest.mock import patch

import pandas as pd
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, tag

from .certifiers.base import Tolerance, certificate, compare
from .utils import get_available_suites, get_bundle


class CommandTestCase(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.out = Path(self.tmp.name)

    def call(self, name, **options):
        stdout = StringIO()
        call_command(name, out=str(self.out), stdout=stdout, **options)
        return stdout.getvalue()


class CertifyCommandTestCase(CommandTestCase):
    """Test the certify command."""

    def test_success_writes_report(self):
        """Test a clean run prints the success line and writes the JSON report."""
        output = self.call("certify", suite=["young-scalar"], trials=20, seed=7)
        self.assertIn("No violations across 1 suite reports", output)
        document = json.loads((self.out / "certify-report.json").read_text())
        self.assertEqual(document["meta"]["config"]["masterSeed"], 7)
        self.assertEqual(document["suites"][0]["suiteId"], "young-scalar")
        self.assertIn("generatedAt", document["meta"])

    def test_csv_format(self):
        """Test --format csv writes one row per certificate."""
        self.call("certify", suite=["young-scalar", "power-sum"], trials=3, format="csv")
        frame = pd.read_csv(self.out / "certify-report.csv")
        self.assertEqual(len(frame[frame["suite_id"] == "young-scalar"]), 3)
        self.assertIn("param_k", frame.columns)

    def test_config_file(self):
        """Test --config is read and CLI flags win over it."""
        config = self.out / "run.yaml"
        config.write_text("suites: [sum-norm]\ntrials: 50\nmasterSeed: 3\n")
        self.call("certify", config=str(config), trials=2)
        document = json.loads((self.out / "certify-report.json").read_text())
        self.assertEqual(document["meta"]["config"]["trials"], 2)
        self.assertEqual(document["meta"]["config"]["masterSeed"], 3)

    def test_unknown_suite_exits_2(self):
        """Test configuration errors exit with status 2."""
        with self.assertRaises(CommandError) as ctx:
            self.call("certify", suite=["thm-unknown"])
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertFalse((self.out / "certify-report.json").exists())

    def test_violation_exits_1(self):
        """Test a violated certificate is written out and exits with status 1."""
        failing = certificate("young-scalar", compare("young-scalar", 2.0, 1.0, Tolerance()), "scalar")
        with patch("certification.runner.run_trial", return_value=failing):
            with self.assertRaises(CommandError) as ctx:
                self.call("certify", suite=["young-scalar"], trials=2, workers=1)
        self.assertEqual(ctx.exception.returncode, 1)
        document = json.loads((self.out / "certify-report.json").read_text())
        self.assertEqual(len(document["suites"][0]["violations"]), 2)


class TightenCommandTestCase(CommandTestCase):
    """Test the tighten command."""

    def test_dominance_block(self):
        """Test tighten writes its own report with a dominance table."""
        config = self.out / "run.json"
        config.write_text(json.dumps({
            "spaces": [{"model": "diagonal", "dim": 2, "grid": {"type": "index"}}],
            "suites": ["thm-young-refined", "thm-half-rB"],
        }))
        output = self.call("tighten", config=str(config), trials=3)
        document = json.loads((self.out / "tighten-report.json").read_text())
        self.assertEqual(len(document["dominance"]), 1)
        self.assertTrue(document["dominance"][0]["holds"])
        self.assertIsNotNone(document["suites"][0]["summary"]["minRelGap"])
        self.assertIn("min rel gap", output)


@tag("slow")
class DefaultBundleTestCase(CommandTestCase):
    """Test the default bundle end to end (skip with ``--exclude-tag slow``)."""

    def test_full_bundle_is_clean(self):
        """Test every default suite passes at the bundle's full trial count and the command exits 0."""
        trials = get_bundle()["trials"]
        # call_command only returns for exit code 0; 1 and 2 raise CommandError
        output = self.call("certify", trials=trials)
        document = json.loads((self.out / "certify-report.json").read_text())
        self.assertEqual(document["meta"]["config"]["trials"], trials)
        self.assertEqual({suite["suiteId"] for suite in document["suites"]}, set(get_available_suites()))
        for suite in document["suites"]:
            self.assertEqual(suite["violations"], [], suite["suiteId"])
            self.assertEqual(suite["errors"], [], suite["suiteId"])
            self.assertGreater(suite["summary"]["certificates"], 0)
        self.assertIn("No violations", output)
