"""Tests for the verification suites."""

import unittest

from clopen_baire.config import RunConfig
from clopen_baire.serialization import dump_document
from clopen_baire.suites import MAX_WITNESSES, SUITES, CheckResult, run_suite, run_suites


def named_check(result, name):
    return next(check for check in result.checks if check.name == name)


class TestCheckResult(unittest.TestCase):
    """Test check bookkeeping."""

    def test_witnesses_are_capped(self):
        check = CheckResult("cap")
        for index in range(MAX_WITNESSES + 2):
            check.record(False, f"witness {index}")
        check.record(True)
        self.assertEqual(check.failed, MAX_WITNESSES + 2)
        self.assertEqual(check.passed, 1)
        self.assertEqual(len(check.witnesses), MAX_WITNESSES)
        self.assertFalse(check.ok)

    def test_measured_checks_never_fail(self):
        check = CheckResult("measure", measured=True)
        check.record(False, "noted")
        self.assertTrue(check.ok)


class TestSuites(unittest.TestCase):
    """Run every suite in quick mode."""

    def setUp(self):
        self.config = RunConfig(quick=True, seed=1)

    def test_every_suite_passes(self):
        for name in SUITES:
            with self.subTest(suite=name):
                result = run_suite(name, self.config)
                failures = {check.name: check.witnesses for check in result.checks if not check.ok}
                self.assertTrue(result.ok, failures)
                self.assertTrue(result.checks)

    def test_unknown_suite(self):
        with self.assertRaises(KeyError):
            run_suite("nope", self.config)

    def test_reports_are_reproducible(self):
        first = dump_document(run_suites("descent", self.config))
        second = dump_document(run_suites("descent", self.config))
        self.assertEqual(first, second)

    def test_stabilization_is_measured(self):
        result = run_suite("rank-stabilization", self.config)
        self.assertTrue(all(check.measured for check in result.checks))
        self.assertTrue(result.checks[0].notes)

    def test_document_roundtrip_covers_transcripts(self):
        documents = named_check(run_suite("roundtrip", self.config), "document-roundtrip")
        self.assertEqual((documents.passed, documents.failed), (3, 0))

    def test_demand_witnesses_spread_over_the_tree(self):
        demanded = named_check(run_suite("universal", self.config), "demand-witnesses")
        self.assertEqual(demanded.passed, 2 * self.config.scaled(250, 20))
        self.assertEqual(demanded.failed, 0)
        self.assertEqual(len(demanded.notes), 2)


class TestFullCounts(unittest.TestCase):
    """Sample counts in full mode."""

    def setUp(self):
        self.config = RunConfig(seed=1)

    def test_every_embedded_tree_is_perturbed(self):
        faults = named_check(run_suite("embed", self.config), "fault-detection")
        self.assertEqual(faults.passed, 100)
        self.assertEqual(faults.failed, 0)

    def test_same_side_pairs_reach_the_sample_count(self):
        same_side = named_check(run_suite("bipartite", self.config), "same-side-never-in")
        self.assertEqual(same_side.passed + same_side.failed, 1000)
        self.assertEqual(same_side.notes, [])

    def test_quick_same_side_count(self):
        quick = RunConfig(quick=True, seed=3)
        same_side = named_check(run_suite("bipartite", quick), "same-side-never-in")
        self.assertEqual(same_side.passed, quick.scaled(1000, 60))


if __name__ == "__main__":
    unittest.main()
