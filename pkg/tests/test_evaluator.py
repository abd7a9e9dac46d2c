"""Unit tests for the self-check evaluator and its catalogue."""

import io

import pytest

from evaluation.checks import CHECKS, CheckResult, get_check_by_name
from evaluation.evaluator import SelfCheckEvaluator


def catalogue(*names):
    """Catalogue entries by name."""
    return [check for check in CHECKS if check["name"] in names]


@pytest.fixture
def evaluator():
    """Quick evaluator with seed 0."""
    return SelfCheckEvaluator(seed=0, quick=True)


class TestCatalogue:
    """Test the check catalogue."""

    def test_names_unique(self):
        """Test every check has a distinct name and id."""
        assert len({c["name"] for c in CHECKS}) == len(CHECKS)
        assert [c["id"] for c in CHECKS] == list(range(1, len(CHECKS) + 1))

    def test_lookup(self):
        """Test runners are found by name and unknown names raise KeyError."""
        assert get_check_by_name("case_table")(0, True).passed
        with pytest.raises(KeyError):
            get_check_by_name("no_such_check")

    @pytest.mark.parametrize(
        "name",
        [
            "enip_verification",
            "octahedron_distance",
            "trace_distance_relation",
            "case_table",
            "separable_region",
            "table_reproduction",
            "trivial_regime",
            "projection_agreement",
            "eigenvalue_formula",
        ],
    )
    def test_quick_checks_pass(self, name):
        """Test each quick check stays within its tolerance."""
        result = get_check_by_name(name)(0, True)
        assert result.passed, result.to_dict()

    @pytest.mark.slow
    @pytest.mark.parametrize("name", ["robustness_formula", "region_rules", "mixing_point_base"])
    def test_sampling_checks_pass(self, name):
        """Test the LP and sampling checks in quick mode."""
        result = get_check_by_name(name)(0, True)
        assert result.passed, result.to_dict()

    def test_result_status(self):
        """Test a result passes only without error and within tolerance."""
        assert CheckResult("a", 1e-7, 1e-6, 1).passed
        assert not CheckResult("a", 1e-5, 1e-6, 1).passed
        assert not CheckResult("a", 0.0, 1e-6, 1, error="boom").passed

    def test_trivial_regime_is_quiet(self, monkeypatch):
        """Test the N = 2 samples of the trivial-regime check log no warnings."""
        calls = []
        monkeypatch.setattr("geometry.egn.logger.warning", calls.append)
        assert get_check_by_name("trivial_regime")(0, True).passed
        assert calls == []


class TestSelfCheckEvaluator:
    """Test running and reporting."""

    def test_report(self, evaluator):
        """Test a passing subset produces a passing report."""
        report = evaluator.run_evaluation(catalogue("case_table", "separable_region"))
        assert report["passed"] is True
        assert report["total_checks"] == 2
        assert report["failures"] == []
        assert set(report["checks"]) == {"case_table", "separable_region"}

    def test_crash_becomes_failure(self, evaluator):
        """Test a raising check is recorded as failed with its error."""
        def explode(seed, quick):
            raise RuntimeError("boom")

        report = evaluator.run_evaluation([{"id": 1, "name": "explode", "runner": explode}])
        assert report["passed"] is False
        assert report["failures"] == ["explode"]
        assert report["checks"]["explode"]["error"] == "RuntimeError: boom"

    def test_summary(self, evaluator):
        """Test the summary table lists every check."""
        report = evaluator.run_evaluation(catalogue("case_table"))
        stream = io.StringIO()
        evaluator.print_summary(report, stream=stream)
        text = stream.getvalue()
        assert "SELF-CHECK SUMMARY" in text
        assert "case_table" in text
        assert "1/1 checks passed" in text
