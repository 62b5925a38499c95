import numpy as np
import pytest

from wiener_convex.exceptions import ExperimentRunError
from wiener_convex.gauss.grid import VectorField
from wiener_convex.solver.params import Solution
from wiener_convex.verify import acceptance
from wiener_convex.verify.acceptance import AcceptanceSuite, verify_all

CHEAP = ["spectral_agreement", "isoperimetry", "classification", "ou_properties"]


@pytest.mark.integration_test
def test_cheap_criteria_pass():
    """Test a subset of the acceptance criteria passes."""
    report = verify_all(seed=0, criteria=CHEAP)
    assert [r.name for r in report.reports] == CHEAP
    assert report.passed, report.failed
    assert all(r.seed == 0 for r in report.reports)


@pytest.mark.integration_test
def test_reports_depend_only_on_the_seed():
    """Test two runs with one seed give identical reports."""
    first = verify_all(seed=7, criteria=["ou_properties"]).to_dict()
    second = verify_all(seed=7, criteria=["ou_properties"]).to_dict()
    assert first == second


@pytest.mark.integration_test
def test_unknown_criteria_are_refused():
    """Test a misspelt criterion name raises before anything runs."""
    with pytest.raises(ExperimentRunError):
        verify_all(criteria=["isoperimetry", "convexity"])
    with pytest.raises(ExperimentRunError):
        AcceptanceSuite().run("convexity")


@pytest.mark.integration_test
def test_summary_rows():
    """Test the summary has one row per criterion."""
    report = verify_all(seed=1, criteria=["classification"])
    assert report.summary_rows() == [
        ["classification", report.reports[0].passed, report.reports[0].measured, report.reports[0].tolerance]
    ]
    assert report.to_dict()["failed"] == report.failed


@pytest.mark.integration_test
def test_soft_thresholding_measures_the_tails(monkeypatch):
    """Test a residue far out in the tails fails the sub-threshold rows and nothing else."""

    def tail_residue(F, g, params=None):
        x = g.grid.coords[0]
        c = round(float(g.values[-1] / x[-1]), 6)
        values = (c - 1.0) * x if c >= 1.0 else np.where(np.abs(x) > 5.0, 1e-2, 0.0)
        zeros = VectorField.zeros(g.grid)
        return Solution(
            u=g.like(values), phi=zeros, g=g, primal_value=0.0, dual_value=0.0, gap=0.0, iterations=1, converged=True
        )

    monkeypatch.setattr(acceptance, "solve", tail_residue)
    report = AcceptanceSuite().run("soft_thresholding")
    rows = report.details["rows"]
    assert not report.passed
    assert [row["passed"] for row in rows] == [row["c"] >= 1.0 for row in rows]
    assert all(row["error"] == pytest.approx(1e-2) for row in rows if row["c"] < 1.0)
