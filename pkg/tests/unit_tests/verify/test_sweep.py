import pytest

from tests.conftest import uniform
from wiener_convex.exceptions import SolverError
from wiener_convex.gauss.grid import ScalarField
from wiener_convex.integrands.kinds import quadratic
from wiener_convex.verify.sweep import dimension_sweep_check


@pytest.mark.unit_test
def test_sweep_report_flags_convexity(tight_params):
    """Test the sweep report passes on separable linear data and flags every solution convex."""
    grid = uniform(2, 17)
    g = ScalarField.from_function(grid, lambda x1, x2: x1 + 0.5 * x2)
    report = dimension_sweep_check(quadratic(), g, [1, 2], tight_params, seed=4)
    assert report.name == "dimension_sweep"
    assert report.passed
    assert report.seed == 4
    assert report.details["monotone"]
    assert report.details["all_convex"]
    assert [row["convex"] for row in report.details["rows"]] == [True, True]
    assert report.details["rows"][1]["distance"] == 0.0


@pytest.mark.unit_test
def test_sweep_report_refuses_bad_dimensions(plane_grid):
    """Test invalid dimensions surface as solver errors."""
    with pytest.raises(SolverError):
        dimension_sweep_check(quadratic(), ScalarField.constant(plane_grid, 1.0), [2, 1])
