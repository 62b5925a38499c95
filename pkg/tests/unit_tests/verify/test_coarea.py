import numpy as np
import pytest

from wiener_convex.exceptions import GridError
from wiener_convex.gauss.grid import ScalarField
from wiener_convex.geometry.sets import IndicatorSet
from wiener_convex.integrands.kinds import anisotropic_norm
from wiener_convex.verify.coarea import coarea_check


@pytest.mark.unit_test
@pytest.mark.parametrize(
    ("func", "t_samples"), [(lambda x: x, 512), (lambda x: np.abs(x), 512), (lambda x: x**2, 4096)]
)
def test_fields_on_a_line(line_grid, func, t_samples):
    """Test the level integral matches the total variation of fields on the line."""
    report = coarea_check(ScalarField.from_function(line_grid, func), t_samples=t_samples)
    assert report.name == "coarea"
    assert report.passed
    assert not report.details["degenerate"]


@pytest.mark.unit_test
def test_anisotropic_plane(plane_grid):
    """Test the anisotropic variant on an affine field of the plane."""
    u = ScalarField.from_function(plane_grid, lambda x1, x2: x1 + x2)
    report = coarea_check(u, F=anisotropic_norm([1.0, 4.0]))
    assert report.passed
    assert report.details["anisotropic"]


@pytest.mark.unit_test
def test_indicators_are_exact(plane_grid):
    """Test the coarea formula holds to rounding for an indicator."""
    u = IndicatorSet.from_predicate(plane_grid, lambda x1, x2: x1 + 2.0 * x2 < 0.5).indicator()
    assert coarea_check(u, tol=1e-10).passed


@pytest.mark.unit_test
def test_constant_field_is_degenerate(line_grid):
    """Test constant fields give the degenerate report."""
    report = coarea_check(ScalarField.constant(line_grid, 3.0))
    assert report.passed
    assert report.details["degenerate"]
    assert report.measured == 0.0


@pytest.mark.unit_test
def test_gauss_hermite_grids_are_refused(hermite_line_grid):
    """Test the check needs a uniform grid."""
    with pytest.raises(GridError):
        coarea_check(ScalarField(hermite_line_grid, hermite_line_grid.coords[0]))
