import numpy as np
import pytest

from wiener_convex.gauss.grid import ScalarField, VectorField
from wiener_convex.integrands.kinds import anisotropic_norm, euclidean_norm, power_p, quadratic
from wiener_convex.verify.duality import (
    jensen_contraction_violation,
    jensen_energy_excess,
    random_step_field,
    relaxation_monotonicity_check,
    representation_lower_bound_check,
)


@pytest.mark.unit_test
@pytest.mark.parametrize("F", [euclidean_norm(), quadratic(2.0), power_p(1.5), anisotropic_norm([3.0])])
def test_lower_bounds_never_exceed_the_energy(small_line_grid, F):
    """Test random step fields only give lower bounds and the subgradient selection attains the energy."""
    u = ScalarField.from_function(small_line_grid, lambda x: x**2 - np.abs(x))
    report = representation_lower_bound_check(F, u, trials=200, seed=2)
    assert report.name == "representation_lower_bound"
    assert report.passed
    assert report.measured <= report.tolerance
    assert report.details["attainment_gap"] == pytest.approx(0.0, abs=1e-8 * (1.0 + report.details["energy"]))


@pytest.mark.unit_test
def test_step_fields_are_feasible(plane_grid):
    """Test step fields take at most four values inside the unit ball of the conjugate of the norm."""
    rng = np.random.default_rng(0)
    for _ in range(20):
        phi = random_step_field(euclidean_norm(), plane_grid, rng)
        distinct = np.unique(phi.values.reshape(-1, 2), axis=0)
        assert len(distinct) <= 4
        assert np.all(np.linalg.norm(distinct, axis=1) <= 1.0 + 1e-12)


@pytest.mark.unit_test
def test_energy_decreases_along_the_flow(line_grid):
    """Test the total variation of x^2 does not grow along the Ornstein-Uhlenbeck flow."""
    u = ScalarField(line_grid, line_grid.coords[0] ** 2)
    report = relaxation_monotonicity_check(euclidean_norm(), u, [2.0, 0.1, 0.5, 1.0])
    assert report.name == "relaxation_monotonicity"
    assert report.passed
    assert [row["t"] for row in report.details["rows"]] == [0.1, 0.5, 1.0, 2.0]
    assert report.details["rows"][-1]["ratio"] < 0.1


@pytest.mark.unit_test
@pytest.mark.parametrize("F", [euclidean_norm(), quadratic(), power_p(3.0)])
def test_jensen_contraction(line_grid, F):
    """Test F of the smoothed field stays below the smoothed F of the field."""
    rng = np.random.default_rng(11)
    phi = VectorField(line_grid, 2.0 * rng.normal(size=line_grid.shape + (1,)))
    scale = 1.0 + float(np.max(F.value(phi.values)))
    for t in (0.05, 0.5, 2.0):
        assert jensen_contraction_violation(F, phi, t) <= 1e-10 * scale


@pytest.mark.unit_test
@pytest.mark.parametrize("F", [euclidean_norm(), quadratic(), power_p(3.0), anisotropic_norm([3.0])])
@pytest.mark.parametrize("grid_name", ["line_grid", "hermite_line_grid"])
def test_jensen_contraction_of_energies(grid_name, F, request):
    """Test the energy of localized fields does not grow along the flow, nor does F of the field pointwise."""
    grid = request.getfixturevalue(grid_name)
    x = grid.coords[0]
    for lo, width in ((0.75, 0.25), (-2.0, 0.5), (1.5, 1.0)):
        phi = VectorField(grid, 2.0 * ((x >= lo) & (x < lo + width))[:, None])
        scale = 1.0 + float(np.max(F.value(phi.values)))
        for t in (1e-3, 0.1, 2.0):
            assert jensen_energy_excess(F, phi, t) <= 1e-8
            assert jensen_contraction_violation(F, phi, t) <= 1e-10 * scale
