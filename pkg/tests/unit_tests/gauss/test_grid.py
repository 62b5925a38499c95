import math

import numpy as np
import pytest
from scipy.special import erf

from tests.conftest import hermite, uniform
from wiener_convex.exceptions import FieldError, GridError, ResourceBudgetError
from wiener_convex.gauss.grid import (
    GAUSS_HERMITE,
    GridSpec,
    ScalarField,
    VectorField,
    build_grid,
    check_same_grid,
    inner_product,
    integrate,
)


@pytest.mark.unit_test
def test_gauss_hermite_moments(hermite_line_grid):
    """Test a Gauss-Hermite line integrates the first even moments of the Gaussian exactly."""
    x = ScalarField.from_function(hermite_line_grid, lambda x: x)
    assert integrate(ScalarField.constant(hermite_line_grid, 1.0)) == pytest.approx(1.0, abs=1e-12)
    assert integrate(x.like(x.values**2)) == pytest.approx(1.0, abs=1e-11)
    assert integrate(x.like(x.values**4)) == pytest.approx(3.0, abs=1e-10)
    assert integrate(x) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.unit_test
def test_uniform_axis_nodes_and_mass():
    """Test a five node uniform line has the nodes -6, -3, 0, 3, 6 and the mass of [-6, 6]."""
    grid = uniform(1, 5)
    assert np.array_equal(grid.axis_nodes[0], np.array([-6.0, -3.0, 0.0, 3.0, 6.0]))
    assert grid.weights.sum() == pytest.approx(erf(6.0 / math.sqrt(2.0)), abs=1e-14)
    assert np.all(grid.weights > 0)


@pytest.mark.unit_test
def test_uniform_second_moment(line_grid):
    """Test the uniform line integrates x^2 to one."""
    x2 = ScalarField.from_function(line_grid, lambda x: x**2)
    assert integrate(x2) == pytest.approx(1.0, abs=1e-6)


@pytest.mark.unit_test
def test_plane_grid_layout(plane_grid):
    """Test the shape, size and node table of a plane grid."""
    assert plane_grid.shape == (33, 33)
    assert plane_grid.size == 33**2
    assert plane_grid.points.shape == (33**2, 2)
    assert plane_grid.vector_weights.shape == (33, 33)
    # the last layer of cells carries no weight
    assert np.all(plane_grid.vector_weights[-1, :] == 0.0)
    assert np.all(plane_grid.vector_weights[:, -1] == 0.0)
    assert np.all(plane_grid.face_flux[0] > 0.0)


@pytest.mark.unit_test
@pytest.mark.parametrize(
    "spec, error",
    [
        (GridSpec(dimension=4), GridError),
        (GridSpec(nodes_per_axis=1), GridError),
        (GridSpec(scheme="chebyshev"), GridError),
        (GridSpec(scheme=GAUSS_HERMITE, nodes_per_axis=301), GridError),
        (GridSpec(dimension=2, nodes_per_axis=100, max_nodes=1000), ResourceBudgetError),
    ],
)
def test_build_grid_refuses(spec, error):
    """Test invalid or oversized grids are refused."""
    with pytest.raises(error):
        build_grid(spec)


@pytest.mark.unit_test
def test_gauss_hermite_node_limit_message():
    """Test the Gauss-Hermite node limit is reported by validation."""
    spec = GridSpec(scheme=GAUSS_HERMITE, nodes_per_axis=301)
    assert not spec.validation.passed
    assert spec.validation.fail_reasons[0].startswith("A gauss_hermite grid supports at most 300 nodes per axis")


@pytest.mark.unit_test
def test_sub_grid_and_spec_round_trip(hermite_plane_grid, plane_grid):
    """Test the leading sub grid and the rebuilt spec of a grid."""
    line = hermite_plane_grid.sub_grid(1)
    assert line.key == hermite(1, 16).key
    assert build_grid(plane_grid.to_spec()).key == plane_grid.key
    with pytest.raises(GridError):
        plane_grid.sub_grid(3)


@pytest.mark.unit_test
def test_scalar_field_checks(small_line_grid):
    """Test scalar fields refuse wrong sizes and non-finite values and are read only."""
    with pytest.raises(FieldError):
        ScalarField(small_line_grid, np.zeros(7))
    with pytest.raises(FieldError):
        ScalarField(small_line_grid, np.full(65, np.nan))
    u = ScalarField.constant(small_line_grid, 2.0)
    with pytest.raises(ValueError):
        u.values[0] = 1.0
    assert ScalarField(small_line_grid, np.zeros((65, 1))).values.shape == (65,)


@pytest.mark.unit_test
def test_vector_field_checks(plane_grid):
    """Test vector fields are shaped per cell and component."""
    phi = VectorField.constant(plane_grid, [1.0, -2.0])
    assert phi.values.shape == (33, 33, 2)
    assert np.all(phi.values[..., 1] == -2.0)
    with pytest.raises(FieldError):
        VectorField(plane_grid, np.zeros((33, 33)))


@pytest.mark.unit_test
def test_pairing_checks(small_line_grid, line_grid):
    """Test pairings refuse mixed kinds and mixed grids."""
    u = ScalarField.constant(small_line_grid, 1.0)
    with pytest.raises(FieldError):
        inner_product(u, VectorField.zeros(small_line_grid))
    with pytest.raises(FieldError):
        check_same_grid(u, ScalarField.constant(line_grid, 1.0))
    with pytest.raises(FieldError):
        integrate(u, line_grid)


@pytest.mark.unit_test
def test_norm_of_constant(hermite_plane_grid):
    """Test the norm of a constant is its absolute value on a full mass grid."""
    assert ScalarField.constant(hermite_plane_grid, -3.0).norm() == pytest.approx(3.0, abs=1e-11)
