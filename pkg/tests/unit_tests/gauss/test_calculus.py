import math

import numpy as np
import pytest

from tests.conftest import hermite, uniform
from wiener_convex.exceptions import FieldError, GridError
from wiener_convex.gauss.calculus import (
    adjoint_residual,
    cylindrical_projection,
    divergence_gamma,
    gradient,
    interior_mask,
    interpolate,
    lift,
    ou_semigroup,
    resample_to_uniform,
)
from wiener_convex.gauss.grid import GridSpec, ScalarField, VectorField, build_grid, inner_product, integrate
from wiener_convex.verify.acceptance import smooth_field


@pytest.mark.unit_test
def test_gradient_of_affine_field_is_exact(hermite_plane_grid):
    """Test the gradient of 2 x1 - x2 + 1 is (2, -1) on every cell, including the padded last layer."""
    u = ScalarField.from_function(hermite_plane_grid, lambda x1, x2: 2.0 * x1 - x2 + 1.0)
    grad = gradient(u)
    assert np.allclose(grad.values[..., 0], 2.0, atol=1e-10)
    assert np.allclose(grad.values[..., 1], -1.0, atol=1e-10)


@pytest.mark.unit_test
@pytest.mark.parametrize("grid_name", ["line_grid", "plane_grid", "hermite_plane_grid"])
def test_divergence_is_negative_adjoint(grid_name, request):
    """Test <grad u, phi> = -<u, div phi> for random fields."""
    grid = request.getfixturevalue(grid_name)
    rng = np.random.default_rng(7)
    u = ScalarField(grid, rng.normal(size=grid.shape))
    phi = VectorField(grid, rng.normal(size=grid.shape + (grid.dimension,)))
    scale = math.sqrt(inner_product(gradient(u), gradient(u))) * phi.norm()
    assert adjoint_residual(u, phi) <= 1e-10 * max(scale, 1.0)


@pytest.mark.unit_test
def test_divergence_of_constant_field(line_grid):
    """Test the Gaussian divergence of the constant flow 1 is -x away from the ends of the line."""
    div = divergence_gamma(VectorField.constant(line_grid, 1.0))
    core = interior_mask(line_grid, radius=4.0)
    x = line_grid.coords[0]
    assert np.max(np.abs(div.values[core] + x[core])) < 1e-2


@pytest.mark.unit_test
def test_adjoint_residual_refuses_mixed_grids(line_grid, small_line_grid):
    """Test the residual needs both fields on one grid."""
    with pytest.raises(FieldError):
        adjoint_residual(ScalarField.constant(line_grid, 1.0), VectorField.zeros(small_line_grid))


@pytest.mark.unit_test
def test_ou_semigroup_time_zero_and_negative(line_grid):
    """Test T_0 is the identity and negative times are refused."""
    u = ScalarField.from_function(line_grid, np.abs)
    assert ou_semigroup(u, 0.0) is u
    with pytest.raises(GridError):
        ou_semigroup(u, -0.1)


@pytest.mark.unit_test
def test_ou_semigroup_preserves_constants_and_bounds(line_grid):
    """Test T_t maps constants to themselves and keeps values inside the input range."""
    c = ScalarField.constant(line_grid, 2.5)
    assert np.allclose(ou_semigroup(c, 0.7).values, 2.5, atol=1e-12)

    u = ScalarField.from_function(line_grid, lambda x: np.sin(3.0 * x))
    smoothed = ou_semigroup(u, 0.3)
    assert smoothed.values.max() <= u.values.max() + 1e-12
    assert smoothed.values.min() >= u.values.min() - 1e-12


@pytest.mark.unit_test
def test_ou_semigroup_eigenfunctions(line_grid):
    """Test T_t x = e^-t x and T_t He_2 = e^-2t He_2 in the bulk of the line."""
    t = 0.5
    core = interior_mask(line_grid, radius=1.0)
    x = line_grid.coords[0]
    linear = ou_semigroup(ScalarField(line_grid, x), t)
    assert np.allclose(linear.values[core], math.exp(-t) * x[core], atol=1e-9)
    quadratic = ou_semigroup(ScalarField(line_grid, x**2 - 1.0), t)
    assert np.allclose(quadratic.values[core], math.exp(-2.0 * t) * (x[core] ** 2 - 1.0), atol=1e-3)


@pytest.mark.unit_test
def test_ou_semigroup_on_vector_fields(plane_grid):
    """Test vector fields are transformed componentwise."""
    phi = VectorField.constant(plane_grid, [1.0, -2.0])
    out = ou_semigroup(phi, 0.4)
    assert isinstance(out, VectorField)
    assert np.allclose(out.values, phi.values, atol=1e-12)


@pytest.mark.unit_test
@pytest.mark.parametrize("dimension", [1, 2])
def test_ou_semigroup_law_on_default_grids(dimension):
    """Test T_s T_t u = T_{s+t} u for random smooth u on the default Gauss-Hermite grids."""
    grid = build_grid(GridSpec(dimension=dimension))
    rng = np.random.default_rng(dimension)
    for _ in range(10):
        u = ScalarField(grid, smooth_field(grid, rng))
        s, t = rng.uniform(0.05, 1.0, size=2)
        composed = ou_semigroup(ou_semigroup(u, s), t)
        direct = ou_semigroup(u, s + t)
        assert composed.like(composed.values - direct.values).norm() <= 1e-4


@pytest.mark.unit_test
def test_ou_semigroup_converges_monotonically(line_grid):
    """Test |T_{1/k} u - u| decreases in k for a smooth u."""
    u = ScalarField.from_function(line_grid, lambda x: np.sin(2.0 * x) + 0.3 * x**2)
    distances = []
    for k in range(1, 11):
        smoothed = ou_semigroup(u, 1.0 / k)
        distances.append(smoothed.like(smoothed.values - u.values).norm())
    assert all(later <= earlier + 1e-12 for earlier, later in zip(distances, distances[1:]))
    assert distances[-1] < 0.5 * distances[0]


@pytest.mark.unit_test
@pytest.mark.parametrize("t", [0.01, 0.5, 2.0])
def test_ou_semigroup_conserves_mass_of_localized_fields(line_grid, t):
    """Test the node mass of scalar fields and the cell mass of vector fields survive the flow of a bump."""
    x = line_grid.coords[0]
    bump = ((x >= 0.75) & (x <= 1.0)).astype(float)
    u = ScalarField(line_grid, bump)
    assert integrate(ou_semigroup(u, t)) == pytest.approx(integrate(u), abs=1e-10)

    phi = VectorField(line_grid, bump[:, None])
    cells = line_grid.vector_weights[..., None]
    moved = ou_semigroup(phi, t)
    assert np.sum(cells * moved.values) == pytest.approx(np.sum(cells * phi.values), abs=1e-10)
    assert moved.values.min() >= -1e-12
    assert moved.values.max() <= 1.0 + 1e-12


@pytest.mark.unit_test
def test_ou_semigroup_on_a_long_axis():
    """Test axes beyond the dense limit keep constants, x and the mass."""
    grid = uniform(1, 801)
    x = grid.coords[0]
    assert np.allclose(ou_semigroup(ScalarField.constant(grid, 1.0), 0.3).values, 1.0, atol=1e-8)
    moved = ou_semigroup(ScalarField(grid, x), math.log(2.0))
    assert np.allclose(moved.values, 0.5 * x, atol=1e-8)
    bump = ScalarField(grid, (np.abs(x - 1.0) < 0.5).astype(float))
    assert integrate(ou_semigroup(bump, 0.3)) == pytest.approx(integrate(bump), abs=1e-8)


@pytest.mark.unit_test
def test_cylindrical_projection_and_lift(plane_grid):
    """Test the projection of x1 + x2^2 onto x1, and that lifting the result is constant along x2."""
    u = ScalarField.from_function(plane_grid, lambda x1, x2: x1 + x2**2)
    projected = cylindrical_projection(u, 1)
    x, w = plane_grid.axis_nodes[1], plane_grid.axis_weights[1]
    expected = plane_grid.axis_nodes[0] * w.sum() + np.sum(w * x**2)
    assert projected.grid.dimension == 1
    assert np.allclose(projected.values, expected, atol=1e-12)
    assert projected.norm() <= u.norm() + 1e-12

    lifted = lift(projected, plane_grid)
    assert np.allclose(lifted.values, projected.values[:, None])


@pytest.mark.unit_test
@pytest.mark.parametrize(
    "grid, k",
    [(uniform(2, 33), 1), (hermite(2, 16), 1), (uniform(3, 9), 1), (uniform(3, 9), 2)],
)
def test_cylindrical_projection_is_a_contraction(grid, k):
    """Test |E_k u| <= |u| in the weighted l2 norm for random fields."""
    rng = np.random.default_rng(k)
    for _ in range(20):
        u = ScalarField(grid, rng.normal(size=grid.shape) + grid.coords[-1] ** 2)
        assert cylindrical_projection(u, k).norm() <= u.norm() + 1e-12


@pytest.mark.unit_test
def test_projection_and_lift_refuse_bad_dimensions(plane_grid, line_grid):
    """Test out of range projections and lifts across unrelated grids are refused."""
    u = ScalarField.constant(plane_grid, 1.0)
    with pytest.raises(GridError):
        cylindrical_projection(u, 2)
    with pytest.raises(GridError):
        cylindrical_projection(u, 0)
    with pytest.raises(FieldError):
        lift(ScalarField.constant(line_grid, 1.0), plane_grid)


@pytest.mark.unit_test
def test_interior_mask():
    """Test the mask drops the end layers and the nodes outside the radius."""
    grid = uniform(1, 5)
    assert interior_mask(grid).tolist() == [False, True, True, True, False]
    assert interior_mask(grid, radius=2.0).tolist() == [False, False, True, False, False]
    assert interior_mask(grid, margin=0).all()


@pytest.mark.unit_test
def test_interpolate_is_clamped(line_grid):
    """Test linear fields are interpolated exactly inside the hull and clamped outside."""
    u = ScalarField.from_function(line_grid, lambda x: 3.0 * x + 1.0)
    values = interpolate(u, np.array([[0.1], [-100.0], [100.0]]))
    assert np.allclose(values, [1.3, -17.0, 19.0], atol=1e-12)


@pytest.mark.unit_test
def test_resample_to_uniform(hermite_line_grid, line_grid):
    """Test a Gauss-Hermite field is carried over to a uniform grid and uniform fields are left alone."""
    u = ScalarField.from_function(hermite_line_grid, lambda x: 2.0 * x)
    resampled = resample_to_uniform(u, nodes_per_axis=65)
    assert resampled.grid.is_uniform
    assert resampled.grid.nodes_per_axis == 65
    assert np.allclose(resampled.values, 2.0 * resampled.grid.coords[0], atol=1e-10)

    v = ScalarField.constant(line_grid, 1.0)
    assert resample_to_uniform(v) is v
