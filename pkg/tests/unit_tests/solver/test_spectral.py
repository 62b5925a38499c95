import math

import numpy as np
import pytest

from tests.conftest import hermite
from wiener_convex.exceptions import GridError, SolverError
from wiener_convex.gauss.grid import ScalarField
from wiener_convex.gauss.hermite import hermite_eval, hermite_product
from wiener_convex.solver.spectral import hermite_coefficients, hermite_synthesis, spectral_solve_quadratic


@pytest.mark.unit_test
@pytest.mark.parametrize("k", [0, 1, 2, 5])
@pytest.mark.parametrize("mu", [0.5, 1.0, 3.0])
def test_hermite_data_on_a_line(hermite_line_grid, k, mu):
    """Test u + mu L u = H_k is solved by H_k / (1 + mu k)."""
    g = hermite_eval(k, hermite_line_grid)
    u = spectral_solve_quadratic(g, mu)
    assert np.allclose(u.values, g.values / (1.0 + mu * k), rtol=1e-8, atol=1e-8)


@pytest.mark.unit_test
def test_hermite_data_on_a_plane(hermite_plane_grid):
    """Test the eigenvalue of H_1(x1) H_2(x2) is 3."""
    g = hermite_product((1, 2), hermite_plane_grid)
    u = spectral_solve_quadratic(g, 1.0)
    assert np.allclose(u.values, g.values / 4.0, atol=1e-8)


@pytest.mark.unit_test
def test_coefficients_of_a_polynomial(hermite_line_grid):
    """Test H_2 has the single orthonormal coefficient sqrt(2) and is synthesised back."""
    g = hermite_eval(2, hermite_line_grid)
    coefficients = hermite_coefficients(g)
    expected = np.zeros(hermite_line_grid.nodes_per_axis)
    expected[2] = math.sqrt(2.0)
    assert np.allclose(coefficients, expected, atol=1e-10)
    assert np.allclose(hermite_synthesis(coefficients, hermite_line_grid).values, g.values, atol=1e-8)


@pytest.mark.unit_test
def test_spectral_refusals(line_grid, hermite_line_grid):
    """Test uniform grids, grids of dimension 3 and non-positive mu are refused."""
    with pytest.raises(GridError):
        spectral_solve_quadratic(ScalarField.constant(line_grid, 1.0))
    with pytest.raises(GridError):
        spectral_solve_quadratic(ScalarField.constant(hermite(3, 4), 1.0))
    with pytest.raises(SolverError):
        spectral_solve_quadratic(hermite_eval(1, hermite_line_grid), 0.0)
