import numpy as np
import pytest

from wiener_convex.exceptions import IntegrandError
from wiener_convex.gauss.grid import ScalarField
from wiener_convex.integrands.kinds import euclidean_norm, quadratic
from wiener_convex.integrands.regularized import smooth_approx
from wiener_convex.integrands.subsolution import make_subsolution


@pytest.mark.unit_test
def test_quadratic_subsolution(plane_grid):
    """Test the closed form pair for mu |h|^2 / 2, whose conjugate term is eps |x|^2 / (2 mu)."""
    eps, mu = 0.1, 2.0
    g = ScalarField.from_function(plane_grid, lambda x1, x2: x1 - 20.0)
    g_eps, u_eps = make_subsolution(quadratic(mu), g, eps)
    r2 = plane_grid.coords[0] ** 2 + plane_grid.coords[1] ** 2
    conjugate_term = eps * r2 / (2.0 * mu)
    assert np.allclose(u_eps.values, conjugate_term + 2 * eps - 1.0 / eps)
    assert np.allclose(g_eps.values, np.maximum(g.values, -10.0) + eps * r2 + conjugate_term)
    # the data are clipped at -1 / eps
    assert g_eps.values.min() >= -10.0


@pytest.mark.unit_test
def test_subsolution_of_a_smoothed_norm(line_grid):
    """Test the pair is finite for a smooth approximation of the norm."""
    g = ScalarField.from_function(line_grid, np.abs)
    g_eps, u_eps = make_subsolution(smooth_approx(euclidean_norm(), 4), g, 0.5)
    assert g_eps.grid.key == line_grid.key
    assert np.all(np.isfinite(u_eps.values))
    assert np.all(g_eps.values >= g.values)


@pytest.mark.unit_test
def test_subsolution_refusals(line_grid):
    """Test non-positive eps and non smooth integrands are refused."""
    g = ScalarField.constant(line_grid, 0.0)
    with pytest.raises(IntegrandError):
        make_subsolution(quadratic(), g, 0.0)
    with pytest.raises(IntegrandError):
        make_subsolution(euclidean_norm(), g, 0.1)
