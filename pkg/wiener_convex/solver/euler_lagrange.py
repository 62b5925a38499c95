"""The Euler-Lagrange residual of the discrete problem for smooth integrands."""
import math
from typing import Optional

import numpy as np

from wiener_convex.exceptions import IntegrandError
from wiener_convex.gauss.calculus import divergence_values, gradient_values, interior_mask
from wiener_convex.gauss.grid import ScalarField, check_same_grid
from wiener_convex.integrands.core import ConvexIntegrand


def el_residual(
    F: ConvexIntegrand, u: ScalarField, g: ScalarField, data_weight: float = 1.0
) -> ScalarField:
    """
    ``-div_gamma(grad F(grad u)) + lambda (u - g)``, node by node.

    :raise IntegrandError: When ``F`` is not differentiable.
    :raise FieldError: When ``u`` and ``g`` live on different grids.
    """
    if not F.smooth:
        raise IntegrandError(f"The Euler-Lagrange residual needs a smooth integrand, got {F.kind}.")
    grid = check_same_grid(u, g)
    flux = F.grad(gradient_values(grid, u.values))
    return u.like(-divergence_values(grid, flux) + data_weight * (u.values - g.values))


def interior_norm(field: ScalarField, radius: Optional[float] = None, margin: int = 1) -> float:
    """The weighted l2 norm of ``field`` restricted to the interior nodes."""
    mask = interior_mask(field.grid, radius, margin)
    return math.sqrt(float(np.sum(field.grid.weights[mask] * field.values[mask] ** 2)))


def interior_max(field: ScalarField, radius: Optional[float] = None, margin: int = 1) -> float:
    """The largest absolute value of ``field`` on the interior nodes."""
    mask = interior_mask(field.grid, radius, margin)
    return float(np.max(np.abs(field.values[mask])))
