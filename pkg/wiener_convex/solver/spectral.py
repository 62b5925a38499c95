"""
Hermite spectral solver for ``u + mu L u = g`` with the Ornstein-Uhlenbeck generator ``L = -Laplacian + x . grad``.

The Hermite polynomials diagonalise ``L``: ``L H_k = |k| H_k`` for a multi-index ``k``. On a Gauss-Hermite grid
with ``n`` nodes per axis the discrete transform is exact for polynomial data of degree below ``n``.
"""
import math
from logging import getLogger

import numpy as np

from wiener_convex.exceptions import GridError, SolverError
from wiener_convex.gauss.grid import GAUSS_HERMITE, ScalarField
from wiener_convex.gauss.hermite import normalized_hermite_matrix

_LOGGER = getLogger(__name__)


def hermite_coefficients(g: ScalarField) -> np.ndarray:
    """
    The coefficients of ``g`` in the orthonormal tensor Hermite basis, indexed by the multi-index.

    :raise GridError: When ``g`` does not live on a Gauss-Hermite grid.
    """
    grid = g.grid
    if grid.scheme != GAUSS_HERMITE:
        raise GridError(f"The Hermite transform needs a {GAUSS_HERMITE} grid, got {grid.scheme}.")
    coefficients = g.values
    for axis in range(grid.dimension):
        psi = normalized_hermite_matrix(grid.axis_nodes[axis], grid.nodes_per_axis - 1)
        basis = psi * grid.axis_weights[axis][None, :]
        coefficients = np.moveaxis(np.tensordot(basis, coefficients, axes=([1], [axis])), 0, axis)
    return coefficients


def hermite_synthesis(coefficients: np.ndarray, grid) -> ScalarField:
    """The field with the given orthonormal Hermite coefficients."""
    values = coefficients
    for axis in range(grid.dimension):
        psi = normalized_hermite_matrix(grid.axis_nodes[axis], grid.nodes_per_axis - 1)
        values = np.moveaxis(np.tensordot(psi.T, values, axes=([1], [axis])), 0, axis)
    return ScalarField(grid, values)


def spectral_solve_quadratic(g: ScalarField, mu: float = 1.0) -> ScalarField:
    """
    Solve ``u + mu L u = g``, the optimality condition of the quadratic integrand ``mu |h|^2 / 2``.

    :param g: Data on a 1D or 2D Gauss-Hermite grid.
    :param mu: The quadratic parameter, ``mu > 0``.
    :return: The solution on the same grid.
    :raise GridError: When the grid is not Gauss-Hermite or has dimension above 2.
    :raise SolverError: When ``mu`` is not positive.
    """
    if not mu > 0.0 or not math.isfinite(mu):
        raise SolverError(f"The spectral solve needs a positive mu, got {mu}.")
    grid = g.grid
    if grid.dimension > 2:
        raise GridError("The spectral solve supports grids of dimension 1 or 2.")
    coefficients = hermite_coefficients(g)
    degrees = np.arange(grid.nodes_per_axis)
    total = np.zeros(coefficients.shape)
    for axis in range(grid.dimension):
        shape = [1] * grid.dimension
        shape[axis] = -1
        total = total + degrees.reshape(shape)
    _LOGGER.debug(f"Spectral solve with mu={mu} on {grid.key}")
    return hermite_synthesis(coefficients / (1.0 + mu * total), grid)
