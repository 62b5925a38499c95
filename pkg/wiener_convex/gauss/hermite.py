"""Probabilists' Hermite polynomials on Gaussian grids."""
from typing import Final, Sequence

import numpy as np

from wiener_convex.exceptions import HermiteDegreeError
from wiener_convex.gauss.grid import GaussianGrid, ScalarField

MAX_HERMITE_DEGREE: Final[int] = 150
"""The largest degree :func:`hermite_eval` accepts."""


def _check_degree(k: int) -> None:
    if not isinstance(k, (int, np.integer)) or k < 0 or k > MAX_HERMITE_DEGREE:
        raise HermiteDegreeError(
            f"Hermite degree must be an integer in [0, {MAX_HERMITE_DEGREE}], got {k}."
        )


def hermite_values(k: int, x: np.ndarray) -> np.ndarray:
    """
    Evaluate H_k by the three term recurrence ``H_{k+1} = x H_k - k H_{k-1}``.

    :param k: The degree.
    :param x: The points.
    :return: An array shaped like ``x``.
    """
    _check_degree(k)
    x = np.asarray(x, dtype=float)
    previous, current = np.zeros_like(x), np.ones_like(x)
    for j in range(k):
        previous, current = current, x * current - j * previous
    return current


def hermite_eval(k: int, grid: GaussianGrid, axis: int = 0) -> ScalarField:
    """
    The field H_k(x_axis) on the grid nodes.

    :param k: The degree, at most :data:`MAX_HERMITE_DEGREE`.
    :param grid: The grid.
    :param axis: The coordinate the polynomial is taken of.
    :return: A :class:`ScalarField`.
    :raise HermiteDegreeError: When ``k`` is negative or too large.
    """
    return ScalarField(grid, hermite_values(k, grid.coords[axis]))


def hermite_product(multi_index: Sequence[int], grid: GaussianGrid) -> ScalarField:
    """The tensor product field ``prod_j H_{k_j}(x_j)`` for a multi-index of length ``m``."""
    if len(multi_index) != grid.dimension:
        raise HermiteDegreeError(
            f"A multi-index of length {len(multi_index)} does not fit a {grid.dimension}-dimensional grid."
        )
    values = np.ones(grid.shape)
    for axis, k in enumerate(multi_index):
        values = values * hermite_values(int(k), grid.coords[axis])
    return ScalarField(grid, values)


def normalized_hermite_matrix(x: np.ndarray, max_degree: int) -> np.ndarray:
    """
    The orthonormal Hermite functions ``He_k / sqrt(k!)`` for ``k = 0..max_degree`` at the points ``x``.

    Uses ``psi_{k+1} = (x psi_k - sqrt(k) psi_{k-1}) / sqrt(k + 1)``, which stays bounded where the
    unnormalised recurrence overflows.

    :return: An array of shape ``(max_degree + 1, len(x))``.
    """
    x = np.asarray(x, dtype=float)
    psi = np.zeros((max_degree + 1, x.size))
    psi[0] = 1.0
    if max_degree >= 1:
        psi[1] = x
    for k in range(1, max_degree):
        psi[k + 1] = (x * psi[k] - np.sqrt(k) * psi[k - 1]) / np.sqrt(k + 1)
    return psi
