"""
Discrete Gaussian calculus.

Component ``j`` of the gradient is the forward difference along axis ``j``, averaged over the transverse corners
of the cell. The Gaussian divergence is defined as the exact negative adjoint of the gradient for the node and cell
weights of the grid, so the discrete integration by parts formula holds to round-off.
"""
from functools import lru_cache
from logging import getLogger
from typing import Final, Optional, Tuple, Union

import numpy as np
from scipy import sparse
from scipy.interpolate import RegularGridInterpolator
from scipy.linalg import expm
from scipy.sparse.linalg import expm_multiply

from wiener_convex.exceptions import FieldError, GridError
from wiener_convex.gauss.grid import (
    UNIFORM_TRUNCATED,
    GaussianGrid,
    GridSpec,
    ScalarField,
    VectorField,
    build_grid,
    check_same_grid,
    gaussian_flux,
    inner_product,
)

_LOGGER = getLogger(__name__)

_DENSE_LIMIT: Final[int] = 600
"""Longest axis whose Ornstein-Uhlenbeck transition matrix is formed and cached."""


def _along(h: np.ndarray, axis: int, ndim: int) -> np.ndarray:
    shape = [1] * ndim
    shape[axis] = -1
    return h.reshape(shape)


def _take(v: np.ndarray, axis: int, sl: slice) -> np.ndarray:
    index = [slice(None)] * v.ndim
    index[axis] = sl
    return v[tuple(index)]


def _pad_last(v: np.ndarray, axis: int) -> np.ndarray:
    return np.concatenate([v, _take(v, axis, slice(-1, None))], axis=axis)


def _core(v: np.ndarray) -> np.ndarray:
    return v[(slice(0, -1),) * v.ndim]


def gradient_values(grid: GaussianGrid, values: np.ndarray) -> np.ndarray:
    """:func:`gradient` on raw arrays: ``grid.shape`` in, ``grid.shape + (m,)`` out."""
    m = grid.dimension
    components = []
    for j in range(m):
        v = np.diff(values, axis=j) / _along(grid.spacings[j], j, m)
        for k in range(m):
            if k != j:
                v = 0.5 * (_take(v, k, slice(0, -1)) + _take(v, k, slice(1, None)))
        for k in range(m):
            v = _pad_last(v, k)
        components.append(v)
    return np.stack(components, axis=-1)


def gradient(u: ScalarField) -> VectorField:
    """
    The discrete gradient of ``u``.

    Forward differences on the (possibly non-uniform) nodes, averaged over the transverse corners of every cell.
    The last layer along each axis repeats the previous one, so affine fields have an exact constant gradient.

    :param u: A scalar field.
    :return: A :class:`VectorField`.
    """
    return VectorField(u.grid, gradient_values(u.grid, u.values))


def _gradient_transpose(grid: GaussianGrid, weighted: np.ndarray) -> np.ndarray:
    """Apply the plain transpose of :func:`gradient` to cell values already multiplied by the cell weights."""
    m = grid.dimension
    out = np.zeros(grid.shape)
    for j in range(m):
        t = _core(weighted[..., j])
        for k in range(m):
            if k != j:
                spread = np.zeros(t.shape[:k] + (t.shape[k] + 1,) + t.shape[k + 1 :])
                index_low = [slice(None)] * m
                index_high = [slice(None)] * m
                index_low[k] = slice(0, -1)
                index_high[k] = slice(1, None)
                spread[tuple(index_low)] += 0.5 * t
                spread[tuple(index_high)] += 0.5 * t
                t = spread
        s = t / _along(grid.spacings[j], j, m)
        index_low = [slice(None)] * m
        index_high = [slice(None)] * m
        index_low[j] = slice(0, -1)
        index_high[j] = slice(1, None)
        out[tuple(index_high)] += s
        out[tuple(index_low)] -= s
    return out


def divergence_gamma(phi: VectorField) -> ScalarField:
    """
    The Gaussian divergence of ``phi``, defined as the exact negative adjoint of :func:`gradient`.

    ``<gradient(u), phi> = -<u, divergence_gamma(phi)>`` holds for every ``u`` to round-off.

    :param phi: A vector field.
    :return: A :class:`ScalarField`.
    """
    return ScalarField(phi.grid, divergence_values(phi.grid, phi.values))


def divergence_values(grid: GaussianGrid, values: np.ndarray) -> np.ndarray:
    """:func:`divergence_gamma` on raw arrays."""
    weighted = grid.vector_weights[..., None] * values
    return -_gradient_transpose(grid, weighted) / grid.weights


def adjoint_residual(u: ScalarField, phi: VectorField) -> float:
    """
    The integration by parts residual ``|<grad u, phi> + <u, div_gamma phi>|``.

    :raise FieldError: When the fields live on different grids.
    """
    check_same_grid(u, phi)
    return abs(inner_product(gradient(u), phi) + inner_product(u, divergence_gamma(phi)))


def _axis_generator(positions: np.ndarray, weights: np.ndarray) -> sparse.csr_matrix:
    """
    The discrete Ornstein-Uhlenbeck generator of one axis, a birth-death chain on the nodes.

    The conductance of a face is the discrete Gaussian flux over the spacing, so in one dimension the generator
    is ``div_gamma grad``. It satisfies ``L 1 = 0``, ``L x = -x`` at every node and ``w_i L_ij = w_j L_ji``.
    """
    n = positions.size
    if n < 2:
        return sparse.csr_matrix((n, n))
    conductance = np.maximum(gaussian_flux(positions, weights), 0.0) / np.diff(positions)
    upper = conductance / weights[:-1]
    lower = conductance / weights[1:]
    diagonal = -(np.append(upper, 0.0) + np.insert(lower, 0, 0.0))
    return sparse.diags([lower, diagonal, upper], [-1, 0, 1], format="csr")


@lru_cache(maxsize=128)
def _dense_transition(positions_key: Tuple[float, ...], weights_key: Tuple[float, ...], t: float) -> np.ndarray:
    generator = _axis_generator(np.asarray(positions_key), np.asarray(weights_key)).toarray()
    # rows are probability vectors
    matrix = np.clip(expm(t * generator), 0.0, None)
    return matrix / matrix.sum(axis=1, keepdims=True)


def _axis_measure(grid: GaussianGrid, axis: int, cells: bool) -> Tuple[np.ndarray, np.ndarray]:
    """The positions and weights a field is integrated against along ``axis``."""
    nodes = grid.axis_nodes[axis]
    if not cells:
        return nodes, grid.axis_weights[axis]
    return 0.5 * (nodes[:-1] + nodes[1:]), grid.edge_weights[axis][:-1]


def _transition(positions: np.ndarray, weights: np.ndarray, t: float, block: np.ndarray) -> np.ndarray:
    if positions.size <= _DENSE_LIMIT:
        matrix = _dense_transition(tuple(positions.tolist()), tuple(weights.tolist()), t)
        return matrix @ block
    return expm_multiply(t * _axis_generator(positions, weights), block)


def ou_semigroup_values(grid: GaussianGrid, values: np.ndarray, t: float, cells: bool = False) -> np.ndarray:
    """:func:`ou_semigroup` on one raw array of shape ``grid.shape``; ``cells`` selects the cell weights."""
    for axis in range(grid.dimension):
        positions, weights = _axis_measure(grid, axis, cells)
        k = positions.size
        moved = np.moveaxis(np.asarray(values, dtype=float), axis, 0)
        shape = moved.shape
        block = moved.reshape(shape[0], -1)
        out = np.empty_like(block)
        out[:k] = _transition(positions, weights, t, block[:k])
        # the last layer of a cell-centred field has zero weight and follows its neighbour
        out[k:] = out[k - 1]
        values = np.moveaxis(out.reshape(shape), 0, axis)
    return values


def ou_semigroup(u: Union[ScalarField, VectorField], t: float) -> Union[ScalarField, VectorField]:
    """
    The Ornstein-Uhlenbeck semigroup ``T_t u(x) = int u(e^-t x + sqrt(1 - e^-2t) y) dgamma(y)``.

    The discrete semigroup is ``exp(t L)`` with ``L`` the sum over axes of the one-dimensional generators built
    from the grid weights, so ``T_s T_t = T_{s+t}`` and ``T_t x = e^-t x`` hold to round-off. ``L`` is a
    reversible Markov generator for the weights fields are integrated with: every output value is a convex
    combination of input values, and the weighted mass is conserved. Scalar fields use the node weights; vector
    fields are cell-centred and use the cell weights, componentwise. Axes of at most ``_DENSE_LIMIT`` nodes use a
    cached transition matrix, longer axes :func:`scipy.sparse.linalg.expm_multiply`.

    :param u: A scalar or vector field.
    :param t: The time, ``t >= 0``.
    :return: A field of the same kind.
    :raise GridError: When ``t`` is negative.
    """
    if not t >= 0.0:
        raise GridError(f"The Ornstein-Uhlenbeck time must be non negative, got {t}.")
    if t == 0.0:
        return u
    grid = u.grid
    t = float(t)
    if isinstance(u, ScalarField):
        return u.like(ou_semigroup_values(grid, u.values, t))
    components = [
        ou_semigroup_values(grid, u.values[..., j], t, cells=True)
        for j in range(grid.dimension)
    ]
    return u.like(np.stack(components, axis=-1))


def cylindrical_projection(u: ScalarField, k: int) -> ScalarField:
    """
    The conditional expectation of ``u`` onto the leading ``k`` coordinates.

    The trailing axes are summed against their quadrature weights (not renormalised), so the map is a
    contraction of the weighted l2 norm.

    :param u: A field on an ``m``-dimensional grid.
    :param k: The number of kept axes, ``1 <= k < m``.
    :return: A field on the leading ``k``-dimensional sub grid.
    :raise GridError: When ``k`` is out of range.
    """
    grid = u.grid
    if not 1 <= k < grid.dimension:
        raise GridError(f"Cannot project a {grid.dimension}-dimensional field onto {k} coordinates.")
    values = u.values
    for axis in range(grid.dimension - 1, k - 1, -1):
        values = np.tensordot(values, grid.axis_weights[axis], axes=([axis], [0]))
    return ScalarField(grid.sub_grid(k), values)


def lift(v: ScalarField, grid: GaussianGrid) -> ScalarField:
    """
    Extend a field of the leading coordinates to ``grid``, constant along the trailing axes.

    :raise FieldError: When ``v`` does not live on a leading sub grid of ``grid``.
    """
    k = v.grid.dimension
    if k > grid.dimension or grid.sub_grid(k).key != v.grid.key:
        raise FieldError(f"Field on {v.grid.key} is not a leading sub grid field of {grid.key}.")
    values = v.values.reshape(v.values.shape + (1,) * (grid.dimension - k))
    return ScalarField(grid, np.broadcast_to(values, grid.shape))


def interior_mask(grid: GaussianGrid, radius: Optional[float] = None, margin: int = 1) -> np.ndarray:
    """
    The nodes at least ``margin`` layers away from every end of the grid, and within ``|x_j| <= radius``.

    :return: A boolean array of shape ``grid.shape``.
    """
    mask = np.zeros(grid.shape, dtype=bool)
    mask[(slice(margin, grid.nodes_per_axis - margin),) * grid.dimension] = True
    if radius is not None:
        for c in grid.coords:
            mask &= np.abs(c) <= radius
    return mask


def interpolate(u: ScalarField, points: np.ndarray) -> np.ndarray:
    """
    Multilinear interpolation of ``u`` at arbitrary points, clamped to the grid hull.

    :param u: A scalar field.
    :param points: An array of shape ``(..., m)``.
    :return: The interpolated values, of shape ``points.shape[:-1]``.
    """
    grid = u.grid
    points = np.asarray(points, dtype=float)
    lower = np.array([x[0] for x in grid.axis_nodes])
    upper = np.array([x[-1] for x in grid.axis_nodes])
    interpolator = RegularGridInterpolator(grid.axis_nodes, u.values, method="linear")
    return interpolator(np.clip(points, lower, upper))


def resample_to_uniform(
    u: ScalarField, nodes_per_axis: Optional[int] = None, truncation_radius: float = 6.0
) -> ScalarField:
    """
    Interpolate ``u`` onto a ``uniform_truncated`` grid of the same dimension.

    Fields already on a uniform grid are returned unchanged when no node count is requested.

    :param u: A scalar field.
    :param nodes_per_axis: The node count of the target grid, by default that of ``u``'s grid.
    :param truncation_radius: The radius of the target grid.
    :return: A field on the uniform grid.
    """
    grid = u.grid
    if grid.is_uniform and nodes_per_axis is None:
        return u
    target = build_grid(
        GridSpec(
            dimension=grid.dimension,
            nodes_per_axis=nodes_per_axis or grid.nodes_per_axis,
            scheme=UNIFORM_TRUNCATED,
            truncation_radius=truncation_radius,
        )
    )
    _LOGGER.debug(f"Resampling field from {grid.key} to {target.key}")
    return ScalarField(target, interpolate(u, target.points).reshape(target.shape))
