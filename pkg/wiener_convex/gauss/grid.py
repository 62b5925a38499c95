"""
Tensor grids discretising the standard Gaussian measure on R^m, and the fields that live on them.

Scalar fields hold one value per node. Vector fields are cell centred: the value stored at node index ``i``
describes the cell spanned by ``i`` and ``i + 1`` along every axis, and is weighted by the product of the
per-axis edge weights. The last layer along every axis therefore carries zero vector weight.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from logging import getLogger
from typing import Callable, Final, Optional, Tuple, Union

import numpy as np
from scipy.special import erf

from wiener_convex.config.core import ConfigGroup, ConfigGroupValidation
from wiener_convex.config.item_types.float_item import FloatItem, FloatProperties
from wiener_convex.config.item_types.int_item import IntItem, IntProperties
from wiener_convex.config.item_types.str_item import StrItem, StrProperties
from wiener_convex.exceptions import (
    ConfigGroupValidationError,
    FieldError,
    GridError,
    ResourceBudgetError,
)

_LOGGER = getLogger(__name__)

GAUSS_HERMITE: Final[str] = "gauss_hermite"
UNIFORM_TRUNCATED: Final[str] = "uniform_truncated"
SCHEMES: Final[Tuple[str, ...]] = (GAUSS_HERMITE, UNIFORM_TRUNCATED)

DEFAULT_MAX_NODES: Final[int] = 2**21
"""The default node budget ``n**m`` of a grid."""

QUADRATURE_TOLERANCE: Final[float] = 1e-8
"""Maximum missing mass of a Gauss-Hermite grid."""

_INV_SQRT_2PI: Final[float] = 1.0 / math.sqrt(2.0 * math.pi)


class GridSpec(ConfigGroup):
    """The specification of a tensor grid for the Gaussian measure."""

    def __init__(
        self,
        doc: Optional[str] = None,
        dimension: Optional[int] = 1,
        nodes_per_axis: Optional[int] = 129,
        scheme: Optional[str] = GAUSS_HERMITE,
        truncation_radius: Optional[Union[int, float]] = 6.0,
        max_nodes: Optional[int] = DEFAULT_MAX_NODES,
    ):
        """
        The `GridSpec` constructor.

        :param doc: An optional descriptor.
        :param dimension: The dimension m of the grid, 1 to 3.
        :param nodes_per_axis: The number n of nodes on every axis.
        :param scheme: Either ``gauss_hermite`` or ``uniform_truncated``.
        :param truncation_radius: The half width R of a ``uniform_truncated`` grid.
        :param max_nodes: The node budget; grids with ``n**m`` above it are refused.
        """
        self.dimension: IntItem = IntItem(
            value=dimension,
            doc="The dimension m of the grid.",
            properties=IntProperties(
                allow_null=False,
                default=1,
                min_val=1,
                max_val=3,
                inclusive_min=True,
                inclusive_max=True,
            ),
        )
        self.nodes_per_axis: IntItem = IntItem(
            value=nodes_per_axis,
            doc="The number of nodes on every axis.",
            properties=IntProperties(
                allow_null=False, default=129, min_val=2, inclusive_min=True
            ),
        )
        self.scheme: StrItem = StrItem(
            value=scheme,
            doc="The quadrature scheme of every axis.",
            properties=StrProperties(
                allow_null=False, default=GAUSS_HERMITE, options=list(SCHEMES)
            ),
        )
        self.truncation_radius: FloatItem = FloatItem(
            value=truncation_radius,
            doc="The half width R of the box [-R, R]^m of a uniform_truncated grid.",
            properties=FloatProperties(
                allow_null=False, default=6.0, min_val=0, inclusive_min=False
            ),
        )
        self.max_nodes: IntItem = IntItem(
            value=max_nodes,
            doc="The maximum number of grid nodes n**m.",
            properties=IntProperties(
                allow_null=False,
                default=DEFAULT_MAX_NODES,
                min_val=1,
                inclusive_min=True,
            ),
        )
        super().__init__(doc)

    def validate(self) -> ConfigGroupValidation:
        """Extend the parent validation with the Gauss-Hermite node count limit."""
        super().validate()
        try:
            if (
                self.scheme.value == GAUSS_HERMITE
                and isinstance(self.nodes_per_axis.value, int)
                and self.nodes_per_axis.value > 300
            ):
                msg = (
                    f"A gauss_hermite grid supports at most 300 nodes per axis, got {self.nodes_per_axis.value}; "
                    "the outer weights underflow beyond that."
                )
                raise ConfigGroupValidationError(msg)
        except ConfigGroupValidationError as e:
            self.validation.add_validation(msg, e)
        return self.validation

    @property
    def node_count(self) -> int:
        """The number of grid nodes ``n**m``."""
        return self.nodes_per_axis.value**self.dimension.value


def _gauss_hermite_axis(n: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.hermite_e.hermegauss(n)
    weights = weights * _INV_SQRT_2PI
    # symmetrise away the round-off of the eigen solver
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    return nodes, weights


def _uniform_axis(n: int, radius: float) -> Tuple[np.ndarray, np.ndarray]:
    nodes = np.linspace(-radius, radius, n)
    nodes = 0.5 * (nodes - nodes[::-1])
    h = 2.0 * radius / (n - 1)
    trapezoid = np.full(n, h)
    trapezoid[[0, -1]] = 0.5 * h
    weights = trapezoid * _INV_SQRT_2PI * np.exp(-0.5 * nodes**2)
    # the rule is rescaled to the exact mass of [-R, R]
    weights *= erf(radius / math.sqrt(2.0)) / weights.sum()
    return nodes, weights


def gaussian_flux(nodes: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """
    Discrete Gaussian flux through the face between consecutive nodes.

    ``rho[i] = -sum_{k <= i} w_k x_k``, summed from the nearer tail so the value stays accurate far out.
    """
    wx = weights * nodes
    left = -np.cumsum(wx)[:-1]
    right = np.cumsum(wx[::-1])[::-1][1:]
    midpoints = 0.5 * (nodes[:-1] + nodes[1:])
    return np.where(midpoints <= 0.0, left, right)


@dataclass(frozen=True, eq=False)
class GaussianGrid:
    """
    A tensor product discretisation of the standard Gaussian measure.

    Build instances with :func:`build_grid`.
    """

    scheme: str
    dimension: int
    nodes_per_axis: int
    truncation_radius: Optional[float]
    axis_nodes: Tuple[np.ndarray, ...] = field(repr=False)
    axis_weights: Tuple[np.ndarray, ...] = field(repr=False)

    @property
    def key(self) -> Tuple:
        """The identity of the grid; fields are compatible when their grids share a key."""
        return (self.scheme, self.dimension, self.nodes_per_axis, self.truncation_radius)

    @property
    def shape(self) -> Tuple[int, ...]:
        """The array shape of a scalar field."""
        return (self.nodes_per_axis,) * self.dimension

    @property
    def size(self) -> int:
        """The number of nodes."""
        return self.nodes_per_axis**self.dimension

    @property
    def is_uniform(self) -> bool:
        """True for ``uniform_truncated`` grids."""
        return self.scheme == UNIFORM_TRUNCATED

    @cached_property
    def weights(self) -> np.ndarray:
        """The node weights, of shape :attr:`shape`."""
        return _outer(self.axis_weights)

    @cached_property
    def coords(self) -> Tuple[np.ndarray, ...]:
        """The node coordinates as ``m`` arrays of shape :attr:`shape`."""
        return tuple(np.meshgrid(*self.axis_nodes, indexing="ij"))

    @cached_property
    def points(self) -> np.ndarray:
        """The node coordinates as an array of shape ``(size, m)`` in C order."""
        return np.stack([c.ravel() for c in self.coords], axis=-1)

    @cached_property
    def spacings(self) -> Tuple[np.ndarray, ...]:
        """The per-axis node spacings, each of length ``n - 1``."""
        return tuple(np.diff(x) for x in self.axis_nodes)

    @cached_property
    def face_flux(self) -> Tuple[np.ndarray, ...]:
        """The per-axis discrete Gaussian flux through the faces between nodes, each of length ``n - 1``."""
        return tuple(
            gaussian_flux(x, w) for x, w in zip(self.axis_nodes, self.axis_weights)
        )

    @cached_property
    def edge_weights(self) -> Tuple[np.ndarray, ...]:
        """The per-axis cell weights ``flux * spacing``, with a zero appended for the last node."""
        return tuple(
            np.append(rho * h, 0.0) for rho, h in zip(self.face_flux, self.spacings)
        )

    @cached_property
    def vector_weights(self) -> np.ndarray:
        """The cell weights of vector fields, of shape :attr:`shape`."""
        return _outer(self.edge_weights)

    @property
    def max_spacing(self) -> float:
        """The largest node spacing among nodes of non negligible weight."""
        spacing = 0.0
        for x, w in zip(self.axis_nodes, self.axis_weights):
            heavy = np.flatnonzero(w > 1e-12)
            if heavy.size > 1:
                spacing = max(spacing, float(np.max(np.diff(x[heavy[0] : heavy[-1] + 1]))))
        return spacing

    def sub_grid(self, k: int) -> GaussianGrid:
        """
        The grid made of the leading ``k`` axes.

        :param k: The number of leading axes kept.
        :return: A :class:`GaussianGrid` of dimension ``k``.
        """
        if not 1 <= k <= self.dimension:
            raise GridError(f"Cannot take {k} leading axes of a {self.dimension}-dimensional grid.")
        return GaussianGrid(
            scheme=self.scheme,
            dimension=k,
            nodes_per_axis=self.nodes_per_axis,
            truncation_radius=self.truncation_radius,
            axis_nodes=self.axis_nodes[:k],
            axis_weights=self.axis_weights[:k],
        )

    def to_spec(self) -> GridSpec:
        """Rebuild the :class:`GridSpec` of this grid."""
        return GridSpec(
            dimension=self.dimension,
            nodes_per_axis=self.nodes_per_axis,
            scheme=self.scheme,
            truncation_radius=self.truncation_radius if self.is_uniform else 6.0,
        )


def _outer(vectors: Tuple[np.ndarray, ...]) -> np.ndarray:
    out = vectors[0]
    for v in vectors[1:]:
        out = np.multiply.outer(out, v)
    return np.array(out)


def build_grid(spec: GridSpec) -> GaussianGrid:
    """
    Build the tensor grid described by ``spec``.

    :param spec: The grid specification.
    :return: A :class:`GaussianGrid`.
    :raise GridError: When the specification fails validation.
    :raise ResourceBudgetError: When ``n**m`` exceeds ``spec.max_nodes``.
    """
    validation = spec.validate()
    if not validation.passed:
        raise GridError("; ".join(validation.all_fail_reasons()))
    m = spec.dimension.value
    n = spec.nodes_per_axis.value
    if spec.node_count > spec.max_nodes.value:
        msg = f"A grid of {n}**{m} = {spec.node_count} nodes exceeds the budget of {spec.max_nodes.value} nodes."
        _LOGGER.error(msg)
        raise ResourceBudgetError(msg)

    scheme = spec.scheme.value
    if scheme == GAUSS_HERMITE:
        nodes, weights = _gauss_hermite_axis(n)
        radius = None
    else:
        radius = float(spec.truncation_radius.value)
        nodes, weights = _uniform_axis(n, radius)
    if np.any(weights <= 0.0) or np.any(np.diff(nodes) <= 0.0):
        raise GridError(f"The {scheme} rule with {n} nodes has non positive weights or unsorted nodes.")

    grid = GaussianGrid(
        scheme=scheme,
        dimension=m,
        nodes_per_axis=n,
        truncation_radius=radius,
        axis_nodes=(nodes,) * m,
        axis_weights=(weights,) * m,
    )
    _LOGGER.debug(f"Built {scheme} grid with {n}**{m} nodes, mass {grid.weights.sum():.15f}")
    return grid


def _frozen(values: np.ndarray) -> np.ndarray:
    values = np.array(values, dtype=float)
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class ScalarField:
    """A real value per grid node."""

    grid: GaussianGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.grid.shape:
            if values.size == self.grid.size:
                values = values.reshape(self.grid.shape)
            else:
                raise FieldError(
                    f"A scalar field on a grid of shape {self.grid.shape} cannot hold values of shape {values.shape}."
                )
        if not np.all(np.isfinite(values)):
            raise FieldError("Scalar field values must be finite.")
        object.__setattr__(self, "values", _frozen(values))

    @classmethod
    def from_function(
        cls, grid: GaussianGrid, func: Callable[..., np.ndarray]
    ) -> ScalarField:
        """
        Sample ``func(x1, ..., xm)`` on the grid nodes.

        :param grid: The grid.
        :param func: A vectorised function of the ``m`` coordinate arrays.
        :return: A :class:`ScalarField`.
        """
        return cls(grid, np.broadcast_to(func(*grid.coords), grid.shape))

    @classmethod
    def constant(cls, grid: GaussianGrid, value: float) -> ScalarField:
        """The constant field ``value``."""
        return cls(grid, np.full(grid.shape, float(value)))

    def like(self, values: np.ndarray) -> ScalarField:
        """A field on the same grid with new values."""
        return ScalarField(self.grid, values)

    def norm(self) -> float:
        """The weighted l2 norm."""
        return math.sqrt(inner_product(self, self))


@dataclass(frozen=True, eq=False)
class VectorField:
    """``m`` real components per grid cell."""

    grid: GaussianGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        expected = self.grid.shape + (self.grid.dimension,)
        if values.shape != expected:
            if values.size == self.grid.size * self.grid.dimension:
                values = values.reshape(expected)
            else:
                raise FieldError(
                    f"A vector field on a grid of shape {self.grid.shape} needs values of shape {expected}, "
                    f"got {values.shape}."
                )
        if not np.all(np.isfinite(values)):
            raise FieldError("Vector field values must be finite.")
        object.__setattr__(self, "values", _frozen(values))

    @classmethod
    def constant(cls, grid: GaussianGrid, vector) -> VectorField:
        """The constant field ``vector``."""
        vector = np.broadcast_to(np.asarray(vector, dtype=float), (grid.dimension,))
        return cls(grid, np.broadcast_to(vector, grid.shape + (grid.dimension,)))

    @classmethod
    def zeros(cls, grid: GaussianGrid) -> VectorField:
        """The zero field."""
        return cls(grid, np.zeros(grid.shape + (grid.dimension,)))

    def like(self, values: np.ndarray) -> VectorField:
        """A field on the same grid with new values."""
        return VectorField(self.grid, values)

    def norm(self) -> float:
        """The weighted l2 norm."""
        return math.sqrt(inner_product(self, self))


Field = Union[ScalarField, VectorField]


def check_same_grid(*fields: Field) -> GaussianGrid:
    """
    Check that all fields share one grid.

    :return: The shared grid.
    :raise FieldError: When two fields live on different grids.
    """
    grid = fields[0].grid
    for f in fields[1:]:
        if f.grid.key != grid.key:
            raise FieldError(f"Fields live on different grids: {grid.key} and {f.grid.key}.")
    return grid


def integrate(f: ScalarField, grid: Optional[GaussianGrid] = None) -> float:
    """
    The quadrature of the Gaussian integral of ``f``.

    :param f: A scalar field.
    :param grid: An optional grid ``f`` is expected to live on.
    :return: ``sum_i w_i f_i``.
    :raise FieldError: When ``f`` is not a scalar field of ``grid``.
    """
    if not isinstance(f, ScalarField):
        raise FieldError(f"Only scalar fields can be integrated, got {type(f).__name__}.")
    if grid is not None and grid.key != f.grid.key:
        raise FieldError(f"Field lives on grid {f.grid.key}, expected {grid.key}.")
    return float(np.sum(f.grid.weights * f.values))


def inner_product(a: Field, b: Field) -> float:
    """
    The weighted l2 pairing of two fields of the same kind.

    Scalar fields are weighted by the node weights, vector fields by the cell weights with a componentwise
    dot product.

    :raise FieldError: On a kind or grid mismatch.
    """
    if type(a) is not type(b):
        raise FieldError(f"Cannot pair a {type(a).__name__} with a {type(b).__name__}.")
    check_same_grid(a, b)
    if isinstance(a, ScalarField):
        return float(np.sum(a.grid.weights * a.values * b.values))
    return float(np.sum(a.grid.vector_weights * np.sum(a.values * b.values, axis=-1)))
