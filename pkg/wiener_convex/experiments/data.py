"""Built-in data fields ``g`` and the ``data`` section of an experiment config."""
from logging import getLogger
from pathlib import Path
from typing import Final, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from wiener_convex.config.core import ConfigGroup, ConfigGroupValidation
from wiener_convex.config.item_types.float_item import FloatItem, FloatProperties
from wiener_convex.config.item_types.int_item import IntItem, IntProperties
from wiener_convex.config.item_types.str_item import StrItem, StrProperties
from wiener_convex.exceptions import ConfigGroupValidationError, FieldError
from wiener_convex.gauss.grid import GaussianGrid, ScalarField
from wiener_convex.gauss.hermite import hermite_eval

_LOGGER = getLogger(__name__)

HERMITE: Final[str] = "hermite"
AFFINE: Final[str] = "affine"
QUADRATIC_SHIFT: Final[str] = "quadratic_shift"
CONSTANT: Final[str] = "constant"
TABULATED: Final[str] = "tabulated"
DATA_NAMES: Final[List[str]] = [HERMITE, AFFINE, QUADRATIC_SHIFT, CONSTANT, TABULATED]


class DataSpec(ConfigGroup):
    """The ``data`` section: a named built-in field ``g``."""

    def __init__(
        self,
        doc: Optional[str] = None,
        name: Optional[str] = HERMITE,
        degree: Optional[int] = 1,
        axis: Optional[int] = 0,
        coefficient: Optional[Union[int, float]] = 1.0,
        shift: Optional[Union[int, float]] = 0.0,
        offset: Optional[Union[int, float]] = -1.0,
        path: Optional[str] = None,
    ):
        """
        The `DataSpec` constructor.

        :param doc: An optional descriptor.
        :param name: One of ``hermite``, ``affine``, ``quadratic_shift``, ``constant`` or ``tabulated``.
        :param degree: The degree of ``hermite``.
        :param axis: The coordinate ``hermite`` and ``affine`` act on.
        :param coefficient: The slope ``c`` of ``affine``, the factor of ``quadratic_shift``.
        :param shift: The centre shift of ``quadratic_shift`` along the first axis.
        :param offset: The additive constant of ``quadratic_shift``, the value of ``constant``.
        :param path: The CSV file of ``tabulated`` data.
        """
        self.name: StrItem = StrItem(
            value=name,
            doc="The built-in data field.",
            properties=StrProperties(allow_null=False, default=HERMITE, options=DATA_NAMES),
        )
        self.degree: IntItem = IntItem(
            value=degree,
            doc="The Hermite degree.",
            properties=IntProperties(allow_null=False, default=1, min_val=0, inclusive_min=True),
        )
        self.axis: IntItem = IntItem(
            value=axis,
            doc="The coordinate the field depends on.",
            properties=IntProperties(allow_null=False, default=0, min_val=0, inclusive_min=True),
        )
        self.coefficient: FloatItem = FloatItem(
            value=coefficient,
            doc="The slope of affine data, the factor of quadratic_shift data.",
            properties=FloatProperties(allow_null=False, default=1.0),
        )
        self.shift: FloatItem = FloatItem(
            value=shift,
            doc="The centre shift of quadratic_shift data.",
            properties=FloatProperties(allow_null=False, default=0.0),
        )
        self.offset: FloatItem = FloatItem(
            value=offset,
            doc="The additive constant of quadratic_shift data, the value of constant data.",
            properties=FloatProperties(allow_null=False, default=-1.0),
        )
        self.path: StrItem = StrItem(
            value=path,
            doc="The CSV file of tabulated data.",
            properties=StrProperties(allow_null=True),
        )
        super().__init__(doc)

    def validate(self) -> ConfigGroupValidation:
        """Extend the parent validation: tabulated data need a path."""
        super().validate()
        try:
            if self.name.value == TABULATED and not self.path.value:
                msg = "Tabulated data require 'path' to be set."
                raise ConfigGroupValidationError(msg)
        except ConfigGroupValidationError as e:
            self.validation.add_validation(msg, e)
        return self.validation


def hermite(k: int, grid: GaussianGrid, axis: int = 0) -> ScalarField:
    """The probabilists' Hermite polynomial ``He_k(x_axis)``."""
    return hermite_eval(k, grid, axis)


def affine(c: float, grid: GaussianGrid, axis: int = 0) -> ScalarField:
    """``c x_axis``."""
    return ScalarField(grid, c * grid.coords[axis])


def quadratic_shift(grid: GaussianGrid, coefficient: float = 1.0, shift: float = 0.0, offset: float = -1.0) -> ScalarField:
    """``coefficient |x - shift e_1|^2 + offset``."""
    values = sum(x**2 for x in grid.coords[1:]) + (grid.coords[0] - shift) ** 2
    return ScalarField(grid, coefficient * values + offset)


def read_tabulated(path: Union[str, Path], grid: GaussianGrid) -> ScalarField:
    """
    Read data from a CSV with the columns ``x1 .. xm`` and ``g``, one row per node in C order.

    :raise FieldError: When the rows do not match the grid nodes.
    """
    frame = pd.read_csv(path)
    columns = [f"x{j + 1}" for j in range(grid.dimension)]
    missing = [c for c in columns + ["g"] if c not in frame.columns]
    if missing:
        raise FieldError(f"Tabulated data {path} lack the columns {', '.join(missing)}.")
    if len(frame) != grid.size:
        raise FieldError(f"Tabulated data {path} have {len(frame)} rows for a grid of {grid.size} nodes.")
    if not np.allclose(frame[columns].to_numpy(), grid.points, rtol=1e-12, atol=1e-12):
        raise FieldError(f"Tabulated data {path} are not sampled on the grid nodes.")
    return ScalarField(grid, frame["g"].to_numpy())


def build_data(spec: DataSpec, grid: GaussianGrid, base_path: Optional[Path] = None) -> ScalarField:
    """
    Build the field described by a :class:`DataSpec` on ``grid``.

    :param spec: The data section.
    :param grid: The grid.
    :param base_path: The directory relative tabulated paths are resolved against.
    :raise FieldError: When the spec is invalid or does not fit the grid.
    """
    validation = spec.validate()
    if not validation.passed:
        raise FieldError("; ".join(validation.all_fail_reasons()))
    name = spec.name.value
    axis = spec.axis.value
    if name in (HERMITE, AFFINE) and axis >= grid.dimension:
        raise FieldError(f"Axis {axis} does not exist on a {grid.dimension}-dimensional grid.")
    if name == HERMITE:
        return hermite(spec.degree.value, grid, axis)
    if name == AFFINE:
        return affine(float(spec.coefficient.value), grid, axis)
    if name == QUADRATIC_SHIFT:
        return quadratic_shift(
            grid, float(spec.coefficient.value), float(spec.shift.value), float(spec.offset.value)
        )
    if name == CONSTANT:
        return ScalarField.constant(grid, float(spec.offset.value))
    path = Path(spec.path.value)
    if not path.is_absolute() and base_path is not None:
        path = base_path / path
    return read_tabulated(path, grid)


def random_convex_data(grid: GaussianGrid, rng: np.random.Generator, terms: int = 3) -> Tuple[ScalarField, str]:
    """
    A random positive combination of ``|x_j - a|`` and ``(x_j - a)^2`` terms.

    :return: The field and a readable formula.
    """
    values = np.zeros(grid.shape)
    parts = []
    for _ in range(terms):
        axis = int(rng.integers(0, grid.dimension))
        a = float(rng.uniform(-1.5, 1.5))
        c = float(rng.uniform(0.2, 1.5))
        if rng.random() < 0.5:
            values = values + c * np.abs(grid.coords[axis] - a)
            parts.append(f"{c:.3f}|x{axis + 1} - {a:.3f}|")
        else:
            values = values + 0.5 * c * (grid.coords[axis] - a) ** 2
            parts.append(f"{0.5 * c:.3f}(x{axis + 1} - {a:.3f})^2")
    return ScalarField(grid, values), " + ".join(parts)
