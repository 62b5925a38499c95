"""The experiment config: one YAML document with a section per concern."""
from __future__ import annotations

from logging import getLogger
from typing import Final, List, Optional, Union

from wiener_convex.config.core import ConfigGroup, ConfigGroupValidation
from wiener_convex.config.groups.validation import StrictlyIncreasingGroup
from wiener_convex.config.item_types.float_item import FloatItem, FloatProperties
from wiener_convex.config.item_types.int_item import IntItem, IntProperties
from wiener_convex.config.item_types.list_item import ListItem, ListProperties
from wiener_convex.config.item_types.str_item import StrItem, StrProperties
from wiener_convex.exceptions import ConfigGroupValidationError
from wiener_convex.experiments.data import DataSpec
from wiener_convex.gauss.grid import GridSpec
from wiener_convex.integrands.factory import IntegrandSpec
from wiener_convex.solver.params import SolverParams

_LOGGER = getLogger(__name__)

SOLVE: Final[str] = "solve"
LEVELSETS: Final[str] = "levelsets"
ISOPERIMETRIC: Final[str] = "isoperimetric"
CLASSIFY: Final[str] = "classify"
FLOW: Final[str] = "flow"
SWEEP: Final[str] = "sweep"
VERIFY_ALL: Final[str] = "verify-all"
TASKS: Final[List[str]] = [SOLVE, LEVELSETS, ISOPERIMETRIC, CLASSIFY, FLOW, SWEEP, VERIFY_ALL]

CSV: Final[str] = "csv"
JSON: Final[str] = "json"
SVG: Final[str] = "svg"
FORMATS: Final[List[str]] = [CSV, JSON, SVG]


class GeometrySpec(ConfigGroup):
    """The ``geometry`` section: level-set thresholds and the constrained volume."""

    def __init__(
        self,
        doc: Optional[str] = None,
        volume: Optional[Union[int, float]] = 0.5,
        vol_tol: Optional[Union[int, float]] = 1e-3,
        thresholds: Optional[List[Union[int, float]]] = None,
        threshold_count: Optional[int] = 33,
    ):
        """
        The `GeometrySpec` constructor.

        :param doc: An optional descriptor.
        :param volume: The Gaussian volume of the isoperimetric task, in (0, 1).
        :param vol_tol: The volume tolerance of the isoperimetric task.
        :param thresholds: Explicit level-set thresholds.
        :param threshold_count: The number of evenly spread thresholds used when none are given.
        """
        self.volume: FloatItem = FloatItem(
            value=volume,
            doc="The Gaussian volume of the constrained problem.",
            properties=FloatProperties(
                allow_null=False, default=0.5, min_val=0, inclusive_min=False, max_val=1, inclusive_max=False
            ),
        )
        self.vol_tol: FloatItem = FloatItem(
            value=vol_tol,
            doc="How far outside the reachable sublevel volumes the target may lie.",
            properties=FloatProperties(allow_null=False, default=1e-3, min_val=0, inclusive_min=False),
        )
        self.thresholds: ListItem = ListItem(
            value=thresholds,
            doc="The level-set thresholds.",
            properties=ListProperties(allow_null=True, element_types=[float, int], min_len=1),
        )
        self.threshold_count: IntItem = IntItem(
            value=threshold_count,
            doc="The number of thresholds spread over the range of u when none are given.",
            properties=IntProperties(allow_null=False, default=33, min_val=1, inclusive_min=True),
        )
        super().__init__(doc)


class FlowSpec(ConfigGroup):
    """The ``flow`` section."""

    def __init__(self, doc: Optional[str] = None, dt: Optional[Union[int, float]] = 0.1, steps: Optional[int] = 10):
        """
        The `FlowSpec` constructor.

        :param doc: An optional descriptor.
        :param dt: The time step.
        :param steps: The number of implicit Euler steps.
        """
        self.dt: FloatItem = FloatItem(
            value=dt,
            doc="The time step of the implicit Euler scheme.",
            properties=FloatProperties(allow_null=False, default=0.1, min_val=0, inclusive_min=False),
        )
        self.steps: IntItem = IntItem(
            value=steps,
            doc="The number of steps.",
            properties=IntProperties(allow_null=False, default=10, min_val=1, inclusive_min=True),
        )
        super().__init__(doc)


class SweepSpec(StrictlyIncreasingGroup):
    """The ``sweep`` section."""

    _increasing = ("dims",)

    def __init__(self, doc: Optional[str] = None, dims: Optional[List[int]] = None):
        """
        The `SweepSpec` constructor.

        :param doc: An optional descriptor.
        :param dims: The strictly increasing cylinder dimensions.
        """
        self.dims: ListItem = ListItem(
            value=dims,
            doc="The leading dimensions the data are projected on.",
            properties=ListProperties(
                allow_null=False, default=[1, 2], element_types=[int], min_len=1, min_val=1, inclusive_min=True
            ),
        )
        super().__init__(doc)


class OutputSpec(ConfigGroup):
    """The ``output`` section."""

    def __init__(
        self, doc: Optional[str] = None, directory: Optional[str] = None, formats: Optional[List[str]] = None
    ):
        """
        The `OutputSpec` constructor.

        :param doc: An optional descriptor.
        :param directory: The run directory, a dated directory under the experiments root when None.
        :param formats: The artifacts written, among ``csv``, ``json`` and ``svg``.
        """
        self.directory: StrItem = StrItem(
            value=directory,
            doc="The directory the artifacts are written to.",
            properties=StrProperties(allow_null=True),
        )
        self.formats: ListItem = ListItem(
            value=formats,
            doc="The artifact formats.",
            properties=ListProperties(
                allow_null=False, default=list(FORMATS), element_types=[str], options=FORMATS, unique=True
            ),
        )
        super().__init__(doc)


class ExperimentConfig(ConfigGroup):
    """Everything one run needs."""

    def __init__(
        self,
        doc: Optional[str] = None,
        task: Optional[str] = SOLVE,
        seed: Optional[int] = 0,
        grid: Optional[GridSpec] = None,
        integrand: Optional[IntegrandSpec] = None,
        data: Optional[DataSpec] = None,
        solver: Optional[SolverParams] = None,
        geometry: Optional[GeometrySpec] = None,
        flow: Optional[FlowSpec] = None,
        sweep: Optional[SweepSpec] = None,
        output: Optional[OutputSpec] = None,
    ):
        """
        The `ExperimentConfig` constructor.

        :param doc: An optional descriptor.
        :param task: The task to run.
        :param seed: The seed of every random choice of the run.
        """
        self.task: StrItem = StrItem(
            value=task,
            doc="The task to run.",
            properties=StrProperties(allow_null=False, default=SOLVE, options=TASKS),
        )
        self.seed: IntItem = IntItem(
            value=seed,
            doc="The seed of the run.",
            properties=IntProperties(allow_null=False, default=0, min_val=0, inclusive_min=True),
        )
        self.grid: GridSpec = grid if grid else GridSpec()
        self.integrand: IntegrandSpec = integrand if integrand else IntegrandSpec()
        self.data: DataSpec = data if data else DataSpec()
        self.solver: SolverParams = solver if solver else SolverParams()
        self.geometry: GeometrySpec = geometry if geometry else GeometrySpec()
        self.flow: FlowSpec = flow if flow else FlowSpec()
        self.sweep: SweepSpec = sweep if sweep else SweepSpec()
        self.output: OutputSpec = output if output else OutputSpec()
        super().__init__(doc)

    @classmethod
    def create_from_yaml(cls, path: str) -> ExperimentConfig:
        """
        Read a config from a YAML file; failures are kept on the returned ``validation``.

        :param path: The YAML file.
        """
        config = cls()
        config.set_from_yaml(path)
        return config

    def validate(self) -> ConfigGroupValidation:
        """Extend the parent validation with the rules across sections."""
        super().validate()
        dims = self.sweep.dims.value
        dimension = self.grid.dimension.value
        try:
            if (
                self.task.value == SWEEP
                and isinstance(dims, list)
                and isinstance(dimension, int)
                and dims
                and max(dims) > dimension
            ):
                msg = f"Sweep dimensions {dims} exceed the grid dimension {dimension}."
                raise ConfigGroupValidationError(msg)
        except ConfigGroupValidationError as e:
            self.validation.add_validation(msg, e)
        axis = self.data.axis.value
        try:
            if isinstance(axis, int) and isinstance(dimension, int) and axis >= dimension:
                msg = f"Data axis {axis} does not exist on a {dimension}-dimensional grid."
                raise ConfigGroupValidationError(msg)
        except ConfigGroupValidationError as e:
            self.validation.add_validation(msg, e)
        return self.validation
