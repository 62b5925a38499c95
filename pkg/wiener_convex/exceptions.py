"""Custom wiener_convex exceptions."""


class ConfigItemValidationError(ValueError):
    """A config value has failed validation against a given ``ItemTypeProperties``."""

    pass


class ConfigGroupValidationError(ValueError):
    """A config group has failed validation."""

    pass


class GridError(ValueError):
    """A grid specification is invalid, or an operation needs a grid scheme it was not given."""

    pass


class ResourceBudgetError(ValueError):
    """
    Raised when a :class:`~wiener_convex.gauss.grid.GridSpec` asks for more nodes than the configured budget.

    Should be handled by reducing ``nodes_per_axis`` or ``dimension``.
    """

    pass


class FieldError(ValueError):
    """A field does not fit its grid, holds non-finite values, or is combined with a field of another grid or kind."""

    pass


class IntegrandError(ValueError):
    """An integrand was built with invalid parameters, or asked for an operation its kind does not support."""

    pass


class SolverError(ValueError):
    """The solver was given inputs it cannot work with."""

    pass


class VolumeOutOfRangeError(ValueError):
    """
    The requested Gaussian volume is outside the range where the level-set construction applies.

    The volume-constrained problem is solved by sublevel sets only for volumes strictly above the volume of the
    flat bottom of the scalar minimiser.
    """

    pass


class TruncationRadiusError(ValueError):
    """The sublevel volumes available on the truncated grid do not bracket the requested volume."""

    pass


class ExperimentRunError(ValueError):
    """An error has occurred during the set up or the saving of an ``ExperimentRun``."""

    pass


class HermiteDegreeError(ValueError):
    """A Hermite polynomial degree is negative or above the supported maximum."""

    pass


class LevelSetError(ValueError):
    """A level-set family cannot be built, for instance from an empty threshold list."""

    pass
