import math
from dataclasses import dataclass
from typing import Optional, Union

from wiener_convex.config.core import (
    ConfigItem,
    ConfigItemValidation,
    ItemTypeProperties,
    item_properties,
)
from wiener_convex.exceptions import ConfigItemValidationError


def add_range_validation(
    validation: ConfigItemValidation,
    val: Union[float, int],
    min_val: Optional[Union[float, int]] = None,
    inclusive_min: Optional[bool] = None,
    max_val: Optional[Union[float, int]] = None,
    inclusive_max: Optional[bool] = None,
) -> ConfigItemValidation:
    """
    Check a number against an optional ``[min_val, max_val]`` range and record any failure on ``validation``.

    :param validation: The validation the failures are added to.
    :param val: The number.
    :return: The same validation instance.
    """
    try:
        if isinstance(val, float) and not math.isfinite(val):
            msg = f"Value {val} is not finite."
            raise ConfigItemValidationError(msg)
        if min_val is not None and val < min_val:
            msg = f"Value {val} is less than the min property {min_val}."
            raise ConfigItemValidationError(msg)
        elif min_val is not None and not inclusive_min and val == min_val:
            msg = f"Value {val} is equal to the min value {min_val} but the range is not inclusive of this value."
            raise ConfigItemValidationError(msg)

        if max_val is not None and val > max_val:
            msg = f"Value {val} is greater than the max property {max_val}."
            raise ConfigItemValidationError(msg)
        elif max_val is not None and not inclusive_max and val == max_val:
            msg = f"Value {val} is equal to the max value {max_val} but the range is not inclusive of this value."
            raise ConfigItemValidationError(msg)
    except ConfigItemValidationError as e:
        validation.add_validation(msg, e)
    return validation


@dataclass()
class FloatProperties(ItemTypeProperties):
    """The FloatProperties class holds the properties relevant for defining and validating a float value."""

    min_val: Optional[float] = None
    """A minimum float value."""
    inclusive_min: Optional[bool] = None
    """Indicates whether `min_val` is inclusive of the value (>=, rather than >)."""
    max_val: Optional[float] = None
    """A maximum float value."""
    inclusive_max: Optional[bool] = None
    """Indicates whether `max_val` is inclusive of the value (<=, rather than <)."""
    allow_null: Optional[bool] = None
    """`True` if the config value can be left empty, otherwise `False`."""
    default: Optional[float] = None
    """The default value"""

    def __post_init__(self):
        self._allowed_types = [float, int]
        super().__post_init__()

    def validate(self, val: Union[float, int]) -> ConfigItemValidation:
        """
        Validates a float against the properties set in :class:`FloatProperties`.

        :param val: A float or int value to be validated.
        :return: An instance of :class:`~wiener_convex.config.core.ConfigItemValidation`.
        """
        validation: ConfigItemValidation = super().validate(val)
        if val is not None and type(val) in self._allowed_types:
            add_range_validation(
                validation,
                val,
                self.min_val,
                self.inclusive_min,
                self.max_val,
                self.inclusive_max,
            )
        return validation


@dataclass()
class FloatItem(ConfigItem):
    """A float config item."""

    def __init__(
        self,
        value: float,
        doc: Optional[str] = None,
        alias: Optional[str] = None,
        properties: Optional[FloatProperties] = None,
    ):
        properties = item_properties(properties, FloatProperties, "FloatItem")
        super().__init__(value, doc, alias, properties)
