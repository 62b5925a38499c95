from dataclasses import dataclass
from typing import List, Optional, Union

from wiener_convex.config.core import (
    ConfigItem,
    ConfigItemValidation,
    ItemTypeProperties,
    item_properties,
)
from wiener_convex.config.item_types.float_item import add_range_validation
from wiener_convex.exceptions import ConfigItemValidationError


@dataclass()
class ListProperties(ItemTypeProperties):
    """The ListProperties class holds the properties relevant for defining and validating a list of values."""

    element_types: Optional[List[type]] = None
    """The allowed types of the list elements."""
    min_len: Optional[int] = None
    """The minimum list length."""
    max_len: Optional[int] = None
    """The maximum list length."""
    min_val: Optional[float] = None
    """A minimum value for numeric elements."""
    inclusive_min: Optional[bool] = None
    """Indicates whether `min_val` is inclusive of the value (>=, rather than >)."""
    options: Optional[List[str]] = None
    """A list of allowed values for str elements."""
    unique: Optional[bool] = None
    """Elements may not repeat."""
    allow_null: Optional[bool] = None
    """`True` if the config value can be left empty, otherwise `False`."""
    default: Optional[list] = None
    """The default value."""

    def __post_init__(self):
        self._allowed_types = [list]
        super().__post_init__()

    def to_dict(self):
        """
        Serializes the :class:`ListProperties` as a dict.

        :return: The :class:`ListProperties` as a dict with element types given by name.
        """
        config_dict = super().to_dict()
        if self.element_types is not None:
            config_dict["element_types"] = [t.__name__ for t in self.element_types]
        return config_dict

    def validate(self, val: Optional[list]) -> ConfigItemValidation:
        """
        Validates a list against the properties set in :class:`ListProperties`.

        :param val: A list to be validated.
        :return: An instance of :class:`~wiener_convex.config.core.ConfigItemValidation`.
        """
        validation: ConfigItemValidation = super().validate(val)
        if val is None or type(val) not in self._allowed_types:
            return validation
        try:
            if self.min_len is not None and len(val) < self.min_len:
                msg = f"List {val} has fewer than {self.min_len} elements."
                raise ConfigItemValidationError(msg)
            if self.max_len is not None and len(val) > self.max_len:
                msg = f"List {val} has more than {self.max_len} elements."
                raise ConfigItemValidationError(msg)
            if self.unique and len(set(val)) != len(val):
                msg = f"List {val} has repeated elements."
                raise ConfigItemValidationError(msg)
        except ConfigItemValidationError as e:
            validation.add_validation(msg, e)

        for element in val:
            try:
                if self.element_types and type(element) not in self.element_types:
                    msg = (
                        f"Element {element} is of type {type(element)}, should be "
                        + " or ".join(map(str, self.element_types))
                        + "."
                    )
                    raise ConfigItemValidationError(msg)
                if self.options is not None and element not in self.options:
                    msg = f"Element {element} should be one of {', '.join(map(str, self.options))}"
                    raise ConfigItemValidationError(msg)
            except ConfigItemValidationError as e:
                validation.add_validation(msg, e)
                continue
            if isinstance(element, (int, float)) and not isinstance(element, bool):
                add_range_validation(
                    validation, element, self.min_val, self.inclusive_min
                )
        return validation


@dataclass()
class ListItem(ConfigItem):
    """A list config item."""

    def __init__(
        self,
        value: Optional[List[Union[float, int, str]]],
        doc: Optional[str] = None,
        alias: Optional[str] = None,
        properties: Optional[ListProperties] = None,
    ):
        properties = item_properties(properties, ListProperties, "ListItem")
        super().__init__(value, doc, alias, properties)
