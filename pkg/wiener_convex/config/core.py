"""
The config framework: typed items with validating properties, grouped into nested config groups.

Validation never raises on its own. Items and groups collect failure reasons and exceptions into
:class:`ConfigItemValidation` and :class:`ConfigGroupValidation`; callers that need a hard failure
use :meth:`ConfigGroup.raise_if_invalid`.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from logging import getLogger
from typing import Any, Dict, List, Optional, Type, Union

import yaml

from wiener_convex.exceptions import (
    ConfigGroupValidationError,
    ConfigItemValidationError,
)

_LOGGER = getLogger(__name__)

ValidationError = Union[ConfigGroupValidationError, ConfigItemValidationError]


def _public(obj: Any) -> Dict[str, Any]:
    return {k: v for k, v in obj.__dict__.items() if not k.startswith("_")}


def _as_list(value: Any) -> list:
    if value is None:
        return []
    return list(value) if isinstance(value, list) else [value]


class ConfigBase(ABC):
    """String representation shared by groups and validations."""

    def get_config_elements(self) -> Dict[str, Union[ConfigItem, ConfigGroup]]:
        """The public attributes that are items or groups, in definition order."""
        return {k: v for k, v in _public(self).items() if isinstance(v, (ConfigItem, ConfigGroup))}

    def get_non_config_elements(self) -> Dict[str, Any]:
        """The public attributes that are neither items nor groups."""
        elements = self.get_config_elements()
        return {k: v for k, v in _public(self).items() if k not in elements}

    def stringify(self) -> str:
        """``ClassName(element=value, ..., attribute=value, ...)``."""
        parts = [f"{k}={v.stringify()}" for k, v in self.get_config_elements().items()]
        parts += [f"{k}={v}" for k, v in self.get_non_config_elements().items()]
        return f"{self.__class__.__name__}({', '.join(parts)})"

    def __repr__(self) -> str:
        return self.stringify()

    def __str__(self) -> str:
        return self.stringify()


@dataclass()
class ItemTypeProperties(ABC):
    """
    The constraints an item value is validated against.

    Subclasses set ``_allowed_types`` in ``__post_init__`` before calling the parent, which
    refuses a default the properties would not validate.
    """

    _allowed_types: List[type] = None
    allow_null: Optional[bool] = None
    default: Optional[Any] = None

    def __post_init__(self):
        if self.default is None:
            return
        validation = self.validate(self.default)
        if not validation.passed:
            raise validation.fail_exceptions[0]

    def to_dict(self) -> Dict[str, Any]:
        """The properties that are set."""
        return {k: v for k, v in _public(self).items() if v is not None}

    def validate(self, val) -> ConfigItemValidation:
        """
        Check nullability and type, the rules every item type shares.

        Subclasses extend this with their own range or option rules.
        """
        validation = ConfigItemValidation()
        if val is None:
            if not self.allow_null:
                msg = f"Value {val} when allow_null is not permitted."
                validation.add_validation(msg, ConfigItemValidationError(msg))
        elif type(val) not in self._allowed_types:
            allowed = " or ".join(map(str, self._allowed_types))
            msg = f"Value {val} is of type {type(val)}, should be {allowed}."
            validation.add_validation(msg, ConfigItemValidationError(msg))
        return validation


class ConfigValidationBase(ConfigBase):
    """Failure reasons and the matching exceptions of one config element."""

    def __init__(
        self,
        fail_reasons: Optional[Union[List[str], str]] = None,
        fail_exceptions: Optional[Union[List[ValidationError], ValidationError]] = None,
    ):
        self.fail_reasons: List[str] = _as_list(fail_reasons)
        self.fail_exceptions: List[ValidationError] = _as_list(fail_exceptions)

    def add_validation(self, fail_reason: str, exception: ValidationError):
        """
        Record a failure once.

        :param fail_reason: The message.
        :param exception: The exception a caller may raise for it.
        """
        if fail_reason not in self.fail_reasons:
            self.fail_reasons.append(fail_reason)
        if exception not in self.fail_exceptions:
            self.fail_exceptions.append(exception)

    def stringify(self) -> str:
        """``ClassName(passed=..., fail_reasons=..., fail_exceptions=...)``."""
        parts = [f"passed={self.passed}"]
        parts += [f"{k}={v}" for k, v in self.get_non_config_elements().items()]
        return f"{self.__class__.__name__}({', '.join(parts)})"

    @property
    @abstractmethod
    def passed(self) -> bool:
        """True when nothing failed."""


class ConfigItemValidation(ConfigValidationBase):
    """The validation of a single item."""

    @property
    def passed(self) -> bool:
        return not (self.fail_exceptions or self.fail_reasons)


class ConfigGroupValidation(ConfigValidationBase):
    """
    The validation of a group: its own rules plus the validation of every element.

    ``group_passed`` covers the rules of the group itself, ``elements_passed`` the items and
    nested groups.
    """

    def __init__(
        self,
        fail_reasons: Optional[Union[List[str], str]] = None,
        fail_exceptions: Optional[Union[List[ValidationError], ValidationError]] = None,
    ):
        self._element_validation: Dict[str, Union[ConfigItemValidation, ConfigGroupValidation]] = {}
        super().__init__(fail_reasons, fail_exceptions)

    def add_element_validation(
        self,
        element_name: str,
        validation: Union[ConfigItemValidation, ConfigGroupValidation],
    ):
        """Attach the validation of a named element."""
        self._element_validation[element_name] = validation

    @property
    def element_validation(self) -> Dict[str, Union[ConfigItemValidation, ConfigGroupValidation]]:
        """The element validations by element name."""
        return self._element_validation

    @property
    def group_passed(self) -> bool:
        """True when the rules of the group itself hold."""
        return not (self.fail_exceptions or self.fail_reasons)

    @property
    def elements_passed(self) -> bool:
        """True when every element passed."""
        return all(v.passed for v in self._element_validation.values())

    @property
    def passed(self) -> bool:
        return self.group_passed and self.elements_passed

    def to_dict(self, element_name: str = "root", root: bool = True) -> dict:
        """
        The failures as a tree: group reasons under ``group``, failed elements by name.

        :param element_name: The name of the root of the tree.
        :param root: False for nested groups, which return their subtree only.
        :return: ``{element_name: "Passed"}`` when nothing failed.
        """
        tree = {} if self.group_passed else {"group": self.fail_reasons}
        for name, validation in self._element_validation.items():
            if validation.passed:
                continue
            if isinstance(validation, ConfigGroupValidation):
                tree[name] = validation.to_dict(name, root=False)
            else:
                tree[name] = validation.fail_reasons
        if not root:
            return tree
        return {element_name: tree or "Passed"}

    def log(self, element_name: str = "root") -> str:
        """
        Log the failure tree as YAML, at ERROR when something failed and DEBUG otherwise.

        :param element_name: The name of the root of the tree.
        :return: The logged text.
        """
        text = "\nValidation results\n------------------\n"
        text += yaml.dump(self.to_dict(element_name), sort_keys=False, default_flow_style=False)
        (_LOGGER.debug if self.passed else _LOGGER.error)(text)
        return text

    def all_fail_reasons(self, prefix: str = "") -> List[str]:
        """
        Every failure of the tree as ``"dotted.path: reason"``.

        Reasons of the outermost group are listed under ``root``.

        :param prefix: The dotted path of this group.
        """
        reasons = [f"{prefix or 'root'}: {r}" for r in self.fail_reasons]
        for name, validation in self._element_validation.items():
            path = f"{prefix}.{name}" if prefix else name
            if isinstance(validation, ConfigGroupValidation):
                reasons.extend(validation.all_fail_reasons(path))
            else:
                reasons.extend(f"{path}: {r}" for r in validation.fail_reasons)
        return reasons


@dataclass
class ConfigItem:
    """
    A config value with its doc and properties.

    Assigning ``value`` revalidates the item; :meth:`set_value` does not.
    """

    value: object
    doc: Optional[str] = None
    alias: str = field(default=None, repr=False)
    """Another key the item is accepted under in a config mapping."""
    properties: Optional[ItemTypeProperties] = None
    validation: ConfigItemValidation = None

    def __post_init__(self):
        if self.value is None and self.properties is not None and self.properties.default is not None:
            self.value = self.properties.default
        self.validate()

    def __setattr__(self, name: str, value: Any) -> None:
        self.__dict__[name] = value
        if name == "value":
            self.validate()

    def to_dict(
        self,
        as_key_val_pair: Optional[bool] = False,
        values_only: Optional[bool] = False,
        include_none: Optional[bool] = True,
    ) -> Any:
        """
        The item as a dict, or its bare value.

        :param as_key_val_pair: Wrap the dict under the class name.
        :param values_only: Return the value only.
        :param include_none: Return None rather than a dict for an unset item when False.
        """
        if self.value is None and not include_none:
            return None
        if values_only:
            return self.value
        d = {"value": self.value}
        if self.doc:
            d["doc"] = self.doc
        if self.properties:
            d["properties"] = self.properties.to_dict()
        return {self.__class__.__name__: d} if as_key_val_pair else d

    def validate(self) -> ConfigItemValidation:
        """Validate the value against the properties; an item without properties always passes."""
        self.validation = self.properties.validate(self.value) if self.properties else ConfigItemValidation()
        return self.validation

    def set_value(self, value: Any) -> None:
        """Set the value without validating it; the owning group validates once it is fully set."""
        self.__dict__["value"] = value

    def stringify(self) -> Any:
        return self.value


def item_properties(
    properties: Optional[ItemTypeProperties],
    expected: Type[ItemTypeProperties],
    item: str,
) -> ItemTypeProperties:
    """
    The properties an item is built with: ``expected()`` when None is given.

    :param properties: The properties passed to the item, or None.
    :param expected: The properties class of the item type.
    :param item: The item class name, for the error message.
    :raise TypeError: When the properties are of another class.
    """
    if properties is None:
        return expected()
    if not isinstance(properties, expected):
        raise TypeError(f"Properties of {item} should be of type {expected.__name__}.")
    return properties


class ConfigGroup(ConfigBase, ABC):
    """
    A named collection of items and nested groups.

    Subclasses create their elements as attributes before calling ``super().__init__`` and add
    group level rules by extending :meth:`validate`. Assigning a plain value to an item attribute
    sets the item's value.
    """

    def __init__(self, doc: Optional[str] = None):
        self.doc: Optional[str] = doc
        self.validation = self.validate()

    def __setattr__(self, name: str, value: Any) -> None:
        current = self.__dict__.get(name)
        if isinstance(current, ConfigItem) and not isinstance(value, ConfigItem):
            current.value = value
        else:
            self.__dict__[name] = value

    def validate(self) -> ConfigGroupValidation:
        """
        Validate every element, then the keys :meth:`set_from_dict` could not place.

        :return: The new :class:`ConfigGroupValidation`, also kept as ``self.validation``.
        """
        self.validation = ConfigGroupValidation()
        for name, element in self.get_config_elements().items():
            self.validation.add_element_validation(name, element.validate())

        unknown_keys = self.__dict__.get("_unknown_keys")
        if unknown_keys:
            msg = f"Unknown config keys: {', '.join(sorted(unknown_keys))}"
            self.validation.add_validation(msg, ConfigGroupValidationError(msg))
        return self.validation

    def raise_if_invalid(self) -> None:
        """
        Validate the group and raise on any failure.

        :raise ConfigGroupValidationError: Listing every failure reason, each prefixed by its dotted path.
        """
        validation = self.validate()
        if not validation.passed:
            validation.log(self.__class__.__name__)
            raise ConfigGroupValidationError("; ".join(validation.all_fail_reasons()))

    def to_dict(
        self,
        values_only: Optional[bool] = False,
        include_none: Optional[bool] = True,
    ) -> dict:
        """
        The group as a nested dict.

        :param values_only: Keep only the item values, the form configs are written in.
        :param include_none: Keep items whose value is None.
        """
        elements = {}
        for name, element in self.get_config_elements().items():
            d = element.to_dict(values_only=values_only, include_none=include_none)
            if include_none or d is not None:
                elements[name] = d
        if values_only or self.doc is None:
            return elements
        return {"doc": self.doc, **elements}

    def to_yaml(self, file_path: str):
        """Write the values of the group to a YAML file."""
        with open(file_path, "w") as file:
            yaml.safe_dump(self.to_dict(values_only=True), file, sort_keys=False, default_flow_style=False)

    def set_from_dict(self, config_dict: dict, root: bool = True):
        """
        Set items and nested groups from a mapping, by name or item alias.

        Keys without a matching element, and mappings given where an item is expected, are kept
        and reported by :meth:`validate` as unknown keys.

        :param config_dict: The values, nested like the groups.
        :param root: Validate the whole tree once set; nested calls leave it to the root.
        """
        elements = self.get_config_elements()
        aliases = {e.alias: k for k, e in elements.items() if isinstance(e, ConfigItem) and e.alias}
        unknown = []
        for key, value in (config_dict or {}).items():
            element = elements.get(key, elements.get(aliases.get(key)))
            if isinstance(element, ConfigGroup) and isinstance(value, dict):
                element.set_from_dict(value, root=False)
            elif isinstance(element, ConfigItem) and not isinstance(value, dict):
                element.set_value(value)
            else:
                unknown.append(str(key))
        self.__dict__["_unknown_keys"] = unknown
        if root:
            self.validate()

    def set_from_yaml(self, file_path: str):
        """
        Set the group from a YAML file holding a mapping.

        :raise FileNotFoundError: When the file does not exist.
        :raise ConfigGroupValidationError: When the document is not a mapping.
        """
        try:
            with open(file_path) as f:
                config_dict = yaml.safe_load(f)
        except FileNotFoundError:
            _LOGGER.critical(f"Configuration file does not exist: {file_path}", exc_info=True)
            raise
        if config_dict is not None and not isinstance(config_dict, dict):
            msg = f"Configuration file {file_path} does not hold a mapping."
            _LOGGER.critical(msg)
            raise ConfigGroupValidationError(msg)
        self.set_from_dict(config_dict)
