from dataclasses import dataclass
from typing import Optional

from wiener_convex.config.core import ConfigItem, ItemTypeProperties, item_properties


@dataclass()
class BoolProperties(ItemTypeProperties):
    """
    The properties of a switch such as ``solver.accelerate``.

    Only real booleans pass: ``0``, ``1`` and ``"yes"`` are type failures.
    """

    allow_null: Optional[bool] = None
    default: Optional[bool] = None

    def __post_init__(self):
        self._allowed_types = [bool]
        super().__post_init__()


@dataclass()
class BoolItem(ConfigItem):
    """A boolean switch of a config group."""

    def __init__(
        self,
        value: Optional[bool],
        doc: Optional[str] = None,
        alias: Optional[str] = None,
        properties: Optional[BoolProperties] = None,
    ):
        properties = item_properties(properties, BoolProperties, "BoolItem")
        super().__init__(value, doc, alias, properties)
