# -- Validation groups --
from typing import Tuple

from wiener_convex.config.core import ConfigGroup, ConfigGroupValidation
from wiener_convex.exceptions import ConfigGroupValidationError


class AllOrNoneGroup(ConfigGroup):
    """
    Inherit from this group if a set of nullable items should be either all set or all left empty.

    The names of the items are given by the class attribute ``_all_or_none``.
    """

    _all_or_none: Tuple[str, ...] = ()

    def validate(self) -> ConfigGroupValidation:
        """Extend the parent validation with additional rules specific to this :class: `~wiener_convex.config.core.ConfigGroup`."""
        super().validate()
        try:
            values = [getattr(self, name).value for name in self._all_or_none]
            if any(v is None for v in values) and not all(v is None for v in values):
                msg = f"Either all or none of {', '.join(self._all_or_none)} should be set"
                raise ConfigGroupValidationError(msg)
        except ConfigGroupValidationError as e:
            self.validation.add_validation(msg, e)
        return self.validation


class StrictlyIncreasingGroup(ConfigGroup):
    """
    Inherit from this group if list items must hold strictly increasing numbers.

    The names of the list items are given by the class attribute ``_increasing``.
    """

    _increasing: Tuple[str, ...] = ()

    def validate(self) -> ConfigGroupValidation:
        """Extend the parent validation with additional rules specific to this :class: `~wiener_convex.config.core.ConfigGroup`."""
        super().validate()
        for name in self._increasing:
            values = getattr(self, name).value
            try:
                if (
                    isinstance(values, list)
                    and all(isinstance(v, (int, float)) for v in values)
                    and any(b <= a for a, b in zip(values, values[1:]))
                ):
                    msg = f"{name} should be strictly increasing, got {values}"
                    raise ConfigGroupValidationError(msg)
            except ConfigGroupValidationError as e:
                self.validation.add_validation(msg, e)
        return self.validation
