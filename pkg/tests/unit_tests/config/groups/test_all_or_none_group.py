from typing import Optional

import pytest

from wiener_convex.config.groups.validation import AllOrNoneGroup
from wiener_convex.config.item_types.float_item import FloatItem, FloatProperties
from wiener_convex.exceptions import ConfigGroupValidationError


class Window(AllOrNoneGroup):
    """A window that is either fully given or left to be computed."""

    _all_or_none = ("lower", "upper")

    def __init__(self, doc: Optional[str] = None, lower: Optional[float] = None, upper: Optional[float] = None):
        self.lower: FloatItem = FloatItem(value=lower, properties=FloatProperties(allow_null=True))
        self.upper: FloatItem = FloatItem(value=upper, properties=FloatProperties(allow_null=True))
        super().__init__(doc)


@pytest.mark.unit_test
@pytest.mark.parametrize(
    "lower, upper, passed",
    [
        (None, None, True),
        (-1.0, 1.0, True),
        (-1.0, None, False),
        (None, 1.0, False),
    ],
)
def test_all_or_none(lower, upper, passed):
    """Test the :class:`~wiener_convex.config.groups.validation.AllOrNoneGroup` rule."""
    window = Window(lower=lower, upper=upper)
    assert window.validation.passed == passed
    assert window.validation.elements_passed
    if not passed:
        assert window.validation.fail_reasons == ["Either all or none of lower, upper should be set"]
        with pytest.raises(ConfigGroupValidationError):
            raise window.validation.fail_exceptions[0]
