import pytest

from wiener_convex.config.item_types.bool_item import BoolProperties
from wiener_convex.config.item_types.float_item import FloatProperties
from wiener_convex.config.item_types.int_item import IntItem, IntProperties
from wiener_convex.config.item_types.str_item import StrProperties
from wiener_convex.exceptions import ConfigItemValidationError


@pytest.mark.unit_test
@pytest.mark.parametrize(
    "min_val, max_val, allow_null, inclusive_min, inclusive_max, test_val, passed, fail_reason",
    # fmt: off
    [
        (1, 3, False, True, True, None, False,
         "Value None when allow_null is not permitted."),
        (1, 3, True, True, True, None, True, None),
        (1, 3, None, True, True, 1, True, None),
        (1, 3, None, True, True, 3, True, None),
        (1, 3, None, True, True, 4, False,
         "Value 4 is greater than the max property 3."),
        (1, 3, None, True, True, 0, False,
         "Value 0 is less than the min property 1."),
        (1, 3, None, None, None, 3, False,
         "Value 3 is equal to the max value 3 but the range is not inclusive of this value."),
        (1, 3, None, None, None, 1, False,
         "Value 1 is equal to the min value 1 but the range is not inclusive of this value."),
        (1, 3, None, True, True, 2.0, False,
         "Value 2.0 is of type <class 'float'>, should be <class 'int'>."),
        (1, 3, None, True, True, "2", False,
         "Value 2 is of type <class 'str'>, should be <class 'int'>."),
    ],
    # fmt: on
)
def test_int_properties_validation(
    min_val,
    max_val,
    allow_null,
    inclusive_min,
    inclusive_max,
    test_val,
    passed,
    fail_reason,
):
    """Tests validation of an integer by `IntProperties`, e.g. a grid dimension in 1..3."""
    int_properties = IntProperties(
        min_val=min_val,
        max_val=max_val,
        allow_null=allow_null,
        inclusive_min=inclusive_min,
        inclusive_max=inclusive_max,
    )

    validation = int_properties.validate(test_val)
    assert validation.passed == passed
    if not validation.passed:
        assert type(validation.fail_exceptions[0]) == ConfigItemValidationError
        assert fail_reason in validation.fail_reasons


@pytest.mark.unit_test
def test_int_item_incorrect_properties_type():
    """Tests instantiation fails with incorrect properties type."""
    with pytest.raises(TypeError):
        IntItem(value=1, properties=BoolProperties())
    with pytest.raises(TypeError):
        IntItem(value=1, properties=FloatProperties())
    with pytest.raises(TypeError):
        IntItem(value=1, properties=StrProperties())
