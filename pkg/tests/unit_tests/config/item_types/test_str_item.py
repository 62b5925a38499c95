import pytest

from wiener_convex.config.item_types.bool_item import BoolProperties
from wiener_convex.config.item_types.float_item import FloatProperties
from wiener_convex.config.item_types.int_item import IntProperties
from wiener_convex.config.item_types.str_item import StrItem, StrProperties
from wiener_convex.exceptions import ConfigItemValidationError

SCHEMES = ["gauss_hermite", "uniform_truncated"]


@pytest.mark.unit_test
@pytest.mark.parametrize(
    "allow_null, options, test_val, passed, fail_reason",
    # fmt: off
    [
        (True, None, None, True, None),
        (True, None, "anything", True, None),
        (True, SCHEMES, "gauss_hermite", True, None),
        (True, SCHEMES, "chebyshev", False,
         "Value chebyshev should be one of gauss_hermite, uniform_truncated"),
        (True, [1, 2], "1", False, "Value 1 should be one of 1, 2"),
        (False, SCHEMES, None, False, "Value None when allow_null is not permitted."),
        (False, None, 1, False, "Value 1 is of type <class 'int'>, should be <class 'str'>."),
    ],
    # fmt: on
)
def test_str_properties_validation(allow_null, options, test_val, passed, fail_reason):
    """Tests validation of a str by `StrProperties`."""
    str_properties = StrProperties(allow_null=allow_null, options=options)

    validation = str_properties.validate(test_val)
    assert validation.passed == passed
    if not validation.passed:
        assert type(validation.fail_exceptions[0]) == ConfigItemValidationError
        assert fail_reason in validation.fail_reasons


@pytest.mark.unit_test
def test_str_item_incorrect_properties_type():
    """Tests instantiation fails with incorrect properties type."""
    with pytest.raises(TypeError):
        StrItem(value="gauss_hermite", properties=IntProperties())
    with pytest.raises(TypeError):
        StrItem(value="gauss_hermite", properties=FloatProperties())
    with pytest.raises(TypeError):
        StrItem(value="gauss_hermite", properties=BoolProperties())
