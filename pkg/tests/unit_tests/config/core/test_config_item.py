import pytest

from wiener_convex.config.core import ConfigItem
from wiener_convex.config.item_types.bool_item import BoolItem, BoolProperties
from wiener_convex.config.item_types.float_item import FloatItem, FloatProperties
from wiener_convex.config.item_types.int_item import IntItem, IntProperties
from wiener_convex.config.item_types.list_item import ListItem, ListProperties
from wiener_convex.config.item_types.str_item import StrItem, StrProperties


@pytest.mark.unit_test
def test_to_dict():
    """Test the ConfigItem can represent itself as a dictionary."""
    item = ConfigItem(doc="The quadrature scheme.", value="gauss_hermite")

    assert item.to_dict() == {"value": "gauss_hermite", "doc": "The quadrature scheme."}
    assert item.to_dict(values_only=True) == "gauss_hermite"
    assert item.to_dict(as_key_val_pair=True) == {
        "ConfigItem": {"value": "gauss_hermite", "doc": "The quadrature scheme."}
    }


@pytest.mark.unit_test
def test_assignment():
    """Test the ConfigItem calls validation on setting the value and that the value is updated."""
    item = ConfigItem(doc="scheme", value="uniform_truncated", properties=StrProperties())
    item.value = "gauss_hermite"
    assert item.value == "gauss_hermite"
    item.value = 1
    assert not item.validation.passed


@pytest.mark.unit_test
def test_set_value():
    """Test :meth:`~wiener_convex.config.core.ConfigItem.set_value` does not validate the item."""
    item = ConfigItem(doc="scheme", value="gauss_hermite", properties=StrProperties())
    item.set_value(1)
    assert item.validation.passed
    assert item.value == 1


@pytest.mark.unit_test
def test_default_replaces_none():
    """Test an item created with None takes the default of its properties."""
    item = IntItem(value=None, properties=IntProperties(default=129))
    assert item.value == 129
    assert item.validation.passed


@pytest.mark.unit_test
def test_invalid_default_is_refused():
    """Test properties refuse a default they would not validate."""
    with pytest.raises(ValueError):
        IntProperties(default=1, min_val=2, inclusive_min=True)


@pytest.mark.unit_test
@pytest.mark.parametrize(
    ("item", "properties"),
    (
        (IntItem, BoolProperties),
        (BoolItem, IntProperties),
        (StrItem, FloatProperties),
        (FloatItem, StrProperties),
        (ListItem, FloatProperties),
        (FloatItem, ListProperties),
    ),
)
def test_assign_incorrect_properties(item, properties):
    """Test item types raise a TypeError when using incorrect property types."""
    with pytest.raises(TypeError):
        item(value=None, properties=properties())
