from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from tests import TEST_PACKAGE_DATA_PATH
from tests.conftest import uniform
from wiener_convex.exceptions import FieldError
from wiener_convex.experiments.data import DataSpec, build_data, random_convex_data, read_tabulated
from wiener_convex.verify.convexity import check_convexity_field


@pytest.fixture(scope="module")
def five_nodes():
    """The grid of the tabulated fixture."""
    return uniform(1, 5)


@pytest.mark.unit_test
def test_hermite_data(line_grid):
    """Test the default data are He_1 and degree 2 gives x^2 - 1."""
    x = line_grid.coords[0]
    assert np.array_equal(build_data(DataSpec(), line_grid).values, x)
    assert np.allclose(build_data(DataSpec(degree=2), line_grid).values, x**2 - 1.0)


@pytest.mark.unit_test
def test_affine_data_on_the_second_axis(plane_grid):
    """Test affine data follow the configured axis."""
    g = build_data(DataSpec(name="affine", coefficient=2, axis=1), plane_grid)
    assert np.allclose(g.values, 2.0 * plane_grid.coords[1])


@pytest.mark.unit_test
def test_quadratic_shift_and_constant(line_grid):
    """Test the shifted quadratic and the constant take their parameters."""
    x = line_grid.coords[0]
    shifted = build_data(DataSpec(name="quadratic_shift", coefficient=0.5, shift=0.5, offset=-1.0), line_grid)
    assert np.allclose(shifted.values, 0.5 * (x - 0.5) ** 2 - 1.0)
    constant = build_data(DataSpec(name="constant", offset=3.0), line_grid)
    assert np.all(constant.values == 3.0)


@pytest.mark.unit_test
def test_tabulated_data_resolve_relative_paths(five_nodes):
    """Test a relative CSV path is read against the base path."""
    spec = DataSpec(name="tabulated", path="tabulated_line.csv")
    g = build_data(spec, five_nodes, TEST_PACKAGE_DATA_PATH)
    assert g.values.tolist() == [-3.0, -1.5, 0.0, 1.5, 3.0]


@pytest.mark.unit_test
def test_tabulated_data_must_match_the_grid(line_grid):
    """Test a CSV with another node count is refused."""
    with pytest.raises(FieldError):
        read_tabulated(TEST_PACKAGE_DATA_PATH / "tabulated_line.csv", line_grid)


@pytest.mark.unit_test
def test_tabulated_data_need_their_columns(five_nodes, tmp_path: Path):
    """Test missing columns and nodes off the grid are refused."""
    renamed = tmp_path / "renamed.csv"
    pd.DataFrame({"x": five_nodes.axis_nodes[0], "g": np.zeros(5)}).to_csv(renamed, index=False)
    with pytest.raises(FieldError, match="x1"):
        read_tabulated(renamed, five_nodes)

    shifted = tmp_path / "shifted.csv"
    pd.DataFrame({"x1": five_nodes.axis_nodes[0] + 0.1, "g": np.zeros(5)}).to_csv(shifted, index=False)
    with pytest.raises(FieldError):
        read_tabulated(shifted, five_nodes)


@pytest.mark.unit_test
def test_invalid_specs_are_refused(line_grid):
    """Test an invalid section and an axis beyond the grid raise FieldError."""
    with pytest.raises(FieldError, match="Tabulated data require 'path' to be set."):
        build_data(DataSpec(name="tabulated"), line_grid)
    with pytest.raises(FieldError):
        build_data(DataSpec(name="affine", axis=1), line_grid)


@pytest.mark.unit_test
def test_random_convex_data_are_seeded_and_convex(line_grid):
    """Test the same seed draws the same convex field."""
    g1, formula1 = random_convex_data(line_grid, np.random.default_rng(4))
    g2, formula2 = random_convex_data(line_grid, np.random.default_rng(4))
    assert formula1 == formula2
    assert np.array_equal(g1.values, g2.values)
    assert formula1.count(" + ") == 2
    assert check_convexity_field(g1).passed
