import math

import numpy as np
import pytest

from tests.conftest import uniform
from wiener_convex.exceptions import FieldError, GridError, IntegrandError
from wiener_convex.gauss.grid import ScalarField
from wiener_convex.geometry.sets import (
    IndicatorSet,
    anisotropic_perimeter,
    curvature_energy,
    decode_mask,
    encode_mask,
    perimeter_gamma,
    set_lines,
    volume,
)
from wiener_convex.integrands.kinds import anisotropic_norm, euclidean_norm, quadratic, scaled

MASS = math.erf(6.0 / math.sqrt(2.0))
PHI_0 = 1.0 / math.sqrt(2.0 * math.pi)


@pytest.mark.unit_test
def test_trivial_sets(line_grid):
    """Test the empty set and the full grid have no perimeter and volume 0 and the truncated mass."""
    assert volume(IndicatorSet.empty(line_grid)) == 0.0
    assert volume(IndicatorSet.full(line_grid)) == pytest.approx(MASS, abs=1e-14)
    assert perimeter_gamma(IndicatorSet.empty(line_grid)) == 0.0
    assert perimeter_gamma(IndicatorSet.full(line_grid)) == 0.0
    assert IndicatorSet.empty(line_grid).is_empty


@pytest.mark.unit_test
def test_half_line(line_grid):
    """Test the half-line has the perimeter of the density at the origin and mirrors its complement."""
    left = IndicatorSet.from_predicate(line_grid, lambda x: x < 0.0)
    right = IndicatorSet.from_predicate(line_grid, lambda x: x > 0.0)
    assert perimeter_gamma(left) == pytest.approx(PHI_0, abs=1e-3)
    assert volume(left) == pytest.approx(volume(right), rel=1e-12)
    assert left.count == 128


@pytest.mark.unit_test
def test_slab(line_grid):
    """Test the slab |x| < 1 pays the density at both ends."""
    slab = IndicatorSet.from_predicate(line_grid, lambda x: np.abs(x) < 1.0)
    expected = 2.0 * math.exp(-0.5) / math.sqrt(2.0 * math.pi)
    assert perimeter_gamma(slab) == pytest.approx(expected, abs=1e-2)


@pytest.mark.unit_test
def test_half_plane_matches_half_line(plane_grid):
    """Test the faces of a half-plane carry the one-dimensional flux times the mass of the other axis."""
    half_plane = IndicatorSet.from_predicate(plane_grid, lambda x1, x2: x1 < 0.0)
    half_line = IndicatorSet.from_predicate(uniform(1, 33), lambda x: x < 0.0)
    assert perimeter_gamma(half_plane) == pytest.approx(perimeter_gamma(half_line) * MASS, rel=1e-12)


@pytest.mark.unit_test
def test_anisotropic_perimeter(plane_grid):
    """Test the anisotropic perimeter weighs every face by the integrand at its normal."""
    half_plane = IndicatorSet.from_predicate(plane_grid, lambda x1, x2: x2 < 0.0)
    assert anisotropic_perimeter(euclidean_norm(), half_plane) == pytest.approx(perimeter_gamma(half_plane))
    assert anisotropic_perimeter(scaled(euclidean_norm(), 3.0), half_plane) == pytest.approx(
        3.0 * perimeter_gamma(half_plane)
    )
    assert anisotropic_perimeter(anisotropic_norm([1.0, 4.0]), half_plane) == pytest.approx(
        2.0 * perimeter_gamma(half_plane)
    )
    with pytest.raises(IntegrandError):
        anisotropic_perimeter(quadratic(), half_plane)


@pytest.mark.unit_test
def test_perimeter_is_submodular():
    """Test P(E | F) + P(E & F) <= P(E) + P(F) on random sets."""
    grid = uniform(2, 17)
    rng = np.random.default_rng(11)
    for _ in range(50):
        density = rng.uniform(0.2, 0.8)
        E = IndicatorSet(grid, rng.random(grid.shape) < density)
        F = IndicatorSet(grid, rng.random(grid.shape) < density)
        lhs = perimeter_gamma(E.union(F)) + perimeter_gamma(E.intersection(F))
        assert lhs <= perimeter_gamma(E) + perimeter_gamma(F) + 1e-10


@pytest.mark.unit_test
def test_anisotropic_perimeter_is_bounded_by_the_gaussian_one():
    """Test c P(E) <= P_F(E) <= C P(E) with c and C the extremes of F on the unit circle."""
    grid = uniform(2, 17)
    F = anisotropic_norm([1.0, 4.0])
    rng = np.random.default_rng(12)
    for _ in range(30):
        E = IndicatorSet(grid, rng.random(grid.shape) < rng.uniform(0.1, 0.9))
        p = perimeter_gamma(E)
        assert p - 1e-12 <= anisotropic_perimeter(F, E) <= 2.0 * p + 1e-12


@pytest.mark.unit_test
def test_curvature_energy(line_grid):
    """Test the energy of the empty set is zero and the full set pays its mass times g - lambda."""
    g = ScalarField.constant(line_grid, 1.0)
    assert curvature_energy(IndicatorSet.empty(line_grid), g, 0.5) == 0.0
    assert curvature_energy(IndicatorSet.full(line_grid), g, 3.0) == pytest.approx(-2.0 * MASS)
    with pytest.raises(FieldError):
        curvature_energy(IndicatorSet.full(line_grid), ScalarField.constant(uniform(1, 9), 1.0), 0.0)


@pytest.mark.unit_test
def test_set_operations(line_grid):
    """Test union, intersection and containment are node-wise."""
    a = IndicatorSet.from_predicate(line_grid, lambda x: x < 1.0)
    b = IndicatorSet.from_predicate(line_grid, lambda x: x > -1.0)
    both = a.intersection(b)
    assert both.issubset(a) and both.issubset(b)
    assert not a.issubset(b)
    assert a.union(b).count == line_grid.size
    with pytest.raises(FieldError):
        a.union(IndicatorSet.full(uniform(1, 9)))


@pytest.mark.unit_test
def test_sets_need_a_uniform_grid(hermite_line_grid):
    """Test Gauss-Hermite grids and wrong shapes are refused."""
    with pytest.raises(GridError):
        IndicatorSet.full(hermite_line_grid)
    with pytest.raises(FieldError):
        IndicatorSet(uniform(1, 9), np.ones(4, dtype=bool))


@pytest.mark.unit_test
def test_mask_encoding(plane_grid):
    """Test the run-length encoding rebuilds the set and refuses a foreign grid."""
    disc = IndicatorSet.from_predicate(plane_grid, lambda x1, x2: x1**2 + x2**2 < 4.0)
    encoded = encode_mask(disc)
    assert encoded["first"] is False
    assert sum(encoded["runs"]) == plane_grid.size
    assert np.array_equal(decode_mask(encoded, plane_grid).membership, disc.membership)
    with pytest.raises(FieldError):
        decode_mask(encoded, uniform(2, 9))


@pytest.mark.unit_test
def test_set_lines_of_a_small_plane():
    """Test a 3 x 3 grid has 3 + 3 axis lines and 5 diagonals in each orientation."""
    lines = set_lines(IndicatorSet.full(uniform(2, 3)))
    labels = [label for label, _ in lines]
    assert len(lines) == 16
    assert labels.count("axis0") == 3
    assert labels.count("diag01") == 5
    assert labels.count("anti01") == 5
