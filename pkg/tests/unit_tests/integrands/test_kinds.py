import math

import numpy as np
import pytest

from wiener_convex.exceptions import IntegrandError
from wiener_convex.integrands.core import (
    conjugate,
    evaluate,
    prox_conjugate,
    prox_primal,
    recession,
)
from wiener_convex.integrands.kinds import (
    anisotropic_norm,
    euclidean_norm,
    power_p,
    quadratic,
    scaled,
)


@pytest.mark.unit_test
def test_euclidean_norm():
    """Test the values, conjugate, recession and proximal maps of |h|."""
    F = euclidean_norm()
    assert evaluate(F, [3.0, 4.0]) == 5.0
    assert evaluate(F, 0.0) == 0.0
    assert conjugate(F, [0.5, 0.5]) == 0.0
    assert conjugate(F, [1.0, 1.0]) == math.inf
    assert recession(F, [3.0, 4.0]) == 5.0
    assert np.allclose(prox_primal(F, 1.0, [3.0, 4.0]), [2.4, 3.2])
    assert np.allclose(prox_primal(F, 10.0, [3.0, 4.0]), [0.0, 0.0])
    assert np.allclose(prox_conjugate(F, 2.0, [3.0, 4.0]), [0.6, 0.8])
    nu, value = F.spherical_min()
    assert value == 1.0
    assert np.array_equal(nu, [1.0])


@pytest.mark.unit_test
def test_vectorised_evaluation():
    """Test arrays of vectors give arrays of values."""
    h = np.array([[[3.0, 4.0], [0.0, 1.0]], [[1.0, 0.0], [0.0, 0.0]]])
    assert evaluate(euclidean_norm(), h).tolist() == [[5.0, 1.0], [1.0, 0.0]]


@pytest.mark.unit_test
@pytest.mark.parametrize("tau", [0.0, -1.0])
def test_non_positive_steps_are_refused(tau):
    """Test the proximal maps need a positive step."""
    with pytest.raises(IntegrandError):
        prox_primal(quadratic(), tau, [1.0])
    with pytest.raises(IntegrandError):
        prox_conjugate(quadratic(), tau, [1.0])


@pytest.mark.unit_test
@pytest.mark.parametrize("p, scale", [(0.5, 1.0), (math.inf, 1.0), (2.0, 0.0), (2.0, -1.0)])
def test_power_p_invalid_parameters(p, scale):
    """Test exponents below one and non-positive scales are refused."""
    with pytest.raises(IntegrandError):
        power_p(p, scale)


@pytest.mark.unit_test
def test_power_p_closed_forms():
    """Test c |h|^p and its conjugate c (p - 1) (|q| / (c p))^(p / (p - 1))."""
    F = power_p(3.0, 2.0)
    assert evaluate(F, [2.0]) == pytest.approx(16.0)
    assert conjugate(power_p(2.0), [2.0]) == pytest.approx(1.0)
    assert conjugate(F, [6.0]) == pytest.approx(2.0 * 2.0 * 1.0)
    assert recession(F, [1.0]) == math.inf
    assert recession(F, [0.0]) == 0.0
    assert np.allclose(F.grad(np.array([1.0, 2.0])), 6.0 * math.sqrt(5.0) * np.array([1.0, 2.0]))
    assert not F.one_homogeneous and F.smooth

    F1 = power_p(1.0, 2.0)
    assert F1.one_homogeneous and F1.conjugate_is_indicator
    assert recession(F1, [-3.0]) == pytest.approx(6.0)
    assert conjugate(F1, [1.9]) == 0.0
    assert conjugate(F1, [2.1]) == math.inf


@pytest.mark.unit_test
@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0, 4.5])
@pytest.mark.parametrize("tau", [0.1, 1.0, 5.0])
def test_power_p_prox_optimality(p, tau):
    """Test the proximal radius solves r - a + tau c p r^(p - 1) = 0, or vanishes for p = 1."""
    F = power_p(p, 1.5)
    h = np.array([[0.3, -0.4], [2.0, 1.0], [-7.0, 3.0]])
    z = prox_primal(F, tau, h)
    a = np.linalg.norm(h, axis=-1)
    r = np.linalg.norm(z, axis=-1)
    if p == 1.0:
        assert np.allclose(r, np.maximum(a - 1.5 * tau, 0.0))
    else:
        assert np.allclose(r - a + tau * 1.5 * p * r ** (p - 1.0), 0.0, atol=1e-9)
    # the direction is kept
    moved = r > 0
    assert np.allclose(z[moved] / r[moved, None], h[moved] / a[moved, None])


@pytest.mark.unit_test
def test_quadratic():
    """Test mu |h|^2 / 2, its conjugate |q|^2 / (2 mu) and its proximal maps."""
    F = quadratic(2.0)
    assert F.mu == 2.0
    assert evaluate(F, [1.0, 1.0]) == pytest.approx(2.0)
    assert conjugate(F, [2.0, 0.0]) == pytest.approx(1.0)
    assert np.allclose(prox_primal(F, 0.5, [4.0]), [2.0])
    assert np.allclose(prox_conjugate(F, 2.0, [4.0]), [2.0])
    assert recession(F, [1.0]) == math.inf
    with pytest.raises(IntegrandError):
        quadratic(0.0)


@pytest.mark.unit_test
@pytest.mark.parametrize(
    "F",
    [euclidean_norm(), quadratic(0.5), power_p(3.0), power_p(1.0, 2.0), anisotropic_norm([4.0, 1.0])],
    ids=["norm", "quadratic", "power_3", "power_1", "anisotropic"],
)
def test_moreau_identity(F):
    """Test prox_{tau F}(h) + tau prox_{F* / tau}(h / tau) = h."""
    rng = np.random.default_rng(3)
    h = 2.0 * rng.standard_normal((50, 2))
    tau = 0.7
    recombined = prox_primal(F, tau, h) + tau * prox_conjugate(F, 1.0 / tau, h / tau)
    assert np.allclose(recombined, h, atol=1e-8)


@pytest.mark.unit_test
@pytest.mark.parametrize(
    "F",
    [
        euclidean_norm(),
        quadratic(2.0),
        power_p(1.5),
        power_p(3.0, 0.5),
        anisotropic_norm([4.0, 1.0]),
        scaled(euclidean_norm(), 3.0),
    ],
    ids=["norm", "quadratic", "power_1.5", "power_3", "anisotropic", "scaled"],
)
@pytest.mark.parametrize("step", [0.3, 2.0])
def test_proximal_maps_are_firmly_nonexpansive(F, step):
    """Test |P h1 - P h2|^2 <= <P h1 - P h2, h1 - h2> for both proximal maps on random pairs."""
    rng = np.random.default_rng(5)
    h1 = 3.0 * rng.standard_normal((200, 2))
    h2 = 3.0 * rng.standard_normal((200, 2))
    for prox in (prox_primal, prox_conjugate):
        moved = prox(F, step, h1) - prox(F, step, h2)
        gap = np.sum(moved * (h1 - h2), axis=-1) - np.sum(moved * moved, axis=-1)
        assert np.all(gap >= -1e-7)
        assert np.all(np.linalg.norm(moved, axis=-1) <= np.linalg.norm(h1 - h2, axis=-1) + 1e-7)


@pytest.mark.unit_test
def test_anisotropic_norm():
    """Test the weighted norm, its elliptic conjugate domain and its spherical minimiser."""
    F = anisotropic_norm([4.0, 1.0])
    assert F.dimension == 2
    assert evaluate(F, [1.0, 1.0]) == pytest.approx(math.sqrt(5.0))
    assert conjugate(F, [1.0, 0.5]) == 0.0
    assert conjugate(F, [0.0, 2.0]) == math.inf
    assert np.allclose(F.project_conjugate_domain(np.array([0.0, 2.0])), [0.0, 1.0])
    nu, value = F.spherical_min()
    assert np.array_equal(nu, [0.0, 1.0])
    assert value == 1.0
    assert F.growth.alpha1 == 2.0 and F.growth.alpha2 == 1.0
    with pytest.raises(IntegrandError):
        evaluate(F, [1.0, 2.0, 3.0])


@pytest.mark.unit_test
@pytest.mark.parametrize("weights", [[], [1.0, -1.0], [0.0], [1.0, math.nan]])
def test_anisotropic_norm_invalid_weights(weights):
    """Test empty and non-positive weight lists are refused."""
    with pytest.raises(IntegrandError):
        anisotropic_norm(weights)


@pytest.mark.unit_test
def test_scaled():
    """Test c F keeps the flags of F and rescales values, conjugate and minimum."""
    F = scaled(euclidean_norm(), 2.0)
    assert F.one_homogeneous and F.conjugate_is_indicator
    assert evaluate(F, [3.0, 4.0]) == pytest.approx(10.0)
    assert conjugate(F, [1.5, 0.0]) == 0.0
    assert conjugate(F, [3.0, 0.0]) == math.inf
    assert np.allclose(prox_primal(F, 1.0, [3.0, 4.0]), [1.8, 2.4])
    assert F.spherical_min()[1] == 2.0
    with pytest.raises(IntegrandError):
        scaled(euclidean_norm(), 0.0)


@pytest.mark.unit_test
def test_not_one_homogeneous_has_no_spherical_min():
    """Test the spherical minimiser is only defined for one-homogeneous kinds."""
    with pytest.raises(IntegrandError):
        quadratic().spherical_min()
    with pytest.raises(IntegrandError):
        euclidean_norm().grad(np.array([1.0]))
