"""The primal and dual objectives of the discrete problem ``min_u sum omega F(grad u) + lambda/2 |u - g|^2``."""
import numpy as np

from wiener_convex.gauss.calculus import divergence_gamma, gradient
from wiener_convex.gauss.grid import ScalarField, VectorField, check_same_grid, inner_product
from wiener_convex.integrands.core import ConvexIntegrand, weighted_total


def integrand_energy(F: ConvexIntegrand, phi: VectorField) -> float:
    """``sum_i omega_i F(phi_i)``."""
    return weighted_total(phi.grid.vector_weights, F.value(phi.values))


def conjugate_energy(F: ConvexIntegrand, phi: VectorField) -> float:
    """``sum_i omega_i F*(phi_i)``, ``inf`` when ``phi`` leaves the domain of ``F*`` on a weighted cell."""
    return weighted_total(phi.grid.vector_weights, F.conjugate(phi.values))


def primal_energy(
    F: ConvexIntegrand, u: ScalarField, g: ScalarField, data_weight: float = 1.0
) -> float:
    """
    ``P(u) = sum omega F(grad u) + (lambda / 2) sum w (u - g)^2``.

    :raise FieldError: When ``u`` and ``g`` live on different grids.
    """
    check_same_grid(u, g)
    residual = u.like(u.values - g.values)
    return integrand_energy(F, gradient(u)) + 0.5 * data_weight * inner_product(residual, residual)


def dual_energy(
    F: ConvexIntegrand, phi: VectorField, g: ScalarField, data_weight: float = 1.0
) -> float:
    """
    ``D(phi) = -sum omega F*(phi) - |div phi|^2 / (2 lambda) - <div phi, g>``.

    :return: The dual value, ``-inf`` when ``phi`` is not feasible.
    :raise FieldError: When ``phi`` and ``g`` live on different grids.
    """
    check_same_grid(phi, g)
    penalty = conjugate_energy(F, phi)
    if not np.isfinite(penalty):
        return -np.inf
    div = divergence_gamma(phi)
    return -penalty - inner_product(div, div) / (2.0 * data_weight) - inner_product(div, g)


def kkt_primal(phi: VectorField, g: ScalarField, data_weight: float = 1.0) -> ScalarField:
    """The primal point ``g + div phi / lambda`` paired with ``phi`` by the optimality conditions."""
    return g.like(g.values + divergence_gamma(phi).values / data_weight)
