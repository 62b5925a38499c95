"""
Independent reference solvers for small one-dimensional problems.

Neither oracle shares code with the primal-dual solver: the interval oracle enumerates every candidate set, the
ROF oracle hands its own one-dimensional discretisation of the energy to L-BFGS-B.
"""
import math
from logging import getLogger
from typing import Final, Optional, Tuple

import numpy as np
from scipy.optimize import minimize

from wiener_convex.exceptions import GridError, IntegrandError, ResourceBudgetError
from wiener_convex.gauss.grid import GaussianGrid, ScalarField
from wiener_convex.geometry.sets import IndicatorSet
from wiener_convex.integrands.core import ConvexIntegrand

_LOGGER = getLogger(__name__)

ORACLE_MAX_NODES: Final[int] = 129
"""The ROF oracle refuses grids with more nodes."""

ORACLE_STARTS: Final[int] = 5

_LBFGSB_OPTIONS: Final[dict] = {"ftol": 1e-15, "gtol": 1e-11, "maxiter": 50_000, "maxfun": 200_000}


def _one_dimensional(grid: GaussianGrid, name: str) -> None:
    if grid.dimension != 1:
        raise GridError(f"The {name} works on one-dimensional grids only, got dimension {grid.dimension}.")


def _direction_factors(F: Optional[ConvexIntegrand]) -> Tuple[float, float]:
    if F is None:
        return 1.0, 1.0
    if not F.one_homogeneous:
        raise IntegrandError(f"Perimeters need a one-homogeneous integrand, got {F.kind}.")
    return float(F.value(np.array([1.0]))), float(F.value(np.array([-1.0])))


def brute_force_interval_oracle(
    g: ScalarField, lam: float, F: Optional[ConvexIntegrand] = None
) -> Tuple[IndicatorSet, float]:
    """
    Minimise ``P(E) + sum_{i in E} w_i (g_i - lam)`` over the empty set and every run of consecutive nodes.

    Runs touching an end of the grid are the half-lines, the run of all nodes is the full space. The empty set
    wins ties.

    :param g: The data on a one-dimensional uniform grid.
    :param lam: The threshold.
    :param F: An optional one-homogeneous integrand for the anisotropic perimeter.
    :return: The best set and its energy.
    :raise GridError: When ``g`` is not one-dimensional.
    """
    grid = g.grid
    _one_dimensional(grid, "interval oracle")
    up, down = _direction_factors(F)
    rho = grid.face_flux[0]
    n = grid.nodes_per_axis
    prefix = np.concatenate([[0.0], np.cumsum(grid.weights * (g.values - lam))])
    # a run i..j pays the face before i (jump up) and the face after j (jump down)
    enter = np.concatenate([[0.0], up * rho])
    leave = np.concatenate([down * rho, [0.0]])
    energy = enter[:, None] + leave[None, :] + prefix[None, 1:] - prefix[:-1, None]
    energy = np.where(np.triu(np.ones((n, n), dtype=bool)), energy, np.inf)
    i, j = np.unravel_index(int(np.argmin(energy)), energy.shape)
    best = float(energy[i, j])
    if best >= 0.0:
        return IndicatorSet.empty(grid), 0.0
    membership = np.zeros(n, dtype=bool)
    membership[i : j + 1] = True
    return IndicatorSet(grid, membership), best


def _cell_geometry(grid: GaussianGrid) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    weights = grid.axis_weights[0]
    spacing = np.diff(grid.axis_nodes[0])
    return weights, spacing, grid.face_flux[0]


def _flux_divergence(flux: np.ndarray, n: int) -> np.ndarray:
    """``w div``: node ``j`` receives ``flux_j - flux_{j-1}``."""
    out = np.zeros(n)
    out[:-1] += flux
    out[1:] -= flux
    return out


def _rof_objective(F: ConvexIntegrand, grid: GaussianGrid, u: np.ndarray, g: np.ndarray, lam: float) -> float:
    weights, spacing, rho = _cell_geometry(grid)
    slopes = np.diff(u) / spacing
    energy = float(np.sum(rho * spacing * F.value(slopes[:, None])))
    return energy + 0.5 * lam * float(np.sum(weights * (u - g) ** 2))


def _dual_bounds(F: ConvexIntegrand) -> Tuple[float, float]:
    big = np.array([[1e8], [-1e8]])
    upper, lower = F.project_conjugate_domain(big)[:, 0]
    return float(lower), float(upper)


def _dual_path(
    F: ConvexIntegrand, g: ScalarField, lam: float, rng: np.random.Generator, starts: int
) -> np.ndarray:
    grid = g.grid
    n = grid.nodes_per_axis
    weights, _, rho = _cell_geometry(grid)
    heavy = weights > 0.0
    lower, upper = _dual_bounds(F)

    def objective(phi: np.ndarray) -> Tuple[float, np.ndarray]:
        moment = _flux_divergence(rho * phi, n)
        div = np.where(heavy, moment / np.where(heavy, weights, 1.0), 0.0)
        value = 0.5 * float(np.sum(weights * div**2)) / lam + float(np.sum(moment * g.values))
        # d/dphi_j of sum_k m_k c_k with m = w div is rho_j (c_j - c_{j+1})
        coefficient = div / lam + g.values
        gradient = rho * (coefficient[:-1] - coefficient[1:])
        return value, gradient

    best_value, best_phi = np.inf, np.zeros(n - 1)
    for _ in range(starts):
        start = rng.uniform(lower, upper, size=n - 1)
        result = minimize(
            objective, start, jac=True, method="L-BFGS-B", bounds=[(lower, upper)] * (n - 1), options=_LBFGSB_OPTIONS
        )
        if result.fun < best_value:
            best_value, best_phi = float(result.fun), result.x
    moment = _flux_divergence(rho * best_phi, n)
    return g.values + np.where(heavy, moment / np.where(heavy, weights, 1.0), 0.0) / lam


def _primal_path(
    F: ConvexIntegrand, g: ScalarField, lam: float, rng: np.random.Generator, starts: int
) -> np.ndarray:
    grid = g.grid
    weights, spacing, rho = _cell_geometry(grid)

    def objective(u: np.ndarray) -> Tuple[float, np.ndarray]:
        slopes = (np.diff(u) / spacing)[:, None]
        value = float(np.sum(rho * spacing * F.value(slopes))) + 0.5 * lam * float(np.sum(weights * (u - g.values) ** 2))
        stress = rho * F.grad(slopes)[:, 0]
        gradient = lam * weights * (u - g.values)
        gradient[:-1] -= stress
        gradient[1:] += stress
        return value, gradient

    scale = float(np.std(g.values)) + 1.0
    best_value, best_u = np.inf, g.values
    for _ in range(starts):
        start = g.values + scale * rng.normal(size=g.values.shape)
        result = minimize(objective, start, jac=True, method="L-BFGS-B", options=_LBFGSB_OPTIONS)
        if result.fun < best_value:
            best_value, best_u = float(result.fun), result.x
    return best_u


def brute_force_rof_oracle(
    F: ConvexIntegrand,
    g: ScalarField,
    data_weight: float = 1.0,
    seed: int = 0,
    starts: int = ORACLE_STARTS,
) -> Tuple[ScalarField, float]:
    """
    Minimise ``sum omega F(u') + (lambda / 2) sum w (u - g)^2`` on a small one-dimensional grid with L-BFGS-B.

    Integrands whose conjugate is the indicator of an interval are solved through the bounded dual quadratic
    program and mapped back by ``u = g + div phi / lambda``; smooth integrands are solved on the primal. The best
    of ``starts`` seeded random starts is kept.

    :param F: The integrand.
    :param g: The data, on a one-dimensional grid of at most ``ORACLE_MAX_NODES`` nodes.
    :param data_weight: The weight ``lambda`` of the data term.
    :param seed: The seed of the random starts.
    :param starts: The number of starts.
    :return: The minimiser and its objective.
    :raise GridError: When the grid is not one-dimensional.
    :raise ResourceBudgetError: When the grid is too large for the oracle.
    :raise IntegrandError: When ``F`` is neither smooth nor of indicator conjugate.
    """
    grid = g.grid
    _one_dimensional(grid, "ROF oracle")
    if grid.nodes_per_axis > ORACLE_MAX_NODES:
        raise ResourceBudgetError(
            f"The ROF oracle is limited to {ORACLE_MAX_NODES} nodes, got {grid.nodes_per_axis}."
        )
    rng = np.random.default_rng(seed)
    if F.conjugate_is_indicator:
        values = _dual_path(F, g, data_weight, rng, starts)
    elif F.smooth:
        values = _primal_path(F, g, data_weight, rng, starts)
    else:
        raise IntegrandError(f"The ROF oracle needs a smooth integrand or an indicator conjugate, got {F.kind}.")
    objective = _rof_objective(F, grid, values, g.values, data_weight)
    if not math.isfinite(objective):
        raise IntegrandError(f"The ROF oracle reached a non finite objective for {F.kind}.")
    _LOGGER.debug(f"ROF oracle for {F.kind}: objective {objective:.12g} from {starts} starts")
    return ScalarField(grid, values), objective
