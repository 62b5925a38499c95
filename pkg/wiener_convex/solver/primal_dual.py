"""
First order primal-dual solver for ``min_u sum omega F(grad u) + (lambda / 2) sum w (u - g)^2``.

The saddle point form ``min_u max_phi <grad u, phi> - sum omega F*(phi) + (lambda / 2) |u - g|^2`` is solved by
the Chambolle-Pock iteration: a pointwise ``prox`` of ``F*`` on the dual cells, then the closed form resolvent of
the quadratic data term on the nodes. The stopping rule is the duality gap between the best primal and dual
values seen so far.
"""
import math
import time
from logging import getLogger
from typing import Dict, Final, Optional, Tuple

import numpy as np
from scipy.sparse.linalg import LinearOperator, eigsh

from wiener_convex.exceptions import SolverError
from wiener_convex.gauss.calculus import divergence_values, gradient_values
from wiener_convex.gauss.grid import GaussianGrid, ScalarField, VectorField
from wiener_convex.integrands.core import ConvexIntegrand
from wiener_convex.solver.energies import dual_energy, kkt_primal, primal_energy
from wiener_convex.solver.params import Solution, SolverParams

_LOGGER = getLogger(__name__)

OPERATOR_NORM_SAFETY: Final[float] = 1.01
"""Factor applied to the estimated norm of the weighted gradient."""

STEP_FACTOR: Final[float] = 0.99
"""Default steps are ``STEP_FACTOR / L``."""

_DENSE_LIMIT: Final[int] = 600
_OPERATOR_NORMS: Dict[Tuple, float] = {}


def estimate_operator_norm(grid: GaussianGrid) -> float:
    """
    The norm of the gradient from ``l2(w)`` to ``l2(omega)``, with a safety margin.

    Its square is the top eigenvalue of ``-div_gamma grad``, computed on the symmetric form
    ``W^(1/2) (-div_gamma grad) W^(-1/2)`` (dense for small grids, Lanczos otherwise). Values are kept per grid.

    :param grid: The grid.
    :return: ``OPERATOR_NORM_SAFETY * sqrt(lambda_max)``.
    """
    if grid.key in _OPERATOR_NORMS:
        return _OPERATOR_NORMS[grid.key]
    sqrt_w = np.sqrt(grid.weights)

    def apply(v: np.ndarray) -> np.ndarray:
        field = np.asarray(v, dtype=float).reshape(grid.shape) / sqrt_w
        return (-sqrt_w * divergence_values(grid, gradient_values(grid, field))).ravel()

    n = grid.size
    if n <= _DENSE_LIMIT:
        matrix = np.column_stack([apply(e) for e in np.eye(n)])
        top = float(np.linalg.eigvalsh(0.5 * (matrix + matrix.T))[-1])
    else:
        operator = LinearOperator((n, n), matvec=apply, dtype=float)
        top = float(
            eigsh(operator, k=1, which="LA", tol=1e-8, v0=np.ones(n), return_eigenvectors=False)[0]
        )
    norm = OPERATOR_NORM_SAFETY * math.sqrt(max(top, 0.0))
    _LOGGER.debug(f"Operator norm of grid {grid.key}: {norm:.6g}")
    _OPERATOR_NORMS[grid.key] = norm
    return norm


def _steps(params: SolverParams, grid: GaussianGrid) -> Tuple[float, float, float]:
    norm = params.operator_norm_estimate.value
    if norm is None:
        norm = estimate_operator_norm(grid)
    tau = params.step_primal.value
    sigma = params.step_dual.value
    if tau is None:
        tau = sigma = STEP_FACTOR / norm
    if tau * sigma * norm**2 > 1.0 + 1e-12:
        raise SolverError(
            f"Steps tau={tau}, sigma={sigma} violate tau * sigma * L^2 <= 1 for the operator norm L={norm}."
        )
    return float(tau), float(sigma), float(norm)


def solve(
    F: ConvexIntegrand,
    g: ScalarField,
    params: Optional[SolverParams] = None,
    data_weight: float = 1.0,
    u0: Optional[ScalarField] = None,
    phi0: Optional[VectorField] = None,
) -> Solution:
    """
    Minimise ``sum omega F(grad u) + (lambda / 2) sum w (u - g)^2``.

    Non-convergence within ``max_iters`` is not an error: the best iterates are returned with
    ``converged=False`` and a warning is logged.

    :param F: An integrand with a fast proximal map.
    :param g: The data.
    :param params: The solver parameters, defaults when None.
    :param data_weight: The weight ``lambda > 0`` of the data term.
    :param u0: An optional primal starting point, ``g`` by default.
    :param phi0: An optional dual starting point, zero by default.
    :return: A :class:`Solution`.
    :raise SolverError: On invalid parameters or an integrand the solver cannot use.
    """
    params = params or SolverParams()
    validation = params.validate()
    if not validation.passed:
        raise SolverError("; ".join(validation.all_fail_reasons()))
    if not F.has_fast_prox:
        raise SolverError(f"The {F.kind} integrand has no fast proximal map and cannot be solved for.")
    if not data_weight > 0.0 or not math.isfinite(data_weight):
        raise SolverError(f"The data weight must be positive, got {data_weight}.")
    grid = g.grid
    if F.dimension is not None and F.dimension != grid.dimension:
        raise SolverError(f"A {F.dimension}-dimensional integrand cannot be used on a {grid.dimension}-dimensional grid.")

    if np.ptp(g.values) == 0.0:
        phi = VectorField.zeros(grid)
        primal = primal_energy(F, g, g, data_weight)
        dual = dual_energy(F, phi, g, data_weight)
        _LOGGER.info("Constant data, the solution is the data itself")
        return Solution(
            u=g,
            phi=phi,
            g=g,
            primal_value=primal,
            dual_value=dual,
            gap=primal - dual,
            iterations=0,
            converged=True,
            data_weight=data_weight,
        )

    tau, sigma, norm = _steps(params, grid)
    max_iters = params.max_iters.value
    gap_tol = params.gap_tol.value
    check_every = params.check_every.value
    accelerate = params.accelerate.value
    lam = data_weight

    g_values = g.values
    u = np.array(u0.values if u0 is not None else g_values, dtype=float)
    phi = np.array(phi0.values if phi0 is not None else np.zeros(grid.shape + (grid.dimension,)))
    u_bar = u.copy()

    best_primal, best_u = np.inf, g
    best_dual, best_phi = -np.inf, VectorField.zeros(grid)
    history = []
    converged = False
    iterations = 0
    start = time.perf_counter()
    for k in range(1, max_iters + 1):
        iterations = k
        phi = F.prox_conjugate(phi + sigma * gradient_values(grid, u_bar), sigma)
        u_old = u
        u = (u + tau * divergence_values(grid, phi) + tau * lam * g_values) / (1.0 + tau * lam)
        theta = 1.0
        if accelerate:
            theta = 1.0 / math.sqrt(1.0 + 2.0 * lam * tau)
            tau, sigma = theta * tau, sigma / theta
        u_bar = u + theta * (u - u_old)

        if k % check_every and k != max_iters:
            continue
        phi_field = VectorField(grid, phi)
        for candidate in (ScalarField(grid, u), kkt_primal(phi_field, g, lam)):
            value = primal_energy(F, candidate, g, lam)
            if value < best_primal:
                best_primal, best_u = value, candidate
        dual = dual_energy(F, phi_field, g, lam)
        if dual > best_dual:
            best_dual, best_phi = dual, phi_field
        history.append((k, best_primal, best_dual))
        gap = best_primal - best_dual
        if k % (100 * check_every) == 0:
            _LOGGER.debug(f"Iteration {k}: primal {best_primal:.12g}, dual {best_dual:.12g}, gap {gap:.3e}")
        if gap <= gap_tol * (1.0 + abs(best_primal)):
            converged = True
            break

    gap = best_primal - best_dual
    elapsed = time.perf_counter() - start
    if converged:
        _LOGGER.info(
            f"Solved {F.kind} problem in {iterations} iterations ({elapsed:.2f}s), primal {best_primal:.10g}, "
            f"gap {gap:.3e}"
        )
    else:
        _LOGGER.warning(
            f"No convergence for {F.kind} within {iterations} iterations: gap {gap:.3e}, "
            f"relative {gap / (1.0 + abs(best_primal)):.3e}"
        )
    return Solution(
        u=best_u,
        phi=best_phi,
        g=g,
        primal_value=best_primal,
        dual_value=best_dual,
        gap=gap,
        iterations=iterations,
        converged=converged,
        data_weight=data_weight,
        operator_norm=norm,
        history=tuple(history),
    )
