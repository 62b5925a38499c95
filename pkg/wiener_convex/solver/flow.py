"""
Problems built from repeated solves: the implicit Euler gradient flow and the sweep over cylindrical data.
"""
import math
from dataclasses import dataclass, field
from logging import getLogger
from typing import Any, Dict, List, Optional, Sequence

from wiener_convex.exceptions import SolverError
from wiener_convex.gauss.calculus import cylindrical_projection, lift
from wiener_convex.gauss.grid import ScalarField
from wiener_convex.integrands.core import ConvexIntegrand
from wiener_convex.solver.params import Solution, SolverParams
from wiener_convex.solver.primal_dual import solve

_LOGGER = getLogger(__name__)


def gradient_flow(
    F: ConvexIntegrand,
    u0: ScalarField,
    dt: float,
    steps: int,
    params: Optional[SolverParams] = None,
) -> List[ScalarField]:
    """
    The minimizing movements ``u_{k+1} = argmin sum omega F(grad u) + |u - u_k|^2 / (2 dt)``.

    Each step is a :func:`solve` with data ``u_k`` and data weight ``1 / dt``, warm started from the previous
    step.

    :param F: The integrand.
    :param u0: The initial field.
    :param dt: The time step, ``dt > 0``.
    :param steps: The number of steps.
    :param params: The solver parameters of every step.
    :return: The trajectory ``[u0, u1, ..., u_steps]``.
    :raise SolverError: On a non positive ``dt`` or a negative ``steps``, and from the solves.
    """
    if not dt > 0.0 or not math.isfinite(dt):
        raise SolverError(f"The time step must be positive, got {dt}.")
    if steps < 0:
        raise SolverError(f"The number of steps cannot be negative, got {steps}.")
    trajectory = [u0]
    phi = None
    for k in range(steps):
        solution = solve(F, trajectory[-1], params, data_weight=1.0 / dt, u0=trajectory[-1], phi0=phi)
        if not solution.converged:
            _LOGGER.warning(f"Flow step {k + 1} stopped with relative gap {solution.relative_gap:.3e}")
        _LOGGER.debug(f"Flow step {k + 1}/{steps}: energy {solution.primal_value:.10g}")
        trajectory.append(solution.u)
        phi = solution.phi
    return trajectory


def _accuracy(solution: Solution) -> float:
    # strong convexity of the data term bounds |u - u*| by sqrt(2 gap / lambda)
    return math.sqrt(2.0 * max(solution.gap, 0.0) / solution.data_weight)


@dataclass(frozen=True, eq=False)
class SweepResult:
    """The solves of a dimension sweep and their distances to the full solution."""

    full: Solution = field(repr=False)
    solutions: Dict[int, Solution] = field(repr=False)
    rows: List[Dict[str, Any]]
    increase: float

    @property
    def monotone(self) -> bool:
        """True when the distance to the full solution never grows beyond the certified accuracy."""
        return self.increase <= 0.0


def dimension_sweep(
    F: ConvexIntegrand,
    g: ScalarField,
    dims: Sequence[int],
    params: Optional[SolverParams] = None,
) -> SweepResult:
    """
    Solve with the data projected on the leading ``k`` coordinates for every ``k`` in ``dims``.

    Every projected datum is lifted back to the full grid, so all solutions compare in the same norm. The
    distance to the full solution should be nonincreasing in ``k``, up to the accuracy certified by the gaps;
    ``increase`` is the worst excess over that allowance.

    :param F: The integrand.
    :param g: The data on an ``m``-dimensional grid.
    :param dims: Strictly increasing dimensions between 1 and ``m``.
    :param params: The solver parameters.
    :return: A :class:`SweepResult` with one row per dimension.
    :raise SolverError: When ``dims`` is empty, not increasing or out of range.
    """
    grid = g.grid
    dims = [int(k) for k in dims]
    if not dims:
        raise SolverError("The dimension sweep needs at least one dimension.")
    if any(b <= a for a, b in zip(dims, dims[1:])):
        raise SolverError(f"The sweep dimensions must be strictly increasing, got {dims}.")
    if dims[0] < 1 or dims[-1] > grid.dimension:
        raise SolverError(f"The sweep dimensions must lie in 1..{grid.dimension}, got {dims}.")

    full = solve(F, g, params)
    solutions = {}
    rows = []
    slack = _accuracy(full)
    for k in dims:
        if k == grid.dimension:
            solution = full
        else:
            g_k = lift(cylindrical_projection(g, k), grid)
            solution = solve(F, g_k, params)
        solutions[k] = solution
        diff = solution.u.like(solution.u.values - full.u.values)
        rows.append(
            {
                "dimension": k,
                "distance": diff.norm(),
                "primal_value": solution.primal_value,
                "gap": solution.gap,
                "converged": solution.converged,
                "accuracy": _accuracy(solution),
            }
        )
        _LOGGER.debug(f"Sweep k={k}: distance {rows[-1]['distance']:.6g}")

    increase = 0.0
    for before, after in zip(rows, rows[1:]):
        allowed = slack + before["accuracy"] + after["accuracy"]
        increase = max(increase, after["distance"] - before["distance"] - allowed)
    return SweepResult(full=full, solutions=solutions, rows=rows, increase=increase)
