"""The report of a dimension sweep: monotone convergence to the full solution and convexity of every solve."""
from logging import getLogger
from typing import Optional, Sequence

from wiener_convex.gauss.grid import ScalarField
from wiener_convex.integrands.core import ConvexIntegrand
from wiener_convex.solver.flow import dimension_sweep
from wiener_convex.solver.params import SolverParams
from wiener_convex.verify.convexity import check_convexity_field
from wiener_convex.verify.report import CheckReport

_LOGGER = getLogger(__name__)


def dimension_sweep_check(
    F: ConvexIntegrand,
    g: ScalarField,
    dims: Sequence[int],
    params: Optional[SolverParams] = None,
    seed: int = 0,
) -> CheckReport:
    """
    Run :func:`~wiener_convex.solver.flow.dimension_sweep` and flag the convexity of every solution.

    The check passes when the distances are monotone; convexity is reported per row and in
    ``details["all_convex"]``.

    :param seed: The seed of the convexity checks.
    :raise SolverError: When ``dims`` is invalid, and from the solves.
    """
    sweep = dimension_sweep(F, g, dims, params)
    rows = []
    for row in sweep.rows:
        convexity = check_convexity_field(sweep.solutions[row["dimension"]].u, seed=seed)
        rows.append({**row, "convex": convexity.passed})
        _LOGGER.debug(f"Sweep k={row['dimension']}: convex {convexity.passed}")
    return CheckReport(
        name="dimension_sweep",
        passed=sweep.monotone,
        measured=sweep.increase,
        tolerance=0.0,
        seed=seed,
        details={
            "rows": rows,
            "monotone": sweep.monotone,
            "all_convex": all(row["convex"] for row in rows),
            "full_primal_value": sweep.full.primal_value,
        },
    )
