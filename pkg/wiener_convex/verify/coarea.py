"""The discrete coarea formula: total variation against the threshold integral of superlevel perimeters."""
from typing import Final, Optional

import numpy as np

from wiener_convex.exceptions import GridError
from wiener_convex.gauss.grid import ScalarField
from wiener_convex.geometry.sets import face_total_variation
from wiener_convex.integrands.core import ConvexIntegrand
from wiener_convex.verify.report import CheckReport

COAREA_TOLERANCE: Final[float] = 0.01


def coarea_check(
    u: ScalarField,
    t_samples: int = 512,
    F: Optional[ConvexIntegrand] = None,
    tol: float = COAREA_TOLERANCE,
) -> CheckReport:
    """
    Compare the face total variation of ``u`` with the midpoint rule for ``int P({u > t}) dt``.

    The thresholds are ``t_samples`` midpoints of a uniform partition of ``[min u, max u]``. Constant fields give
    the degenerate report where both sides vanish.

    :param u: A field on a uniform grid.
    :param t_samples: The number of thresholds.
    :param F: An optional one-homogeneous integrand for the anisotropic variant.
    :param tol: The accepted relative residual.
    :return: A :class:`CheckReport` whose measured value is the relative residual.
    :raise GridError: When ``u`` is not on a uniform grid.
    """
    grid = u.grid
    if not grid.is_uniform:
        raise GridError(f"The coarea check needs a uniform_truncated grid, got {grid.scheme}.")
    low, high = float(np.min(u.values)), float(np.max(u.values))
    if high == low:
        return CheckReport(
            name="coarea",
            passed=True,
            measured=0.0,
            tolerance=tol,
            details={"total_variation": 0.0, "level_integral": 0.0, "degenerate": True},
        )
    total_variation = face_total_variation(u.values, grid, F)
    step = (high - low) / t_samples
    thresholds = low + step * (np.arange(t_samples) + 0.5)
    integral = step * sum(
        face_total_variation((u.values > t).astype(float), grid, F) for t in thresholds
    )
    residual = abs(total_variation - integral) / max(total_variation, np.finfo(float).tiny)
    return CheckReport(
        name="coarea",
        passed=residual <= tol,
        measured=residual,
        tolerance=tol,
        details={
            "total_variation": total_variation,
            "level_integral": integral,
            "t_samples": t_samples,
            "anisotropic": F is not None,
            "degenerate": False,
        },
    )
