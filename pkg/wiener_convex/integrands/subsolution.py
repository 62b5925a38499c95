"""The approximate data and the explicit convex subsolution of the regularised problem."""
from logging import getLogger
from typing import Tuple

import numpy as np

from wiener_convex.exceptions import IntegrandError
from wiener_convex.gauss.grid import ScalarField
from wiener_convex.integrands.core import ConvexIntegrand

_LOGGER = getLogger(__name__)


def make_subsolution(
    F_n: ConvexIntegrand, g: ScalarField, eps: float
) -> Tuple[ScalarField, ScalarField]:
    """
    Build ``g_eps`` and the subsolution ``u_eps`` for a smooth integrand ``F_n``.

    ``g_eps = max(g, -1/eps) + eps |x|^2 + F_n*(eps x) / eps`` and ``u_eps = F_n*(eps x) / eps + m eps - 1/eps``.
    Since ``grad F_n(grad u_eps) = eps x`` and ``-div_gamma(eps x) = eps (|x|^2 - m)``, the Euler-Lagrange
    operator applied to ``u_eps`` equals ``g_eps - (max(g, -1/eps) + 1/eps) <= g_eps``.

    :param F_n: A smooth integrand with a finite conjugate.
    :param g: The data.
    :param eps: The approximation parameter, ``eps > 0``.
    :return: The pair ``(g_eps, u_eps)`` on the grid of ``g``.
    :raise IntegrandError: When ``eps`` is not positive or ``F_n`` is not smooth.
    """
    if not eps > 0.0:
        raise IntegrandError(f"The subsolution parameter must be positive, got {eps}.")
    if not F_n.smooth:
        raise IntegrandError(f"The subsolution needs a smooth integrand, got {F_n.kind}.")
    grid = g.grid
    m = grid.dimension
    x = np.stack(grid.coords, axis=-1)
    conjugate_term = F_n.conjugate(eps * x) / eps
    if not np.all(np.isfinite(conjugate_term)):
        raise IntegrandError(f"The conjugate of {F_n.kind} is not finite on the grid.")
    g_eps = np.maximum(g.values, -1.0 / eps) + eps * np.sum(x * x, axis=-1) + conjugate_term
    u_eps = conjugate_term + m * eps - 1.0 / eps
    _LOGGER.debug(f"Built subsolution with eps={eps} for {F_n.kind}")
    return g.like(g_eps), g.like(u_eps)
