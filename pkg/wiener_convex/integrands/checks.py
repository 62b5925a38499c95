"""Sampled checks of the integrand hypotheses: convexity, growth, biconjugation and Fenchel-Young."""
from logging import getLogger
from typing import Dict, Optional

import numpy as np
from scipy.optimize import minimize

from wiener_convex.integrands.core import ConvexIntegrand, as_vectors, vector_norm

_LOGGER = getLogger(__name__)


def _sample_dimension(F: ConvexIntegrand, dimension: Optional[int]) -> int:
    return F.dimension or dimension or 2


def midpoint_convexity_violation(
    F: ConvexIntegrand,
    rng: np.random.Generator,
    trials: int = 10_000,
    dimension: Optional[int] = None,
    spread: float = 3.0,
) -> float:
    """
    The worst ``F((a + b) / 2) - (F(a) + F(b)) / 2`` over random pairs, relative to ``1 + |F|``.

    :return: The largest violation, ``<= 0`` up to round-off for a convex ``F``.
    """
    d = _sample_dimension(F, dimension)
    a = spread * rng.standard_normal((trials, d))
    b = spread * rng.standard_normal((trials, d))
    fa, fb, fm = F.value(a), F.value(b), F.value(0.5 * (a + b))
    gap = fm - 0.5 * (fa + fb)
    return float(np.max(gap / (1.0 + np.abs(fa) + np.abs(fb))))


def growth_check(
    F: ConvexIntegrand,
    rng: np.random.Generator,
    samples: int = 1000,
    dimension: Optional[int] = None,
    tol: float = 1e-9,
) -> Dict[str, float]:
    """
    Check ``alpha2 |h|^p - beta2 <= F(h) <= alpha1 |h|^p + beta1`` on samples of growing size.

    :return: A report with ``passed`` and the worst ``lower`` and ``upper`` slacks (negative on failure).
    """
    d = _sample_dimension(F, dimension)
    radii = 10.0 ** rng.uniform(-2.0, 2.0, size=samples)
    h = rng.standard_normal((samples, d))
    h = h / vector_norm(h)[:, None] * radii[:, None]
    values = F.value(h)
    gr = F.growth
    power = vector_norm(h) ** gr.p
    lower = values - (gr.alpha2 * power - gr.beta2)
    upper = gr.alpha1 * power + gr.beta1 - values
    scale = 1.0 + np.abs(values)
    worst_lower = float(np.min(lower / scale))
    worst_upper = float(np.min(upper / scale))
    return {
        "passed": bool(worst_lower >= -tol and worst_upper >= -tol),
        "lower": worst_lower,
        "upper": worst_upper,
    }


def fenchel_young_gap(
    F: ConvexIntegrand,
    rng: np.random.Generator,
    trials: int = 1000,
    dimension: Optional[int] = None,
) -> float:
    """The smallest ``F(h) + F*(q) - <h, q>`` over random pairs; never below ``0`` up to round-off."""
    d = _sample_dimension(F, dimension)
    h = 2.0 * rng.standard_normal((trials, d))
    q = rng.standard_normal((trials, d))
    return float(np.min(F.value(h) + F.conjugate(q) - np.sum(h * q, axis=-1)))


def biconjugate(F: ConvexIntegrand, h) -> float:
    """
    ``(F*)*(h) = sup_q <q, h> - F*(q)``, by unconstrained maximisation from ``q = 0``.

    Only meaningful for kinds whose conjugate is finite everywhere.
    """
    h = as_vectors(h)
    res = minimize(
        lambda q: float(F.conjugate(q)) - float(np.dot(q, h)),
        np.zeros_like(h),
        method="BFGS",
        options={"gtol": 1e-12},
    )
    return -float(res.fun)
