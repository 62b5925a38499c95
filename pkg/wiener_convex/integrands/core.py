"""
The convex integrand protocol shared by every kind.

All methods are vectorised over the last axis: ``h`` of shape ``(..., d)`` gives values of shape ``(...)``.
``+inf`` is represented by ``numpy.inf``; values outside the effective domain of a conjugate are ``inf``.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass
from logging import getLogger
from typing import Any, Dict, Final, Optional, Tuple, Union

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from wiener_convex.exceptions import IntegrandError

_LOGGER = getLogger(__name__)

EUCLIDEAN_NORM: Final[str] = "euclidean_norm"
POWER_P: Final[str] = "power_p"
QUADRATIC: Final[str] = "quadratic"
ANISOTROPIC_NORM: Final[str] = "anisotropic_norm"
MOREAU_REGULARIZED: Final[str] = "moreau_regularized"
DELTA_REGULARIZED: Final[str] = "delta_regularized"
SCALED: Final[str] = "scaled"

KINDS: Final[Tuple[str, ...]] = (
    EUCLIDEAN_NORM,
    POWER_P,
    QUADRATIC,
    ANISOTROPIC_NORM,
    MOREAU_REGULARIZED,
    DELTA_REGULARIZED,
)
"""The kind names accepted in experiment configs."""

RECESSION_EXPONENTS: Final[Tuple[int, int]] = (10, 30)
"""The numeric recession limit samples ``F(t h) / t`` at ``t = 2**k`` for ``k`` in this inclusive range."""

DOMAIN_TOLERANCE: Final[float] = 1e-12
"""Relative slack allowed when testing membership of a conjugate's effective domain."""


@dataclass(frozen=True)
class Growth:
    """
    The growth bounds ``alpha2 |h|^p - beta2 <= F(h) <= alpha1 |h|^p + beta1``.

    ``alpha1`` may be ``inf`` for integrands that are not finite everywhere.
    """

    p: float
    alpha1: float
    beta1: float
    alpha2: float
    beta2: float

    def scaled(self, c: float) -> Growth:
        """The bounds of ``c F``."""
        return Growth(self.p, c * self.alpha1, c * self.beta1, c * self.alpha2, c * self.beta2)

    def to_dict(self) -> Dict[str, float]:
        """The bounds as a dict."""
        return asdict(self)


def as_vectors(h: Union[float, np.ndarray]) -> np.ndarray:
    """Turn scalars into 1-vectors and everything into a float array."""
    h = np.asarray(h, dtype=float)
    if h.ndim == 0:
        h = h.reshape(1)
    return h


def vector_norm(h: np.ndarray) -> np.ndarray:
    """The euclidean norm over the last axis."""
    return np.sqrt(np.sum(h * h, axis=-1))


def unit_direction(h: np.ndarray, norm: Optional[np.ndarray] = None) -> np.ndarray:
    """``h / |h|`` with ``0`` where ``h`` vanishes."""
    norm = vector_norm(h) if norm is None else norm
    safe = np.where(norm > 0.0, norm, 1.0)
    return np.where(norm[..., None] > 0.0, h / safe[..., None], 0.0)


def project_ball(q: np.ndarray, radius: float) -> np.ndarray:
    """Project every vector of ``q`` onto the closed ball of ``radius``."""
    norm = vector_norm(q)
    factor = np.where(norm > radius, radius / np.where(norm > 0.0, norm, 1.0), 1.0)
    return q * factor[..., None]


def ball_indicator(q: np.ndarray, radius: float) -> np.ndarray:
    """``0`` inside the closed ball of ``radius`` (with a relative slack), ``inf`` outside."""
    return np.where(vector_norm(q) <= radius * (1.0 + DOMAIN_TOLERANCE), 0.0, np.inf)


def weighted_total(weights: np.ndarray, values: np.ndarray) -> float:
    """
    ``sum w_i v_i`` over the entries of positive weight.

    Entries of zero weight are skipped so an infinite value there does not give ``0 * inf``.
    """
    mask = weights > 0.0
    selected = values[mask]
    if np.any(np.isposinf(selected)):
        return np.inf
    return float(np.sum(weights[mask] * selected))


class ConvexIntegrand(ABC):
    """
    A convex integrand ``F: R^d -> [0, inf]`` with ``F(0) = 0``, its conjugate, recession and proximal maps.

    Subclasses implement :meth:`value`, :meth:`conjugate` and :meth:`prox`; the rest has generic fallbacks.
    """

    kind: str = ""
    one_homogeneous: bool = False
    """``F(t h) = t F(h)`` for ``t >= 0``."""
    smooth: bool = False
    """``F`` is differentiable and :meth:`grad` is available."""
    has_fast_prox: bool = True
    """:meth:`prox` is closed form or a vectorised scalar root find, usable inside the solver."""
    radial: bool = False
    """``F(h)`` depends on ``|h|`` only."""
    conjugate_is_indicator: bool = False
    """``F*`` only takes the values ``0`` and ``inf``."""

    def __init__(self, growth: Growth, dimension: Optional[int] = None):
        """
        The `ConvexIntegrand` constructor.

        :param growth: The growth bounds of the integrand.
        :param dimension: The fixed domain dimension, or None when any dimension is accepted.
        """
        self.growth: Growth = growth
        self.dimension: Optional[int] = dimension

    def _vectors(self, h) -> np.ndarray:
        h = as_vectors(h)
        if self.dimension is not None and h.shape[-1] != self.dimension:
            raise IntegrandError(
                f"A {self.kind} integrand of dimension {self.dimension} cannot take vectors of length {h.shape[-1]}."
            )
        return h

    @abstractmethod
    def value(self, h: np.ndarray) -> np.ndarray:
        """``F(h)``."""
        pass

    @abstractmethod
    def conjugate(self, q: np.ndarray) -> np.ndarray:
        """``F*(q) = sup_h <q, h> - F(h)``."""
        pass

    @abstractmethod
    def prox(self, h: np.ndarray, tau: float) -> np.ndarray:
        """``argmin_z |z - h|^2 / 2 + tau F(z)``."""
        pass

    def prox_conjugate(self, q: np.ndarray, sigma: float) -> np.ndarray:
        """``prox_{sigma F*}(q) = q - sigma prox_{F / sigma}(q / sigma)``."""
        q = self._vectors(q)
        return q - sigma * self.prox(q / sigma, 1.0 / sigma)

    def recession(self, h: np.ndarray) -> np.ndarray:
        """
        ``F^inf(h) = lim F(t h) / t``, evaluated as a numeric limit.

        The ratio is sampled at ``t = 2**k``; a sequence still growing by more than half per doubling at the end
        is taken as divergent.
        """
        h = self._vectors(h)
        low, high = RECESSION_EXPONENTS
        ts = 2.0 ** np.arange(low, high + 1)
        scaled = ts.reshape((-1,) + (1,) * h.ndim) * h[None, ...]
        ratios = self.value(scaled) / ts.reshape((-1,) + (1,) * (h.ndim - 1))
        last, before = ratios[-1], ratios[-2]
        diverging = ~np.isfinite(last) | (last > 1.5 * before + 1e-12)
        return np.where(diverging, np.inf, np.maximum(last, 0.0))

    def grad(self, h: np.ndarray) -> np.ndarray:
        """The gradient of a smooth integrand."""
        raise IntegrandError(f"The {self.kind} integrand is not differentiable.")

    def subgradient(self, h: np.ndarray) -> np.ndarray:
        """A selection of the subdifferential of ``F`` at ``h``."""
        if self.smooth:
            return self.grad(h)
        raise IntegrandError(f"No subgradient selection is available for the {self.kind} integrand.")

    def spherical_min(self) -> Tuple[np.ndarray, float]:
        """
        A unit vector minimising a one-homogeneous ``F`` on the sphere, and the minimum.

        :raise IntegrandError: When ``F`` is not one-homogeneous.
        """
        if not self.one_homogeneous:
            raise IntegrandError(f"The {self.kind} integrand is not one-homogeneous.")
        if self.radial:
            d = self.dimension or 1
            nu = np.zeros(d)
            nu[0] = 1.0
            return nu, float(self.value(nu))
        raise IntegrandError(f"No spherical minimiser is known for the {self.kind} integrand.")

    def project_conjugate_domain(self, q: np.ndarray) -> np.ndarray:
        """Project onto the set where an indicator conjugate vanishes."""
        raise IntegrandError(f"The conjugate of the {self.kind} integrand is not an indicator.")

    def parameters(self) -> Dict[str, Any]:
        """The constructor parameters of the kind."""
        return {}

    def describe(self) -> Dict[str, Any]:
        """A JSON friendly description of the integrand."""
        return {"kind": self.kind, **self.parameters(), "growth": self.growth.to_dict()}

    def __repr__(self) -> str:
        params = ", ".join(f"{k}={v}" for k, v in self.parameters().items())
        return f"{self.__class__.__name__}({params})"


def numeric_prox(F: ConvexIntegrand, h: np.ndarray, tau: float) -> np.ndarray:
    """
    ``prox_{tau F}(h)`` by direct minimisation, one vector at a time.

    Used by kinds without a closed form; too slow for the solver.
    """
    h = as_vectors(h)
    flat = h.reshape(-1, h.shape[-1])
    out = np.empty_like(flat)
    for i, point in enumerate(flat):
        if flat.shape[-1] == 1:
            radius = abs(point[0]) + 1.0
            res = minimize_scalar(
                lambda z: 0.5 * (z - point[0]) ** 2 + tau * float(F.value(np.array([z]))),
                bounds=(point[0] - radius, point[0] + radius),
                method="bounded",
                options={"xatol": 1e-10},
            )
            out[i] = res.x
        else:
            res = minimize(
                lambda z: 0.5 * np.sum((z - point) ** 2) + tau * float(F.value(z)),
                point,
                method="Nelder-Mead",
                options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000},
            )
            out[i] = res.x
    return out.reshape(h.shape)


def _finish(result: np.ndarray, h: Union[float, np.ndarray]):
    if np.ndim(h) <= 1 and np.ndim(result) == 0:
        return float(result)
    return result


def evaluate(F: ConvexIntegrand, h: Union[float, np.ndarray]):
    """
    ``F(h)``.

    :param F: The integrand.
    :param h: A vector, or an array of vectors along the last axis.
    :return: A float for a single vector, otherwise an array.
    """
    return _finish(F.value(as_vectors(h)), h)


def conjugate(F: ConvexIntegrand, q: Union[float, np.ndarray]):
    """``F*(q)``, ``inf`` outside the effective domain."""
    return _finish(F.conjugate(as_vectors(q)), q)


def recession(F: ConvexIntegrand, h: Union[float, np.ndarray]):
    """``F^inf(h)``, ``inf`` where ``F`` grows superlinearly along ``h``."""
    return _finish(F.recession(as_vectors(h)), h)


def prox_primal(F: ConvexIntegrand, tau: float, h: Union[float, np.ndarray]) -> np.ndarray:
    """
    The resolvent ``argmin_z |z - h|^2 / 2 + tau F(z)``.

    :raise IntegrandError: When ``tau`` is not positive.
    """
    if not tau > 0.0:
        raise IntegrandError(f"The proximal step must be positive, got {tau}.")
    return F.prox(as_vectors(h), float(tau))


def prox_conjugate(F: ConvexIntegrand, sigma: float, q: Union[float, np.ndarray]) -> np.ndarray:
    """
    ``prox_{sigma F*}(q)``, through the Moreau identity.

    :raise IntegrandError: When ``sigma`` is not positive.
    """
    if not sigma > 0.0:
        raise IntegrandError(f"The proximal step must be positive, got {sigma}.")
    return F.prox_conjugate(as_vectors(q), float(sigma))
